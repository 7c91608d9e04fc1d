import type {
  GraphExportDoc,
  ObjectDoc,
  PlanDoc,
  TransferResultDoc,
  ValidationReportDoc,
} from './types';

export interface Banner {
  kind: 'blocking' | 'warning' | 'info';
  text: string;
}

export interface UiSessionState {
  sessionId: string | null;
  version: number;
  objects: ObjectDoc[];

  stepIndex: number;
  // highest step the user has completed; navigation past it is disabled
  maxCompletedStep: number;

  trainingObjectId: string | null;
  trainingEntries: Record<string, string[]>;

  modelSource: string;
  report: ValidationReportDoc | null;
  graph: GraphExportDoc | null;
  plan: PlanDoc | null;
  planFailureReason: string | null;

  testObjectId: string | null;
  testEntries: Record<string, string[]>;
  transferResults: TransferResultDoc[];

  banner: Banner | null;
  staleSession: boolean;
}

const initial: UiSessionState = {
  sessionId: null,
  version: 0,
  objects: [],
  stepIndex: 0,
  maxCompletedStep: -1,
  trainingObjectId: null,
  trainingEntries: {},
  modelSource: '',
  report: null,
  graph: null,
  plan: null,
  planFailureReason: null,
  testObjectId: null,
  testEntries: {},
  transferResults: [],
  banner: null,
  staleSession: false,
};

type Listener = () => void;

class Store {
  private state: UiSessionState = { ...initial };
  private listeners: Listener[] = [];

  get(): UiSessionState {
    return this.state;
  }

  set(patch: Partial<UiSessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener();
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  reset(): void {
    this.state = { ...initial };
    for (const listener of this.listeners) listener();
  }
}

export const store = new Store();

/** Step 2 is complete once a plan attempt has been stored, even a failed one. */
export function planAttempted(s: UiSessionState): boolean {
  return s.plan !== null || s.planFailureReason !== null;
}
