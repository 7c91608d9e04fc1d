// Raw fetch calls against the planning service. No caching, no retries;
// errors carry enough structure for the UI to render them.

import type {
  CatalogDoc,
  GraphExportDoc,
  PlanDoc,
  SessionDoc,
  TransferRequest,
  TransferResultDoc,
  ValidationReportDoc,
} from './types';

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
    public readonly endpoint: string,
  ) {
    super(`${status} on ${endpoint}`);
    this.name = 'ApiError';
  }
}

/** 409 carrying {message: "stale version"}: another tab moved the session. */
export class StaleSessionError extends ApiError {
  constructor(status: number, detail: unknown, endpoint: string) {
    super(status, detail, endpoint);
    this.name = 'StaleSessionError';
  }
}

/** 400 on model submission; position points into the DSL text. */
export class SyntaxErrorResponse extends ApiError {
  constructor(
    status: number,
    public readonly message: string,
    public readonly line: number,
    public readonly column: number,
    endpoint: string,
  ) {
    super(status, { message, line, column }, endpoint);
    this.name = 'SyntaxErrorResponse';
  }
}

/** 422 on model submission; the validation report names the violations. */
export class InvalidModelResponse extends ApiError {
  constructor(
    status: number,
    public readonly report: ValidationReportDoc,
    endpoint: string,
  ) {
    super(status, report, endpoint);
    this.name = 'InvalidModelResponse';
  }
}

function isStaleDetail(detail: unknown): boolean {
  return (
    typeof detail === 'object' &&
    detail !== null &&
    (detail as { message?: unknown }).message === 'stale version'
  );
}

async function handle<T>(response: Response, endpoint: string): Promise<T> {
  if (response.ok) {
    return response.json() as Promise<T>;
  }
  let detail: unknown = null;
  try {
    const body = await response.json();
    detail = (body as { detail?: unknown }).detail ?? body;
  } catch {
    // body empty or not JSON; keep detail null
  }
  if (response.status === 409 && isStaleDetail(detail)) {
    throw new StaleSessionError(response.status, detail, endpoint);
  }
  if (response.status === 400 && detail && typeof detail === 'object' && 'line' in detail) {
    const d = detail as { message: string; line: number; column: number };
    throw new SyntaxErrorResponse(response.status, d.message, d.line, d.column, endpoint);
  }
  if (response.status === 422 && detail && typeof detail === 'object' && 'report' in detail) {
    const d = detail as { report: ValidationReportDoc };
    throw new InvalidModelResponse(response.status, d.report, endpoint);
  }
  throw new ApiError(response.status, detail, endpoint);
}

async function post<T>(endpoint: string, body: unknown): Promise<T> {
  const response = await fetch(endpoint, {
    method: 'POST',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify(body),
  });
  return handle<T>(response, endpoint);
}

export async function fetchObjects(): Promise<CatalogDoc> {
  const endpoint = '/api/objects';
  return handle<CatalogDoc>(await fetch(endpoint), endpoint);
}

export async function createSession(): Promise<SessionDoc> {
  return post<SessionDoc>('/api/sessions', {});
}

export async function fetchSession(sessionId: string): Promise<SessionDoc> {
  const endpoint = `/api/sessions/${sessionId}`;
  return handle<SessionDoc>(await fetch(endpoint), endpoint);
}

export async function saveStep1(
  sessionId: string,
  version: number,
  objectId: string,
  entries: Record<string, string[]>,
): Promise<{ v: number; binding: unknown; version: number }> {
  const endpoint = `/api/sessions/${sessionId}/step1`;
  const response = await fetch(endpoint, {
    method: 'PUT',
    headers: { 'Content-Type': 'application/json' },
    body: JSON.stringify({ version, object_id: objectId, entries }),
  });
  return handle(response, endpoint);
}

export async function submitModel(
  sessionId: string,
  version: number,
  source: string,
): Promise<{ v: number; report: ValidationReportDoc; graph: GraphExportDoc; version: number }> {
  return post(`/api/sessions/${sessionId}/model`, { version, source });
}

export async function requestPlan(
  sessionId: string,
  version: number,
  objectId: string,
  entries: Record<string, string[]>,
): Promise<{ v: number; plan: PlanDoc | null; reason?: string; version: number }> {
  return post(`/api/sessions/${sessionId}/plan`, {
    version,
    object_id: objectId,
    entries,
  });
}

export async function submitTransfer(
  sessionId: string,
  request: TransferRequest,
): Promise<{ v: number; result: TransferResultDoc; version: number }> {
  return post(`/api/sessions/${sessionId}/transfer`, request);
}
