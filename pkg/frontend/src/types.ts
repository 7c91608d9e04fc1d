// Document shapes returned by the planning service. The UI renders these
// 1:1 and never computes plans or valuations on its own.

export interface ConnectorDoc {
  id: string;
  kind: string;
  size: number;
  accepted_primitives: string[];
}

export interface PartDoc {
  id: string;
  display_name: string;
  connectors: ConnectorDoc[];
}

export interface ObjectDoc {
  id: string;
  display_name: string;
  category?: string;
  parts: PartDoc[];
}

export interface CatalogDoc {
  v: number;
  objects: ObjectDoc[];
}

export interface ValidationIssueDoc {
  code: string;
  message: string;
  node?: string;
  rule_index?: number;
}

export interface ValidationReportDoc {
  v: number;
  ok: boolean;
  violations: ValidationIssueDoc[];
  warnings: ValidationIssueDoc[];
}

export type NodeKind = 'function' | 'intermediate' | 'goal';

export interface GraphNodeDoc {
  label: string;
  kind: NodeKind;
}

export interface RuleGroupDoc {
  effect: string;
  antecedents: string[];
}

export interface GraphExportDoc {
  v: number;
  goal: string;
  nodes: GraphNodeDoc[];
  rule_groups: RuleGroupDoc[];
}

export interface PlanStepDoc {
  primitive: string;
  from: string;
  to: string;
  text: string;
}

export interface PlanDoc {
  v: number;
  object_id: string;
  model_hash: string;
  steps: PlanStepDoc[];
  expected_value: number;
  achieves_goal: boolean;
  stats: { states: number; iterations: number; residual: number };
}

export interface TransferPlanDoc {
  steps: PlanStepDoc[];
  expected_value: number;
  achieves_goal: boolean;
}

export interface TransferResultDoc {
  v: number;
  test_object: string;
  relation: 'near' | 'far';
  outcome: 'success' | 'failure';
  reason?: string;
  plan?: TransferPlanDoc;
  warnings: string[];
}

export interface SessionDoc {
  v: number;
  id: string;
  version: number;
  step1: { object_id: string; entries: Record<string, string[]> } | null;
  step2: {
    source: string;
    report: ValidationReportDoc;
    graph: GraphExportDoc;
    plan: PlanDoc | { v: number; plan: null; reason: string } | null;
  } | null;
  step3: { results: TransferResultDoc[] };
}

// step 3 request payload: bindings only, by construction there is no
// field that could carry model text
export interface TransferRequest {
  version: number;
  test_object: string;
  entries: Record<string, string[]>;
}
