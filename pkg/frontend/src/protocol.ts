/**
 * Wire types for the proofkit session protocol (see docs/protocol.md in the
 * repository root). The client renders these verbatim: every goal text, rule
 * label and status below comes from the service, never from local reasoning.
 */

export type GoalKind = 'lk' | 'hoare';
export type Mode = 'learning' | 'automation';
export type NodeStatus = 'hole' | 'closed' | 'derived';

export interface NodeSummary {
  id: number;
  path: number[];
  goal: string;
  kind: GoalKind;
  status: NodeStatus;
  rule: string | null;
  label: string | null;
  pseudo: boolean;
  hidden: boolean;
  children: NodeSummary[];
}

export interface ProofSummary {
  proofId: number;
  kind: GoalKind;
  goalText: string;
  complete: boolean;
  holes: number[][];
  root: NodeSummary;
}

export interface Position {
  side: 'left' | 'right';
  index: number;
}

export interface RuleEntry {
  rule: string;
  label: string;
  positions: Position[];
  needs: string[];
}

export interface RuleArgs {
  principal?: Position;
  freshVar?: string;
  witnessTerm?: string;
  cutFormula?: string;
  midCondition?: string;
  strengthenedPre?: string;
  weakenedPost?: string;
}

export interface PreviewResult {
  ok: boolean;
  canonical?: string;
  error?: string;
  line?: number;
  column?: number;
}

export interface CountermodelJson {
  bools: Record<string, boolean>;
  ints: Record<string, number>;
  functions: Record<string, { entries: { args: number[]; value: number | boolean }[]; default: unknown }>;
  text: string;
}

export type VerdictJson =
  | { result: 'valid' }
  | { result: 'invalid'; model: CountermodelJson }
  | { result: 'unknown'; reason: string; detail: string };

export type AutoOutcome =
  | { status: 'completed' }
  | { status: 'stuck'; reason: 'ambiguous'; rule: string; positions: Position[] }
  | { status: 'stuck'; reason: 'no-rule' | 'depth-limit' };

export interface ServiceErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

export type Envelope<T> =
  | { ok: true; payload: T }
  | { ok: false; error: ServiceErrorBody };

export interface TicketResult {
  status: 'pending' | 'done';
  verdict?: VerdictJson;
  applied?: boolean;
  stale?: boolean;
  proof?: ProofSummary;
}
