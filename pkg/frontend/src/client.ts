/**
 * Thin fetch wrapper over the session protocol. Operation failures arrive as
 * `{ok:false}` envelopes and raise ServiceFailure (application-level, shown
 * inline); transport problems raise ConnectionLost (shown as a banner).
 */

import type {
  AutoOutcome, Envelope, GoalKind, Mode, PreviewResult, ProofSummary, RuleArgs, RuleEntry,
  ServiceErrorBody, TicketResult,
} from './protocol.js';

export class ServiceFailure extends Error {
  readonly code: string;
  readonly details: Record<string, unknown>;

  constructor(body: ServiceErrorBody) {
    super(body.message);
    this.code = body.code;
    this.details = body.details;
  }
}

export class ConnectionLost extends Error {}

export class ProtocolClient {
  constructor(readonly baseUrl: string) {}

  private async call<T>(op: string, body: Record<string, unknown>): Promise<T> {
    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/api/${op}`, {
        method: 'POST',
        headers: { 'Content-Type': 'application/json' },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ConnectionLost(String(err));
    }
    const envelope = (await response.json()) as Envelope<T>;
    if (!envelope.ok) throw new ServiceFailure(envelope.error);
    return envelope.payload;
  }

  createGoal(kind: GoalKind, text: string) {
    return this.call<{ proofId: number; proof: ProofSummary }>('createGoal', { kind, text });
  }

  parsePreview(kind: 'sequent' | 'triple' | 'formula' | 'term', text: string) {
    return this.call<PreviewResult>('parsePreview', { kind, text });
  }

  listApplicable(proofId: number, path: number[]) {
    return this.call<{ mode: Mode; rules: RuleEntry[] }>('listApplicable', { proofId, path });
  }

  applyRule(proofId: number, path: number[], rule: string, args: RuleArgs) {
    return this.call<{ proof: ProofSummary }>('applyRule', { proofId, path, rule, args });
  }

  prune(proofId: number, path: number[]) {
    return this.call<{ proof: ProofSummary }>('prune', { proofId, path });
  }

  detach(proofId: number, path: number[]) {
    return this.call<{ proof: ProofSummary; detachedProofId: number; detached: ProofSummary }>(
      'detach', { proofId, path });
  }

  attach(proofId: number, path: number[], subProofId: number) {
    return this.call<{ proof: ProofSummary }>('attach', { proofId, path, subProofId });
  }

  setHidden(proofId: number, path: number[], hidden: boolean) {
    return this.call<{ proof: ProofSummary }>('setHidden', { proofId, path, hidden });
  }

  auto(proofId: number, path: number[]) {
    return this.call<{ proof: ProofSummary; outcome: AutoOutcome }>('auto', { proofId, path });
  }

  z3Check(proofId: number, path: number[], timeout?: number) {
    return this.call<{ ticket: number }>('z3Check',
      timeout === undefined ? { proofId, path } : { proofId, path, timeout });
  }

  result(ticket: number) {
    return this.call<TicketResult>('result', { ticket });
  }

  exportLatex(proofId: number) {
    return this.call<{ latex: string }>('exportLatex', { proofId });
  }

  save(proofId: number) {
    return this.call<{ script: unknown; extension: string }>('save', { proofId });
  }

  load(script: unknown, recheckZ3 = false) {
    return this.call<{ proofId: number; proof: ProofSummary }>('load', { script, recheckZ3 });
  }

  setMode(mode: Mode) {
    return this.call<{ mode: Mode }>('setMode', { mode });
  }

  deleteProof(proofId: number) {
    return this.call<{ deleted: number }>('deleteProof', { proofId });
  }

  listProofs() {
    return this.call<{ mode: Mode; proofs: ProofSummary[] }>('listProofs', {});
  }
}
