/**
 * Secondary acceptance: a scripted session reproducing the full walkthrough
 * (goal entry → two ⇒R → ∧R → two Id → LaTeX export) through the real
 * service ends complete with a non-empty export, and the same event log
 * replayed protocol-only against a fresh service reaches an identical tree.
 */

import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ProtocolClient } from '../src/client.js';
import { replayEvents, walkthroughLog } from '../src/events.js';
import type { NodeSummary } from '../src/protocol.js';
import { startService, type RunningService } from './service.js';

let live: RunningService;

beforeAll(async () => {
  live = await startService();
}, 30000);

afterAll(async () => {
  await live?.stop();
});

function shape(node: NodeSummary): unknown {
  // node ids are allocation order and paths are positions: both deterministic,
  // so the whole summary must match; proofId is the only per-workspace field
  return node;
}

describe('walkthrough event log', () => {
  it('runs through the real service to a complete proof with LaTeX', async () => {
    const client = new ProtocolClient(live.url);
    const state = await replayEvents(client, walkthroughLog());

    const proof = state.proofs.get(1)!;
    expect(proof.complete).toBe(true);
    expect(proof.holes).toEqual([]);
    expect(proof.goalText).toBe('⊢ p ⇒ q ⇒ (p ∧ q)');

    const labels: string[] = [];
    const walk = (n: NodeSummary): void => {
      if (n.rule) labels.push(n.rule);
      n.children.forEach(walk);
    };
    walk(proof.root);
    expect(labels).toEqual(['ImpR', 'ImpR', 'AndR', 'Id', 'Id']);

    const latex = state.latex.get(1)!;
    expect(latex.length).toBeGreaterThan(0);
    expect(latex).toContain('\\begin{prooftree}');
    expect(latex).toContain('\\end{prooftree}');
  }, 30000);

  it('replayed headless against a fresh service reaches an identical tree', async () => {
    const first = await replayEvents(new ProtocolClient(live.url), walkthroughLog());

    const fresh = await startService();
    try {
      const second = await replayEvents(new ProtocolClient(fresh.url), walkthroughLog());
      expect(shape(second.proofs.get(1)!.root)).toEqual(shape(first.proofs.get(1)!.root));
      expect(second.latex.get(1)).toEqual(first.latex.get(1));
      expect(second.proofs.get(1)!.complete).toBe(true);
    } finally {
      await fresh.stop();
    }
  }, 40000);

  it('supports detach and reattach in a recorded session', async () => {
    const client = new ProtocolClient(live.url);
    const state = await replayEvents(client, [
      { kind: 'createGoal', proof: 1, goalKind: 'lk', text: '|- p => p' },
      { kind: 'applyRule', proof: 1, path: [], rule: 'ImpR', args: {} },
      { kind: 'applyRule', proof: 1, path: [0], rule: 'Id', args: {} },
      { kind: 'detach', proof: 1, path: [0], detached: 2 },
      { kind: 'attach', proof: 1, path: [0], subProof: 2 },
      { kind: 'save', proof: 1 },
    ]);
    expect(state.proofs.get(1)!.complete).toBe(true);
    expect(state.proofs.has(2)).toBe(false);
    expect(state.scripts.get(1)).toBeTruthy();
  }, 30000);
});
