/**
 * The UI event log and its replay engine.
 *
 * Every workspace interaction is captured as one event, and applying an
 * event performs exactly one protocol operation (solver checks also poll
 * their ticket, which is part of the same protocol exchange). The live UI
 * and the headless tests run the same `applyEvent`, so a recorded session
 * replayed protocol-only reconstructs the same trees — the client itself
 * contributes no proof logic.
 */

import { ProtocolClient } from './client.js';
import type {
  AutoOutcome, GoalKind, Mode, ProofSummary, RuleArgs, VerdictJson,
} from './protocol.js';

export type UiEvent =
  | { kind: 'createGoal'; proof: number; goalKind: GoalKind; text: string }
  | { kind: 'applyRule'; proof: number; path: number[]; rule: string; args: RuleArgs }
  | { kind: 'prune'; proof: number; path: number[] }
  | { kind: 'detach'; proof: number; path: number[]; detached: number }
  | { kind: 'attach'; proof: number; path: number[]; subProof: number }
  | { kind: 'setHidden'; proof: number; path: number[]; hidden: boolean }
  | { kind: 'auto'; proof: number; path: number[] }
  | { kind: 'z3Check'; proof: number; path: number[] }
  | { kind: 'exportLatex'; proof: number }
  | { kind: 'save'; proof: number }
  | { kind: 'load'; proof: number; script: unknown }
  | { kind: 'setMode'; mode: Mode }
  | { kind: 'deleteProof'; proof: number };

/** What replaying a log leaves behind; keyed by the ids recorded in the log. */
export interface ReplayState {
  proofs: Map<number, ProofSummary>;
  latex: Map<number, string>;
  scripts: Map<number, unknown>;
  verdicts: VerdictJson[];
  autoOutcomes: AutoOutcome[];
  mode: Mode;
}

export function emptyState(): ReplayState {
  return {
    proofs: new Map(),
    latex: new Map(),
    scripts: new Map(),
    verdicts: [],
    autoOutcomes: [],
    mode: 'learning',
  };
}

const POLL_INTERVAL_MS = 100;
const POLL_DEADLINE_MS = 60_000;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

/**
 * Apply one event through the protocol. `idMap` translates proof ids as
 * recorded in the log into the ids the service hands out during this run
 * (a fresh workspace numbers proofs differently).
 */
export async function applyEvent(
  client: ProtocolClient,
  state: ReplayState,
  idMap: Map<number, number>,
  event: UiEvent,
): Promise<void> {
  const live = (recorded: number): number => idMap.get(recorded) ?? recorded;

  switch (event.kind) {
    case 'createGoal': {
      const got = await client.createGoal(event.goalKind, event.text);
      idMap.set(event.proof, got.proofId);
      state.proofs.set(event.proof, got.proof);
      return;
    }
    case 'applyRule': {
      const got = await client.applyRule(live(event.proof), event.path, event.rule, event.args);
      state.proofs.set(event.proof, got.proof);
      return;
    }
    case 'prune': {
      const got = await client.prune(live(event.proof), event.path);
      state.proofs.set(event.proof, got.proof);
      return;
    }
    case 'detach': {
      const got = await client.detach(live(event.proof), event.path);
      idMap.set(event.detached, got.detachedProofId);
      state.proofs.set(event.proof, got.proof);
      state.proofs.set(event.detached, got.detached);
      return;
    }
    case 'attach': {
      const got = await client.attach(live(event.proof), event.path, live(event.subProof));
      state.proofs.set(event.proof, got.proof);
      state.proofs.delete(event.subProof);
      return;
    }
    case 'setHidden': {
      const got = await client.setHidden(live(event.proof), event.path, event.hidden);
      state.proofs.set(event.proof, got.proof);
      return;
    }
    case 'auto': {
      const got = await client.auto(live(event.proof), event.path);
      state.proofs.set(event.proof, got.proof);
      state.autoOutcomes.push(got.outcome);
      return;
    }
    case 'z3Check': {
      const { ticket } = await client.z3Check(live(event.proof), event.path);
      const deadline = Date.now() + POLL_DEADLINE_MS;
      for (;;) {
        const got = await client.result(ticket);
        if (got.status === 'done') {
          state.verdicts.push(got.verdict!);
          if (got.proof) state.proofs.set(event.proof, got.proof);
          return;
        }
        if (Date.now() > deadline) throw new Error('solver ticket never completed');
        await sleep(POLL_INTERVAL_MS);
      }
    }
    case 'exportLatex': {
      const got = await client.exportLatex(live(event.proof));
      state.latex.set(event.proof, got.latex);
      return;
    }
    case 'save': {
      const got = await client.save(live(event.proof));
      state.scripts.set(event.proof, got.script);
      return;
    }
    case 'load': {
      const got = await client.load(event.script);
      idMap.set(event.proof, got.proofId);
      state.proofs.set(event.proof, got.proof);
      return;
    }
    case 'setMode': {
      const got = await client.setMode(event.mode);
      state.mode = got.mode;
      return;
    }
    case 'deleteProof': {
      await client.deleteProof(live(event.proof));
      state.proofs.delete(event.proof);
      return;
    }
  }
}

/** Replay a whole log into a fresh state (headless or live — same code). */
export async function replayEvents(
  client: ProtocolClient,
  log: readonly UiEvent[],
): Promise<ReplayState> {
  const state = emptyState();
  const idMap = new Map<number, number>();
  for (const event of log) {
    await applyEvent(client, state, idMap, event);
  }
  return state;
}

/** The §2 walkthrough as an event log: goal entry, two ⇒R, ∧R, two Id, export. */
export function walkthroughLog(): UiEvent[] {
  return [
    { kind: 'createGoal', proof: 1, goalKind: 'lk', text: '|- p => q => (p /\\ q)' },
    { kind: 'applyRule', proof: 1, path: [], rule: 'ImpR', args: {} },
    { kind: 'applyRule', proof: 1, path: [0], rule: 'ImpR', args: {} },
    { kind: 'applyRule', proof: 1, path: [0, 0], rule: 'AndR', args: {} },
    { kind: 'applyRule', proof: 1, path: [0, 0, 0], rule: 'Id', args: {} },
    { kind: 'applyRule', proof: 1, path: [0, 0, 1], rule: 'Id', args: {} },
    { kind: 'exportLatex', proof: 1 },
  ];
}
