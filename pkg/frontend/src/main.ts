/**
 * Workspace application: top menu (goal entry, mode switch), left bar with
 * the active proofs, and a pannable/zoomable canvas of draggable proof
 * cards. Every interaction turns into one UI event dispatched through the
 * protocol (events.ts); this module owns only view state.
 */

import { ConnectionLost, ProtocolClient, ServiceFailure } from './client.js';
import { applyEvent, emptyState, type ReplayState, type UiEvent } from './events.js';
import {
  CardPosition, IDENTITY, nextCardPosition, panBy, toWorkspace, transformCss, ViewTransform,
  zoomAt,
} from './layout.js';
import type { GoalKind, ProofSummary, RuleArgs, RuleEntry } from './protocol.js';
import { renderLeftBarEntry, renderProofTree } from './render.js';

class Session {
  readonly log: UiEvent[] = [];
  readonly state: ReplayState = emptyState();
  private readonly idMap = new Map<number, number>();
  private nextRecordedId = 1;

  constructor(readonly client: ProtocolClient) {}

  allocateId(): number {
    return this.nextRecordedId++;
  }

  async dispatch(event: UiEvent): Promise<void> {
    await applyEvent(this.client, this.state, this.idMap, event);
    this.log.push(event);
  }
}

const serviceUrl = new URLSearchParams(location.search).get('service') ?? '';
const session = new Session(new ProtocolClient(serviceUrl));

const positions = new Map<number, CardPosition>();
let view: ViewTransform = { ...IDENTITY };
let busy = false;

const $ = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
};

const workspace = $('workspace');
const canvas = $('canvas');
const leftBar = $('proof-list');
const banner = $('banner');
const toasts = $('toasts');

// ---- feedback -----------------------------------------------------------------

function toast(message: string, kind: 'error' | 'info' = 'info'): void {
  const node = document.createElement('div');
  node.className = `toast ${kind}`;
  node.textContent = message;
  toasts.appendChild(node);
  setTimeout(() => node.remove(), 6000);
}

function showBanner(show: boolean): void {
  banner.classList.toggle('visible', show);
}

async function dispatch(event: UiEvent): Promise<boolean> {
  if (busy) return false;
  busy = true;
  document.body.classList.add('busy');
  try {
    await session.dispatch(event);
    showBanner(false);
    return true;
  } catch (err) {
    if (err instanceof ConnectionLost) {
      showBanner(true);
    } else if (err instanceof ServiceFailure) {
      toast(err.message, 'error');
    } else {
      toast(String(err), 'error');
    }
    return false;
  } finally {
    busy = false;
    document.body.classList.remove('busy');
    redraw();
  }
}

// ---- rendering ------------------------------------------------------------------

function redraw(): void {
  canvas.style.transform = transformCss(view);
  canvas.replaceChildren();
  leftBar.replaceChildren();
  for (const [recordedId, proof] of session.state.proofs) {
    if (!positions.has(recordedId)) {
      positions.set(recordedId, nextCardPosition(positions.values()));
    }
    canvas.appendChild(renderCard(recordedId, proof));
    leftBar.appendChild(renderLeftBarEntry(proof, {
      onLatex: () => void latexDialog(recordedId),
      onSave: () => void saveProof(recordedId),
      onDelete: () => void dispatch({ kind: 'deleteProof', proof: recordedId }),
      onFocus: () => focusCard(recordedId),
    }));
  }
}

function renderCard(recordedId: number, proof: ProofSummary): HTMLElement {
  const card = document.createElement('div');
  card.className = 'proof-card';
  card.dataset.proof = String(recordedId);
  const pos = positions.get(recordedId)!;
  card.style.transform = `translate(${pos.x}px, ${pos.y}px)`;
  card.appendChild(renderProofTree(proof, {
    onPlus: (p, path, anchor) => void ruleMenu(p, path, anchor),
    onPrune: (p, path) => void dispatch({ kind: 'prune', proof: p, path }),
    onDetach: (p, path) => {
      const detachedId = session.allocateId();
      void dispatch({ kind: 'detach', proof: p, path, detached: detachedId });
    },
    onToggleHidden: (p, path, hidden) =>
      void dispatch({ kind: 'setHidden', proof: p, path, hidden }),
  }));
  makeDraggable(card, recordedId);
  return card;
}

function focusCard(recordedId: number): void {
  const pos = positions.get(recordedId);
  if (!pos) return;
  view = { ...IDENTITY };
  positions.set(recordedId, { x: 60, y: 60 });
  redraw();
}

// ---- dragging and zooming ------------------------------------------------------

function makeDraggable(card: HTMLElement, recordedId: number): void {
  card.addEventListener('pointerdown', (down) => {
    if ((down.target as HTMLElement).closest('button')) return;
    down.preventDefault();
    card.setPointerCapture(down.pointerId);
    card.classList.add('dragging');
    const start = positions.get(recordedId)!;
    const origin = toWorkspace(view, down.clientX, down.clientY);

    const move = (ev: PointerEvent) => {
      const here = toWorkspace(view, ev.clientX, ev.clientY);
      positions.set(recordedId, {
        x: start.x + (here.x - origin.x),
        y: start.y + (here.y - origin.y),
      });
      card.style.transform = `translate(${positions.get(recordedId)!.x}px, ${positions.get(recordedId)!.y}px)`;
    };
    const up = (ev: PointerEvent) => {
      card.removeEventListener('pointermove', move);
      card.removeEventListener('pointerup', up);
      card.classList.remove('dragging');
      void dropOnHole(recordedId, ev);
    };
    card.addEventListener('pointermove', move);
    card.addEventListener('pointerup', up);
  });
}

/** Dropping a whole proof card on another proof's ⊕ hole reattaches it. */
async function dropOnHole(draggedId: number, ev: PointerEvent): Promise<void> {
  const under = document.elementFromPoint(ev.clientX, ev.clientY);
  const holeBtn = under instanceof HTMLElement ? under.closest<HTMLElement>('[data-hole]') : null;
  if (!holeBtn) {
    redraw();
    return;
  }
  const target = JSON.parse(holeBtn.dataset.hole!) as { proof: number; path: number[] };
  const targetRecorded = recordedIdOf(target.proof);
  if (targetRecorded === null || targetRecorded === draggedId) {
    redraw();
    return;
  }
  await dispatch({
    kind: 'attach', proof: targetRecorded, path: target.path, subProof: draggedId,
  });
}

function recordedIdOf(liveProofId: number): number | null {
  for (const [recorded, proof] of session.state.proofs) {
    if (proof.proofId === liveProofId) return recorded;
  }
  return null;
}

workspace.addEventListener('wheel', (ev) => {
  ev.preventDefault();
  const rect = workspace.getBoundingClientRect();
  const factor = ev.deltaY < 0 ? 1.1 : 1 / 1.1;
  view = zoomAt(view, ev.clientX - rect.left, ev.clientY - rect.top, factor);
  canvas.style.transform = transformCss(view);
}, { passive: false });

workspace.addEventListener('pointerdown', (down) => {
  if (down.target !== workspace && down.target !== canvas) return;
  const startView = view;
  const move = (ev: PointerEvent) => {
    view = panBy(startView, ev.clientX - down.clientX, ev.clientY - down.clientY);
    canvas.style.transform = transformCss(view);
  };
  const up = () => {
    workspace.removeEventListener('pointermove', move);
    workspace.removeEventListener('pointerup', up);
  };
  workspace.addEventListener('pointermove', move);
  workspace.addEventListener('pointerup', up);
});

// ---- the ⊕ menu -------------------------------------------------------------------

function closeMenus(): void {
  document.querySelectorAll('.rule-menu').forEach((m) => m.remove());
}

document.addEventListener('click', (ev) => {
  if (!(ev.target as HTMLElement).closest('.rule-menu, .plus-btn')) closeMenus();
});

async function ruleMenu(recordedId: number, path: number[], anchor: HTMLElement): Promise<void> {
  closeMenus();
  const proof = session.state.proofs.get(recordedId);
  if (!proof) return;
  let listing;
  try {
    listing = await session.client.listApplicable(proof.proofId, path);
  } catch (err) {
    if (err instanceof ConnectionLost) showBanner(true);
    else toast(String(err), 'error');
    return;
  }
  const menu = document.createElement('div');
  menu.className = 'rule-menu';
  const groups: [string, (e: RuleEntry) => boolean][] = [
    ['Axioms & automation', (e) => ['Id', 'TruthR', 'FalsityL', 'Auto', 'Z3Axiom'].includes(e.rule)],
    ['Left rules', (e) => e.rule.endsWith('L') && !['FalsityL'].includes(e.rule)],
    ['Right rules', (e) => e.rule.endsWith('R') && !['TruthR'].includes(e.rule)],
    ['Other rules', () => true],
  ];
  const used = new Set<string>();
  for (const [title, match] of groups) {
    const entries = listing.rules.filter((e) => !used.has(e.rule) && match(e));
    entries.forEach((e) => used.add(e.rule));
    if (!entries.length) continue;
    const head = document.createElement('div');
    head.className = 'rule-group-title';
    head.textContent = title;
    menu.appendChild(head);
    const row = document.createElement('div');
    row.className = 'rule-group';
    for (const entry of entries) {
      const btn = document.createElement('button');
      btn.className = 'rule-btn';
      btn.textContent = entry.label;
      btn.title = entry.rule;
      btn.addEventListener('click', () => void pickRule(recordedId, path, entry, menu));
      row.appendChild(btn);
    }
    menu.appendChild(row);
  }
  document.body.appendChild(menu);
  const rect = anchor.getBoundingClientRect();
  menu.style.left = `${Math.min(rect.right + 6, window.innerWidth - menu.offsetWidth - 10)}px`;
  menu.style.top = `${Math.min(rect.top, window.innerHeight - menu.offsetHeight - 10)}px`;
}

async function pickRule(
  recordedId: number, path: number[], entry: RuleEntry, menu: HTMLElement,
): Promise<void> {
  if (entry.rule === 'Auto') {
    closeMenus();
    const ok = await dispatch({ kind: 'auto', proof: recordedId, path });
    if (ok) describeAutoOutcome();
    return;
  }
  if (entry.rule === 'Z3Axiom') {
    closeMenus();
    toast('asking the solver…');
    const ok = await dispatch({ kind: 'z3Check', proof: recordedId, path });
    if (ok) describeVerdict();
    return;
  }
  if (entry.needs.length === 0 && entry.positions.length <= 1) {
    closeMenus();
    const args: RuleArgs = {};
    if (entry.positions.length === 1) args.principal = entry.positions[0];
    await dispatch({ kind: 'applyRule', proof: recordedId, path, rule: entry.rule, args });
    return;
  }
  promptForArgs(recordedId, path, entry, menu);
}

/** Quantifier/cut/consequence prompts and the ambiguous-principal picker. */
function promptForArgs(
  recordedId: number, path: number[], entry: RuleEntry, menu: HTMLElement,
): void {
  menu.querySelector('.rule-form')?.remove();
  const form = document.createElement('form');
  form.className = 'rule-form';
  const fields = new Map<string, HTMLInputElement | HTMLSelectElement>();

  if (entry.positions.length > 1) {
    const select = document.createElement('select');
    for (const pos of entry.positions) {
      const option = document.createElement('option');
      option.value = JSON.stringify(pos);
      option.textContent = `${pos.side} formula #${pos.index}`;
      select.appendChild(option);
    }
    form.appendChild(labelled('which formula?', select));
    fields.set('principal', select);
  }
  const prompts: Record<string, string> = {
    freshVar: 'fresh variable',
    witnessTerm: 'witness term',
    cutFormula: 'cut formula',
    midCondition: 'intermediate condition',
    strengthenedPre: 'strengthened precondition',
    weakenedPost: 'weakened postcondition',
  };
  for (const need of entry.needs) {
    if (need === 'principalIndex') continue;
    const input = document.createElement('input');
    input.placeholder = prompts[need] ?? need;
    form.appendChild(labelled(prompts[need] ?? need, input));
    fields.set(need, input);
  }
  const apply = document.createElement('button');
  apply.textContent = `Apply ${entry.label}`;
  form.appendChild(apply);
  form.addEventListener('submit', (ev) => {
    ev.preventDefault();
    const args: RuleArgs = {};
    if (entry.positions.length === 1) args.principal = entry.positions[0];
    for (const [name, field] of fields) {
      if (name === 'principal') {
        args.principal = JSON.parse(field.value);
      } else {
        (args as Record<string, unknown>)[name] = field.value;
      }
    }
    closeMenus();
    void dispatch({ kind: 'applyRule', proof: recordedId, path, rule: entry.rule, args });
  });
  menu.appendChild(form);
  (fields.values().next().value as HTMLElement | undefined)?.focus();
}

function labelled(text: string, control: HTMLElement): HTMLElement {
  const wrap = document.createElement('label');
  wrap.className = 'field';
  const span = document.createElement('span');
  span.textContent = text;
  wrap.append(span, control);
  return wrap;
}

function describeAutoOutcome(): void {
  const outcome = session.state.autoOutcomes[session.state.autoOutcomes.length - 1];
  if (!outcome) return;
  if (outcome.status === 'completed') {
    toast('automation finished the subtree');
  } else if (outcome.reason === 'ambiguous') {
    toast(`automation stopped: ${outcome.rule} could apply to several formulas — pick one yourself`, 'error');
  } else if (outcome.reason === 'no-rule') {
    toast('automation stopped: only quantifier or atom goals are left', 'error');
  } else {
    toast('automation gave up at the step limit', 'error');
  }
}

function describeVerdict(): void {
  const verdict = session.state.verdicts[session.state.verdicts.length - 1];
  if (!verdict) return;
  if (verdict.result === 'valid') {
    toast('the solver confirms the goal (pseudo-axiom applied)');
  } else if (verdict.result === 'invalid') {
    countermodelDialog(verdict.model.text);
  } else {
    toast(`solver answered unknown (${verdict.reason}) ${verdict.detail}`, 'error');
  }
}

// ---- dialogs ----------------------------------------------------------------------

function dialog(title: string): { overlay: HTMLElement; box: HTMLElement; close(): void } {
  const overlay = document.createElement('div');
  overlay.className = 'overlay';
  const box = document.createElement('div');
  box.className = 'dialog';
  const head = document.createElement('h2');
  head.textContent = title;
  box.appendChild(head);
  overlay.appendChild(box);
  document.body.appendChild(overlay);
  const close = () => overlay.remove();
  overlay.addEventListener('click', (ev) => {
    if (ev.target === overlay) close();
  });
  return { overlay, box, close };
}

function goalDialog(kind: GoalKind): void {
  const { box, close } = dialog(kind === 'lk' ? 'Add LK goal' : 'Add Hoare goal');
  const input = document.createElement('textarea');
  input.rows = 2;
  input.placeholder = kind === 'lk'
    ? 'e.g.  |- p => q => (p /\\ q)'
    : 'e.g.  {x = 1} x := x + 1 {x = 2}';
  const preview = document.createElement('div');
  preview.className = 'preview';
  const create = document.createElement('button');
  create.textContent = 'Add goal';
  create.disabled = true;

  input.addEventListener('input', () => {
    void (async () => {
      const text = input.value;
      if (!text.trim()) {
        preview.textContent = '';
        create.disabled = true;
        return;
      }
      try {
        const got = await session.client.parsePreview(kind === 'lk' ? 'sequent' : 'triple', text);
        if (input.value !== text) return; // stale keystroke
        if (got.ok) {
          preview.textContent = got.canonical ?? '';
          preview.className = 'preview ok';
          create.disabled = false;
        } else {
          preview.textContent = `${got.line}:${got.column}: ${got.error}`;
          preview.className = 'preview bad';
          create.disabled = true;
        }
      } catch {
        showBanner(true);
      }
    })();
  });
  create.addEventListener('click', () => {
    void (async () => {
      const recordedId = session.allocateId();
      const ok = await dispatch({
        kind: 'createGoal', proof: recordedId, goalKind: kind, text: input.value,
      });
      if (ok) close();
    })();
  });
  box.append(input, preview, create);
  input.focus();
}

async function latexDialog(recordedId: number): Promise<void> {
  const ok = await dispatch({ kind: 'exportLatex', proof: recordedId });
  if (!ok) return;
  const latex = session.state.latex.get(recordedId) ?? '';
  const { box } = dialog('LaTeX export (bussproofs)');
  const pre = document.createElement('pre');
  pre.textContent = latex;
  const download = document.createElement('button');
  download.textContent = 'Download .tex';
  download.addEventListener('click', () => {
    downloadFile(`proof-${recordedId}.tex`, latex, 'text/x-tex');
  });
  box.append(pre, download);
}

function countermodelDialog(text: string): void {
  const { box } = dialog('Countermodel — the goal is not valid');
  const pre = document.createElement('pre');
  pre.textContent = text || '(empty model)';
  box.appendChild(pre);
}

async function saveProof(recordedId: number): Promise<void> {
  const ok = await dispatch({ kind: 'save', proof: recordedId });
  if (!ok) return;
  const script = session.state.scripts.get(recordedId);
  downloadFile(`proof-${recordedId}.ptb.json`, JSON.stringify(script, null, 2), 'application/json');
}

function downloadFile(name: string, contents: string, type: string): void {
  const url = URL.createObjectURL(new Blob([contents], { type }));
  const a = document.createElement('a');
  a.href = url;
  a.download = name;
  a.click();
  URL.revokeObjectURL(url);
}

// ---- top bar wiring ------------------------------------------------------------------

$('add-lk').addEventListener('click', () => goalDialog('lk'));
$('add-hoare').addEventListener('click', () => goalDialog('hoare'));

const modeSwitch = $('mode-switch') as unknown as HTMLInputElement;
modeSwitch.addEventListener('change', () => {
  void dispatch({ kind: 'setMode', mode: modeSwitch.checked ? 'automation' : 'learning' });
});

$('load-btn').addEventListener('click', () => {
  const picker = document.createElement('input');
  picker.type = 'file';
  picker.accept = '.ptb.json,application/json';
  picker.addEventListener('change', () => {
    const file = picker.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      const recordedId = session.allocateId();
      return dispatch({ kind: 'load', proof: recordedId, script: JSON.parse(text) });
    }).catch((err) => toast(String(err), 'error'));
  });
  picker.click();
});

$('retry-btn').addEventListener('click', () => {
  void (async () => {
    try {
      const got = await session.client.listProofs();
      showBanner(false);
      toast(`reconnected (${got.proofs.length} proofs on the service)`);
    } catch {
      showBanner(true);
    }
  })();
});

redraw();
