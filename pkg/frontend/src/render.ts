/**
 * DOM rendering of server tree summaries in the typeset proof-tree style:
 * premises stacked above an inference line, the rule label at its right.
 * Open goals draw an orange line with a ⊕ button; solver closures draw a
 * green line. Everything shown comes straight out of the summary.
 */

import type { NodeSummary, ProofSummary } from './protocol.js';

export interface TreeCallbacks {
  onPlus(proof: number, path: number[], anchor: HTMLElement): void;
  onPrune(proof: number, path: number[]): void;
  onDetach(proof: number, path: number[]): void;
  onToggleHidden(proof: number, path: number[], hidden: boolean): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function countLeaves(node: NodeSummary): number {
  if (node.children.length === 0) return 1;
  return node.children.reduce((n, c) => n + countLeaves(c), 0);
}

function renderNode(proof: ProofSummary, node: NodeSummary, cb: TreeCallbacks): HTMLElement {
  const box = el('div', 'node');

  if (node.status !== 'hole' && node.children.length > 0 && !node.hidden) {
    const premises = el('div', 'premises');
    for (const child of node.children) {
      premises.appendChild(renderNode(proof, child, cb));
    }
    box.appendChild(premises);
  } else if (node.hidden && node.children.length > 0) {
    const badge = el('div', 'folded-badge',
      `⋯ ${countLeaves(node)} premise${countLeaves(node) === 1 ? '' : 's'} hidden`);
    box.appendChild(badge);
  }

  const lineRow = el('div', 'line-row');
  const line = el('div', `line ${node.status}${node.pseudo ? ' pseudo' : ''}`);
  lineRow.appendChild(line);

  if (node.status === 'hole') {
    const plus = el('button', 'plus-btn', '⊕');
    plus.title = 'apply a rule';
    plus.dataset.hole = JSON.stringify({ proof: proof.proofId, path: node.path });
    plus.addEventListener('click', (ev) => {
      ev.stopPropagation();
      cb.onPlus(proof.proofId, node.path, plus);
    });
    lineRow.appendChild(plus);
  } else {
    const label = el('span', `rule-label${node.pseudo ? ' pseudo' : ''}`, node.label ?? '');
    lineRow.appendChild(label);
    const tools = el('span', 'node-tools');
    const minus = el('button', 'tool-btn', '−');
    minus.title = 'unapply this rule and everything above it';
    minus.addEventListener('click', (ev) => {
      ev.stopPropagation();
      cb.onPrune(proof.proofId, node.path);
    });
    tools.appendChild(minus);
    if (node.path.length > 0) {
      const detach = el('button', 'tool-btn', '✂');
      detach.title = 'detach the subtree into its own proof';
      detach.addEventListener('click', (ev) => {
        ev.stopPropagation();
        cb.onDetach(proof.proofId, node.path);
      });
      tools.appendChild(detach);
    }
    if (node.children.length > 0) {
      const hide = el('button', 'tool-btn', node.hidden ? '◉' : '◎');
      hide.title = node.hidden ? 'unfold the premises' : 'fold the premises';
      hide.addEventListener('click', (ev) => {
        ev.stopPropagation();
        cb.onToggleHidden(proof.proofId, node.path, !node.hidden);
      });
      tools.appendChild(hide);
    }
    lineRow.appendChild(tools);
  }
  box.appendChild(lineRow);
  box.appendChild(el('div', 'goal-text', node.goal));
  return box;
}

export function renderProofTree(proof: ProofSummary, cb: TreeCallbacks): HTMLElement {
  const tree = el('div', 'proof-tree');
  tree.appendChild(renderNode(proof, proof.root, cb));
  return tree;
}

export function renderLeftBarEntry(
  proof: ProofSummary,
  actions: { onLatex(): void; onSave(): void; onDelete(): void; onFocus(): void },
): HTMLElement {
  const entry = el('div', 'proof-entry');
  const title = el('div', `proof-entry-title${proof.complete ? ' complete' : ''}`,
    `#${proof.proofId} ${proof.goalText}`);
  title.addEventListener('click', actions.onFocus);
  entry.appendChild(title);
  const row = el('div', 'proof-entry-actions');
  for (const [name, handler, tip] of [
    ['LaTeX', actions.onLatex, 'export the tree as LaTeX'],
    ['Save', actions.onSave, 'save the tree as a file'],
    ['Delete', actions.onDelete, 'delete the tree'],
  ] as const) {
    const btn = el('button', 'bar-btn', name);
    btn.title = tip;
    btn.addEventListener('click', handler);
    row.appendChild(btn);
  }
  entry.appendChild(row);
  return entry;
}
