/**
 * Pure view-state helpers: workspace zoom/pan math and proof-card placement.
 * Nothing here knows what a proof is — it moves rectangles.
 */

export interface ViewTransform {
  x: number;
  y: number;
  scale: number;
}

export interface CardPosition {
  x: number;
  y: number;
}

export const IDENTITY: ViewTransform = { x: 0, y: 0, scale: 1 };

const MIN_SCALE = 0.25;
const MAX_SCALE = 3;

export function clampScale(scale: number): number {
  return Math.min(MAX_SCALE, Math.max(MIN_SCALE, scale));
}

/** Zoom by `factor` keeping the workspace point under (cx, cy) fixed. */
export function zoomAt(t: ViewTransform, cx: number, cy: number, factor: number): ViewTransform {
  const scale = clampScale(t.scale * factor);
  const ratio = scale / t.scale;
  return {
    scale,
    x: cx - (cx - t.x) * ratio,
    y: cy - (cy - t.y) * ratio,
  };
}

export function panBy(t: ViewTransform, dx: number, dy: number): ViewTransform {
  return { ...t, x: t.x + dx, y: t.y + dy };
}

/** Screen coordinates -> workspace coordinates under the transform. */
export function toWorkspace(t: ViewTransform, px: number, py: number): CardPosition {
  return { x: (px - t.x) / t.scale, y: (py - t.y) / t.scale };
}

/** Cascade new cards so they do not pile on top of each other. */
export function nextCardPosition(taken: Iterable<CardPosition>): CardPosition {
  let count = 0;
  for (const _ of taken) count += 1;
  return { x: 40 + (count % 8) * 48, y: 40 + (count % 8) * 40 };
}

export function transformCss(t: ViewTransform): string {
  return `translate(${t.x}px, ${t.y}px) scale(${t.scale})`;
}
