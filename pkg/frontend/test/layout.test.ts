/** Pure view-state math: zoom keeps the anchor fixed, pan is additive. */

import { describe, expect, it } from 'vitest';

import { IDENTITY, clampScale, nextCardPosition, panBy, toWorkspace, zoomAt } from '../src/layout.js';

describe('workspace transform', () => {
  it('zoom keeps the anchor point stationary', () => {
    const t = zoomAt(IDENTITY, 120, 80, 1.5);
    const before = toWorkspace(IDENTITY, 120, 80);
    const after = toWorkspace(t, 120, 80);
    expect(after.x).toBeCloseTo(before.x, 9);
    expect(after.y).toBeCloseTo(before.y, 9);
    expect(t.scale).toBeCloseTo(1.5);
  });

  it('zoom composes and clamps', () => {
    let t = IDENTITY;
    for (let i = 0; i < 50; i++) t = zoomAt(t, 10, 10, 1.3);
    expect(t.scale).toBe(clampScale(Number.MAX_VALUE));
    for (let i = 0; i < 100; i++) t = zoomAt(t, 10, 10, 0.5);
    expect(t.scale).toBe(clampScale(0));
  });

  it('pan shifts screen coordinates, not workspace ones', () => {
    const t = panBy({ x: 5, y: 5, scale: 2 }, 10, -10);
    expect(t).toEqual({ x: 15, y: -5, scale: 2 });
    const w = toWorkspace(t, 15, -5);
    expect(w).toEqual({ x: 0, y: 0 });
  });

  it('card placement cascades', () => {
    const a = nextCardPosition([]);
    const b = nextCardPosition([a]);
    expect(a).not.toEqual(b);
  });
});
