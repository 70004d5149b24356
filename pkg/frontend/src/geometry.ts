/** Curve and balloon geometry. */

import type { CircleGlyph, LabelGlyph, LayoutCanvas } from "./types";

/** Cubic bezier path between two points. Control points sit at 1/3 and 2/3
 * of the chord, offset perpendicular to it by 15% of the chord length, which
 * gives every connection the same gentle arc. */
export function bezierPath(x0: number, y0: number, x1: number, y1: number): string {
  const dx = x1 - x0;
  const dy = y1 - y0;
  const len = Math.hypot(dx, dy);
  if (len === 0) {
    return `M ${x0} ${y0} L ${x1} ${y1}`;
  }
  const off = 0.15 * len;
  const px = (-dy / len) * off;
  const py = (dx / len) * off;
  const c1x = x0 + dx / 3 + px;
  const c1y = y0 + dy / 3 + py;
  const c2x = x0 + (2 * dx) / 3 + px;
  const c2y = y0 + (2 * dy) / 3 + py;
  return `M ${x0} ${y0} C ${c1x} ${c1y}, ${c2x} ${c2y}, ${x1} ${y1}`;
}

/** Point where the segment from the label center toward (tx, ty) leaves the
 * label box: curves start at the box edge, not under the text. */
export function labelEdgePoint(
  label: LabelGlyph,
  tx: number,
  ty: number,
): { x: number; y: number } {
  const dx = tx - label.x;
  const dy = ty - label.y;
  if (dx === 0 && dy === 0) {
    return { x: label.x, y: label.y };
  }
  const sx = dx !== 0 ? label.w / 2 / Math.abs(dx) : Infinity;
  const sy = dy !== 0 ? label.h / 2 / Math.abs(dy) : Infinity;
  const s = Math.min(sx, sy, 1);
  return { x: label.x + dx * s, y: label.y + dy * s };
}

export interface BalloonBox {
  x: number;
  y: number;
  flipped: boolean; // true when the balloon opens to the left of the circle
}

/** Anchor the balloon beside its circle, flipping to the left and clamping
 * vertically so it stays inside the canvas. */
export function balloonPosition(
  circle: CircleGlyph,
  width: number,
  height: number,
  canvas: LayoutCanvas,
  gap = 10,
): BalloonBox {
  let x = circle.x + circle.r + gap;
  let flipped = false;
  if (x + width > canvas.width) {
    x = circle.x - circle.r - gap - width;
    flipped = true;
  }
  x = Math.max(0, x);
  let y = circle.y - height / 2;
  y = Math.max(0, Math.min(y, canvas.height - height));
  return { x, y, flipped };
}
