// Phase-plane geometry for two-dimensional scenarios: the state is drawn as a
// direction on the unit circle, with the two measurement bases as labelled
// axes (the second basis sits at 45 degrees for the standard pair). A state
// and its negation are the same physical state, so directions are reduced
// modulo half a turn before rendering.

export type Complex = [number, number];

function conjMul(a: Complex, b: Complex): Complex {
  // conj(a) * b
  return [a[0] * b[0] + a[1] * b[1], a[0] * b[1] - a[1] * b[0]];
}

function abs(z: Complex): number {
  return Math.hypot(z[0], z[1]);
}

/**
 * Direction of a 2-d state in the plane spanned by the standard basis,
 * in radians. The global phase is removed against the larger component; the
 * imaginary part of the relative phase is discarded (the plane picture only
 * shows the real section).
 */
export function stateAngle(state: Complex[]): number {
  if (state.length !== 2) {
    throw new Error("phase plane needs a two-dimensional state");
  }
  const [c0, c1] = state;
  // Rotate the global phase so the larger component is real positive, then
  // read off the signed real parts.
  const anchor = abs(c0) >= abs(c1) ? c0 : c1;
  const r = abs(anchor);
  if (r === 0) throw new Error("zero state");
  const phase: Complex = [anchor[0] / r, anchor[1] / r];
  const x = conjMul(phase, c0)[0];
  const y = conjMul(phase, c1)[0];
  return Math.atan2(y, x);
}

/** Reduce an angle to [0, pi): v and -v are the same physical direction. */
export function physicalDirection(angle: number): number {
  const pi = Math.PI;
  let a = angle % pi;
  if (a < 0) a += pi;
  // guard against -0 and the a === pi float edge
  return a >= pi ? 0 : Math.abs(a);
}

export interface AxisSpec {
  label: string;
  angle: number; // radians
}

/** Axis layout for a two-measurement scenario: first basis on the frame axes,
 * second basis at 45 degrees. */
export function standardAxes(firstName: string, secondName: string): AxisSpec[] {
  return [
    { label: `${firstName}+`, angle: 0 },
    { label: `${firstName}-`, angle: Math.PI / 2 },
    { label: `${secondName}+`, angle: Math.PI / 4 },
    { label: `${secondName}-`, angle: (3 * Math.PI) / 4 },
  ];
}

export function drawPhasePlane(
  canvas: HTMLCanvasElement,
  axes: AxisSpec[],
  angle: number | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const w = canvas.width;
  const h = canvas.height;
  const cx = w / 2;
  const cy = h / 2;
  const r = Math.min(w, h) / 2 - 24;
  ctx.clearRect(0, 0, w, h);

  ctx.strokeStyle = "#888";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.arc(cx, cy, r, 0, 2 * Math.PI);
  ctx.stroke();

  ctx.font = "12px sans-serif";
  ctx.fillStyle = "#555";
  for (const axis of axes) {
    const dx = Math.cos(axis.angle);
    const dy = -Math.sin(axis.angle); // canvas y grows downward
    ctx.strokeStyle = "#bbb";
    ctx.beginPath();
    ctx.moveTo(cx - r * dx, cy - r * dy);
    ctx.lineTo(cx + r * dx, cy + r * dy);
    ctx.stroke();
    ctx.fillText(axis.label, cx + (r + 6) * dx - 8, cy + (r + 14) * dy + 4);
  }

  if (angle !== null) {
    const dir = physicalDirection(angle);
    const dx = Math.cos(dir);
    const dy = -Math.sin(dir);
    ctx.strokeStyle = "#c0392b";
    ctx.lineWidth = 3;
    ctx.beginPath();
    ctx.moveTo(cx - r * dx, cy - r * dy);
    ctx.lineTo(cx + r * dx, cy + r * dy);
    ctx.stroke();
    ctx.fillStyle = "#c0392b";
    ctx.beginPath();
    ctx.arc(cx + r * dx, cy + r * dy, 5, 0, 2 * Math.PI);
    ctx.fill();
  }
}
