import type { TelemetryFrame } from "./protocol.js";

// Canvas strip charts and the top-down path view. Drawing goes through the
// structural Ctx2D subset below rather than the DOM type, so tests can hand
// in a recording stub and the math helpers stay pure.

export interface Ctx2D {
  strokeStyle: string;
  fillStyle: string;
  lineWidth: number;
  font: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface SeriesSpec {
  label: string;
  color: string;
  pick(frame: TelemetryFrame): number;
}

// Linear map with a degenerate-range guard: a flat series lands mid-span
// instead of dividing by zero.
export function mapRange(
  v: number,
  lo: number,
  hi: number,
  outLo: number,
  outHi: number,
): number {
  if (hi <= lo) return (outLo + outHi) / 2;
  return outLo + ((v - lo) / (hi - lo)) * (outHi - outLo);
}

// Padded y-limits that always include zero, so the zero line stays visible
// and small signals are not blown up into noise.
export function yLimits(values: number[]): [number, number] {
  let lo = 0;
  let hi = 0;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const span = hi - lo;
  const pad = span > 0 ? 0.1 * span : 0.1;
  return [lo - pad, hi + pad];
}

const BG = "#10141a";
const FRAME = "#3a4350";
const TEXT = "#aab4c0";
const ZERO = "#2a323d";
const PAD = { left: 6, right: 6, top: 16, bottom: 6 };

function drawEmpty(ctx: Ctx2D, w: number, h: number, label: string): void {
  ctx.fillStyle = BG;
  ctx.fillRect(0, 0, w, h);
  ctx.strokeStyle = FRAME;
  ctx.lineWidth = 1;
  ctx.strokeRect(0.5, 0.5, w - 1, h - 1);
  ctx.fillStyle = TEXT;
  ctx.font = "11px sans-serif";
  ctx.fillText(`${label} (waiting for telemetry)`, PAD.left + 2, 12);
}

export class StripChart {
  constructor(
    readonly label: string,
    readonly series: SeriesSpec[],
    readonly windowS: number = 60,
  ) {}

  draw(ctx: Ctx2D, w: number, h: number, frames: readonly TelemetryFrame[]): void {
    if (frames.length < 2) {
      drawEmpty(ctx, w, h, this.label);
      return;
    }
    const tEnd = frames[frames.length - 1].t_sim;
    const tStart = Math.max(frames[0].t_sim, tEnd - this.windowS);
    const values: number[] = [];
    for (const f of frames) {
      for (const s of this.series) values.push(s.pick(f));
    }
    const [lo, hi] = yLimits(values);
    const x0 = PAD.left;
    const x1 = w - PAD.right;
    const y0 = PAD.top;
    const y1 = h - PAD.bottom;

    ctx.fillStyle = BG;
    ctx.fillRect(0, 0, w, h);
    ctx.strokeStyle = FRAME;
    ctx.lineWidth = 1;
    ctx.strokeRect(0.5, 0.5, w - 1, h - 1);

    const yZero = mapRange(0, lo, hi, y1, y0);
    ctx.strokeStyle = ZERO;
    ctx.beginPath();
    ctx.moveTo(x0, yZero);
    ctx.lineTo(x1, yZero);
    ctx.stroke();

    for (const s of this.series) {
      ctx.strokeStyle = s.color;
      ctx.lineWidth = 1.25;
      ctx.beginPath();
      let started = false;
      for (const f of frames) {
        if (f.t_sim < tStart) continue;
        const px = mapRange(f.t_sim, tStart, tEnd, x0, x1);
        const py = mapRange(s.pick(f), lo, hi, y1, y0);
        if (started) {
          ctx.lineTo(px, py);
        } else {
          ctx.moveTo(px, py);
          started = true;
        }
      }
      ctx.stroke();
    }

    ctx.font = "11px sans-serif";
    ctx.fillStyle = TEXT;
    ctx.fillText(this.label, x0 + 2, 12);
    let lx = x0 + 2;
    const last = frames[frames.length - 1];
    for (const s of this.series) {
      ctx.fillStyle = s.color;
      const txt = `${s.label} ${s.pick(last).toFixed(3)}`;
      ctx.fillText(txt, lx, y1 - 2);
      lx += 8 * txt.length;
    }
  }
}

// Top-down pose history with equal aspect: the trajectory is fitted into
// the canvas around its bounding box and the newest pose gets a heading
// wedge.
export class PathView {
  constructor(readonly label: string = "path") {}

  draw(ctx: Ctx2D, w: number, h: number, frames: readonly TelemetryFrame[]): void {
    if (frames.length < 2) {
      drawEmpty(ctx, w, h, this.label);
      return;
    }
    let xLo = Infinity;
    let xHi = -Infinity;
    let yLo = Infinity;
    let yHi = -Infinity;
    for (const f of frames) {
      if (f.pose.x < xLo) xLo = f.pose.x;
      if (f.pose.x > xHi) xHi = f.pose.x;
      if (f.pose.y < yLo) yLo = f.pose.y;
      if (f.pose.y > yHi) yHi = f.pose.y;
    }
    const span = Math.max(xHi - xLo, yHi - yLo, 1e-3);
    const cx = (xLo + xHi) / 2;
    const cy = (yLo + yHi) / 2;
    const margin = 18;
    const scale = (Math.min(w, h) - 2 * margin) / (1.1 * span);
    const toPx = (x: number): number => w / 2 + (x - cx) * scale;
    // world +y is up, canvas +y is down
    const toPy = (y: number): number => h / 2 - (y - cy) * scale;

    ctx.fillStyle = BG;
    ctx.fillRect(0, 0, w, h);
    ctx.strokeStyle = FRAME;
    ctx.lineWidth = 1;
    ctx.strokeRect(0.5, 0.5, w - 1, h - 1);

    ctx.strokeStyle = "#6fb3ff";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(toPx(frames[0].pose.x), toPy(frames[0].pose.y));
    for (const f of frames) {
      ctx.lineTo(toPx(f.pose.x), toPy(f.pose.y));
    }
    ctx.stroke();

    const last = frames[frames.length - 1].pose;
    const nose = 10;
    const half = 2.5;
    const hx = Math.cos(last.theta);
    const hy = Math.sin(last.theta);
    const px = toPx(last.x);
    const py = toPy(last.y);
    ctx.fillStyle = "#ffd166";
    ctx.beginPath();
    ctx.moveTo(px + nose * hx, py - nose * hy);
    ctx.lineTo(px - half * hy, py - half * hx);
    ctx.lineTo(px + half * hy, py + half * hx);
    ctx.closePath();
    ctx.fill();

    ctx.fillStyle = TEXT;
    ctx.font = "11px sans-serif";
    ctx.fillText(this.label, PAD.left + 2, 12);
    ctx.fillText(
      `x ${last.x.toFixed(2)}  y ${last.y.toFixed(2)}  th ${last.theta.toFixed(2)}`,
      PAD.left + 2,
      h - 6,
    );
  }
}
