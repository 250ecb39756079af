import type { TelemetryFrame } from "./protocol.js";

// Rolling telemetry window keyed on simulation time. Bounded by
// construction, so the render path can never queue unboundedly: old frames
// fall off the back as new ones arrive.

export const WINDOW_S_DEFAULT = 60;

export class TelemetryBuffer {
  private frames: TelemetryFrame[] = [];

  constructor(readonly windowS: number = WINDOW_S_DEFAULT) {
    if (!(windowS > 0)) throw new Error("windowS must be positive");
  }

  // Frames arrive in t_sim order on a live connection; a timestamp that
  // jumps backwards means the server restarted, so the stale history is
  // dropped rather than spliced out of order.
  push(frame: TelemetryFrame): void {
    const last = this.frames[this.frames.length - 1];
    if (last !== undefined && frame.t_sim < last.t_sim) {
      this.frames = [];
    }
    this.frames.push(frame);
    const cutoff = frame.t_sim - this.windowS;
    let drop = 0;
    while (drop < this.frames.length && this.frames[drop].t_sim < cutoff) {
      drop += 1;
    }
    if (drop > 0) this.frames.splice(0, drop);
  }

  latest(): TelemetryFrame | undefined {
    return this.frames[this.frames.length - 1];
  }

  get length(): number {
    return this.frames.length;
  }

  // Snapshot view for rendering; callers must not mutate it.
  snapshot(): readonly TelemetryFrame[] {
    return this.frames;
  }

  clear(): void {
    this.frames = [];
  }
}
