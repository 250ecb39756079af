import { TelemetryBuffer } from "./buffer.js";
import {
  ProtocolError,
  V_MAX_DEFAULT,
  decodeServerMessage,
  encodeCommand,
} from "./protocol.js";
import type { TeleopCommand, TelemetryFrame } from "./protocol.js";

// Client-side session state: everything the dashboard shows and every
// command it emits funnels through here, with no DOM or socket types, so
// the whole operator policy is testable with a fake clock.

export type ConnectionStatus = "connecting" | "open" | "closed";
export type CommandMode = "joystick" | "sliders";

export const STALE_AFTER_MS = 1000;
// emission cap; the send loop may tick faster, the gate holds 30 Hz
export const COMMAND_INTERVAL_MS = 1000 / 30;

export class TeleopSession {
  status: ConnectionStatus = "connecting";
  authority = false;
  // mirrors the server latch; set locally on press so the UI goes red and
  // the command stream zeroes immediately, confirmed by later telemetry
  estop = false;
  terrain: string | null = null;
  clientsOnline = 0;
  mode: CommandMode = "joystick";
  protocolErrors = 0;
  lastServerError: string | null = null;

  readonly vMax: number;
  readonly buffer: TelemetryBuffer;

  private lastFrameAtMs: number | null = null;
  private openedAtMs: number | null = null;
  private nextSendAtMs = -Infinity;
  private pendingTerrain: string | null = null;
  private pendingEstop: boolean | null = null;

  constructor(opts: { vMax?: number; windowS?: number } = {}) {
    this.vMax = opts.vMax ?? V_MAX_DEFAULT;
    this.buffer = new TelemetryBuffer(opts.windowS);
  }

  onOpen(nowMs: number): void {
    this.status = "open";
    this.openedAtMs = nowMs;
  }

  onClose(): void {
    this.status = "closed";
    this.authority = false;
  }

  // Decode failures count toward a visible indicator and never take the
  // session down; a bad frame is just skipped.
  onMessage(text: string, nowMs: number): void {
    let msg;
    try {
      msg = decodeServerMessage(text);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.protocolErrors += 1;
        return;
      }
      throw err;
    }
    switch (msg.type) {
      case "telemetry":
        this.buffer.push(msg.frame);
        this.lastFrameAtMs = nowMs;
        this.estop = msg.frame.estop;
        this.terrain = msg.frame.terrain;
        break;
      case "status":
        this.authority = msg.status.authority;
        this.estop = msg.status.estop;
        this.terrain = msg.status.terrain;
        this.clientsOnline = msg.status.clients;
        break;
      case "error":
        this.lastServerError = msg.error;
        break;
    }
  }

  latest(): TelemetryFrame | undefined {
    return this.buffer.latest();
  }

  // Banner condition: connected but nothing heard for a second, counting
  // from the open if no frame ever arrived.
  isStale(nowMs: number): boolean {
    if (this.status !== "open") return false;
    const since = this.lastFrameAtMs ?? this.openedAtMs;
    return since !== null && nowMs - since > STALE_AFTER_MS;
  }

  pressEstop(): void {
    this.estop = true;
    this.pendingEstop = true;
  }

  releaseEstop(): void {
    this.estop = false;
    this.pendingEstop = false;
  }

  requestTerrain(name: string): void {
    this.pendingTerrain = name;
  }

  // One command per eligible tick: only while connected and authoritative,
  // never faster than the cap (absolute schedule, so a fast caller settles
  // at exactly 30 Hz), zeroed while the latch is engaged. Pending terrain
  // and estop edges ride on the next emitted command.
  nextCommand(nowMs: number, vR: number, vL: number): TeleopCommand | null {
    if (this.status !== "open" || !this.authority) return null;
    if (nowMs < this.nextSendAtMs) return null;
    this.nextSendAtMs = Math.max(this.nextSendAtMs, nowMs) + COMMAND_INTERVAL_MS;
    const cmd: TeleopCommand = {
      t_client: nowMs,
      v_r_d: this.estop ? 0 : vR,
      v_l_d: this.estop ? 0 : vL,
    };
    if (this.pendingTerrain !== null) {
      cmd.terrain_switch = this.pendingTerrain;
      this.pendingTerrain = null;
    }
    if (this.pendingEstop !== null) {
      cmd.estop = this.pendingEstop;
      this.pendingEstop = null;
    }
    return cmd;
  }

  encode(cmd: TeleopCommand): string {
    return encodeCommand(cmd);
  }
}
