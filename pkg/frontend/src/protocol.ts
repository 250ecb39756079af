// Wire types and guards for the teleoperation protocol, mirroring
// docs/protocol.md field for field. Everything the app knows about the
// server comes through decodeServerMessage; nothing else peeks at JSON.

export const PROTOCOL_VERSION = 1;
export const V_MAX_DEFAULT = 1.5;

export class ProtocolError extends Error {}

export interface Pose {
  x: number;
  y: number;
  theta: number;
}

export interface TeleopCommand {
  t_client: number;
  v_r_d: number;
  v_l_d: number;
  terrain_switch?: string;
  estop?: boolean;
}

export interface TelemetryFrame {
  t_sim: number;
  v_rd: number;
  v_ld: number;
  v_r: number;
  v_l: number;
  e_r: number;
  e_l: number;
  u_r: number;
  u_l: number;
  phi_hat_r: number;
  phi_hat_l: number;
  s_r: number;
  s_l: number;
  pose: Pose;
  terrain: string;
  estop: boolean;
  warnings: string[];
}

export interface StatusFrame {
  authority: boolean;
  estop: boolean;
  terrain: string;
  clients: number;
}

export type ServerMessage =
  | { type: "telemetry"; frame: TelemetryFrame }
  | { type: "status"; status: StatusFrame }
  | { type: "error"; error: string };

const NUMBER_CHANNELS = [
  "t_sim", "v_rd", "v_ld", "v_r", "v_l", "e_r", "e_l",
  "u_r", "u_l", "phi_hat_r", "phi_hat_l", "s_r", "s_l",
] as const;

function requireNumber(obj: Record<string, unknown>, key: string): number {
  const v = obj[key];
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ProtocolError(`field ${key} must be a finite number`);
  }
  return v;
}

function requireString(obj: Record<string, unknown>, key: string): string {
  const v = obj[key];
  if (typeof v !== "string") {
    throw new ProtocolError(`field ${key} must be a string`);
  }
  return v;
}

function requireBool(obj: Record<string, unknown>, key: string): boolean {
  const v = obj[key];
  if (typeof v !== "boolean") {
    throw new ProtocolError(`field ${key} must be a boolean`);
  }
  return v;
}

export function encodeCommand(cmd: TeleopCommand): string {
  const obj: Record<string, unknown> = {
    v: PROTOCOL_VERSION,
    type: "command",
    t_client: cmd.t_client,
    v_r_d: cmd.v_r_d,
    v_l_d: cmd.v_l_d,
  };
  if (cmd.terrain_switch !== undefined) obj.terrain_switch = cmd.terrain_switch;
  if (cmd.estop !== undefined) obj.estop = cmd.estop;
  return JSON.stringify(obj);
}

function decodeTelemetry(obj: Record<string, unknown>): TelemetryFrame {
  const frame: Record<string, unknown> = {};
  for (const key of NUMBER_CHANNELS) {
    frame[key] = requireNumber(obj, key);
  }
  const pose = obj.pose;
  if (typeof pose !== "object" || pose === null || Array.isArray(pose)) {
    throw new ProtocolError("field pose must be an object");
  }
  const p = pose as Record<string, unknown>;
  frame.pose = {
    x: requireNumber(p, "x"),
    y: requireNumber(p, "y"),
    theta: requireNumber(p, "theta"),
  };
  frame.terrain = requireString(obj, "terrain");
  frame.estop = obj.estop === undefined ? false : requireBool(obj, "estop");
  if (obj.warnings === undefined) {
    frame.warnings = [];
  } else if (
    Array.isArray(obj.warnings) &&
    obj.warnings.every((w) => typeof w === "string")
  ) {
    frame.warnings = obj.warnings;
  } else {
    throw new ProtocolError("field warnings must be an array of strings");
  }
  return frame as unknown as TelemetryFrame;
}

function decodeStatus(obj: Record<string, unknown>): StatusFrame {
  return {
    authority: requireBool(obj, "authority"),
    estop: requireBool(obj, "estop"),
    terrain: requireString(obj, "terrain"),
    clients: requireNumber(obj, "clients"),
  };
}

export function decodeServerMessage(text: string): ServerMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    throw new ProtocolError("message is not valid JSON");
  }
  if (typeof obj !== "object" || obj === null || Array.isArray(obj)) {
    throw new ProtocolError("message must be a JSON object");
  }
  const rec = obj as Record<string, unknown>;
  if (rec.v !== PROTOCOL_VERSION) {
    throw new ProtocolError(`unsupported protocol version ${String(rec.v)}`);
  }
  switch (rec.type) {
    case "telemetry":
      return { type: "telemetry", frame: decodeTelemetry(rec) };
    case "status":
      return { type: "status", status: decodeStatus(rec) };
    case "error":
      return { type: "error", error: requireString(rec, "error") };
    default:
      throw new ProtocolError(`unknown message type ${String(rec.type)}`);
  }
}
