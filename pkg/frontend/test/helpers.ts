import type { TelemetryFrame } from "../src/protocol.js";

// One wire telemetry message matching the documented example shape.
export function wireTelemetry(over: Record<string, unknown> = {}): string {
  return JSON.stringify({
    v: 1,
    type: "telemetry",
    t_sim: 12.34,
    v_rd: 0.8,
    v_ld: 0.6,
    v_r: 0.79,
    v_l: 0.61,
    e_r: -0.01,
    e_l: 0.01,
    u_r: 0.12,
    u_l: 0.08,
    phi_hat_r: 0.45,
    phi_hat_l: 0.41,
    s_r: 0.12,
    s_l: 0.08,
    pose: { x: 3.2, y: 1.1, theta: 0.42 },
    terrain: "ice",
    estop: false,
    warnings: [],
    ...over,
  });
}

// A decoded frame for buffer/chart tests.
export function makeFrame(
  tSim: number,
  over: Partial<TelemetryFrame> = {},
): TelemetryFrame {
  return {
    t_sim: tSim,
    v_rd: 0.5,
    v_ld: 0.5,
    v_r: 0.5 - 0.4 * Math.exp(-tSim),
    v_l: 0.5 - 0.3 * Math.exp(-tSim),
    e_r: -0.4 * Math.exp(-tSim),
    e_l: -0.3 * Math.exp(-tSim),
    u_r: 0.3 * Math.sin(tSim),
    u_l: 0.3 * Math.cos(tSim),
    phi_hat_r: 0.1 + 0.05 * tSim,
    phi_hat_l: 0.1 + 0.04 * tSim,
    s_r: 0.2,
    s_l: 0.15,
    pose: { x: Math.cos(tSim), y: Math.sin(tSim), theta: tSim % Math.PI },
    terrain: "gravel",
    estop: false,
    warnings: [],
    ...over,
  };
}

export function wireStatus(over: Record<string, unknown> = {}): string {
  return JSON.stringify({
    v: 1,
    type: "status",
    authority: true,
    estop: false,
    terrain: "dry-asphalt",
    clients: 1,
    ...over,
  });
}
