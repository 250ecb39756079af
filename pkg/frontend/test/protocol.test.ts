import { describe, expect, it } from "vitest";

import {
  ProtocolError,
  decodeServerMessage,
  encodeCommand,
} from "../src/protocol.js";
import { wireTelemetry } from "./helpers.js";

describe("encodeCommand", () => {
  it("writes version, type and the required fields", () => {
    const obj = JSON.parse(
      encodeCommand({ t_client: 1000, v_r_d: 0.8, v_l_d: 0.6 }),
    );
    expect(obj).toEqual({
      v: 1,
      type: "command",
      t_client: 1000,
      v_r_d: 0.8,
      v_l_d: 0.6,
    });
  });

  it("omits unset optionals and keeps set ones", () => {
    const obj = JSON.parse(
      encodeCommand({
        t_client: 1,
        v_r_d: 0,
        v_l_d: 0,
        terrain_switch: "ice",
        estop: true,
      }),
    );
    expect(obj.terrain_switch).toBe("ice");
    expect(obj.estop).toBe(true);
    const bare = JSON.parse(encodeCommand({ t_client: 1, v_r_d: 0, v_l_d: 0 }));
    expect("terrain_switch" in bare).toBe(false);
    expect("estop" in bare).toBe(false);
  });
});

describe("decodeServerMessage", () => {
  it("decodes a full telemetry frame", () => {
    const msg = decodeServerMessage(wireTelemetry());
    if (msg.type !== "telemetry") throw new Error("wrong type");
    expect(msg.frame.t_sim).toBe(12.34);
    expect(msg.frame.v_rd).toBe(0.8);
    expect(msg.frame.pose).toEqual({ x: 3.2, y: 1.1, theta: 0.42 });
    expect(msg.frame.terrain).toBe("ice");
    expect(msg.frame.estop).toBe(false);
    expect(msg.frame.warnings).toEqual([]);
  });

  it("defaults estop and warnings when absent", () => {
    const raw = JSON.parse(wireTelemetry());
    delete raw.estop;
    delete raw.warnings;
    const msg = decodeServerMessage(JSON.stringify(raw));
    if (msg.type !== "telemetry") throw new Error("wrong type");
    expect(msg.frame.estop).toBe(false);
    expect(msg.frame.warnings).toEqual([]);
  });

  it("names the missing channel", () => {
    const raw = JSON.parse(wireTelemetry());
    delete raw.s_l;
    expect(() => decodeServerMessage(JSON.stringify(raw))).toThrowError(/s_l/);
  });

  it("rejects non-finite and non-number channels", () => {
    expect(() => decodeServerMessage(wireTelemetry({ u_r: null }))).toThrowError(
      /u_r/,
    );
    expect(() => decodeServerMessage(wireTelemetry({ v_r: "0.5" }))).toThrowError(
      /v_r/,
    );
    expect(() => decodeServerMessage(wireTelemetry({ e_r: true }))).toThrowError(
      /e_r/,
    );
  });

  it("rejects a malformed pose", () => {
    expect(() =>
      decodeServerMessage(wireTelemetry({ pose: { x: 1, y: 2 } })),
    ).toThrowError(/theta/);
    expect(() =>
      decodeServerMessage(wireTelemetry({ pose: [1, 2, 3] })),
    ).toThrowError(/pose/);
  });

  it("ignores unknown fields", () => {
    const msg = decodeServerMessage(wireTelemetry({ extra: "whatever" }));
    expect(msg.type).toBe("telemetry");
  });

  it("decodes status and error frames", () => {
    const st = decodeServerMessage(
      JSON.stringify({
        v: 1,
        type: "status",
        authority: true,
        estop: false,
        terrain: "dry-asphalt",
        clients: 2,
      }),
    );
    if (st.type !== "status") throw new Error("wrong type");
    expect(st.status.authority).toBe(true);
    expect(st.status.clients).toBe(2);

    const er = decodeServerMessage(
      JSON.stringify({ v: 1, type: "error", error: "nope" }),
    );
    if (er.type !== "error") throw new Error("wrong type");
    expect(er.error).toBe("nope");
  });

  it("rejects bad JSON, wrong versions and unknown types", () => {
    expect(() => decodeServerMessage("{oops")).toThrow(ProtocolError);
    expect(() => decodeServerMessage("[1,2]")).toThrow(ProtocolError);
    expect(() =>
      decodeServerMessage(JSON.stringify({ v: 2, type: "telemetry" })),
    ).toThrowError(/version/);
    expect(() =>
      decodeServerMessage(JSON.stringify({ v: 1, type: "surprise" })),
    ).toThrowError(/surprise/);
  });
});
