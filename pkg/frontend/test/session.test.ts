import { describe, expect, it } from "vitest";

import { COMMAND_INTERVAL_MS, TeleopSession } from "../src/session.js";
import { wireStatus, wireTelemetry } from "./helpers.js";

function openAuthoritative(): TeleopSession {
  const s = new TeleopSession();
  s.onOpen(0);
  s.onMessage(wireStatus({ authority: true }), 0);
  return s;
}

describe("TeleopSession state", () => {
  it("tracks status frames", () => {
    const s = new TeleopSession();
    s.onOpen(0);
    expect(s.authority).toBe(false);
    s.onMessage(wireStatus({ authority: true, clients: 2, terrain: "mud" }), 1);
    expect(s.authority).toBe(true);
    expect(s.clientsOnline).toBe(2);
    expect(s.terrain).toBe("mud");
  });

  it("buffers telemetry and mirrors the latch and terrain", () => {
    const s = openAuthoritative();
    s.onMessage(wireTelemetry({ t_sim: 1.0 }), 10);
    s.onMessage(wireTelemetry({ t_sim: 1.05, estop: true, terrain: "mud" }), 60);
    expect(s.buffer.length).toBe(2);
    expect(s.latest()?.t_sim).toBe(1.05);
    expect(s.estop).toBe(true);
    expect(s.terrain).toBe("mud");
  });

  it("counts undecodable messages and keeps going", () => {
    const s = openAuthoritative();
    s.onMessage("{nope", 0);
    s.onMessage(JSON.stringify({ v: 3, type: "telemetry" }), 1);
    expect(s.protocolErrors).toBe(2);
    s.onMessage(wireTelemetry(), 2);
    expect(s.buffer.length).toBe(1);
  });

  it("surfaces server error frames", () => {
    const s = openAuthoritative();
    s.onMessage(JSON.stringify({ v: 1, type: "error", error: "bad turf" }), 0);
    expect(s.lastServerError).toBe("bad turf");
  });

  it("reports staleness after a quiet second", () => {
    const s = openAuthoritative();
    s.onMessage(wireTelemetry(), 100);
    expect(s.isStale(1000)).toBe(false);
    expect(s.isStale(1101)).toBe(true);
    s.onMessage(wireTelemetry({ t_sim: 13 }), 1200);
    expect(s.isStale(1300)).toBe(false);
  });

  it("is stale when connected but never served a frame", () => {
    const s = new TeleopSession();
    s.onOpen(500);
    expect(s.isStale(1000)).toBe(false);
    expect(s.isStale(1600)).toBe(true);
  });

  it("is never stale once closed", () => {
    const s = openAuthoritative();
    s.onMessage(wireTelemetry(), 0);
    s.onClose();
    expect(s.isStale(10_000)).toBe(false);
    expect(s.authority).toBe(false);
  });
});

describe("TeleopSession command emission", () => {
  it("emits nothing before the socket opens or without authority", () => {
    const s = new TeleopSession();
    expect(s.nextCommand(0, 0.5, 0.5)).toBeNull();
    s.onOpen(0);
    expect(s.nextCommand(1, 0.5, 0.5)).toBeNull(); // observer
    s.onMessage(wireStatus({ authority: true }), 2);
    expect(s.nextCommand(3, 0.5, 0.5)).not.toBeNull();
  });

  it("caps the stream at 30 Hz no matter how fast it is polled", () => {
    const s = openAuthoritative();
    let sent = 0;
    for (let now = 0; now <= 1000; now += 2) {
      if (s.nextCommand(now, 0.3, 0.3) !== null) sent += 1;
    }
    expect(sent).toBeGreaterThanOrEqual(29);
    expect(sent).toBeLessThanOrEqual(31);
  });

  it("spaces consecutive commands by at least the cap interval", () => {
    const s = openAuthoritative();
    const stamps: number[] = [];
    for (let now = 0; now <= 500; now += 1) {
      if (s.nextCommand(now, 0, 0) !== null) stamps.push(now);
    }
    for (let i = 1; i < stamps.length; i++) {
      expect(stamps[i] - stamps[i - 1]).toBeGreaterThanOrEqual(
        Math.floor(COMMAND_INTERVAL_MS),
      );
    }
  });

  it("zeroes the stream while the latch is engaged", () => {
    const s = openAuthoritative();
    s.pressEstop();
    const cmd = s.nextCommand(0, 0.8, 0.6);
    expect(cmd).not.toBeNull();
    expect(cmd?.v_r_d).toBe(0);
    expect(cmd?.v_l_d).toBe(0);
    expect(cmd?.estop).toBe(true);
    // the latch holds for later commands, the edge is sent only once
    const again = s.nextCommand(100, 0.8, 0.6);
    expect(again?.v_r_d).toBe(0);
    expect(again?.estop).toBeUndefined();
  });

  it("release restores motion and rides on the next command", () => {
    const s = openAuthoritative();
    s.pressEstop();
    s.nextCommand(0, 1, 1);
    s.releaseEstop();
    const cmd = s.nextCommand(100, 0.4, 0.2);
    expect(cmd?.estop).toBe(false);
    expect(cmd?.v_r_d).toBe(0.4);
    expect(cmd?.v_l_d).toBe(0.2);
    expect(s.nextCommand(200, 0.4, 0.2)?.estop).toBeUndefined();
  });

  it("attaches a terrain request exactly once", () => {
    const s = openAuthoritative();
    s.requestTerrain("ice");
    expect(s.nextCommand(0, 0, 0)?.terrain_switch).toBe("ice");
    expect(s.nextCommand(100, 0, 0)?.terrain_switch).toBeUndefined();
  });

  it("stamps t_client from the provided clock", () => {
    const s = openAuthoritative();
    expect(s.nextCommand(12345, 0, 0)?.t_client).toBe(12345);
  });

  it("stops emitting after close", () => {
    const s = openAuthoritative();
    expect(s.nextCommand(0, 0, 0)).not.toBeNull();
    s.onClose();
    expect(s.nextCommand(100, 0, 0)).toBeNull();
  });
});
