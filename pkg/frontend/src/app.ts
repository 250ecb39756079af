import { PathView, StripChart } from "./charts.js";
import { KeyboardStick, joystickToSides } from "./joystick.js";
import { TeleopSession } from "./session.js";

// DOM and socket wiring only; policy lives in session.ts and drawing in
// charts.ts. One interval emits commands (gated to 30 Hz inside the
// session), one rAF loop renders the newest snapshot and nothing queues.

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id}`);
  return node as T;
}

function wsUrl(): string {
  const override = new URLSearchParams(location.search).get("ws");
  if (override !== null) return override;
  if (location.protocol.startsWith("http")) {
    const scheme = location.protocol === "https:" ? "wss" : "ws";
    return `${scheme}://${location.host}/ws`;
  }
  return "ws://127.0.0.1:8787/ws";
}

const session = new TeleopSession();
const keyboard = new KeyboardStick();

const errorChart = new StripChart("tracking error [m/s]", [
  { label: "e_r", color: "#ff6b6b", pick: (f) => f.e_r },
  { label: "e_l", color: "#4ecdc4", pick: (f) => f.e_l },
]);
const controlChart = new StripChart("control effort", [
  { label: "u_r", color: "#ff6b6b", pick: (f) => f.u_r },
  { label: "u_l", color: "#4ecdc4", pick: (f) => f.u_l },
]);
const estimateChart = new StripChart("adaptive estimate", [
  { label: "phi_r", color: "#ff6b6b", pick: (f) => f.phi_hat_r },
  { label: "phi_l", color: "#4ecdc4", pick: (f) => f.phi_hat_l },
]);
const pathView = new PathView("path [m]");

let stick = { x: 0, y: 0 };
let sliderR = 0;
let sliderL = 0;

function desiredSides(): [number, number] {
  if (keyboard.active) {
    const k = keyboard.state();
    return joystickToSides(k.x, k.y, session.vMax);
  }
  if (session.mode === "sliders") {
    return [sliderR * session.vMax, sliderL * session.vMax];
  }
  return joystickToSides(stick.x, stick.y, session.vMax);
}

function main(): void {
  const socket = new WebSocket(wsUrl());
  socket.onopen = () => session.onOpen(performance.now());
  socket.onclose = () => session.onClose();
  socket.onmessage = (ev) => {
    if (typeof ev.data === "string") {
      session.onMessage(ev.data, performance.now());
    }
  };

  // ---- joystick pad ----
  const pad = el<HTMLDivElement>("pad");
  const knob = el<HTMLDivElement>("knob");
  let dragging = false;

  function setStickFromEvent(ev: PointerEvent): void {
    const rect = pad.getBoundingClientRect();
    const cx = rect.left + rect.width / 2;
    const cy = rect.top + rect.height / 2;
    const x = (ev.clientX - cx) / (rect.width / 2);
    const y = -(ev.clientY - cy) / (rect.height / 2);
    stick = {
      x: Math.max(-1, Math.min(1, x)),
      y: Math.max(-1, Math.min(1, y)),
    };
  }

  pad.addEventListener("pointerdown", (ev) => {
    dragging = true;
    pad.setPointerCapture(ev.pointerId);
    setStickFromEvent(ev);
  });
  pad.addEventListener("pointermove", (ev) => {
    if (dragging) setStickFromEvent(ev);
  });
  const release = (): void => {
    dragging = false;
    stick = { x: 0, y: 0 };
  };
  pad.addEventListener("pointerup", release);
  pad.addEventListener("pointercancel", release);

  // ---- keyboard fallback ----
  window.addEventListener("keydown", (ev) => {
    if (keyboard.keyDown(ev.key)) ev.preventDefault();
  });
  window.addEventListener("keyup", (ev) => {
    if (keyboard.keyUp(ev.key)) ev.preventDefault();
  });

  // ---- sliders ----
  const sliderRightEl = el<HTMLInputElement>("slider-right");
  const sliderLeftEl = el<HTMLInputElement>("slider-left");
  sliderRightEl.addEventListener("input", () => {
    sliderR = Number(sliderRightEl.value) / 100;
  });
  sliderLeftEl.addEventListener("input", () => {
    sliderL = Number(sliderLeftEl.value) / 100;
  });
  const modeEl = el<HTMLSelectElement>("mode");
  modeEl.addEventListener("change", () => {
    session.mode = modeEl.value === "sliders" ? "sliders" : "joystick";
    document.body.classList.toggle("sliders", session.mode === "sliders");
  });

  // ---- estop + terrain ----
  const estopBtn = el<HTMLButtonElement>("estop");
  estopBtn.addEventListener("click", () => {
    if (session.estop) {
      session.releaseEstop();
    } else {
      session.pressEstop();
    }
  });
  const terrainEl = el<HTMLSelectElement>("terrain-select");
  terrainEl.addEventListener("change", () => {
    if (terrainEl.value !== "") session.requestTerrain(terrainEl.value);
  });

  // ---- command stream (rate-capped inside the session) ----
  window.setInterval(() => {
    const [vR, vL] = desiredSides();
    const cmd = session.nextCommand(performance.now(), vR, vL);
    if (cmd !== null && socket.readyState === WebSocket.OPEN) {
      socket.send(session.encode(cmd));
    }
  }, 10);

  // ---- render loop ----
  const canvases = {
    error: el<HTMLCanvasElement>("chart-error"),
    control: el<HTMLCanvasElement>("chart-control"),
    estimate: el<HTMLCanvasElement>("chart-estimate"),
    path: el<HTMLCanvasElement>("chart-path"),
  };
  const statusEl = el<HTMLSpanElement>("conn-status");
  const authorityEl = el<HTMLSpanElement>("authority");
  const terrainBadge = el<HTMLSpanElement>("terrain-badge");
  const staleEl = el<HTMLDivElement>("stale-banner");
  const issueEl = el<HTMLSpanElement>("issues");
  const slipEl = el<HTMLSpanElement>("slip");

  function render(): void {
    const now = performance.now();
    const frames = session.buffer.snapshot();
    const ctxOf = (c: HTMLCanvasElement) =>
      c.getContext("2d") as unknown as import("./charts.js").Ctx2D | null;

    const e = ctxOf(canvases.error);
    if (e !== null) errorChart.draw(e, canvases.error.width, canvases.error.height, frames);
    const u = ctxOf(canvases.control);
    if (u !== null) controlChart.draw(u, canvases.control.width, canvases.control.height, frames);
    const p = ctxOf(canvases.estimate);
    if (p !== null) estimateChart.draw(p, canvases.estimate.width, canvases.estimate.height, frames);
    const xy = ctxOf(canvases.path);
    if (xy !== null) pathView.draw(xy, canvases.path.width, canvases.path.height, frames);

    const shown = keyboard.active ? keyboard.state() : stick;
    knob.style.left = `${50 + shown.x * 40}%`;
    knob.style.top = `${50 - shown.y * 40}%`;

    statusEl.textContent = session.status;
    statusEl.className = `badge ${session.status}`;
    authorityEl.textContent = session.authority ? "authority" : "observer";
    authorityEl.className = `badge ${session.authority ? "ok" : "warn"}`;
    terrainBadge.textContent = session.terrain ?? "-";
    estopBtn.classList.toggle("latched", session.estop);
    estopBtn.textContent = session.estop ? "ESTOP LATCHED - release" : "EMERGENCY STOP";
    staleEl.hidden = !session.isStale(now);

    const latest = session.latest();
    slipEl.textContent =
      latest === undefined
        ? "-"
        : `s_r ${latest.s_r.toFixed(2)}  s_l ${latest.s_l.toFixed(2)}`;
    const issues: string[] = [];
    if (session.protocolErrors > 0) {
      issues.push(`${session.protocolErrors} protocol error(s)`);
    }
    if (session.lastServerError !== null) {
      issues.push(session.lastServerError);
    }
    if (latest !== undefined && latest.warnings.length > 0) {
      issues.push(latest.warnings[latest.warnings.length - 1]);
    }
    issueEl.textContent = issues.join(" | ");

    window.requestAnimationFrame(render);
  }
  window.requestAnimationFrame(render);
}

main();
