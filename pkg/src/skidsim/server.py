"""WebSocket teleoperation service.

Runs the closed loop paced against wall clock, feeds it operator commands
through the watchdog reference source, and broadcasts telemetry at a fixed
rate.  Connection handlers never touch engine state: commands go through one
queue into the simulation task, telemetry leaves it as immutable snapshots.
"""

from __future__ import annotations

import asyncio
import logging
from dataclasses import replace

from aiohttp import WSMsgType, web

from .dynamics import get_terrain
from .engine import TRACE_COLUMNS, ScenarioConfig, SimSession
from .protocol import (
    V_MAX_DEFAULT,
    ProtocolError,
    TelemetryFrame,
    clamp_command,
    decode_command,
    encode_error,
    encode_status,
    encode_telemetry,
)
from .reference import ReferenceSample, TeleopReferenceSource

log = logging.getLogger("skidsim.server")

TELEMETRY_HZ_DEFAULT = 20.0
_IDX = {name: i for i, name in enumerate(TRACE_COLUMNS)}


class TeleopServer:
    """Simulation loop plus connection bookkeeping for one serving session."""

    def __init__(
        self,
        config: ScenarioConfig,
        v_max: float = V_MAX_DEFAULT,
        telemetry_hz: float = TELEMETRY_HZ_DEFAULT,
        time_scale: float = 1.0,
    ):
        if time_scale <= 0:
            raise ValueError("time_scale must be > 0")
        ratio = config.controller_rate_hz / telemetry_hz
        if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
            raise ValueError(
                "telemetry rate must evenly divide the controller rate"
            )
        self._ticks_per_frame = int(round(ratio))
        # the profile in the config is ignored: references come from clients
        self.session = SimSession(replace(config, record_plant_rate=False))
        self.source = TeleopReferenceSource()
        self.v_max = v_max
        self.time_scale = time_scale
        self.estop = False
        self.clients: list[web.WebSocketResponse] = []  # [0] holds authority
        self.malformed_count = 0
        self.clamp_count = 0
        self._commands: asyncio.Queue = asyncio.Queue()
        self._task: asyncio.Task | None = None

    # --- lifecycle ---------------------------------------------------------

    def start(self):
        self._task = asyncio.get_running_loop().create_task(self._run_loop())

    async def stop(self):
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None
        for ws in list(self.clients):
            await ws.close()

    # --- simulation task ---------------------------------------------------

    async def _run_loop(self):
        loop = asyncio.get_running_loop()
        period = self.session.config.controller_period
        next_deadline = loop.time()
        since_frame = 0
        while True:
            await self._apply_commands()
            row = self.session.tick(self._reference())
            since_frame += 1
            if since_frame >= self._ticks_per_frame:
                since_frame = 0
                await self._broadcast(encode_telemetry(self._snapshot(row)))
            # absolute deadlines: a late tick shortens the next sleep instead
            # of letting drift accumulate
            next_deadline += period / self.time_scale
            delay = next_deadline - loop.time()
            await asyncio.sleep(delay if delay > 0 else 0)

    def _reference(self) -> ReferenceSample:
        t = self.session.t
        if self.estop:
            return ReferenceSample(t, 0.0, 0.0, 0.0, 0.0)
        return self.source.sample(t)

    async def _apply_commands(self):
        while True:
            try:
                ws, cmd = self._commands.get_nowait()
            except asyncio.QueueEmpty:
                return
            if cmd.estop is True:
                if not self.estop:
                    self.estop = True
                    # forget held commands so a release starts from rest
                    self.source = TeleopReferenceSource()
            elif cmd.estop is False:
                self.estop = False
            if cmd.terrain_switch is not None:
                try:
                    self.session.set_terrain(get_terrain(cmd.terrain_switch))
                except KeyError:
                    await self._safe_send(
                        ws, encode_error(f"unknown terrain {cmd.terrain_switch!r}")
                    )
            if not self.estop:
                self.source.push(self.session.t, cmd.t_client, cmd.v_r_d, cmd.v_l_d)

    def _snapshot(self, row: list[float]) -> TelemetryFrame:
        return TelemetryFrame(
            t_sim=row[_IDX["t"]],
            v_rd=row[_IDX["v_rd"]],
            v_ld=row[_IDX["v_ld"]],
            v_r=row[_IDX["v_r"]],
            v_l=row[_IDX["v_l"]],
            e_r=row[_IDX["e_r"]],
            e_l=row[_IDX["e_l"]],
            u_r=row[_IDX["u_r"]],
            u_l=row[_IDX["u_l"]],
            phi_hat_r=row[_IDX["phi_hat_r"]],
            phi_hat_l=row[_IDX["phi_hat_l"]],
            s_r=row[_IDX["s_r"]],
            s_l=row[_IDX["s_l"]],
            x=row[_IDX["x"]],
            y=row[_IDX["y"]],
            theta=row[_IDX["theta"]],
            terrain=self.session.terrain.name,
            estop=self.estop,
            warnings=tuple(self.session.warnings),
        )

    async def _broadcast(self, text: str):
        if not self.clients:
            return
        results = await asyncio.gather(
            *(ws.send_str(text) for ws in list(self.clients)),
            return_exceptions=True,
        )
        for ws, result in zip(list(self.clients), results):
            if isinstance(result, Exception):
                await self._drop(ws)

    async def _safe_send(self, ws, text: str):
        try:
            await ws.send_str(text)
        except (ConnectionError, RuntimeError):
            await self._drop(ws)

    # --- connection handling -------------------------------------------------

    def _is_authority(self, ws) -> bool:
        return bool(self.clients) and self.clients[0] is ws

    async def _drop(self, ws):
        if ws not in self.clients:
            return
        had_authority = self._is_authority(ws)
        self.clients.remove(ws)
        if had_authority and self.clients:
            # promote the oldest observer and tell it; the watchdog covers
            # the gap until it starts commanding
            await self._safe_send(self.clients[0], self._status_for(self.clients[0]))

    def _status_for(self, ws) -> str:
        return encode_status(
            authority=self._is_authority(ws),
            estop=self.estop,
            terrain=self.session.terrain.name,
            clients=len(self.clients),
        )

    async def handle_ws(self, request: web.Request) -> web.WebSocketResponse:
        ws = web.WebSocketResponse()
        await ws.prepare(request)
        self.clients.append(ws)
        await self._safe_send(ws, self._status_for(ws))
        try:
            async for msg in ws:
                if msg.type != WSMsgType.TEXT:
                    continue
                try:
                    cmd = decode_command(msg.data)
                except ProtocolError as err:
                    self.malformed_count += 1
                    log.debug("dropped malformed message: %s", err)
                    continue
                if not self._is_authority(ws):
                    await self._safe_send(
                        ws, encode_error("not the authoritative connection")
                    )
                    continue
                cmd, clamped = clamp_command(cmd, self.v_max)
                if clamped:
                    self.clamp_count += 1
                self._commands.put_nowait((ws, cmd))
        finally:
            await self._drop(ws)
        return ws

    async def handle_healthz(self, request: web.Request) -> web.Response:
        return web.json_response({
            "t_sim": self.session.t,
            "connections": len(self.clients),
            "authority": bool(self.clients),
            "estop": self.estop,
            "terrain": self.session.terrain.name,
        })


def build_app(server: TeleopServer) -> web.Application:
    app = web.Application()
    app.router.add_get("/ws", server.handle_ws)
    app.router.add_get("/healthz", server.handle_healthz)

    async def _startup(app):
        server.start()

    async def _cleanup(app):
        await server.stop()

    app.on_startup.append(_startup)
    app.on_cleanup.append(_cleanup)
    return app


async def start_site(server: TeleopServer, host: str = "127.0.0.1", port: int = 0):
    """Bring the service up on an (optionally ephemeral) port.

    Returns (runner, bound_port); callers own runner.cleanup().
    """
    runner = web.AppRunner(build_app(server), access_log=None)
    await runner.setup()
    site = web.TCPSite(runner, host, port)
    await site.start()
    bound = runner.addresses[0][1]
    return runner, bound


def run_server(
    config: ScenarioConfig,
    host: str = "127.0.0.1",
    port: int = 8765,
    v_max: float = V_MAX_DEFAULT,
    time_scale: float = 1.0,
) -> int:
    """Blocking entry point used by the CLI; returns an exit status."""

    async def _main():
        server = TeleopServer(config, v_max=v_max, time_scale=time_scale)
        runner, bound = await start_site(server, host, port)
        log.warning("teleop service on ws://%s:%d/ws (terrain %s)",
                    host, bound, server.session.terrain.name)
        try:
            while True:
                await asyncio.sleep(3600.0)
        finally:
            await runner.cleanup()

    try:
        asyncio.run(_main())
    except KeyboardInterrupt:
        pass
    return 0
