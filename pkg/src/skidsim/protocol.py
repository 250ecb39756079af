"""JSON wire protocol for the teleoperation service.

Message layout is documented in docs/protocol.md and versioned through the
"v" field.  Decoding is strict about required fields (errors name the field)
and deliberately loose about extras: unknown keys are ignored so either end
can grow the schema without breaking the other.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

PROTOCOL_VERSION = 1
V_MAX_DEFAULT = 1.5  # m/s, per-side commanded velocity limit

#: the telemetry channels every frame must carry (pose counts as one channel)
TELEMETRY_CHANNELS = (
    "t_sim",
    "v_rd", "v_ld",
    "v_r", "v_l",
    "e_r", "e_l",
    "u_r", "u_l",
    "phi_hat_r", "phi_hat_l",
    "s_r", "s_l",
    "pose",
)


class ProtocolError(ValueError):
    """Malformed or out-of-contract wire message."""


@dataclass(frozen=True)
class TeleopCommand:
    t_client: float          # client clock, ms
    v_r_d: float
    v_l_d: float
    terrain_switch: str | None = None
    estop: bool | None = None  # None = leave the latch as it is


@dataclass(frozen=True)
class TelemetryFrame:
    t_sim: float
    v_rd: float
    v_ld: float
    v_r: float
    v_l: float
    e_r: float
    e_l: float
    u_r: float
    u_l: float
    phi_hat_r: float
    phi_hat_l: float
    s_r: float
    s_l: float
    x: float
    y: float
    theta: float
    terrain: str
    estop: bool = False
    warnings: tuple = field(default_factory=tuple)


def _parse(text) -> dict:
    if isinstance(text, dict):
        obj = text
    else:
        try:
            obj = json.loads(text)
        except (TypeError, json.JSONDecodeError) as err:
            raise ProtocolError(f"message is not valid JSON: {err}") from None
    if not isinstance(obj, dict):
        raise ProtocolError("message must be a JSON object")
    v = obj.get("v")
    if v is None:
        raise ProtocolError("message missing required field 'v'")
    if v != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {v!r}")
    return obj


def _require_number(obj: dict, name: str) -> float:
    if name not in obj:
        raise ProtocolError(f"message missing required field '{name}'")
    value = obj[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ProtocolError(f"field '{name}' must be a number")
    value = float(value)
    if not math.isfinite(value):
        raise ProtocolError(f"field '{name}' must be finite")
    return value


def encode_command(cmd: TeleopCommand) -> str:
    obj = {
        "v": PROTOCOL_VERSION,
        "type": "command",
        "t_client": cmd.t_client,
        "v_r_d": cmd.v_r_d,
        "v_l_d": cmd.v_l_d,
    }
    if cmd.terrain_switch is not None:
        obj["terrain_switch"] = cmd.terrain_switch
    if cmd.estop is not None:
        obj["estop"] = cmd.estop
    return json.dumps(obj, sort_keys=True)


def decode_command(text) -> TeleopCommand:
    obj = _parse(text)
    if obj.get("type") != "command":
        raise ProtocolError(f"expected a command message, got type {obj.get('type')!r}")
    terrain = obj.get("terrain_switch")
    if terrain is not None and not isinstance(terrain, str):
        raise ProtocolError("field 'terrain_switch' must be a string")
    estop = obj.get("estop")
    if estop is not None and not isinstance(estop, bool):
        raise ProtocolError("field 'estop' must be a boolean")
    return TeleopCommand(
        t_client=_require_number(obj, "t_client"),
        v_r_d=_require_number(obj, "v_r_d"),
        v_l_d=_require_number(obj, "v_l_d"),
        terrain_switch=terrain,
        estop=estop,
    )


def clamp_command(cmd: TeleopCommand, v_max: float = V_MAX_DEFAULT):
    """Clamp commanded side velocities into [-v_max, v_max].

    Returns (command, clamped_flag); out-of-range requests are limited rather
    than rejected so a saturated joystick still drives the robot.
    """
    v_r = min(max(cmd.v_r_d, -v_max), v_max)
    v_l = min(max(cmd.v_l_d, -v_max), v_max)
    if v_r == cmd.v_r_d and v_l == cmd.v_l_d:
        return cmd, False
    return TeleopCommand(
        t_client=cmd.t_client, v_r_d=v_r, v_l_d=v_l,
        terrain_switch=cmd.terrain_switch, estop=cmd.estop,
    ), True


def encode_telemetry(frame: TelemetryFrame) -> str:
    obj = {
        "v": PROTOCOL_VERSION,
        "type": "telemetry",
        "t_sim": frame.t_sim,
        "v_rd": frame.v_rd,
        "v_ld": frame.v_ld,
        "v_r": frame.v_r,
        "v_l": frame.v_l,
        "e_r": frame.e_r,
        "e_l": frame.e_l,
        "u_r": frame.u_r,
        "u_l": frame.u_l,
        "phi_hat_r": frame.phi_hat_r,
        "phi_hat_l": frame.phi_hat_l,
        "s_r": frame.s_r,
        "s_l": frame.s_l,
        "pose": {"x": frame.x, "y": frame.y, "theta": frame.theta},
        "terrain": frame.terrain,
        "estop": frame.estop,
        "warnings": list(frame.warnings),
    }
    return json.dumps(obj, sort_keys=True)


def decode_telemetry(text) -> TelemetryFrame:
    obj = _parse(text)
    if obj.get("type") != "telemetry":
        raise ProtocolError(
            f"expected a telemetry message, got type {obj.get('type')!r}"
        )
    pose = obj.get("pose")
    if pose is None:
        raise ProtocolError("message missing required field 'pose'")
    if not isinstance(pose, dict):
        raise ProtocolError("field 'pose' must be an object")
    terrain = obj.get("terrain")
    if terrain is None:
        raise ProtocolError("message missing required field 'terrain'")
    if not isinstance(terrain, str):
        raise ProtocolError("field 'terrain' must be a string")
    estop = obj.get("estop", False)
    if not isinstance(estop, bool):
        raise ProtocolError("field 'estop' must be a boolean")
    warnings = obj.get("warnings", [])
    if not isinstance(warnings, list):
        raise ProtocolError("field 'warnings' must be an array")
    scalars = {
        name: _require_number(obj, name)
        for name in TELEMETRY_CHANNELS
        if name != "pose"
    }
    return TelemetryFrame(
        x=_require_number(pose, "x"),
        y=_require_number(pose, "y"),
        theta=_require_number(pose, "theta"),
        terrain=terrain,
        estop=estop,
        warnings=tuple(str(w) for w in warnings),
        **scalars,
    )


def encode_status(authority: bool, estop: bool, terrain: str, clients: int) -> str:
    return json.dumps({
        "v": PROTOCOL_VERSION,
        "type": "status",
        "authority": authority,
        "estop": estop,
        "terrain": terrain,
        "clients": clients,
    }, sort_keys=True)


def encode_error(message: str) -> str:
    return json.dumps({
        "v": PROTOCOL_VERSION,
        "type": "error",
        "error": message,
    }, sort_keys=True)


def decode_message(text):
    """Decode any wire message into (type, payload).

    Commands and telemetry come back as their dataclasses; status and error
    frames come back as plain dicts.
    """
    obj = _parse(text)
    kind = obj.get("type")
    if kind == "command":
        return kind, decode_command(obj)
    if kind == "telemetry":
        return kind, decode_telemetry(obj)
    if kind in ("status", "error"):
        return kind, obj
    raise ProtocolError(f"unknown message type {kind!r}")
