"""Deterministic closed-loop runner.

Clocking model: the plant integrates with fixed-step RK4 at dt_plant_s while
the controller runs at controller_rate_hz with zero-order-held outputs.  Slip
advances on the plant clock (resample + first-order relaxation once per
substep, before the velocity stage evaluations, which hold slip constant).
The gain estimate of the adaptive law integrates on the controller clock
only — never inside RK4 stages.  Traces are recorded at the controller rate.

All randomness flows from the scenario seed through two spawned streams (one
for basis centers, one for slip draws), so a config + seed pair reproduces a
run bit for bit, including its serialized CSV.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .controllers import (
    PHI0_DEFAULT,
    PHI_CLAMP_DEFAULT,
    AdaptiveSideState,
    ControllerFault,
    ControllerGains,
    ControlPreset,
    PidGains,
    PidState,
    controller_step,
    get_preset,
    pid_step,
)
from .dynamics import (
    DisturbanceProfile,
    DomainError,
    PlantFault,
    PlantParams,
    PlantState,
    TerrainModel,
    advance_slip,
    get_terrain,
    initial_plant_state,
)
from .rbf import basis_norm, init_centers
from .reference import profile_from_config, reference_at

SCHEMA_ID = "skidsim-scenario-v1"
TRACE_SCHEMA_ID = "skidsim-trace-v1"

TWO_PI = 2.0 * math.pi


class SchemaError(ValueError):
    """Config file violates the scenario schema."""


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    theta: float = 0.0


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    w = math.fmod(a + math.pi, TWO_PI)
    if w <= 0.0:
        w += TWO_PI
    return w - math.pi


def pose_update(pose: Pose, v_r: float, v_l: float, wheelbase: float, dt: float) -> Pose:
    """Midpoint-rule differential-drive odometry step.

    v = (v_r + v_l)/2, omega = (v_r - v_l)/wheelbase; heading advances by
    omega*dt and the translation uses the half-step heading.
    """
    v = 0.5 * (v_r + v_l)
    omega = (v_r - v_l) / wheelbase
    mid = pose.theta + 0.5 * omega * dt
    return Pose(
        x=pose.x + v * dt * math.cos(mid),
        y=pose.y + v * dt * math.sin(mid),
        theta=wrap_angle(pose.theta + omega * dt),
    )


def rk4_velocity_step(
    t: float,
    v_r: float,
    v_l: float,
    u_r: float,
    u_l: float,
    s_r: float,
    s_l: float,
    dt: float,
    g_r: float,
    g_l: float,
    c_visc: float,
    c_quad: float,
    c_couple: float,
    dist: DisturbanceProfile,
) -> tuple[float, float]:
    """One classical RK4 step of the two velocity states over [t, t+dt].

    Control and slip are held constant across the stages; the disturbance is
    evaluated analytically at the stage times.  This is the one integration
    path the engine uses, so convergence-order checks drive this function
    directly.
    """
    amp = dist.amplitude
    wf = TWO_PI * dist.frequency_hz
    off = dist.offset
    mu_r = 1.0 + s_r
    mu_l = 1.0 + s_l
    gu_r = g_r * u_r
    gu_l = g_l * u_l

    def acc(tt, a, b):
        f = amp * math.sin(wf * tt) + off
        return (
            gu_r - c_visc * a - c_quad * a * abs(a) + c_couple * (b - a) - mu_r * f,
            gu_l - c_visc * b - c_quad * b * abs(b) + c_couple * (a - b) - mu_l * f,
        )

    h2 = 0.5 * dt
    k1r, k1l = acc(t, v_r, v_l)
    k2r, k2l = acc(t + h2, v_r + h2 * k1r, v_l + h2 * k1l)
    k3r, k3l = acc(t + h2, v_r + h2 * k2r, v_l + h2 * k2l)
    k4r, k4l = acc(t + dt, v_r + dt * k3r, v_l + dt * k3l)
    sixth = dt / 6.0
    return (
        v_r + sixth * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
        v_l + sixth * (k1l + 2.0 * k2l + 2.0 * k3l + k4l),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    terrain: TerrainModel = field(default_factory=lambda: get_terrain("dry-asphalt"))
    profile: object = field(default_factory=lambda: profile_from_config("curved-path"))
    controller_kind: str = "adaptive"  # "adaptive" | "pid"
    preset: str | None = "sim-paper"
    gains: ControllerGains | None = None
    neuron_count: int | None = None
    rbf_width: float | None = None
    center_scale: float = 1.0
    phi0: float = PHI0_DEFAULT
    phi_clamp: float = PHI_CLAMP_DEFAULT
    pid_gains: PidGains = field(default_factory=PidGains)
    plant: PlantParams = field(default_factory=PlantParams)
    duration_s: float = 200.0
    dt_plant_s: float = 1e-3
    controller_rate_hz: float = 100.0
    seed: int = 0
    record_plant_rate: bool = False

    def __post_init__(self):
        if self.controller_kind not in ("adaptive", "pid"):
            raise SchemaError(
                f"controller kind must be 'adaptive' or 'pid', got {self.controller_kind!r}"
            )
        if self.duration_s <= 0:
            raise SchemaError("duration_s must be > 0")
        if self.dt_plant_s <= 0:
            raise SchemaError("dt_plant_s must be > 0")
        if self.controller_rate_hz <= 0:
            raise SchemaError("controller_rate_hz must be > 0")
        period = 1.0 / self.controller_rate_hz
        n_sub = period / self.dt_plant_s
        if abs(n_sub - round(n_sub)) > 1e-9 or round(n_sub) < 1:
            raise SchemaError(
                "controller period must be an integer multiple of dt_plant_s "
                f"(period={period}, dt={self.dt_plant_s})"
            )
        n_ticks = self.duration_s * self.controller_rate_hz
        if abs(n_ticks - round(n_ticks)) > 1e-6 * max(1.0, abs(n_ticks)) or round(n_ticks) < 1:
            raise SchemaError(
                "duration_s must be an integer number of controller periods"
            )
        if self.controller_kind == "adaptive" and self.preset is None and self.gains is None:
            raise SchemaError("adaptive controller needs a preset or explicit gains")
        if self.phi_clamp <= 0:
            raise SchemaError("phi_clamp must be > 0")

    @property
    def controller_period(self) -> float:
        return 1.0 / self.controller_rate_hz

    @property
    def n_sub(self) -> int:
        return round(self.controller_period / self.dt_plant_s)

    @property
    def n_ticks(self) -> int:
        return round(self.duration_s * self.controller_rate_hz)

    def resolved_preset(self) -> ControlPreset:
        """Explicit gains/basis override the named preset field-by-field."""
        if self.gains is not None:
            return ControlPreset(
                gains=self.gains,
                neuron_count=self.neuron_count or 9,
                width=self.rbf_width or 0.13,
                center_scale=self.center_scale,
            )
        base = get_preset(self.preset)
        return ControlPreset(
            gains=base.gains,
            neuron_count=self.neuron_count or base.neuron_count,
            width=self.rbf_width or base.width,
            center_scale=self.center_scale,
        )


# Fixed trace schema; column order is part of the file contract.
TRACE_COLUMNS = [
    "t",
    "v_rd",
    "v_ld",
    "v_r",
    "v_l",
    "e_r",
    "e_l",
    "u_r",
    "u_l",
    "phi_hat_r",
    "phi_hat_l",
    "phi_norm_r",
    "phi_norm_l",
    "s_r",
    "s_l",
    "x",
    "y",
    "theta",
]


@dataclass
class SimTrace:
    data: np.ndarray  # (n, len(TRACE_COLUMNS))
    meta: dict

    def __post_init__(self):
        if self.data.ndim != 2 or self.data.shape[1] != len(TRACE_COLUMNS):
            raise ValueError(
                f"trace matrix must have {len(TRACE_COLUMNS)} columns"
            )

    def col(self, name: str) -> np.ndarray:
        return self.data[:, TRACE_COLUMNS.index(name)]

    def __getattr__(self, name):
        if name in TRACE_COLUMNS:
            return self.data[:, TRACE_COLUMNS.index(name)]
        raise AttributeError(name)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def faulted(self) -> bool:
        return bool(self.meta.get("faulted", False))

    @property
    def warnings(self) -> list:
        return list(self.meta.get("warnings", []))

    def write_csv(self, path):
        path = Path(path)
        lines = [",".join(TRACE_COLUMNS)]
        for row in self.data.tolist():
            lines.append(",".join(repr(v) for v in row))
        path.write_text("\n".join(lines) + "\n")

    def write_meta(self, path):
        Path(path).write_text(json.dumps(self.meta, indent=2, sort_keys=True) + "\n")

    @staticmethod
    def meta_path_for(csv_path) -> Path:
        csv_path = Path(csv_path)
        return csv_path.with_name(csv_path.stem + ".meta.json")


def load_trace(csv_path) -> SimTrace:
    csv_path = Path(csv_path)
    text = csv_path.read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{csv_path}: empty trace file")
    header = lines[0].split(",")
    if header != TRACE_COLUMNS:
        raise SchemaError(
            f"{csv_path}: unexpected columns {header}; expected {TRACE_COLUMNS}"
        )
    if len(lines) == 1:
        raise SchemaError(f"{csv_path}: trace has a header but no samples")
    data = np.array(
        [[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=float
    )
    meta_path = SimTrace.meta_path_for(csv_path)
    meta = {}
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
    return SimTrace(data=data, meta=meta)


def _terrain_meta(terrain: TerrainModel) -> dict:
    return {
        "name": terrain.name,
        "s_range_l": list(terrain.s_range_l),
        "s_range_r": list(terrain.s_range_r),
        "resample_period_s": terrain.resample_period,
        "smoothing_tau_s": terrain.smoothing_tau,
        "disturbance": {
            "amplitude": terrain.disturbance.amplitude,
            "frequency_hz": terrain.disturbance.frequency_hz,
            "offset": terrain.disturbance.offset,
        },
    }


def scenario_meta(config: ScenarioConfig) -> dict:
    preset = config.resolved_preset() if config.controller_kind == "adaptive" else None
    meta = {
        "schema": TRACE_SCHEMA_ID,
        "columns": TRACE_COLUMNS,
        "seed": config.seed,
        "duration_s": config.duration_s,
        "dt_plant_s": config.dt_plant_s,
        "controller_rate_hz": config.controller_rate_hz,
        "terrain": _terrain_meta(config.terrain),
        "profile": {"kind": config.profile.kind, "params": config.profile.params()},
        "controller": {
            "kind": config.controller_kind,
            "preset": config.preset if config.gains is None else None,
            "pid": {
                "kp": config.pid_gains.kp,
                "ki": config.pid_gains.ki,
                "kd": config.pid_gains.kd,
                "integral_limit": config.pid_gains.integral_limit,
                "derivative_tau": config.pid_gains.derivative_tau,
            },
        },
        "plant": {
            "g_r": config.plant.g_r,
            "g_l": config.plant.g_l,
            "c_visc": config.plant.c_visc,
            "c_quad": config.plant.c_quad,
            "c_couple": config.plant.c_couple,
            "wheel_radius": config.plant.wheel_radius,
            "wheelbase": config.plant.wheelbase,
        },
    }
    if preset is not None:
        meta["controller"]["gains"] = {
            "kappa": preset.gains.kappa,
            "epsilon": preset.gains.epsilon,
            "sigma": preset.gains.sigma,
            "gamma": preset.gains.gamma,
        }
        meta["controller"]["rbf"] = {
            "neurons": preset.neuron_count,
            "width": preset.width,
            "center_scale": preset.center_scale,
        }
        meta["controller"]["phi0"] = config.phi0
        meta["controller"]["phi_clamp"] = config.phi_clamp
    return meta


class SimSession:
    """Incremental closed-loop stepper; one tick = one controller period."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.terrain = config.terrain
        ss = np.random.SeedSequence(config.seed)
        rbf_ss, slip_ss = ss.spawn(2)
        self.rng_slip = np.random.default_rng(slip_ss)
        self.adaptive = config.controller_kind == "adaptive"
        if self.adaptive:
            preset = config.resolved_preset()
            rng_rbf = np.random.default_rng(rbf_ss)
            # right-side basis drawn first, then left
            net_r = init_centers(
                preset.neuron_count, rng_rbf, preset.center_scale, preset.width
            )
            net_l = init_centers(
                preset.neuron_count, rng_rbf, preset.center_scale, preset.width
            )
            self.gains = preset.gains
            self.state_r = AdaptiveSideState(
                net=net_r, phi_hat=config.phi0, phi_clamp=config.phi_clamp
            )
            self.state_l = AdaptiveSideState(
                net=net_l, phi_hat=config.phi0, phi_clamp=config.phi_clamp
            )
        else:
            self.pid_r = PidState()
            self.pid_l = PidState()
        self.plant = initial_plant_state(self.terrain, self.rng_slip)
        self.pose = Pose()
        self.tick_index = 0
        self.warnings: list[str] = []
        self._clamp_warned = False
        self._substep_rows: list[list[float]] = []

    @property
    def t(self) -> float:
        return self.tick_index * self.config.controller_period

    def set_terrain(self, terrain: TerrainModel):
        """Swap the surface under the wheels; the resample schedule and the
        realized slip carry straight on."""
        self.terrain = terrain

    def tick(self, ref, advance: bool = True) -> list[float]:
        """Record the state/controls at the current tick time, then (unless
        advance=False) integrate one controller period forward.

        The recorded phi_hat columns hold the post-update gain estimates; U
        is the value applied over the following period.
        """
        cfg = self.config
        t = self.t
        p = self.plant
        e_r = p.v_r - ref.v_rd
        e_l = p.v_l - ref.v_ld
        period = cfg.controller_period

        if self.adaptive:
            v_vec = np.array([p.v_r, p.v_l])
            pn_r = basis_norm(self.state_r.net, v_vec)
            pn_l = basis_norm(self.state_l.net, v_vec)
            u_r, self.state_r = controller_step(
                self.state_r, e_r, v_vec, ref.vdot_rd, self.gains, period
            )
            u_l, self.state_l = controller_step(
                self.state_l, e_l, v_vec, ref.vdot_ld, self.gains, period
            )
            if (
                not self._clamp_warned
                and (self.state_r.clamp_hits or self.state_l.clamp_hits)
            ):
                self.warnings.append(
                    f"phi_hat clamped to +-{cfg.phi_clamp} at t={t:.3f}s"
                )
                self._clamp_warned = True
            ph_r, ph_l = self.state_r.phi_hat, self.state_l.phi_hat
        else:
            u_r, self.pid_r = pid_step(self.pid_r, e_r, period, cfg.pid_gains)
            u_l, self.pid_l = pid_step(self.pid_l, e_l, period, cfg.pid_gains)
            pn_r = pn_l = 0.0
            ph_r = ph_l = 0.0

        row = [
            t,
            ref.v_rd,
            ref.v_ld,
            p.v_r,
            p.v_l,
            e_r,
            e_l,
            u_r,
            u_l,
            ph_r,
            ph_l,
            pn_r,
            pn_l,
            p.s_r,
            p.s_l,
            self.pose.x,
            self.pose.y,
            self.pose.theta,
        ]
        if advance:
            self._advance(t, u_r, u_l, ref, ph_r, ph_l, pn_r, pn_l)
            self.tick_index += 1
        return row

    def _advance(self, t, u_r, u_l, ref, ph_r, ph_l, pn_r, pn_l):
        cfg = self.config
        dt = cfg.dt_plant_s
        plant_params = cfg.plant
        g_r, g_l = plant_params.g_r, plant_params.g_l
        cv, cq, cc = plant_params.c_visc, plant_params.c_quad, plant_params.c_couple
        record = cfg.record_plant_rate
        pose = self.pose
        p = self.plant
        v_held_r, v_held_l = p.v_r, p.v_l
        for j in range(cfg.n_sub):
            t_sub = t + j * dt
            p = advance_slip(p, self.terrain, dt, self.rng_slip)
            v_r, v_l = rk4_velocity_step(
                t_sub, p.v_r, p.v_l, u_r, u_l, p.s_r, p.s_l, dt,
                g_r, g_l, cv, cq, cc, self.terrain.disturbance,
            )
            if not (math.isfinite(v_r) and math.isfinite(v_l)):
                self.plant = p
                raise PlantFault(f"non-finite velocity at t={t_sub + dt:.4f}s")
            p.v_r = v_r
            p.v_l = v_l
            if record:
                self._substep_rows.append([
                    t_sub + dt,
                    ref.v_rd, ref.v_ld,
                    v_r, v_l,
                    v_r - ref.v_rd, v_l - ref.v_ld,
                    u_r, u_l,
                    ph_r, ph_l, pn_r, pn_l,
                    p.s_r, p.s_l,
                    pose.x, pose.y, pose.theta,
                ])
        self.plant = p
        # odometry advances per tick from the recorded (held) velocities so a
        # trace's pose columns can be re-derived from its velocity columns
        self.pose = pose_update(
            pose, v_held_r, v_held_l, plant_params.wheelbase, cfg.controller_period
        )


def run_scenario(config: ScenarioConfig) -> SimTrace:
    """Run one scenario to completion (or to its first fault)."""
    session = SimSession(config)
    meta = scenario_meta(config)
    rows: list[list[float]] = []
    faulted = False
    fault_msg = None
    try:
        for i in range(config.n_ticks + 1):
            t = i * config.controller_period
            ref = reference_at(config.profile, t)
            row = session.tick(ref, advance=(i < config.n_ticks))
            if config.record_plant_rate:
                if i == 0:
                    rows.append(row)
                rows.extend(session._substep_rows)
                session._substep_rows.clear()
            else:
                rows.append(row)
    except (PlantFault, ControllerFault, DomainError) as exc:
        faulted = True
        fault_msg = str(exc)
    data = np.array(rows, dtype=float) if rows else np.zeros((0, len(TRACE_COLUMNS)))
    warnings = list(session.warnings)
    if faulted:
        warnings.append(f"run aborted: {fault_msg}")
    meta["warnings"] = warnings
    meta["faulted"] = faulted
    meta["fault_index"] = (len(rows) - 1) if faulted else None
    meta["n_samples"] = int(data.shape[0])
    return SimTrace(data=data, meta=meta)


@dataclass
class SweepRun:
    terrain: str
    seed: int
    trace: SimTrace


def run_sweep(
    config: ScenarioConfig,
    terrains,
    seeds,
    jobs: int = 1,
) -> list[SweepRun]:
    """Cross product of terrains x seeds, same profile/controller throughout.

    Results come back in task order regardless of how many workers ran them.
    """
    configs = []
    names = []
    for terrain in terrains:
        model = get_terrain(terrain) if isinstance(terrain, str) else terrain
        for seed in seeds:
            configs.append(replace(config, terrain=model, seed=int(seed)))
            names.append((model.name, int(seed)))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(run_scenario, configs))
    else:
        traces = [run_scenario(c) for c in configs]
    return [
        SweepRun(terrain=name, seed=seed, trace=trace)
        for (name, seed), trace in zip(names, traces)
    ]


# --- Config file parsing ----------------------------------------------------

_TOP_KEYS = {
    "schema", "seed", "duration_s", "dt_plant_s", "controller_rate_hz",
    "terrain", "profile", "controller", "plant", "record_plant_rate",
}
_CONTROLLER_KEYS = {"kind", "preset", "gains", "rbf", "phi0", "phi_clamp", "pid"}
_PLANT_KEYS = {"g_r", "g_l", "c_visc", "c_quad", "c_couple", "wheel_radius", "wheelbase"}
_TERRAIN_KEYS = {
    "name", "s_range_l", "s_range_r", "resample_period_s", "smoothing_tau_s",
    "disturbance",
}
_DIST_KEYS = {"amplitude", "frequency_hz", "offset"}


def _reject_unknown(d: dict, allowed: set, where: str):
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise SchemaError(f"{where}: unknown keys {unknown}; allowed: {sorted(allowed)}")


def _require_number(d: dict, key: str, where: str, default=None):
    val = d.get(key, default)
    if val is None:
        raise SchemaError(f"{where}: missing required key {key!r}")
    if not isinstance(val, (int, float)) or isinstance(val, bool):
        raise SchemaError(f"{where}: {key} must be a number, got {val!r}")
    return float(val)


def _terrain_from_config(spec, where="terrain") -> TerrainModel:
    if isinstance(spec, str):
        try:
            return get_terrain(spec)
        except KeyError as exc:
            raise SchemaError(f"{where}: {exc.args[0]}") from None
    if not isinstance(spec, dict):
        raise SchemaError(f"{where}: must be a terrain name or a mapping")
    _reject_unknown(spec, _TERRAIN_KEYS, where)
    name = spec.get("name", "custom")
    for key in ("s_range_l", "s_range_r"):
        rng = spec.get(key)
        if (
            not isinstance(rng, (list, tuple))
            or len(rng) != 2
            or not all(isinstance(v, (int, float)) for v in rng)
        ):
            raise SchemaError(f"{where}.{key}: must be [lo, hi]")
    dist_spec = spec.get("disturbance", {})
    if not isinstance(dist_spec, dict):
        raise SchemaError(f"{where}.disturbance: must be a mapping")
    _reject_unknown(dist_spec, _DIST_KEYS, f"{where}.disturbance")
    dist = DisturbanceProfile(
        amplitude=_require_number(
            dist_spec, "amplitude", f"{where}.disturbance",
            DisturbanceProfile().amplitude,
        ),
        frequency_hz=_require_number(
            dist_spec, "frequency_hz", f"{where}.disturbance",
            DisturbanceProfile().frequency_hz,
        ),
        offset=_require_number(
            dist_spec, "offset", f"{where}.disturbance",
            DisturbanceProfile().offset,
        ),
    )
    try:
        return TerrainModel(
            name=str(name),
            s_range_l=(float(spec["s_range_l"][0]), float(spec["s_range_l"][1])),
            s_range_r=(float(spec["s_range_r"][0]), float(spec["s_range_r"][1])),
            resample_period=_require_number(
                spec, "resample_period_s", where, 2.0
            ),
            smoothing_tau=_require_number(spec, "smoothing_tau_s", where, 0.3),
            disturbance=dist,
        )
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None


def scenario_from_dict(d) -> ScenarioConfig:
    if not isinstance(d, dict):
        raise SchemaError("config root must be a mapping")
    schema = d.get("schema")
    if schema != SCHEMA_ID:
        raise SchemaError(f"schema must be {SCHEMA_ID!r}, got {schema!r}")
    _reject_unknown(d, _TOP_KEYS, "config")

    terrain = _terrain_from_config(d.get("terrain", "dry-asphalt"))

    prof_spec = d.get("profile", {"kind": "curved-path"})
    if not isinstance(prof_spec, dict) or "kind" not in prof_spec:
        raise SchemaError("profile: must be a mapping with a 'kind' key")
    _reject_unknown(prof_spec, {"kind", "params"}, "profile")
    params = prof_spec.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("profile.params: must be a mapping")
    try:
        profile = profile_from_config(prof_spec["kind"], params)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"profile: {exc}") from None

    ctl_spec = d.get("controller", {})
    if not isinstance(ctl_spec, dict):
        raise SchemaError("controller: must be a mapping")
    _reject_unknown(ctl_spec, _CONTROLLER_KEYS, "controller")
    kind = ctl_spec.get("kind", "adaptive")
    preset = ctl_spec.get("preset")
    gains = None
    if "gains" in ctl_spec:
        if preset is not None:
            raise SchemaError("controller: give 'preset' or 'gains', not both")
        gains_spec = ctl_spec["gains"]
        if not isinstance(gains_spec, dict):
            raise SchemaError("controller.gains: must be a mapping")
        _reject_unknown(
            gains_spec, {"kappa", "epsilon", "sigma", "gamma"}, "controller.gains"
        )
        try:
            gains = ControllerGains(
                kappa=_require_number(gains_spec, "kappa", "controller.gains"),
                epsilon=_require_number(gains_spec, "epsilon", "controller.gains"),
                sigma=_require_number(gains_spec, "sigma", "controller.gains"),
                gamma=_require_number(gains_spec, "gamma", "controller.gains"),
            )
        except ValueError as exc:
            raise SchemaError(f"controller.gains: {exc}") from None
    elif preset is None:
        preset = "sim-paper"
    if preset is not None and preset not in ("sim-paper", "field-paper"):
        raise SchemaError(
            f"controller.preset: unknown preset {preset!r}; "
            "expected 'sim-paper' or 'field-paper'"
        )

    rbf_spec = ctl_spec.get("rbf", {})
    if not isinstance(rbf_spec, dict):
        raise SchemaError("controller.rbf: must be a mapping")
    _reject_unknown(rbf_spec, {"neurons", "width", "center_scale"}, "controller.rbf")
    neuron_count = rbf_spec.get("neurons")
    if neuron_count is not None and (
        not isinstance(neuron_count, int) or neuron_count < 1
    ):
        raise SchemaError("controller.rbf.neurons: must be a positive integer")

    pid_spec = ctl_spec.get("pid", {})
    if not isinstance(pid_spec, dict):
        raise SchemaError("controller.pid: must be a mapping")
    _reject_unknown(
        pid_spec, {"kp", "ki", "kd", "integral_limit", "derivative_tau"},
        "controller.pid",
    )
    defaults = PidGains()
    try:
        pid_gains = PidGains(
            kp=_require_number(pid_spec, "kp", "controller.pid", defaults.kp),
            ki=_require_number(pid_spec, "ki", "controller.pid", defaults.ki),
            kd=_require_number(pid_spec, "kd", "controller.pid", defaults.kd),
            integral_limit=_require_number(
                pid_spec, "integral_limit", "controller.pid", defaults.integral_limit
            ),
            derivative_tau=_require_number(
                pid_spec, "derivative_tau", "controller.pid", defaults.derivative_tau
            ),
        )
    except ValueError as exc:
        raise SchemaError(f"controller.pid: {exc}") from None

    plant_spec = d.get("plant", {})
    if not isinstance(plant_spec, dict):
        raise SchemaError("plant: must be a mapping")
    _reject_unknown(plant_spec, _PLANT_KEYS, "plant")
    plant_defaults = PlantParams()
    try:
        plant = PlantParams(
            g_r=_require_number(plant_spec, "g_r", "plant", plant_defaults.g_r),
            g_l=_require_number(plant_spec, "g_l", "plant", plant_defaults.g_l),
            c_visc=_require_number(plant_spec, "c_visc", "plant", plant_defaults.c_visc),
            c_quad=_require_number(plant_spec, "c_quad", "plant", plant_defaults.c_quad),
            c_couple=_require_number(
                plant_spec, "c_couple", "plant", plant_defaults.c_couple
            ),
            wheel_radius=_require_number(
                plant_spec, "wheel_radius", "plant", plant_defaults.wheel_radius
            ),
            wheelbase=_require_number(
                plant_spec, "wheelbase", "plant", plant_defaults.wheelbase
            ),
        )
    except ValueError as exc:
        raise SchemaError(f"plant: {exc}") from None

    seed = d.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise SchemaError("seed: must be a non-negative integer")
    record = d.get("record_plant_rate", False)
    if not isinstance(record, bool):
        raise SchemaError("record_plant_rate: must be a boolean")

    return ScenarioConfig(
        terrain=terrain,
        profile=profile,
        controller_kind=str(kind),
        preset=preset if gains is None else None,
        gains=gains,
        neuron_count=neuron_count,
        rbf_width=rbf_spec.get("width"),
        center_scale=float(rbf_spec.get("center_scale", 1.0)),
        phi0=_require_number(ctl_spec, "phi0", "controller", PHI0_DEFAULT),
        phi_clamp=_require_number(ctl_spec, "phi_clamp", "controller", PHI_CLAMP_DEFAULT),
        pid_gains=pid_gains,
        plant=plant,
        duration_s=_require_number(d, "duration_s", "config", 200.0),
        dt_plant_s=_require_number(d, "dt_plant_s", "config", 1e-3),
        controller_rate_hz=_require_number(d, "controller_rate_hz", "config", 100.0),
        seed=seed,
        record_plant_rate=record,
    )


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise SchemaError(f"{path}: not valid YAML/JSON: {exc}") from None
    try:
        return scenario_from_dict(raw)
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from None
