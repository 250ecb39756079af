"""Ground-truth plant: per-side wheel dynamics under terrain-driven slip.

The simulated vehicle is a skid-steer platform whose left and right wheel
sides are actuated independently.  Each side's linear velocity obeys

    dV_i/dt = g_i * U_i + d_i(V) + delta_i(t)        i in {R, L}

with
    d_i(V)      hidden drag/coupling the controller never sees,
    delta_i(t)  = -(1 + s_i(t)) * F(t)   slip-scaled external disturbance,
    s_i(t)      longitudinal slip ratio, resampled per terrain and smoothed.

d_i is viscous + quadratic drag plus a weak cross-side coupling:

    d_i(V) = -c_visc*V_i - c_quad*V_i*|V_i| + c_couple*(V_j - V_i)

Units are SI throughout (m/s, m/s^2, s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

TWO_PI = 2.0 * math.pi

# Default drag/disturbance scale.  The published gain sets give the control
# law a small-error stiffness of roughly g*(gamma/2 + 1) per side, so the
# steady load d(V_d) + mean(delta) must stay well under stiffness * 0.05 m/s
# for the tracking bounds this package promises.  The disturbance budget
# deliberately sits in the 0.08 Hz sinusoid rather than the offset: the slip
# multiplier then modulates a load whose frequency is what separates the
# controllers, and the bias stays small enough not to mask it.
C_VISC_DEFAULT = 0.008    # 1/s
C_QUAD_DEFAULT = 0.003    # 1/m
C_COUPLE_DEFAULT = 0.006  # 1/s

DIST_AMPLITUDE_DEFAULT = 0.016  # m/s^2
DIST_FREQUENCY_DEFAULT = 0.08   # Hz
DIST_OFFSET_DEFAULT = 0.002     # m/s^2

RESAMPLE_PERIOD_DEFAULT = 2.0   # s
SMOOTHING_TAU_DEFAULT = 0.3     # s

_RESAMPLE_EPS = 1e-9


class DomainError(ValueError):
    """Input outside the physical domain of a plant relation."""


class PlantFault(RuntimeError):
    """Non-finite state or input reached the integrator."""


@dataclass(frozen=True)
class PlantParams:
    """Actuation gains and hidden drag model, plus chassis geometry."""

    g_r: float = 1.0
    g_l: float = 1.0
    c_visc: float = C_VISC_DEFAULT
    c_quad: float = C_QUAD_DEFAULT
    c_couple: float = C_COUPLE_DEFAULT
    wheel_radius: float = 0.3  # m
    wheelbase: float = 1.85    # m, outer track width

    def __post_init__(self):
        if self.g_r <= 0 or self.g_l <= 0:
            raise ValueError("actuation gains g_r, g_l must be > 0")
        if self.wheel_radius <= 0 or self.wheelbase <= 0:
            raise ValueError("wheel_radius and wheelbase must be > 0")
        if self.c_visc < 0 or self.c_quad < 0 or self.c_couple < 0:
            raise ValueError("drag coefficients must be >= 0")


@dataclass(frozen=True)
class DisturbanceProfile:
    """Nominal (slip-free) external disturbance F(t) = A*sin(2*pi*f*t) + B."""

    amplitude: float = DIST_AMPLITUDE_DEFAULT
    frequency_hz: float = DIST_FREQUENCY_DEFAULT
    offset: float = DIST_OFFSET_DEFAULT

    def __call__(self, t: float) -> float:
        return self.amplitude * math.sin(TWO_PI * self.frequency_hz * t) + self.offset


@dataclass(frozen=True)
class TerrainModel:
    """Per-side slip ratio ranges plus the resample/smoothing schedule.

    Slip targets are drawn uniformly from the closed per-side interval every
    resample_period seconds and the realized slip relaxes toward the target
    through a first-order filter with time constant smoothing_tau.
    """

    name: str
    s_range_l: tuple[float, float]
    s_range_r: tuple[float, float]
    resample_period: float = RESAMPLE_PERIOD_DEFAULT
    smoothing_tau: float = SMOOTHING_TAU_DEFAULT
    disturbance: DisturbanceProfile = field(default_factory=DisturbanceProfile)

    def __post_init__(self):
        for lo, hi in (self.s_range_l, self.s_range_r):
            if not (-1.0 < lo <= hi < 1.0):
                raise ValueError(
                    f"terrain {self.name!r}: slip range [{lo}, {hi}] must satisfy "
                    "-1 < lo <= hi < 1"
                )
        if self.resample_period <= 0 or self.smoothing_tau <= 0:
            raise ValueError("resample_period and smoothing_tau must be > 0")

    def range_for(self, side: str) -> tuple[float, float]:
        if side == "left":
            return self.s_range_l
        if side == "right":
            return self.s_range_r
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")


# Slip ranges (left, right) for the five built-in surfaces.  Left-side upper
# bounds dominate the right on every surface: the sweep aggregation and the
# settling-order comparisons lean on that asymmetry.
TERRAINS: dict[str, TerrainModel] = {
    "dry-asphalt": TerrainModel("dry-asphalt", (0.05, 0.40), (0.05, 0.20)),
    "wet-asphalt": TerrainModel("wet-asphalt", (0.05, 0.80), (0.05, 0.50)),
    "gravel": TerrainModel("gravel", (0.05, 0.50), (0.05, 0.40)),
    "mud": TerrainModel("mud", (0.05, 0.70), (0.05, 0.50)),
    "ice": TerrainModel("ice", (0.05, 0.90), (0.05, 0.75)),
}

# Degenerate surface for ideal-case runs: no slip, no external disturbance.
# Not one of the five real surfaces above.
IDEAL_TERRAIN = TerrainModel(
    "ideal", (0.0, 0.0), (0.0, 0.0),
    disturbance=DisturbanceProfile(0.0, DIST_FREQUENCY_DEFAULT, 0.0),
)


def get_terrain(name: str) -> TerrainModel:
    key = name.strip().lower()
    if key == "ideal":
        return IDEAL_TERRAIN
    try:
        return TERRAINS[key]
    except KeyError:
        raise KeyError(
            f"unknown terrain {name!r}; expected one of "
            f"{sorted(TERRAINS)} or 'ideal'"
        ) from None


@dataclass
class PlantState:
    """Velocities, realized slip, slip targets, and the resample bookkeeping."""

    v_r: float = 0.0
    v_l: float = 0.0
    s_r: float = 0.0
    s_l: float = 0.0
    s_target_r: float = 0.0
    s_target_l: float = 0.0
    t: float = 0.0
    next_resample_t: float = RESAMPLE_PERIOD_DEFAULT
    resample_count: int = 0


def slip_ratio(omega_wheel: float, omega_vehicle: float) -> float:
    """Longitudinal slip of one side from wheel vs vehicle angular velocity.

    s = (omega_wheel - omega_vehicle) / max(|omega_wheel|, |omega_vehicle|)

    The sign lives in the numerator; the normalization uses magnitudes so the
    ratio stays meaningful when one side momentarily reverses.  Both inputs
    zero returns 0 by definition extension.  Both inputs non-positive (not
    both zero) is outside the model's domain: it presumes forward-spinning
    wheels.
    """
    if omega_wheel == 0.0 and omega_vehicle == 0.0:
        return 0.0
    if max(omega_wheel, omega_vehicle) <= 0.0:
        raise DomainError(
            "slip_ratio expects at least one forward (positive) angular velocity"
        )
    return (omega_wheel - omega_vehicle) / max(abs(omega_wheel), abs(omega_vehicle))


def slip_multiplier(s: float) -> float:
    """Disturbance scale factor mu(s) = 1 + s, defined for |s| < 1."""
    if not -1.0 < s < 1.0:
        raise DomainError(f"slip ratio {s} outside (-1, 1)")
    return 1.0 + s


def resample_slip(terrain: TerrainModel, side: str, rng) -> float:
    """Draw a fresh slip target for one side, uniform over the terrain range."""
    lo, hi = terrain.range_for(side)
    if hi == lo:
        return lo
    return lo + (hi - lo) * float(rng.random())


def advance_slip(state: PlantState, terrain: TerrainModel, dt: float, rng) -> PlantState:
    """Advance realized slip by dt: resample targets on schedule, then relax.

    Resample events fire at every crossing of a multiple of resample_period
    (left drawn first, then right).  The relaxation uses the exact first-order
    discretization s += (target - s) * (1 - exp(-dt/tau)), so a single step of
    dt = tau covers 1 - 1/e of the gap regardless of step size.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    t_new = state.t + dt
    s_target_l = state.s_target_l
    s_target_r = state.s_target_r
    next_t = state.next_resample_t
    count = state.resample_count
    while t_new >= next_t - _RESAMPLE_EPS:
        s_target_l = resample_slip(terrain, "left", rng)
        s_target_r = resample_slip(terrain, "right", rng)
        next_t += terrain.resample_period
        count += 1
    blend = 1.0 - math.exp(-dt / terrain.smoothing_tau)
    return replace(
        state,
        s_r=state.s_r + (s_target_r - state.s_r) * blend,
        s_l=state.s_l + (s_target_l - state.s_l) * blend,
        s_target_r=s_target_r,
        s_target_l=s_target_l,
        t=t_new,
        next_resample_t=next_t,
        resample_count=count,
    )


def accel_pair(
    t: float,
    v_r: float,
    v_l: float,
    u_r: float,
    u_l: float,
    s_r: float,
    s_l: float,
    g_r: float,
    g_l: float,
    c_visc: float,
    c_quad: float,
    c_couple: float,
    dist: DisturbanceProfile,
) -> tuple[float, float]:
    """Raw right/left accelerations; the unpacked-float core of the model.

    Kept argument-flat because the integrator calls it four times per step.
    """
    f = dist.amplitude * math.sin(TWO_PI * dist.frequency_hz * t) + dist.offset
    a_r = (
        g_r * u_r
        - c_visc * v_r
        - c_quad * v_r * abs(v_r)
        + c_couple * (v_l - v_r)
        - (1.0 + s_r) * f
    )
    a_l = (
        g_l * u_l
        - c_visc * v_l
        - c_quad * v_l * abs(v_l)
        + c_couple * (v_r - v_l)
        - (1.0 + s_l) * f
    )
    return a_r, a_l


def plant_derivative(
    state: PlantState,
    u_r: float,
    u_l: float,
    params: PlantParams,
    terrain: TerrainModel,
) -> tuple[float, float]:
    """(dV_R/dt, dV_L/dt) at the state's time, with slip held at its value."""
    if not (
        math.isfinite(state.v_r)
        and math.isfinite(state.v_l)
        and math.isfinite(u_r)
        and math.isfinite(u_l)
    ):
        raise PlantFault("non-finite velocity or control input")
    # slip_multiplier's domain check, applied to both sides before use
    slip_multiplier(state.s_r)
    slip_multiplier(state.s_l)
    return accel_pair(
        state.t,
        state.v_r,
        state.v_l,
        u_r,
        u_l,
        state.s_r,
        state.s_l,
        params.g_r,
        params.g_l,
        params.c_visc,
        params.c_quad,
        params.c_couple,
        terrain.disturbance,
    )


def initial_plant_state(terrain: TerrainModel, rng) -> PlantState:
    """State at t=0: zero velocity, slip already at its first drawn target."""
    s_l = resample_slip(terrain, "left", rng)
    s_r = resample_slip(terrain, "right", rng)
    return PlantState(
        v_r=0.0,
        v_l=0.0,
        s_r=s_r,
        s_l=s_l,
        s_target_r=s_r,
        s_target_l=s_l,
        t=0.0,
        next_resample_t=terrain.resample_period,
        resample_count=0,
    )
