"""Velocity-error controllers: adaptive RBF damping law and a PID baseline.

The adaptive controller is model-free.  Per side it keeps one scalar gain
estimate phi_hat and one fixed Gaussian basis over the velocity pair, and
computes

    U = -1/2*gamma*e - 1/2*e*(||Phi||^2 + 2 + Vdot_d^2) - sigma*e*||Phi||*phi_hat^2

    phi_hat' = -kappa*phi_hat - eps*phi_hat^3 + sigma*e^2*||Phi||*phi_hat

U is odd in e and always opposes it; the gain estimate grows only while the
squared error times basis activation outweighs the leakage kappa, and its
nonzero attractors sit at +-sqrt((sigma*e^2*||Phi|| - kappa)/eps).

Nothing in this module may read plant parameters; the only inputs are the
tracking error, measured velocities, the reference derivative, and the
controller's own state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .rbf import RbfNetwork, basis_eval

PHI0_DEFAULT = 0.1
PHI_CLAMP_DEFAULT = 100.0


class ControllerFault(RuntimeError):
    """Non-finite controller input or output."""


@dataclass(frozen=True)
class ControllerGains:
    """Adaptive-law constants; all strictly positive."""

    kappa: float
    epsilon: float
    sigma: float
    gamma: float

    def __post_init__(self):
        for name in ("kappa", "epsilon", "sigma", "gamma"):
            val = getattr(self, name)
            if not (isinstance(val, (int, float)) and math.isfinite(val) and val > 0):
                raise ValueError(f"gain {name} must be finite and > 0, got {val!r}")


@dataclass(frozen=True)
class ControlPreset:
    """A published gain set plus its basis geometry."""

    gains: ControllerGains
    neuron_count: int
    width: float
    center_scale: float = 1.0


# Published gain sets, shipped verbatim under their conventional names.
PRESETS: dict[str, ControlPreset] = {
    "sim-paper": ControlPreset(
        gains=ControllerGains(kappa=1.2, epsilon=0.04, sigma=11.5, gamma=1.6),
        neuron_count=9,
        width=0.13,
    ),
    "field-paper": ControlPreset(
        gains=ControllerGains(kappa=1.9, epsilon=0.08, sigma=17.1, gamma=3.6),
        neuron_count=8,
        width=0.15,
    ),
}


def get_preset(name: str) -> ControlPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; expected one of {sorted(PRESETS)}"
        ) from None


def control_law(
    e: float, phi: np.ndarray, vdot_ref: float, phi_hat: float, gains: ControllerGains
) -> float:
    """Control input for one side from its error and basis activation."""
    if not (math.isfinite(e) and math.isfinite(vdot_ref) and math.isfinite(phi_hat)):
        raise ControllerFault("non-finite controller input")
    phi_norm = float(np.linalg.norm(phi))
    u = (
        -0.5 * gains.gamma * e
        - 0.5 * e * (phi_norm**2 + 2.0 + vdot_ref**2)
        - gains.sigma * e * phi_norm * phi_hat**2
    )
    if not math.isfinite(u):
        raise ControllerFault("non-finite control output")
    return u


def adaptive_rate(
    phi_hat: float, e: float, phi_norm: float, gains: ControllerGains
) -> float:
    """d(phi_hat)/dt.  Every term carries phi_hat, so 0 is invariant and the
    sign of phi_hat never flips."""
    return (
        -gains.kappa * phi_hat
        - gains.epsilon * phi_hat**3
        + gains.sigma * e * e * phi_norm * phi_hat
    )


@dataclass(frozen=True)
class AdaptiveSideState:
    """One side's runtime state: the frozen basis plus the live gain estimate."""

    net: RbfNetwork
    phi_hat: float = PHI0_DEFAULT
    phi_clamp: float = PHI_CLAMP_DEFAULT
    clamp_hits: int = 0


def controller_step(
    state: AdaptiveSideState,
    e: float,
    v,
    vdot_ref: float,
    gains: ControllerGains,
    dt: float,
) -> tuple[float, AdaptiveSideState]:
    """One control tick: U from the pre-update phi_hat, then explicit-Euler
    advance of phi_hat.

    The cubic term makes large explicit-Euler steps violently unstable, so a
    step is rejected outright when epsilon * phi_hat^2 * dt > 0.5.  The gain
    estimate is clamped to +-phi_clamp and each hit is counted so traces can
    carry the warning.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if gains.epsilon * state.phi_hat**2 * dt > 0.5:
        raise ValueError(
            f"dt={dt} too coarse for phi_hat={state.phi_hat}: "
            "epsilon * phi_hat^2 * dt > 0.5"
        )
    phi = basis_eval(state.net, v)
    u = control_law(e, phi, vdot_ref, state.phi_hat, gains)
    phi_norm = float(np.linalg.norm(phi))
    phi_new = state.phi_hat + dt * adaptive_rate(state.phi_hat, e, phi_norm, gains)
    hits = state.clamp_hits
    if abs(phi_new) > state.phi_clamp:
        phi_new = math.copysign(state.phi_clamp, phi_new)
        hits += 1
    return u, replace(state, phi_hat=phi_new, clamp_hits=hits)


# --- PID baseline -----------------------------------------------------------

# Frozen baseline, tuned once on dry asphalt and left alone.  Procedure: from
# the measured open-loop step response (near-integrating, drag slope ~0.02/s)
# pick a conservative closed-loop time constant of ~1.25 s => kp = 0.8, with
# integral action one octave below the proportional corner (ki = 0.3) and a
# touch of filtered derivative for the slip jolts (kd = 0.05).  It is a fair,
# deliberately ordinary comparator, not a per-surface retune.
PID_KP_DEFAULT = 0.8
PID_KI_DEFAULT = 0.3
PID_KD_DEFAULT = 0.05
PID_INTEGRAL_LIMIT = 2.0
PID_DERIVATIVE_TAU = 0.05  # s


@dataclass(frozen=True)
class PidGains:
    kp: float = PID_KP_DEFAULT
    ki: float = PID_KI_DEFAULT
    kd: float = PID_KD_DEFAULT
    integral_limit: float = PID_INTEGRAL_LIMIT
    derivative_tau: float = PID_DERIVATIVE_TAU

    def __post_init__(self):
        if self.kp < 0 or self.ki < 0 or self.kd < 0:
            raise ValueError("PID gains must be >= 0")
        if self.integral_limit <= 0 or self.derivative_tau <= 0:
            raise ValueError("integral_limit and derivative_tau must be > 0")


@dataclass(frozen=True)
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0
    deriv_filtered: float = 0.0
    primed: bool = False  # False until the first step has seeded prev_error


def pid_step(
    state: PidState, e: float, dt: float, gains: PidGains
) -> tuple[float, PidState]:
    """Positional PID acting against the error, with clamped integral and a
    first-order-filtered derivative."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    if not math.isfinite(e):
        raise ControllerFault("non-finite PID input")
    integral = state.integral + e * dt
    lim = gains.integral_limit
    integral = min(max(integral, -lim), lim)
    d_raw = (e - state.prev_error) / dt if state.primed else 0.0
    blend = dt / (gains.derivative_tau + dt)
    deriv = state.deriv_filtered + (d_raw - state.deriv_filtered) * blend
    u = -(gains.kp * e + gains.ki * integral + gains.kd * deriv)
    if not math.isfinite(u):
        raise ControllerFault("non-finite PID output")
    return u, PidState(integral=integral, prev_error=e, deriv_filtered=deriv, primed=True)
