"""Reference velocity generators for both wheel sides.

Closed-form profiles return exact derivatives; the teleoperation source
differentiates its held command numerically since operators do not supply
accelerations.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceSample:
    t: float
    v_rd: float
    v_ld: float
    vdot_rd: float
    vdot_ld: float


class StationaryProfile:
    """Hold (0, 0); the all-zero baseline for drift checks."""

    kind = "stationary"

    def sample(self, t: float) -> ReferenceSample:
        return ReferenceSample(t, 0.0, 0.0, 0.0, 0.0)

    def params(self) -> dict:
        return {}


class StepProfile:
    """Jump both sides from 0 to a magnitude at t_step (default 0)."""

    kind = "step"

    def __init__(self, magnitude: float = 0.5, t_step: float = 0.0):
        self.magnitude = float(magnitude)
        self.t_step = float(t_step)

    def sample(self, t: float) -> ReferenceSample:
        v = self.magnitude if t >= self.t_step else 0.0
        return ReferenceSample(t, v, v, 0.0, 0.0)

    def params(self) -> dict:
        return {"magnitude": self.magnitude, "t_step": self.t_step}


class RampHoldProfile:
    """Linear ramp from rest to per-side targets over ramp_s, then hold."""

    kind = "ramp-hold"

    def __init__(self, target_r: float = 0.8, target_l: float = 0.8, ramp_s: float = 5.0):
        if ramp_s <= 0:
            raise ValueError("ramp_s must be > 0")
        self.target_r = float(target_r)
        self.target_l = float(target_l)
        self.ramp_s = float(ramp_s)

    def sample(self, t: float) -> ReferenceSample:
        if t < self.ramp_s:
            frac = t / self.ramp_s
            return ReferenceSample(
                t,
                self.target_r * frac,
                self.target_l * frac,
                self.target_r / self.ramp_s,
                self.target_l / self.ramp_s,
            )
        return ReferenceSample(t, self.target_r, self.target_l, 0.0, 0.0)

    def params(self) -> dict:
        return {"target_r": self.target_r, "target_l": self.target_l, "ramp_s": self.ramp_s}


class PivotProfile:
    """Constant counter-rotating command: right +magnitude, left -magnitude."""

    kind = "pivot"

    def __init__(self, magnitude: float = 0.3):
        self.magnitude = float(magnitude)

    def sample(self, t: float) -> ReferenceSample:
        return ReferenceSample(t, self.magnitude, -self.magnitude, 0.0, 0.0)

    def params(self) -> dict:
        return {"magnitude": self.magnitude}


class CurvedPathProfile:
    """Smooth pull-away into a constant left-hand arc.

    Both sides ease from rest to (target_r, target_l) over ramp_s using the
    C1 cubic 3x^2 - 2x^3, then hold.  Defaults give a gentle arc at about
    0.85 m/s mean speed.
    """

    kind = "curved-path"

    def __init__(
        self, target_r: float = 1.0, target_l: float = 0.7, ramp_s: float = 10.0
    ):
        if ramp_s <= 0:
            raise ValueError("ramp_s must be > 0")
        self.target_r = float(target_r)
        self.target_l = float(target_l)
        self.ramp_s = float(ramp_s)

    def sample(self, t: float) -> ReferenceSample:
        if t < self.ramp_s:
            x = t / self.ramp_s
            ease = x * x * (3.0 - 2.0 * x)
            dease = 6.0 * x * (1.0 - x) / self.ramp_s
            return ReferenceSample(
                t,
                self.target_r * ease,
                self.target_l * ease,
                self.target_r * dease,
                self.target_l * dease,
            )
        return ReferenceSample(t, self.target_r, self.target_l, 0.0, 0.0)

    def params(self) -> dict:
        return {"target_r": self.target_r, "target_l": self.target_l, "ramp_s": self.ramp_s}


PROFILE_KINDS = {
    "stationary": StationaryProfile,
    "step": StepProfile,
    "ramp-hold": RampHoldProfile,
    "pivot": PivotProfile,
    "curved-path": CurvedPathProfile,
}


def profile_from_config(kind: str, params: dict | None = None):
    try:
        cls = PROFILE_KINDS[kind]
    except KeyError:
        raise KeyError(
            f"unknown profile kind {kind!r}; expected one of {sorted(PROFILE_KINDS)}"
        ) from None
    return cls(**(params or {}))


def reference_at(profile, t: float) -> ReferenceSample:
    """Evaluate a profile at time t >= 0."""
    if t < 0:
        raise ValueError("t must be >= 0")
    return profile.sample(t)


# --- Teleoperation ----------------------------------------------------------

WATCHDOG_SILENCE_S = 0.5  # command considered stale after this much quiet
WATCHDOG_RAMP_S = 1.0     # then ramp the held command down to zero over this
DERIV_WINDOW = 5          # moving-average width for numeric differentiation


class TeleopReferenceSource:
    """Zero-order hold over the latest operator command, with a stale-input
    watchdog and smoothed numeric derivatives.

    push() and sample() share one time base (the caller's clock).  Commands
    whose client timestamps go backwards are dropped and counted rather than
    applied out of order.
    """

    def __init__(self):
        self.cmd_r = 0.0
        self.cmd_l = 0.0
        self.last_push_t: float | None = None
        self.last_client_ms: float | None = None
        self.dropped = 0
        self._diffs_r: deque[float] = deque(maxlen=DERIV_WINDOW)
        self._diffs_l: deque[float] = deque(maxlen=DERIV_WINDOW)
        self._prev_emit: tuple[float, float, float] | None = None  # (t, v_r, v_l)

    def push(self, t_now: float, t_client_ms: float, v_r: float, v_l: float) -> bool:
        """Apply one command received at local time t_now.  Returns False and
        counts a drop when the client timestamp is older than the last one."""
        if self.last_client_ms is not None and t_client_ms < self.last_client_ms:
            self.dropped += 1
            return False
        self.last_client_ms = t_client_ms
        self.last_push_t = t_now
        self.cmd_r = float(v_r)
        self.cmd_l = float(v_l)
        return True

    def _held(self, t_now: float) -> tuple[float, float]:
        if self.last_push_t is None:
            return 0.0, 0.0
        quiet = t_now - self.last_push_t
        if quiet <= WATCHDOG_SILENCE_S:
            return self.cmd_r, self.cmd_l
        scale = 1.0 - (quiet - WATCHDOG_SILENCE_S) / WATCHDOG_RAMP_S
        scale = max(0.0, scale)
        return self.cmd_r * scale, self.cmd_l * scale

    def stale(self, t_now: float) -> bool:
        return self.last_push_t is None or t_now - self.last_push_t > WATCHDOG_SILENCE_S

    def sample(self, t_now: float) -> ReferenceSample:
        """Reference at t_now.  Derivatives are backward differences of the
        emitted command, averaged over the last DERIV_WINDOW calls, so a step
        in the command shows up as a finite pulse rather than a spike."""
        v_r, v_l = self._held(t_now)
        if self._prev_emit is None:
            d_r = d_l = 0.0
        else:
            t_prev, p_r, p_l = self._prev_emit
            span = t_now - t_prev
            if span > 0:
                self._diffs_r.append((v_r - p_r) / span)
                self._diffs_l.append((v_l - p_l) / span)
            d_r = math.fsum(self._diffs_r) / len(self._diffs_r) if self._diffs_r else 0.0
            d_l = math.fsum(self._diffs_l) / len(self._diffs_l) if self._diffs_l else 0.0
        self._prev_emit = (t_now, v_r, v_l)
        return ReferenceSample(t_now, v_r, v_l, d_r, d_l)
