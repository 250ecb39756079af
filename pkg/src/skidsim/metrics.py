"""Trace metrics: step-response figures, exponential envelope fits, and
controller comparison tables.

Conventions used throughout:
  - settling band = max(band_abs, band_frac * |step|); settling time is the
    first time after which |e| stays inside the band for the rest of the
    trace, measured from the trace start,
  - overshoot is the largest excursion past the target, as a percent of the
    step, counted only after the response first crosses the target,
  - sse is the mean |e| over the final 20% of the trace,
  - the envelope fit works on the pair norm ||e(t)|| = hypot(e_r, e_l).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .controllers import ControllerGains

BAND_ABS_DEFAULT = 0.02   # m/s
BAND_FRAC_DEFAULT = 0.02  # of the step magnitude
SSE_WINDOW_FRAC = 0.2


@dataclass(frozen=True)
class StepMetrics:
    settling_time_s: float  # +inf when the band is never held to the end
    settled: bool
    overshoot_pct: float
    sse: float
    band: float


@dataclass(frozen=True)
class ExpEnvelope:
    m: float
    alpha: float          # +inf sentinel on an all-zero error signal
    n_peaks: int          # 0 when the direct-sample fallback fit was used
    from_peaks: bool
    fit_residual: float = 0.0  # mean squared residual of the ln-fit
    rho_bound: float | None = None


def theoretical_rate(gains: ControllerGains, g_r: float = 1.0, g_l: float = 1.0) -> float:
    """Guaranteed decay-rate floor min(g_i*gamma, 2*kappa) over both sides."""
    return min(
        g_r * gains.gamma, 2.0 * gains.kappa,
        g_l * gains.gamma,
    )


def _settling_index(t: np.ndarray, abs_e: np.ndarray, band: float) -> tuple[float, bool]:
    violations = np.nonzero(abs_e > band)[0]
    if violations.size == 0:
        return 0.0, True
    last = violations[-1]
    if last == len(t) - 1:
        return math.inf, False
    return float(t[last + 1] - t[0]), True


def step_metrics_channel(
    t: np.ndarray,
    e: np.ndarray,
    step: float,
    band_abs: float = BAND_ABS_DEFAULT,
    band_frac: float = BAND_FRAC_DEFAULT,
) -> StepMetrics:
    """Metrics for a single error channel against a step of the given size."""
    t = np.asarray(t, dtype=float)
    e = np.asarray(e, dtype=float)
    if t.ndim != 1 or t.shape != e.shape or t.size < 2:
        raise ValueError("t and e must be matching 1-D arrays with >= 2 samples")
    if step == 0:
        raise ValueError("step magnitude must be nonzero")
    band = max(band_abs, band_frac * abs(step))
    abs_e = np.abs(e)
    settling, settled = _settling_index(t, abs_e, band)

    # error relative to the step direction: positive = past the target
    signed = -e * math.copysign(1.0, step)
    crossings = np.nonzero(signed <= 0.0)[0]
    if crossings.size == 0:
        overshoot = 0.0
    else:
        past = -signed[crossings[0]:]
        overshoot = float(max(0.0, past.max()) / abs(step) * 100.0)

    n_tail = max(1, int(math.ceil(t.size * SSE_WINDOW_FRAC)))
    sse = float(abs_e[-n_tail:].mean())
    return StepMetrics(
        settling_time_s=settling,
        settled=settled,
        overshoot_pct=overshoot,
        sse=sse,
        band=band,
    )


def step_metrics(
    trace,
    band_abs: float = BAND_ABS_DEFAULT,
    band_frac: float = BAND_FRAC_DEFAULT,
    step: float | None = None,
) -> StepMetrics:
    """Worst-side step metrics for a two-sided trace.

    The step magnitude is taken from the trace's profile metadata unless
    passed explicitly.
    """
    if step is None:
        prof = trace.meta.get("profile", {})
        if prof.get("kind") != "step":
            raise ValueError(
                "trace profile is not a step; pass step= explicitly"
            )
        step = float(prof["params"]["magnitude"])
    t = trace.col("t")
    m_r = step_metrics_channel(t, trace.col("e_r"), step, band_abs, band_frac)
    m_l = step_metrics_channel(t, trace.col("e_l"), step, band_abs, band_frac)
    return StepMetrics(
        settling_time_s=max(m_r.settling_time_s, m_l.settling_time_s),
        settled=m_r.settled and m_l.settled,
        overshoot_pct=max(m_r.overshoot_pct, m_l.overshoot_pct),
        sse=max(m_r.sse, m_l.sse),
        band=m_r.band,
    )


def _local_maxima(values: np.ndarray) -> np.ndarray:
    """Indices of strict-rise/level-or-fall peaks in a 1-D array."""
    if values.size < 3:
        return np.array([], dtype=int)
    left = values[1:-1] > values[:-2]
    right = values[1:-1] >= values[2:]
    return np.nonzero(left & right)[0] + 1


def exp_envelope_fit(
    trace_or_t,
    e_norm=None,
    t_start: float = 0.0,
    gains: ControllerGains | None = None,
    g_r: float = 1.0,
    g_l: float = 1.0,
) -> ExpEnvelope:
    """Fit ||e(t)|| <= m * exp(-alpha (t - t_start)) * ||e(t_start)||.

    The primary route fits a least-squares line to ln(peak) against
    t - t_start over the local maxima of the error norm; with fewer than 3
    usable peaks it falls back to a direct fit over all positive samples.
    An identically-zero signal returns the (m=0, alpha=+inf) sentinel.  When
    m would be anchored at a zero ||e(t_start)||, the first strictly positive
    sample after t_start anchors it instead.

    Accepts either a SimTrace or explicit (t, ||e||) arrays.
    """
    if e_norm is None:
        t = trace_or_t.col("t")
        e_norm = np.hypot(trace_or_t.col("e_r"), trace_or_t.col("e_l"))
    else:
        t = np.asarray(trace_or_t, dtype=float)
        e_norm = np.asarray(e_norm, dtype=float)
    if t.ndim != 1 or t.shape != e_norm.shape or t.size < 2:
        raise ValueError("need matching 1-D t and ||e|| arrays with >= 2 samples")
    if np.any(e_norm < 0):
        raise ValueError("||e|| must be non-negative")

    sel = t >= t_start
    if sel.sum() < 2:
        raise ValueError("fewer than 2 samples at/after t_start")
    tt = t[sel] - t_start
    ee = e_norm[sel]
    rho = theoretical_rate(gains, g_r, g_l) if gains is not None else None

    if not np.any(ee > 0):
        return ExpEnvelope(m=0.0, alpha=math.inf, n_peaks=0, from_peaks=False,
                           rho_bound=rho)

    anchor = ee[0] if ee[0] > 0 else ee[ee > 0][0]

    peak_idx = _local_maxima(ee)
    peak_idx = peak_idx[ee[peak_idx] > 0]
    if peak_idx.size >= 3:
        xs = tt[peak_idx]
        ys = np.log(ee[peak_idx])
        from_peaks = True
        n_peaks = int(peak_idx.size)
    else:
        pos = ee > 0
        xs = tt[pos]
        ys = np.log(ee[pos])
        from_peaks = False
        n_peaks = 0
        if xs.size < 2:
            # a single positive sample: flat envelope at that level
            return ExpEnvelope(
                m=float(ee[pos][0] / anchor), alpha=0.0, n_peaks=0,
                from_peaks=False, rho_bound=rho,
            )
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = float(np.mean((ys - (slope * xs + intercept)) ** 2))
    return ExpEnvelope(
        m=float(math.exp(intercept) / anchor),
        alpha=float(-slope),
        n_peaks=n_peaks,
        from_peaks=from_peaks,
        fit_residual=resid,
        rho_bound=rho,
    )


# --- Comparison + sweep aggregation ------------------------------------------


class ComparisonError(ValueError):
    """Traces disagree on scenario identity (terrain/profile/seed)."""


def _scenario_key(trace) -> tuple:
    meta = trace.meta
    terrain = meta.get("terrain", {})
    profile = meta.get("profile", {})
    return (
        terrain.get("name"),
        json.dumps(profile, sort_keys=True),
        meta.get("seed"),
        meta.get("duration_s"),
    )


def compare_controllers(
    traces_by_controller: dict[str, list],
    band_abs: float = BAND_ABS_DEFAULT,
    band_frac: float = BAND_FRAC_DEFAULT,
) -> dict:
    """Per-controller step metrics over shared scenarios, plus pairwise wins.

    Every controller must supply traces for the identical (terrain, profile,
    seed, duration) set; anything else raises ComparisonError with the
    offending difference spelled out.
    """
    if len(traces_by_controller) < 2:
        raise ComparisonError("need at least two controllers to compare")
    keysets = {
        name: sorted(_scenario_key(tr) for tr in traces)
        for name, traces in traces_by_controller.items()
    }
    names = sorted(keysets)
    base = keysets[names[0]]
    for name in names[1:]:
        if keysets[name] != base:
            raise ComparisonError(
                f"controllers {names[0]!r} and {name!r} ran different scenarios: "
                f"{base} vs {keysets[name]}"
            )

    table: dict[str, list[dict]] = {}
    for name, traces in traces_by_controller.items():
        rows = []
        for tr in sorted(traces, key=_scenario_key):
            m = step_metrics(tr, band_abs, band_frac)
            rows.append({
                "seed": tr.meta.get("seed"),
                "terrain": tr.meta.get("terrain", {}).get("name"),
                "settling_time_s": m.settling_time_s,
                "settled": m.settled,
                "overshoot_pct": m.overshoot_pct,
                "sse": m.sse,
            })
        table[name] = rows

    wins: dict[str, dict] = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            both = 0
            settling = 0
            sse = 0
            for ra, rb in zip(table[a], table[b]):
                sw = ra["settling_time_s"] < rb["settling_time_s"]
                ew = ra["sse"] < rb["sse"]
                settling += sw
                sse += ew
                both += sw and ew
            wins[f"{a} vs {b}"] = {
                "runs": len(table[a]),
                "settling_wins": settling,
                "sse_wins": sse,
                "both_wins": both,
            }
    return {"metrics": table, "wins": wins}


def aggregate_sweep(
    runs,
    band_abs: float = BAND_ABS_DEFAULT,
    band_frac: float = BAND_FRAC_DEFAULT,
) -> list[dict]:
    """Mean per-terrain step metrics over a run_sweep result, in input order."""
    by_terrain: dict[str, list] = {}
    order: list[str] = []
    for run in runs:
        if run.terrain not in by_terrain:
            by_terrain[run.terrain] = []
            order.append(run.terrain)
        by_terrain[run.terrain].append(run)
    out = []
    for terrain in order:
        group = by_terrain[terrain]
        ms = [step_metrics(r.trace, band_abs, band_frac) for r in group]
        final_err = [
            float(np.hypot(r.trace.col("e_r"), r.trace.col("e_l"))[
                -max(1, int(math.ceil(r.trace.n_samples * SSE_WINDOW_FRAC))):
            ].mean())
            for r in group
        ]
        out.append({
            "terrain": terrain,
            "n_runs": len(group),
            "n_faulted": sum(r.trace.faulted for r in group),
            "mean_settling_time_s": float(np.mean([m.settling_time_s for m in ms])),
            "all_settled": all(m.settled for m in ms),
            "mean_overshoot_pct": float(np.mean([m.overshoot_pct for m in ms])),
            "mean_sse": float(np.mean([m.sse for m in ms])),
            "mean_final_err": float(np.mean(final_err)),
        })
    return out
