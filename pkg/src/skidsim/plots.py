"""Static figure rendering for traces and sweep results.

All figures are post-hoc artifacts written to files; nothing here animates.
The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

FIGURE_KINDS = ("velocity", "error", "control", "basis", "path")
_DPI = 120


def _check_plottable(trace):
    if trace.n_samples < 2:
        raise ValueError("trace has fewer than 2 samples; nothing to plot")


def _trace_label(trace) -> str:
    terrain = trace.meta.get("terrain", {}).get("name")
    return terrain if terrain else "trace"


def _save(fig, path: Path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _velocity_figure(trace, path: Path):
    t = trace.col("t")
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(t, trace.col("v_rd"), "k--", lw=1.0, label="right reference")
    ax.plot(t, trace.col("v_ld"), "--", color="0.5", lw=1.0, label="left reference")
    ax.plot(t, trace.col("v_r"), lw=1.2, label="right measured")
    ax.plot(t, trace.col("v_l"), lw=1.2, label="left measured")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("wheel velocity [m/s]")
    ax.set_title(f"velocity tracking ({_trace_label(trace)})")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def _error_figure(trace, path: Path):
    t = trace.col("t")
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(t, trace.col("e_r"), lw=1.2, label="right")
    ax.plot(t, trace.col("e_l"), lw=1.2, label="left")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("tracking error [m/s]")
    ax.set_title(f"tracking error ({_trace_label(trace)})")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def _control_figure(trace, path: Path):
    t = trace.col("t")
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    ax.plot(t, trace.col("u_r"), lw=1.2, label="right")
    ax.plot(t, trace.col("u_l"), lw=1.2, label="left")
    ax.set_xlabel("t [s]")
    ax.set_ylabel("control input")
    ax.set_title(f"control signal ({_trace_label(trace)})")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def _basis_figure(trace, path: Path):
    t = trace.col("t")
    fig, (ax_top, ax_bot) = plt.subplots(2, 1, figsize=(8.0, 6.0), sharex=True)
    ax_top.plot(t, trace.col("phi_hat_r"), lw=1.2, label="right")
    ax_top.plot(t, trace.col("phi_hat_l"), lw=1.2, label="left")
    ax_top.set_ylabel("adaptive gain estimate")
    ax_top.grid(alpha=0.3)
    ax_top.legend(loc="best", fontsize=8)
    ax_bot.plot(t, trace.col("phi_norm_r"), lw=1.2, label="right")
    ax_bot.plot(t, trace.col("phi_norm_l"), lw=1.2, label="left")
    ax_bot.set_xlabel("t [s]")
    ax_bot.set_ylabel("basis activation norm")
    ax_bot.grid(alpha=0.3)
    fig.suptitle(f"adaptive state ({_trace_label(trace)})")
    fig.tight_layout()
    _save(fig, path)


def _path_figure(trace, path: Path):
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    x, y = trace.col("x"), trace.col("y")
    ax.plot(x, y, lw=1.2)
    ax.plot(x[0], y[0], "o", ms=6, label="start")
    ax.plot(x[-1], y[-1], "s", ms=6, label="end")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(f"vehicle path ({_trace_label(trace)})")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


_RENDERERS = {
    "velocity": _velocity_figure,
    "error": _error_figure,
    "control": _control_figure,
    "basis": _basis_figure,
    "path": _path_figure,
}


def plot_trace(trace, out_dir, stem: str = "trace") -> list[Path]:
    """Render the five standard figures for one trace.

    Returns the written paths in FIGURE_KINDS order.  The trace is validated
    before the first file is touched so a bad input leaves no partial output.
    """
    _check_plottable(trace)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for kind in FIGURE_KINDS:
        path = out_dir / f"{stem}_{kind}.png"
        _RENDERERS[kind](trace, path)
        paths.append(path)
    return paths


def plot_error_overlay(traces_by_label: dict, out_path) -> Path:
    """Overlay the error-norm history of several runs on one axis.

    Values may be single traces or lists of traces; a list is averaged
    pointwise (all members must share one time base), which is how a sweep's
    per-terrain seeds collapse into one curve.
    """
    if not traces_by_label:
        raise ValueError("no traces to overlay")
    prepared = []
    for label, entry in traces_by_label.items():
        traces = entry if isinstance(entry, (list, tuple)) else [entry]
        if not traces:
            raise ValueError(f"label {label!r} has no traces")
        for tr in traces:
            _check_plottable(tr)
        n = traces[0].n_samples
        if any(tr.n_samples != n for tr in traces):
            raise ValueError(f"traces under label {label!r} differ in length")
        t = traces[0].col("t")
        norm = np.mean(
            [np.hypot(tr.col("e_r"), tr.col("e_l")) for tr in traces], axis=0
        )
        prepared.append((label, t, norm))

    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for label, t, norm in prepared:
        ax.plot(t, norm, lw=1.2, label=str(label))
    ax.set_xlabel("t [s]")
    ax.set_ylabel("error norm [m/s]")
    ax.set_title("tracking error by terrain")
    ax.grid(alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    _save(fig, out_path)
    return out_path
