"""Batch command-line entry point.

Subcommands: run one scenario, sweep terrains x seeds, compare controllers,
run the three-round gain tuning protocol, launch the teleop service, and
render figures from saved traces.

Exit codes are a stable contract: 0 success, 1 runtime fault or failed
check, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .dynamics import TERRAINS, get_terrain
from .engine import (
    ScenarioConfig,
    SchemaError,
    SimTrace,
    load_scenario,
    load_trace,
    run_scenario,
    run_sweep,
)
from .metrics import (
    SSE_WINDOW_FRAC,
    ComparisonError,
    aggregate_sweep,
    compare_controllers,
    exp_envelope_fit,
    step_metrics,
)
from .reference import profile_from_config

log = logging.getLogger("skidsim.cli")

EXIT_OK = 0
EXIT_FAULT = 1
EXIT_CONFIG = 2

# tuning-protocol gates; round 2's symmetry allows for the common-mode
# disturbance response that survives even perfectly balanced control
TUNE_DRIFT_MAX = 0.01
TUNE_SYMMETRY_MAX = 0.02
TUNE_RADIUS_MAX = 0.05
TUNE_TRACKING_MAX = 0.05


def _init_logging():
    level_name = os.environ.get("SKIDSIM_LOG", "WARNING").upper()
    level = getattr(logging, level_name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _jsonable(value):
    """inf/nan have no JSON spelling; map them to null for interop."""
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _write_json(path: Path, payload):
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _flatten(prefix: str, value, rows: list):
    if isinstance(value, dict):
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], rows)
    elif isinstance(value, (list, tuple)):
        rows.append((prefix, ";".join(str(v) for v in value)))
    else:
        rows.append((prefix, value))


def _emit(payload: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
        return
    rows: list = []
    _flatten("", payload, rows)
    print("metric,value")
    for key, value in rows:
        print(f"{key},{value}")


def _seed_list(text: str) -> list[int]:
    try:
        text = text.strip()
        if ":" in text:
            lo, hi = text.split(":", 1)
            seeds = list(range(int(lo), int(hi)))
        else:
            seeds = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'lo:hi' or a comma list of seeds, got {text!r}"
        ) from None
    if not seeds or any(s < 0 for s in seeds):
        raise argparse.ArgumentTypeError("seeds must be non-negative and non-empty")
    return seeds


def _load_config(args) -> ScenarioConfig:
    cfg = load_scenario(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = replace(cfg, seed=args.seed)
    return cfg


def _tail_error(trace: SimTrace) -> float:
    norm = np.hypot(trace.col("e_r"), trace.col("e_l"))
    n_tail = max(1, int(math.ceil(trace.n_samples * SSE_WINDOW_FRAC)))
    return float(norm[-n_tail:].mean())


def _trace_report(cfg: ScenarioConfig, trace: SimTrace) -> dict:
    out = {
        "faulted": trace.faulted,
        "warnings": list(trace.warnings),
        "n_samples": trace.n_samples,
        "terrain": trace.meta.get("terrain", {}).get("name"),
        "seed": cfg.seed,
    }
    if trace.n_samples < 2:
        return out
    out["tail_error_mean"] = _tail_error(trace)
    gains = None
    if cfg.controller_kind == "adaptive":
        gains = cfg.resolved_preset().gains
    env = exp_envelope_fit(trace, gains=gains, g_r=cfg.plant.g_r, g_l=cfg.plant.g_l)
    out["envelope"] = {
        "m": env.m,
        "alpha": env.alpha,
        "n_peaks": env.n_peaks,
        "from_peaks": env.from_peaks,
        "fit_residual": env.fit_residual,
        "rho_bound": env.rho_bound,
    }
    if cfg.profile.kind == "step" and not trace.faulted:
        m = step_metrics(trace)
        out["step"] = {
            "settling_time_s": m.settling_time_s,
            "settled": m.settled,
            "overshoot_pct": m.overshoot_pct,
            "sse": m.sse,
            "band": m.band,
        }
    return out


# --- subcommands ------------------------------------------------------------


def cmd_run(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace = run_scenario(cfg)
    trace.write_csv(out / "trace.csv")
    trace.write_meta(out / "meta.json")
    report = _trace_report(cfg, trace)
    _write_json(out / "metrics.json", report)
    if args.plots:
        from .plots import plot_trace

        plot_trace(trace, out, stem="trace")
    _emit(report, args.format)
    if trace.faulted:
        log.warning("run faulted: %s", "; ".join(trace.warnings))
        return EXIT_FAULT
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    terrains = (
        [name.strip() for name in args.terrains.split(",") if name.strip()]
        if args.terrains
        else list(TERRAINS)
    )
    for name in terrains:
        try:
            get_terrain(name)  # fail fast on a typo, before any runs
        except KeyError:
            print(f"config error: unknown terrain {name!r}", file=sys.stderr)
            return EXIT_CONFIG
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    runs = run_sweep(cfg, terrains, args.seeds, jobs=args.jobs)
    rows = aggregate_sweep(runs)
    _write_json(out / "sweep_summary.json", {"rows": rows})
    if args.format == "csv":
        header = list(rows[0].keys())
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(str(_jsonable(row[k])) for k in header))
        (out / "sweep_summary.csv").write_text("\n".join(lines) + "\n")
    if args.save_traces:
        trace_dir = out / "traces"
        trace_dir.mkdir(exist_ok=True)
        for run in runs:
            stem = f"{run.terrain}-seed{run.seed}"
            run.trace.write_csv(trace_dir / f"{stem}.csv")
            run.trace.write_meta(trace_dir / f"{stem}.meta.json")
    if args.plots:
        from .plots import plot_error_overlay

        by_terrain: dict[str, list] = {}
        for run in runs:
            by_terrain.setdefault(run.terrain, []).append(run.trace)
        plot_error_overlay(by_terrain, out / "error_overlay.png")
    for row in rows:
        print(
            f"{row['terrain']:12s} settle={row['mean_settling_time_s']:7.3f}s "
            f"overshoot={row['mean_overshoot_pct']:5.2f}% "
            f"sse={row['mean_sse']:.4f} all_settled={row['all_settled']}"
        )
    n_faulted = sum(run.trace.faulted for run in runs)
    if n_faulted:
        log.warning("%d of %d runs faulted", n_faulted, len(runs))
        return EXIT_FAULT
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    if cfg.profile.kind != "step":
        print("config error: controller comparison needs a step profile",
              file=sys.stderr)
        return EXIT_CONFIG
    controllers = [c.strip() for c in args.controllers.split(",") if c.strip()]
    for name in controllers:
        if name not in ("adaptive", "pid"):
            print(f"config error: unknown controller {name!r}", file=sys.stderr)
            return EXIT_CONFIG
    traces = {
        name: [
            run_scenario(replace(cfg, controller_kind=name, seed=seed))
            for seed in args.seeds
        ]
        for name in controllers
    }
    result = compare_controllers(traces)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "comparison.json", result)
    for pair, wins in result["wins"].items():
        print(
            f"{pair}: settling {wins['settling_wins']}/{wins['runs']}, "
            f"sse {wins['sse_wins']}/{wins['runs']}, "
            f"both {wins['both_wins']}/{wins['runs']}"
        )
    return EXIT_OK


def cmd_tune_protocol(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rounds: list[dict] = []
    report = {
        "terrain": cfg.terrain.name,
        "controller": cfg.controller_kind,
        "preset": cfg.preset,
        "rounds": rounds,
    }

    # round 1: hold a zero reference; the robot must not creep
    tr = run_scenario(replace(
        cfg, profile=profile_from_config("stationary"), duration_s=20.0,
    ))
    drift = float(np.maximum(np.abs(tr.col("v_r")), np.abs(tr.col("v_l"))).mean())
    r1 = {
        "round": "stationary-hold",
        "drift_mean": drift,
        "threshold": TUNE_DRIFT_MAX,
        "passed": bool(drift < TUNE_DRIFT_MAX and not tr.faulted),
    }
    rounds.append(r1)

    if r1["passed"]:
        # round 2: pivot turn; sides must mirror and the turn stay tight
        tr = run_scenario(replace(
            cfg, profile=profile_from_config("pivot", {"magnitude": 0.3}),
            duration_s=20.0,
        ))
        v_r, v_l = tr.col("v_r"), tr.col("v_l")
        symmetry = float(np.abs(v_r + v_l).mean())
        omega = (v_r - v_l) / cfg.plant.wheelbase
        mid = 0.5 * (v_r + v_l)
        turning = np.abs(omega) > 1e-3
        radius = (
            float(np.abs(mid[turning] / omega[turning]).mean())
            if turning.any()
            else math.inf
        )
        r2 = {
            "round": "pivot-turn",
            "symmetry_error_mean": symmetry,
            "symmetry_threshold": TUNE_SYMMETRY_MAX,
            "turn_radius_mean": radius,
            "radius_threshold": TUNE_RADIUS_MAX,
            "passed": bool(
                symmetry < TUNE_SYMMETRY_MAX
                and radius < TUNE_RADIUS_MAX
                and not tr.faulted
            ),
        }
        rounds.append(r2)

        if r2["passed"]:
            # round 3: track the curved profile; judge the settled tail
            tr = run_scenario(replace(
                cfg, profile=profile_from_config("curved-path"), duration_s=30.0,
            ))
            tail = _tail_error(tr)
            rounds.append({
                "round": "profile-tracking",
                "tail_error_mean": tail,
                "threshold": TUNE_TRACKING_MAX,
                "passed": bool(tail < TUNE_TRACKING_MAX and not tr.faulted),
            })

    report["passed"] = bool(
        len(rounds) == 3 and all(r["passed"] for r in rounds)
    )
    _write_json(out / "tune_report.json", report)

    for i, r in enumerate(rounds, start=1):
        verdict = "PASS" if r["passed"] else "FAIL"
        measures = ", ".join(
            f"{k}={v:.4f}"
            for k, v in r.items()
            if isinstance(v, float)
        )
        print(f"round {i} ({r['round']}): {measures} {verdict}")
    for i in range(len(rounds) + 1, 4):
        print(f"round {i}: SKIPPED (earlier round failed)")
    return EXIT_OK if report["passed"] else EXIT_FAULT


def cmd_serve(args) -> int:
    cfg = _load_config(args)
    from .server import run_server

    return run_server(
        cfg, host=args.host, port=args.port,
        v_max=args.v_max, time_scale=args.time_scale,
    )


def cmd_plot(args) -> int:
    from .plots import plot_error_overlay, plot_trace

    out = Path(args.out)
    traces = []
    for path in args.traces:
        path = Path(path)
        traces.append((path.stem, load_trace(path)))
    written = []
    for stem, trace in traces:
        written.extend(plot_trace(trace, out, stem=stem))
    if len(traces) > 1:
        by_label: dict[str, list] = {}
        for stem, trace in traces:
            label = trace.meta.get("terrain", {}).get("name") or stem
            by_label.setdefault(label, []).append(trace)
        written.append(plot_error_overlay(by_label, out / "error_overlay.png"))
    for path in written:
        print(path)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skidsim",
        description="slip-affected skid-steer simulation and control toolkit",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, seeds_default=None):
        p.add_argument("--config", required=True, help="scenario YAML path")
        p.add_argument("--out", default="out", help="output directory")
        if seeds_default is None:
            p.add_argument("--seed", type=int, default=None,
                           help="override the scenario seed")
        else:
            p.add_argument("--seeds", type=_seed_list, default=_seed_list(seeds_default),
                           help="seed range 'lo:hi' or comma list")

    p = sub.add_parser("run", help="run one scenario, write trace + metrics")
    common(p)
    p.add_argument("--plots", action="store_true", help="also render figures")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="stdout metrics format")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a terrains x seeds sweep")
    common(p, seeds_default="0:10")
    p.add_argument("--terrains", default=None,
                   help="comma list of terrain names (default: all)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--save-traces", action="store_true",
                   help="write every run's trace CSV")
    p.add_argument("--plots", action="store_true",
                   help="render the per-terrain error overlay")
    p.add_argument("--format", choices=("csv", "json"), default="csv",
                   help="summary file format (JSON is always written)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="same scenario under several controllers")
    common(p, seeds_default="0:10")
    p.add_argument("--controllers", default="adaptive,pid",
                   help="comma list from {adaptive, pid}")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tune-protocol",
                       help="three-round gain check: hold, pivot, tracking")
    common(p)
    p.set_defaults(func=cmd_tune_protocol)

    p = sub.add_parser("serve", help="run the websocket teleoperation service")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--v-max", type=float, default=1.5,
                   help="per-side command limit, m/s")
    p.add_argument("--time-scale", type=float, default=1.0,
                   help="sim seconds per wall second")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("plot", help="render figures from saved traces")
    p.add_argument("traces", nargs="+", help="trace CSV paths")
    p.add_argument("--out", default="plots", help="output directory")
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    _init_logging()
    try:
        return args.func(args)
    except SchemaError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ComparisonError as err:
        print(f"comparison error: {err}", file=sys.stderr)
        return EXIT_FAULT
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
