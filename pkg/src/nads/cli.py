"""Command-line driver: scenario files in, deterministic tables out.

Subcommands: ``snapshot`` (dressed-state quantities per grid point),
``evolve`` (integrated amplitudes, optionally compared against the
closed-form ratio), ``sweep`` (1- or 2-axis parameter scans with a scalar
reduction per point) and ``validate`` (the named invariant suite).

Exit codes: 0 success, 1 configuration failure (usage, parse, validation),
2 numerical failure (branch ambiguity, step underflow and kin).
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np

from .errors import ConfigError, NumericalError, RatioUndefined, ValidationError
from .nads_core import snapshot_series
from .overlap_transitions import (
    overlap_ee,
    overlap_eg,
    overlap_gg,
    reconstruct_bare_amplitudes,
    transition_probability,
)
from .scenario import (
    Scenario,
    SweepSpec,
    axis_values,
    load_scenario,
    parse_axis,
    scenario_from_dict,
    with_axis_value,
)
from .tables import scenario_header, table_json, table_text, write_text
from .tdse import evolve
from .validation import run_all

__all__ = ["main"]


def _reduce_max_p(scenario: Scenario) -> float:
    series = snapshot_series(scenario.system, scenario.field, scenario.grid())
    return max(
        transition_probability(series.snapshot(k)) for k in range(len(series))
    )


def _final_trajectory(scenario: Scenario):
    return evolve(
        scenario.system,
        scenario.field,
        scenario.grid(),
        init=scenario.initial_state,
        frame=scenario.frame,
        rtol=scenario.rtol,
        atol=scenario.atol,
    )


def _reduce_final_pe(scenario: Scenario) -> float:
    return float(abs(_final_trajectory(scenario).c_e[-1]) ** 2)


def _reduce_final_pg(scenario: Scenario) -> float:
    return float(abs(_final_trajectory(scenario).c_g[-1]) ** 2)


def _reduce_final_norm(scenario: Scenario) -> float:
    return float(_final_trajectory(scenario).norm[-1])


REDUCERS = {
    "maxP": _reduce_max_p,
    "finalPe": _reduce_final_pe,
    "finalPg": _reduce_final_pg,
    "finalNorm": _reduce_final_norm,
}


def _emit(args, title: str, resolved: dict, names, columns) -> None:
    if getattr(args, "json", False):
        text = table_json(title, resolved, names, columns)
    else:
        text = table_text(scenario_header(title, resolved), names, columns)
    write_text(text, args.out)


def cmd_snapshot(args) -> int:
    scenario = load_scenario(args.file)
    series = snapshot_series(scenario.system, scenario.field, scenario.grid())
    n = len(series)
    gg = [overlap_gg(series, k) for k in range(n)]
    ee = [overlap_ee(series, k) for k in range(n)]
    eg = [overlap_eg(series, k) for k in range(n)]
    p = [transition_probability(series.snapshot(k)) for k in range(n)]
    names = [
        "t", "omega", "delta",
        "Re_delta_tilde", "Im_delta_tilde",
        "Re_omega_tilde", "Im_omega_tilde",
        "Re_cos_half", "Im_cos_half",
        "Re_sin_half", "Im_sin_half",
        "Re_omega_G", "Im_omega_G",
        "Re_omega_E", "Im_omega_E",
        "gg", "ee", "Re_eg", "Im_eg", "P",
    ]
    columns = [
        series.grid, series.omega, np.full(n, series.delta),
        series.delta_tilde.real, series.delta_tilde.imag,
        series.omega_tilde.real, series.omega_tilde.imag,
        series.cos_half.real, series.cos_half.imag,
        series.sin_half.real, series.sin_half.imag,
        series.omega_G.real, series.omega_G.imag,
        series.omega_E.real, series.omega_E.imag,
        gg, ee, [z.real for z in eg], [z.imag for z in eg], p,
    ]
    _emit(args, "snapshot table", scenario.resolved(), names, columns)
    return 0


def cmd_evolve(args) -> int:
    scenario = load_scenario(args.file)
    grid = scenario.grid()
    traj = _final_trajectory(scenario)
    names = ["t", "Re_c_g", "Im_c_g", "Re_c_e", "Im_c_e", "norm"]
    columns = [
        grid,
        traj.c_g.real, traj.c_g.imag,
        traj.c_e.real, traj.c_e.imag,
        traj.norm,
    ]
    if args.compare:
        # ratio is |c_e/c_g| for a ground start, |c_g/c_e| for an excited
        # start, from the trajectory and from the closed-form solution.
        if scenario.initial_state == "ground":
            num, den = traj.c_e, traj.c_g
        else:
            num, den = traj.c_g, traj.c_e
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio_traj = np.abs(num) / np.abs(den)
        ratio_traj = np.where(np.isfinite(ratio_traj), ratio_traj, np.nan)
        series = snapshot_series(scenario.system, scenario.field, grid)
        ratio_model = np.empty(len(grid))
        for k in range(len(grid)):
            try:
                ratio_model[k] = abs(
                    reconstruct_bare_amplitudes(
                        series, k, scenario.initial_state
                    ).ratio
                )
            except RatioUndefined:
                ratio_model[k] = np.nan
        names += ["ratio_tdse", "ratio_model"]
        columns += [ratio_traj, ratio_model]
    _emit(args, "evolve table", scenario.resolved(), names, columns)
    return 0


def _worker_count() -> int:
    env = os.environ.get("NADS_WORKERS")
    if env is None:
        return min(8, os.cpu_count() or 1)
    try:
        count = int(env)
    except ValueError as exc:
        raise ValidationError(f"NADS_WORKERS must be an integer, got {env!r}") from exc
    if count < 1:
        raise ValidationError(f"NADS_WORKERS must be >= 1, got {count}")
    return count


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.file)
    if args.reduce not in REDUCERS:
        raise ValidationError(
            f"--reduce must be one of {sorted(REDUCERS)}, got '{args.reduce}'"
        )
    axes = tuple(parse_axis(text) for text in args.axis)
    SweepSpec(base=scenario, axes=axes, reduce=args.reduce)
    values = [axis_values(axis) for axis in axes]
    combos = list(itertools.product(*values))
    resolved = scenario.resolved()

    def run_point(combo):
        doc = resolved
        for axis, value in zip(axes, combo):
            doc = with_axis_value(doc, axis.path, value)
        point = scenario_from_dict(doc, origin="scenario")
        return REDUCERS[args.reduce](point)

    def safe_point(combo):
        try:
            return run_point(combo), ""
        except (ConfigError, NumericalError) as exc:
            return float("nan"), f"{type(exc).__name__}: {exc}"

    workers = _worker_count()
    if workers == 1 or len(combos) == 1:
        results = [safe_point(combo) for combo in combos]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(safe_point, combos))

    names = [axis.path for axis in axes] + [args.reduce, "error"]
    columns: list[list] = [
        [combo[i] for combo in combos] for i in range(len(axes))
    ]
    columns.append([value for value, _ in results])
    columns.append([err for _, err in results])
    _emit(args, "sweep table", resolved, names, columns)
    return 0


def cmd_validate(args) -> int:
    results = run_all()
    if args.json:
        text = json.dumps(
            [r.as_dict() for r in results], indent=2, sort_keys=True
        ) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in results)
    write_text(text, None)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nads",
        description="Dressed-state quantities, overlaps and amplitude "
        "evolution for a driven damped two-level system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_snap = sub.add_parser("snapshot", help="dressed-state table per grid point")
    p_snap.add_argument("file", help="scenario file (JSON)")
    p_snap.add_argument("--out", default=None, help="output path (default stdout)")
    p_snap.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_snap.set_defaults(func=cmd_snapshot)

    p_evolve = sub.add_parser("evolve", help="integrate the amplitude equations")
    p_evolve.add_argument("file", help="scenario file (JSON)")
    p_evolve.add_argument(
        "--compare",
        action="store_true",
        help="add closed-form vs integrated amplitude-ratio columns",
    )
    p_evolve.add_argument("--out", default=None, help="output path (default stdout)")
    p_evolve.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_evolve.set_defaults(func=cmd_evolve)

    p_sweep = sub.add_parser("sweep", help="scan 1-2 parameters, one scalar per point")
    p_sweep.add_argument("file", help="base scenario file (JSON)")
    p_sweep.add_argument(
        "--axis",
        action="append",
        required=True,
        metavar="PATH:MIN:MAX:COUNT[:log]",
        help="swept parameter (repeat for a second axis)",
    )
    p_sweep.add_argument(
        "--reduce",
        required=True,
        help=f"scalar per sweep point, one of {sorted(REDUCERS)}",
    )
    p_sweep.add_argument("--out", default=None, help="output path (default stdout)")
    p_sweep.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the invariant suite")
    p_val.add_argument("--json", action="store_true", help="machine-readable report")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage problems are configuration
        # failures here (exit 1), while --help stays 0.
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
