"""Command-line front end: single solves, parameter sweeps and property checks.

Exit codes: 0 ok, 1 property-check failure, 2 usage or config error,
3 solver failure, 4 I/O error, 5 sweep completed with failed points.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .channel import gains_from_scenario
from .config import ConfigError, parse_schemes, scenario_from_file, sweep_spec_from_file
from .coop_optimizer import ConvergenceError, SolverConfig, solve
from .checks import run_checks
from .sweeps import preset_spec, run_sweep, write_csv

EXIT_OK = 0
EXIT_PROPERTY_FAILURE = 1
EXIT_USAGE = 2
EXIT_SOLVER_FAILURE = 3
EXIT_IO = 4
EXIT_PARTIAL_FAILURE = 5


def _add_solver_args(parser):
    parser.add_argument("--delta", type=float, default=1e-3,
                        help="line-search step for t1 (default 1e-3)")
    parser.add_argument("--sigma", type=float, default=1e-6,
                        help="bisection rate tolerance (default 1e-6)")
    parser.add_argument("--max-bisect-iters", type=int, default=200,
                        help="bisection iteration cap (default 200)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wpcn",
        description="Max-min throughput optimizer for a two-user wireless-powered "
                    "cooperative network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="optimal time allocation for one scenario")
    p_solve.add_argument("--config", required=True, help="scenario config file (key = value)")
    p_solve.add_argument("--json", action="store_true",
                         help="compact single-line JSON instead of indented output")
    _add_solver_args(p_solve)

    p_sweep = sub.add_parser("sweep", help="parameter sweep across schemes, CSV + figure out")
    src = p_sweep.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=("fig4", "fig5", "fig6"),
                     help="bundled sweep definition")
    src.add_argument("--spec", help="sweep spec file (key = value)")
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.add_argument("--schemes", help="comma-separated scheme subset")
    p_sweep.add_argument("--points", type=int, help="override number of sweep points")
    p_sweep.add_argument("--no-plot", action="store_true",
                         help="skip rendering the PNG next to the CSV")
    _add_solver_args(p_sweep)

    p_check = sub.add_parser("check", help="run seeded property checks")
    p_check.add_argument("--seed", type=int, required=True, help="RNG seed")
    p_check.add_argument("--n", type=int, required=True, help="number of random instances")
    p_check.add_argument("--oracle-step", type=float, default=2e-3,
                         help="grid step for the brute-force oracle (default 2e-3)")
    _add_solver_args(p_check)
    return parser


def _solver_config(args) -> SolverConfig:
    return SolverConfig(delta=args.delta, sigma=args.sigma,
                        max_bisect_iters=args.max_bisect_iters)


def _binding_rate(bd) -> str:
    rates_at = {"R_X2": bd.R_X2, "R_Y3": bd.R_Y3, "R_X4": bd.R_X4}
    return min(rates_at, key=rates_at.get)


def cmd_solve(args) -> int:
    try:
        scenario = scenario_from_file(args.config)
    except OSError as err:
        print(f"error: cannot read config: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _solver_config(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE

    gains = gains_from_scenario(scenario)
    try:
        res = solve(gains, scenario.t0, cfg)
    except ConvergenceError as err:
        print(f"error: solver failed: {err}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE

    bd = res.breakdown
    a = res.allocation
    doc = {
        "allocation": {"t0": scenario.t0, "t1": a.t1, "t2": a.t2, "t3": a.t3, "t4": a.t4},
        "rates": {"R_X2": bd.R_X2, "R_Y3": bd.R_Y3, "R_X4": bd.R_X4,
                  "R_X": bd.R_X, "R_Y": bd.R_Y, "R_common": bd.R_common},
        "energy": {"E_X": bd.E_X, "E_Y": bd.E_Y, "P_X": bd.P_X, "P_Y": bd.P_Y},
        "residuals": {"exchange_balance": res.residuals[0],
                      "exchange_vs_joint": res.residuals[1]},
        "binding": _binding_rate(bd),
        "evaluations": res.evaluations,
        "solver": dataclasses.asdict(cfg),
    }
    print(json.dumps(doc) if args.json else json.dumps(doc, indent=2))
    return EXIT_OK


def _threads_from_env() -> int:
    raw = os.environ.get("WPCN_THREADS", "").strip()
    if not raw:
        return 0
    try:
        return max(int(raw), 0)
    except ValueError:
        raise ConfigError(f"WPCN_THREADS must be an integer, got {raw!r}") from None


def cmd_sweep(args) -> int:
    try:
        spec = preset_spec(args.preset) if args.preset else sweep_spec_from_file(args.spec)
        if args.schemes:
            spec = dataclasses.replace(spec, schemes=parse_schemes(args.schemes))
        if args.points is not None:
            spec = dataclasses.replace(spec, points=args.points)
        cfg = _solver_config(args)
        threads = _threads_from_env()
    except OSError as err:
        print(f"error: cannot read spec: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE

    rows = run_sweep(spec, cfg=cfg, threads=threads)
    try:
        write_csv(rows, args.out)
    except OSError as err:
        print(f"error: cannot write {args.out}: {err}", file=sys.stderr)
        return EXIT_IO

    if not args.no_plot:
        png = str(Path(args.out).with_suffix(".png"))
        try:
            from .plots import render_sweep_figure
            render_sweep_figure(rows, png, title=spec.preset)
        except OSError as err:
            print(f"error: cannot write {png}: {err}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {args.out} and {png}")
    else:
        print(f"wrote {args.out}")

    failed = sum(1 for r in rows if r.status != "ok")
    if failed:
        print(f"warning: {failed} of {len(rows)} sweep points failed", file=sys.stderr)
        return EXIT_PARTIAL_FAILURE
    return EXIT_OK


def cmd_check(args) -> int:
    if args.n < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.seed < 0:
        print("error: --seed must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = _solver_config(args)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE

    outcomes = run_checks(args.seed, args.n, cfg, args.oracle_step)
    for outcome in outcomes:
        print(outcome.line())
    failures = [o for o in outcomes if not o.passed]
    if failures:
        replay = {"seed": args.seed, "n": args.n,
                  "failures": [{"check": o.name, "instance": o.failure} for o in failures]}
        print(json.dumps(replay, indent=2))
        return EXIT_PROPERTY_FAILURE
    print("all checks passed")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors
        return int(exc.code or 0)
    if args.command == "solve":
        return cmd_solve(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    return cmd_check(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
