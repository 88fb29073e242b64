"""Command line front end.

Subcommands: analyze, profile-1d, surface, critical-points, sweep, verify.
All outputs carry a provenance header (tool version, problem hash, config).
Exit codes: 0 success, 1 verification failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from pathlib import Path

import numpy as np

from .chordal import (
    KIND_MIN,
    anchor_aligned,
    critical_points_antipodal,
    critical_points_numeric,
    critical_points_perfect,
)
from .exports import (
    SURFACE_KINDS,
    problem_hash,
    write_critical_points_comparison_json,
    write_critical_points_json,
    write_grid_csv,
    write_profile_csv,
    write_summary_json,
    write_surface_csv,
)
from .geodesic import curvature_case, geodesic_minima_catalog
from .optimizer import MinimizeOptions
from .problem import (
    BenchmarkProblem,
    InvalidProblemError,
    benchmark_problem,
    custom_problem,
    load_problem,
    mismatch,
)
from .reduction import DegenerateProblemError, SingularProblemError, build_reduced_model
from .sweep import COST_CHORDAL, COST_GEODESIC, SweepConfig, SweepConfigError, run_sweep, summarize
from .verify import run_checks
from .version import __version__


def _add_problem_flags(sub: argparse.ArgumentParser) -> None:
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--problem", type=int, choices=(1, 2, 3), default=1, help="builtin benchmark id")
    group.add_argument("--problem-file", type=Path, help="problem JSON file")
    sub.add_argument("--sigma", type=float, default=None, help="override noise scale")
    sub.add_argument("--p1", type=float, nargs=2, metavar=("X", "Y"), default=None, help="override pose-1 position")
    sub.add_argument("--p2", type=float, nargs=2, metavar=("X", "Y"), default=None, help="override pose-2 position")
    sub.add_argument("--epsilon", type=float, default=None, help="override heading mismatch")


def _problem_from_args(args: argparse.Namespace) -> BenchmarkProblem:
    if args.problem_file is not None:
        problem = load_problem(args.problem_file)
        overrides = (args.sigma, args.p1, args.p2, args.epsilon)
        if all(v is None for v in overrides):
            return problem
        gt = problem.ground_truth
        if args.p1 is not None:
            gt = dataclasses.replace(gt, p1=np.asarray(args.p1, dtype=float))
        if args.p2 is not None:
            gt = dataclasses.replace(gt, p2=np.asarray(args.p2, dtype=float))
        sigma = problem.measurements.sigma if args.sigma is None else args.sigma
        epsilon = problem.epsilon if args.epsilon is None else args.epsilon
        return custom_problem(gt, epsilon, sigma, label=problem.label)
    kwargs = {}
    if args.p1 is not None:
        kwargs["p1"] = tuple(args.p1)
    if args.p2 is not None:
        kwargs["p2"] = tuple(args.p2)
    if args.sigma is not None:
        kwargs["sigma"] = args.sigma
    problem = benchmark_problem(args.problem, **kwargs)
    if args.epsilon is not None:
        problem = custom_problem(
            problem.ground_truth,
            args.epsilon,
            problem.measurements.sigma,
            label=f"{problem.label}-eps{args.epsilon:g}",
        )
    return problem


def _analytic_census(problem: BenchmarkProblem, model):
    """Closed-form critical points when the mismatch admits them, else None."""
    if not anchor_aligned(model):
        return None
    eps = mismatch(problem.measurements)
    if abs(eps) <= 1e-9:
        return critical_points_perfect(model)
    if abs(abs(eps) - np.pi) <= 1e-9:
        return critical_points_antipodal(model)
    return None


def _cmd_analyze(args: argparse.Namespace) -> int:
    problem = _problem_from_args(args)
    ms = problem.measurements
    model = build_reduced_model(ms)
    print(f"poselab {__version__}")
    print(f"problem: label={problem.label} hash={problem_hash(problem)}")
    print(f"epsilon (wrapped heading mismatch): {mismatch(ms): .12g}")
    print(f"c0: {model.c0:.12g}")
    print(f"a0: {model.a0:.12g}")
    print(f"theta0: {model.theta0:.12g}  (phi01: {ms.phi01:.12g})")
    print(f"curvature case: {curvature_case(model)}")
    catalog = geodesic_minima_catalog(model)
    print(f"geodesic minima ({len(catalog)}):")
    for m in catalog:
        tag = "global" if m.is_global else "local "
        print(
            f"  [{tag}] phi1={m.phi[0]: .9f} phi2={m.phi[1]: .9f}"
            f" cost={m.cost: .9g} region={m.region:+d} curvature={m.second_derivative_1d:.6g}"
        )
    points = _analytic_census(problem, model)
    method = "analytic"
    if points is None:
        method = "numeric"
        points = critical_points_numeric(model)
    mins = [p for p in points if p.kind == KIND_MIN]
    print(f"chordal stationary points ({len(points)}, {method}), {len(mins)} minima:")
    for p in points:
        side = " boundary" if p.on_boundary else ""
        print(f"  [{p.kind:6s}] phi1={p.phi[0]: .9f} phi2={p.phi[1]: .9f} cost={p.cost: .9g}{side}")
    return 0


def _cmd_profile_1d(args: argparse.Namespace) -> int:
    problem = _problem_from_args(args)
    write_profile_csv(problem, args.out, n=args.n)
    print(f"wrote {args.out}")
    return 0


def _cmd_surface(args: argparse.Namespace) -> int:
    problem = _problem_from_args(args)
    write_surface_csv(problem, args.which, args.n, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_critical_points(args: argparse.Namespace) -> int:
    problem = _problem_from_args(args)
    model = build_reduced_model(problem.measurements)
    analytic = _analytic_census(problem, model)
    if args.method == "analytic":
        if analytic is None:
            print(
                "error: analytic enumeration needs a perfect (epsilon=0) problem, or an"
                " antipodal (epsilon=pi) one with the mismatch kept off the 0->1 edge;"
                f" this one has epsilon={mismatch(problem.measurements):.6g}",
                file=sys.stderr,
            )
            return 2
        write_critical_points_json(problem, analytic, args.out, method="analytic")
    elif args.method == "numeric":
        write_critical_points_json(problem, critical_points_numeric(model), args.out, method="numeric")
    else:
        numeric = critical_points_numeric(model)
        if analytic is None:
            print("note: no analytic enumeration for this epsilon; writing numeric only")
            write_critical_points_json(problem, numeric, args.out, method="numeric")
        else:
            write_critical_points_comparison_json(problem, analytic, numeric, args.out)
    print(f"wrote {args.out}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    problem = _problem_from_args(args)
    opts = MinimizeOptions(
        grad_tol=args.grad_tol,
        step_tol=args.step_tol,
        max_iter=args.max_iter,
        initial_hessian_scale=args.hessian_scale,
    )
    cfg = SweepConfig(
        grid_n=args.grid_n,
        cost_kind=args.cost,
        match_tol=args.match_tol,
        minimize_options=opts,
    )
    out_dir = args.out
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    result = run_sweep(problem, cfg)
    elapsed = time.perf_counter() - t0
    grid_path = out_dir / "sweep_grid.csv"
    summary_path = out_dir / "sweep_summary.json"
    write_grid_csv(result, grid_path)
    write_summary_json(result, summary_path)
    row = summarize(result)
    print(
        f"{row['label']} {row['cost_kind']} grid={row['grid_n']}x{row['grid_n']}"
        f" global={row['pct_global']:.4f}% local={row['pct_local']:.4f}% failed={row['pct_failed']:.4f}%"
        f" catalog={row['catalog_size']} elapsed={elapsed:.1f}s"
    )
    print(f"wrote {grid_path}")
    print(f"wrote {summary_path}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    problems = None
    if args.problem_file is not None or any(
        v is not None for v in (args.sigma, args.p1, args.p2, args.epsilon)
    ) or args.problem_given:
        problems = [_problem_from_args(args)]
    results = run_checks(problems)
    failed = 0
    for r in results:
        if r.passed:
            print(f"PASS {r.name}: {r.detail}")
        else:
            failed += 1
            print(f"FAIL {r.name}: {r.detail}")
    print(f"{len(results)} checks, {failed} failed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poselab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"poselab {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p_analyze = subparsers.add_parser("analyze", help="print reduction constants and both minima catalogs")
    _add_problem_flags(p_analyze)
    p_analyze.set_defaults(fn=_cmd_analyze)

    p_profile = subparsers.add_parser("profile-1d", help="export the three one-variable cost profiles as CSV")
    _add_problem_flags(p_profile)
    p_profile.add_argument("--n", type=int, default=2001, help="sample count (inclusive endpoints)")
    p_profile.add_argument("--out", type=Path, required=True, help="output CSV path")
    p_profile.set_defaults(fn=_cmd_profile_1d)

    p_surface = subparsers.add_parser("surface", help="export an n-by-n cost surface as CSV")
    _add_problem_flags(p_surface)
    p_surface.add_argument("--which", choices=SURFACE_KINDS, required=True, help="cost surface to sample")
    p_surface.add_argument("--n", type=int, default=201, help="samples per axis")
    p_surface.add_argument("--out", type=Path, required=True, help="output CSV path")
    p_surface.set_defaults(fn=_cmd_surface)

    p_crit = subparsers.add_parser("critical-points", help="enumerate chordal stationary points to JSON")
    _add_problem_flags(p_crit)
    p_crit.add_argument("--method", choices=("analytic", "numeric", "both"), default="both")
    p_crit.add_argument("--out", type=Path, required=True, help="output JSON path")
    p_crit.set_defaults(fn=_cmd_critical_points)

    p_sweep = subparsers.add_parser("sweep", help="run a region-of-attraction sweep and export grid + summary")
    _add_problem_flags(p_sweep)
    p_sweep.add_argument("--cost", choices=(COST_GEODESIC, COST_CHORDAL), required=True)
    p_sweep.add_argument("--grid-n", type=int, default=500)
    p_sweep.add_argument("--match-tol", type=float, default=1e-3)
    p_sweep.add_argument("--grad-tol", type=float, default=1e-6)
    p_sweep.add_argument("--step-tol", type=float, default=1e-10)
    p_sweep.add_argument("--max-iter", type=int, default=500)
    p_sweep.add_argument(
        "--hessian-scale",
        type=float,
        default=1.0,
        help="scale of the minimizer's identity curvature seed",
    )
    p_sweep.add_argument("--out", type=Path, required=True, help="output directory")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_verify = subparsers.add_parser("verify", help="run the named self-check suite")
    _add_problem_flags(p_verify)
    p_verify.set_defaults(fn=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    raw = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(raw)
    # verify runs its builtin problem set unless the user pinned a problem
    args.problem_given = any(a == "--problem" or a.startswith("--problem=") for a in raw)
    try:
        return args.fn(args)
    except (InvalidProblemError, SweepConfigError, DegenerateProblemError, SingularProblemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
