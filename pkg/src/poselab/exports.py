"""File exports: CSV grids/curves and JSON summaries.

Every artifact carries a provenance header (tool version, a short hash
of the problem definition, the generating configuration) so a rendered
figure can be traced back to its inputs. CSV headers are '#'-prefixed
comment lines; JSON artifacts carry a "provenance" object.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from .chordal import CriticalPoint, angular_chordal_cost, reduced_chordal_cost
from .geodesic import GeodesicMinimum, angular_geodesic_cost, profile_cost, reduced_geodesic_cost
from .problem import BenchmarkProblem, problem_to_dict
from .reduction import build_reduced_model
from .sweep import SweepResult
from .optimizer import TERMINATION_NAMES
from .version import __version__

SURFACE_KINDS = ("angular-geodesic", "reduced-geodesic", "angular-chordal", "reduced-chordal")


def problem_hash(problem: BenchmarkProblem) -> str:
    """Short stable hash of the problem definition (label included)."""
    payload = {"label": problem.label, **problem_to_dict(problem)}
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def _provenance_lines(problem: BenchmarkProblem, fields: dict) -> list[str]:
    lines = [
        f"# poselab {__version__}",
        f"# problem: label={problem.label} hash={problem_hash(problem)}",
    ]
    lines += [f"# {key}: {value}" for key, value in fields.items()]
    return lines


def _provenance_dict(problem: BenchmarkProblem) -> dict:
    return {"tool": "poselab", "version": __version__, "problem_hash": problem_hash(problem)}


def write_profile_csv(problem: BenchmarkProblem, path, n: int = 2001) -> None:
    """Sample the three region profiles over the phi1 range of S.

    Columns: phi1, f_1_km1, f_1_k0, f_1_kp1 (region k = -1, 0, +1).
    """
    model = build_reduced_model(problem.measurements)
    ms = problem.measurements
    grid = np.linspace(ms.phi01 - np.pi, ms.phi01 + np.pi, n)
    cols = [grid] + [profile_cost(model, grid, k) for k in (-1, 0, 1)]
    lines = _provenance_lines(problem, {"kind": "profile-1d", "points": n})
    lines.append("phi1,f_1_km1,f_1_k0,f_1_kp1")
    for row in zip(*cols):
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _surface_fn(problem: BenchmarkProblem, which: str):
    ms = problem.measurements
    if which == "angular-geodesic":
        return lambda Phi: angular_geodesic_cost(ms, Phi)
    if which == "angular-chordal":
        return lambda Phi: angular_chordal_cost(ms, Phi)
    model = build_reduced_model(ms)
    if which == "reduced-geodesic":
        return lambda Phi: reduced_geodesic_cost(model, Phi)
    if which == "reduced-chordal":
        return lambda Phi: reduced_chordal_cost(model, Phi)
    raise ValueError(f"unknown surface kind {which!r}; expected one of {SURFACE_KINDS}")


def write_surface_csv(problem: BenchmarkProblem, which: str, n: int, path) -> None:
    """Sample a cost surface on an inclusive n x n grid of S.

    Row r holds phi2 = axis2[r] (ascending), columns run over phi1.
    """
    fn = _surface_fn(problem, which)
    ms = problem.measurements
    axis1 = np.linspace(ms.phi01 - np.pi, ms.phi01 + np.pi, n)
    axis2 = np.linspace(ms.phi02 - np.pi, ms.phi02 + np.pi, n)
    G2, G1 = np.meshgrid(axis2, axis1, indexing="ij")
    values = fn(np.stack([G1, G2], axis=-1))
    lines = _provenance_lines(
        problem,
        {
            "kind": f"surface.{which}",
            "phi1_axis": f"start={axis1[0]:.17g} stop={axis1[-1]:.17g} n={n}",
            "phi2_axis": f"start={axis2[0]:.17g} stop={axis2[-1]:.17g} n={n}",
            "layout": "rows are phi2 ascending, columns are phi1 ascending",
        },
    )
    for row in values:
        lines.append(",".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_grid_csv(result: SweepResult, path) -> None:
    """Write the basin label matrix with its axis ranges.

    Codes: 0 converged to a global minimum, a positive integer i
    converged to catalog entry i (non-global), -1 unmatched (failed).
    """
    n = result.config.grid_n
    lines = _provenance_lines(
        result.problem,
        {
            "kind": f"basin-grid.{result.config.cost_kind}",
            "phi1_axis": f"start={result.axis1[0]:.17g} stop={result.axis1[-1]:.17g} n={n}",
            "phi2_axis": f"start={result.axis2[0]:.17g} stop={result.axis2[-1]:.17g} n={n}",
            "layout": "rows are phi2 ascending, columns are phi1 ascending",
            "codes": "0=global i=catalog-entry-i -1=failed",
        },
    )
    for row in result.labels:
        lines.append(",".join(str(int(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_grid_csv(path):
    """Read back a basin grid: (labels, metadata dict from the header)."""
    meta: dict[str, str] = {}
    rows = []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, value = body.partition(":")
                meta[key.strip()] = value.strip()
            continue
        rows.append([int(tok) for tok in line.split(",")])
    return np.array(rows, dtype=int), meta


def _catalog_entry_dict(entry, is_global: bool) -> dict:
    if isinstance(entry, GeodesicMinimum):
        return {
            "source": "geodesic",
            "phi": [float(entry.phi[0]), float(entry.phi[1])],
            "cost": float(entry.cost),
            "region": int(entry.region),
            "is_global": bool(is_global),
            "second_derivative_1d": float(entry.second_derivative_1d),
            "on_boundary": bool(entry.on_boundary),
        }
    if isinstance(entry, CriticalPoint):
        return {
            "source": "chordal",
            "phi": [float(entry.phi[0]), float(entry.phi[1])],
            "cost": float(entry.cost),
            "kind": entry.kind,
            "is_global": bool(is_global),
            "grad_norm": float(entry.grad_norm),
            "hessian": [[float(x) for x in row] for row in np.asarray(entry.hessian)],
            "on_boundary": bool(entry.on_boundary),
        }
    raise TypeError(f"unknown catalog entry type {type(entry)!r}")


def _measurement_echo(problem: BenchmarkProblem) -> dict:
    ms = problem.measurements
    return {
        "p01": [float(ms.p01[0]), float(ms.p01[1])],
        "p12": [float(ms.p12[0]), float(ms.p12[1])],
        "p02": [float(ms.p02[0]), float(ms.p02[1])],
        "phi01": ms.phi01,
        "phi12": ms.phi12,
        "phi02": ms.phi02,
        "sigma": ms.sigma,
    }


def summary_dict(result: SweepResult) -> dict:
    """Full JSON-ready summary of a sweep."""
    opts = result.config.minimize_options
    labels = result.labels
    failed_idx = np.argwhere(labels == -1)
    failed = []
    for row, col in failed_idx:
        failed.append(
            {
                "row": int(row),
                "col": int(col),
                "phi": [float(result.final_phi[row, col, 0]), float(result.final_phi[row, col, 1])],
                "termination": TERMINATION_NAMES[int(result.terminations[row, col])],
                "grad_norm": float(result.grad_norms[row, col]),
                "iterations": int(result.iterations[row, col]),
            }
        )
    return {
        "provenance": _provenance_dict(result.problem),
        "problem": {
            "label": result.problem.label,
            **problem_to_dict(result.problem),
            "measurements": _measurement_echo(result.problem),
        },
        "config": {
            "grid_n": result.config.grid_n,
            "cost_kind": result.config.cost_kind,
            "match_tol": result.config.match_tol,
            "minimize_options": {
                "grad_tol": opts.grad_tol,
                "step_tol": opts.step_tol,
                "max_iter": opts.max_iter,
                "initial_hessian_scale": opts.initial_hessian_scale,
            },
        },
        "axes": {
            "phi1": {"start": float(result.axis1[0]), "stop": float(result.axis1[-1]), "n": int(result.config.grid_n)},
            "phi2": {"start": float(result.axis2[0]), "stop": float(result.axis2[-1]), "n": int(result.config.grid_n)},
        },
        "percentages": {
            "global": result.pct_global,
            "local": result.pct_local,
            "failed": result.pct_failed,
        },
        "catalog": [
            _catalog_entry_dict(entry, bool(result.global_mask[i]))
            for i, entry in enumerate(result.catalog)
        ],
        "failed_points": failed,
    }


def write_summary_json(result: SweepResult, path) -> None:
    Path(path).write_text(json.dumps(summary_dict(result), indent=2) + "\n")


def _critical_point_dict(p: CriticalPoint) -> dict:
    return {
        "phi": [float(p.phi[0]), float(p.phi[1])],
        "cost": float(p.cost),
        "kind": p.kind,
        "grad_norm": float(p.grad_norm),
        "hessian": [[float(x) for x in row] for row in np.asarray(p.hessian)],
        "on_boundary": bool(p.on_boundary),
    }


def write_critical_points_json(problem: BenchmarkProblem, points: list[CriticalPoint], path, method: str) -> None:
    """JSON report of a critical-point enumeration."""
    payload = {
        "provenance": _provenance_dict(problem),
        "method": method,
        "points": [_critical_point_dict(p) for p in points],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def write_critical_points_comparison_json(
    problem: BenchmarkProblem,
    analytic: list[CriticalPoint],
    numeric: list[CriticalPoint],
    path,
) -> None:
    """Analytic and numeric enumerations side by side, with the worst
    analytic-to-numeric match distance (the numeric set may legitimately
    contain extra points the analytic catalog does not cover)."""
    worst = 0.0
    for p in analytic:
        dists = [float(np.max(np.abs(q.phi - p.phi))) for q in numeric]
        worst = max(worst, min(dists) if dists else np.inf)
    payload = {
        "provenance": _provenance_dict(problem),
        "method": "both",
        "analytic": [_critical_point_dict(p) for p in analytic],
        "numeric": [_critical_point_dict(p) for p in numeric],
        "max_match_distance": float(worst),
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
