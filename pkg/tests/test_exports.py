"""CSV/JSON artifacts: provenance, shapes, and read-back fidelity."""

import json

import numpy as np
import pytest

from poselab.chordal import critical_points_numeric, critical_points_perfect
from poselab.exports import (
    SURFACE_KINDS,
    problem_hash,
    read_grid_csv,
    summary_dict,
    write_critical_points_comparison_json,
    write_critical_points_json,
    write_grid_csv,
    write_profile_csv,
    write_summary_json,
    write_surface_csv,
)
from poselab.geodesic import geodesic_minima_catalog, reduced_geodesic_cost
from poselab.chordal import reduced_chordal_cost
from poselab.problem import benchmark_problem
from poselab.reduction import build_reduced_model
from poselab.sweep import COST_CHORDAL, SweepConfig, run_sweep


def _read_csv_matrix(path):
    rows = []
    header = []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            header.append(line)
        elif line.strip():
            rows.append(line)
    return header, rows


def test_problem_hash_stable_and_distinct():
    a1 = problem_hash(benchmark_problem(1))
    a2 = problem_hash(benchmark_problem(1))
    b = problem_hash(benchmark_problem(2))
    assert a1 == a2
    assert a1 != b
    assert len(a1) == 12


def test_profile_csv(tmp_path):
    prob = benchmark_problem(1)
    path = tmp_path / "profile.csv"
    write_profile_csv(prob, path, n=401)
    header, rows = _read_csv_matrix(path)
    assert any("profile-1d" in h for h in header)
    assert any(problem_hash(prob) in h for h in header)
    assert rows[0] == "phi1,f_1_km1,f_1_k0,f_1_kp1"
    data = np.array([[float(t) for t in r.split(",")] for r in rows[1:]])
    assert data.shape == (401, 4)
    assert np.all(np.diff(data[:, 0]) > 0)
    # column minima sit where the catalog says, up to the grid pitch
    model = build_reduced_model(prob.measurements)
    catalog = geodesic_minima_catalog(model)
    pitch = data[1, 0] - data[0, 0]
    for m in catalog:
        col = {-1: 1, 0: 2, 1: 3}[m.region]
        grid_argmin = data[np.argmin(data[:, col]), 0]
        assert abs(grid_argmin - m.phi[0]) <= pitch


@pytest.mark.parametrize("which", SURFACE_KINDS)
def test_surface_csv_matches_direct_evaluation(tmp_path, which):
    prob = benchmark_problem(2)
    path = tmp_path / "surface.csv"
    n = 21
    write_surface_csv(prob, which, n, path)
    header, rows = _read_csv_matrix(path)
    data = np.array([[float(t) for t in r.split(",")] for r in rows])
    assert data.shape == (n, n)
    ms = prob.measurements
    axis1 = np.linspace(ms.phi01 - np.pi, ms.phi01 + np.pi, n)
    axis2 = np.linspace(ms.phi02 - np.pi, ms.phi02 + np.pi, n)
    from poselab.exports import _surface_fn

    fn = _surface_fn(prob, which)
    for r, c in [(0, 0), (0, n - 1), (n - 1, 0), (n - 1, n - 1), (n // 2, n // 3)]:
        direct = fn(np.array([axis1[c], axis2[r]]))
        assert data[r, c] == pytest.approx(float(direct), rel=1e-12, abs=1e-12)


def test_surface_csv_value_ranges(tmp_path):
    prob = benchmark_problem(1)
    p1 = tmp_path / "ageo.csv"
    write_surface_csv(prob, "angular-geodesic", 41, p1)
    _, rows = _read_csv_matrix(p1)
    data = np.array([[float(t) for t in r.split(",")] for r in rows])
    # three wrapped squared residuals can never exceed 3*pi^2 at sigma 1
    assert np.max(data) <= 3 * np.pi**2 + 1e-9
    p2 = tmp_path / "rchord.csv"
    write_surface_csv(prob, "reduced-chordal", 101, p2)
    _, rows = _read_csv_matrix(p2)
    data = np.array([[float(t) for t in r.split(",")] for r in rows])
    model = build_reduced_model(prob.measurements)
    assert np.min(data) == pytest.approx(0.0, abs=1e-3)  # global minimum on the grid


def test_surface_unknown_kind_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_surface_csv(benchmark_problem(1), "mystery", 5, tmp_path / "x.csv")


def test_grid_csv_round_trip(tmp_path):
    res = run_sweep(benchmark_problem(1), SweepConfig(grid_n=24))
    path = tmp_path / "grid.csv"
    write_grid_csv(res, path)
    labels, meta = read_grid_csv(path)
    assert np.array_equal(labels, res.labels)
    assert labels.dtype.kind == "i"
    assert meta["kind"] == "basin-grid.geodesic"
    assert "codes" in meta
    assert f"n={res.config.grid_n}" in meta["phi1_axis"]
    start = float(meta["phi1_axis"].split()[0].split("=")[1])
    assert start == pytest.approx(res.axis1[0], abs=1e-12)


def test_summary_json(tmp_path):
    res = run_sweep(benchmark_problem(3), SweepConfig(grid_n=24))
    path = tmp_path / "summary.json"
    write_summary_json(res, path)
    data = json.loads(path.read_text())
    assert data["provenance"]["tool"] == "poselab"
    assert data["provenance"]["problem_hash"] == problem_hash(benchmark_problem(3))
    assert data["config"]["grid_n"] == 24
    assert data["config"]["minimize_options"]["max_iter"] >= 1
    pct = data["percentages"]
    assert pct["global"] + pct["local"] + pct["failed"] == pytest.approx(100.0)
    assert len(data["catalog"]) == len(res.catalog)
    assert data["catalog"][0]["is_global"] is True
    assert data["problem"]["measurements"]["sigma"] == 1.0
    np.testing.assert_allclose(
        data["problem"]["ground_truth"]["p1"], [1.0, 0.0]
    )
    assert data["axes"]["phi1"]["n"] == 24
    # every failed point carries its diagnostics
    for fp in data["failed_points"]:
        assert {"row", "col", "phi", "termination", "grad_norm", "iterations"} <= set(fp)


def test_summary_failed_points_listed(tmp_path):
    from poselab.optimizer import MinimizeOptions

    res = run_sweep(
        benchmark_problem(1),
        SweepConfig(grid_n=8, minimize_options=MinimizeOptions(max_iter=1, grad_tol=1e-12)),
    )
    data = summary_dict(res)
    assert len(data["failed_points"]) == int(round(res.pct_failed / 100 * 64))
    assert all(fp["termination"] in ("max_iter", "step_tol", "line_search_fail", "grad_tol") for fp in data["failed_points"])


def test_critical_points_json(tmp_path):
    prob = benchmark_problem(1)
    model = build_reduced_model(prob.measurements)
    analytic = critical_points_perfect(model)
    numeric = critical_points_numeric(model)
    p1 = tmp_path / "points.json"
    write_critical_points_json(prob, analytic, p1, method="closed-form")
    data = json.loads(p1.read_text())
    assert data["method"] == "closed-form"
    assert len(data["points"]) == 11
    kinds = [p["kind"] for p in data["points"]]
    assert kinds.count("min") == 1 and kinds.count("max") == 2
    for p in data["points"]:
        assert np.asarray(p["hessian"]).shape == (2, 2)

    p2 = tmp_path / "compare.json"
    write_critical_points_comparison_json(prob, analytic, numeric, p2)
    comp = json.loads(p2.read_text())
    assert len(comp["analytic"]) == len(comp["numeric"]) == 11
    assert comp["max_match_distance"] <= 1e-8
