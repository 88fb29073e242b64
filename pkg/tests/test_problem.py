"""Problem construction: synthesis, mismatch injection, benchmarks, I/O."""

import numpy as np
import pytest

from poselab.angles import wrap
from poselab.problem import (
    DEFAULT_SPLIT,
    LOOP_SPLIT,
    BenchmarkProblem,
    GroundTruth,
    InvalidProblemError,
    MeasurementSet,
    apply_orientation_mismatch,
    benchmark_problem,
    custom_problem,
    load_problem,
    measurements_from_ground_truth,
    mismatch,
    problem_from_dict,
    problem_to_dict,
    save_problem,
)
from poselab.reduction import full_geodesic_cost

from conftest import random_ground_truth


def test_synthesis_identity_headings():
    gt = GroundTruth(p1=(1.0, 0.0), p2=(1.0, 1.0), phi1=0.0, phi2=0.0)
    ms = measurements_from_ground_truth(gt, 1.0)
    np.testing.assert_allclose(ms.p01, [1, 0])
    np.testing.assert_allclose(ms.p12, [0, 1])
    np.testing.assert_allclose(ms.p02, [1, 1])
    assert ms.phi01 == ms.phi12 == ms.phi02 == 0.0
    assert mismatch(ms) == 0.0


def test_synthesis_rotates_into_source_frame():
    # a quarter-turn at pose 1 swings the 1->2 displacement into its frame
    gt = GroundTruth(p1=(1.0, 0.0), p2=(1.0, 1.0), phi1=np.pi / 2, phi2=0.0)
    ms = measurements_from_ground_truth(gt, 1.0)
    np.testing.assert_allclose(ms.p12, [1, 0], atol=1e-15)


def test_synthesis_zeroes_cost_at_ground_truth(rng):
    for _ in range(20):
        gt = random_ground_truth(rng)
        ms = measurements_from_ground_truth(gt, 1.0)
        P = np.concatenate([gt.p1, gt.p2])
        Phi = np.array([gt.phi1, gt.phi2])
        assert full_geodesic_cost(ms, P, Phi) <= 1e-18


def test_mismatch_injection_default_split(rng):
    ms = measurements_from_ground_truth(random_ground_truth(rng), 1.0)
    same = apply_orientation_mismatch(ms, 0.0)
    assert (same.phi01, same.phi12, same.phi02) == (ms.phi01, ms.phi12, ms.phi02)
    bumped = apply_orientation_mismatch(ms, 0.3)
    assert mismatch(bumped) == pytest.approx(0.3, abs=1e-12)
    assert bumped.phi01 - ms.phi01 == pytest.approx(0.1, abs=1e-12)
    assert bumped.phi12 - ms.phi12 == pytest.approx(0.1, abs=1e-12)
    assert bumped.phi02 - ms.phi02 == pytest.approx(-0.1, abs=1e-12)


def test_mismatch_injection_leaves_positions_bit_identical(rng):
    ms = measurements_from_ground_truth(random_ground_truth(rng), 1.0)
    bumped = apply_orientation_mismatch(ms, 0.7)
    for name in ("p01", "p12", "p02"):
        assert np.array_equal(getattr(bumped, name), getattr(ms, name))


@pytest.mark.parametrize("eps", [0.0, 0.1, -0.1, np.pi / 2, -np.pi / 2, np.pi])
@pytest.mark.parametrize("split", [DEFAULT_SPLIT, LOOP_SPLIT])
def test_mismatch_round_trip(rng, eps, split):
    ms = measurements_from_ground_truth(random_ground_truth(rng), 1.0)
    out = mismatch(apply_orientation_mismatch(ms, eps, split=split))
    # eps = pi lands on the seam and reads back as -pi
    assert abs(wrap(out - eps)) <= 1e-12


def test_loop_split_keeps_first_edge_heading_exact(rng):
    ms = measurements_from_ground_truth(random_ground_truth(rng), 1.0)
    bumped = apply_orientation_mismatch(ms, np.pi, split=LOOP_SPLIT)
    assert bumped.phi01 == ms.phi01


def test_bad_split_rejected(rng):
    ms = measurements_from_ground_truth(random_ground_truth(rng), 1.0)
    with pytest.raises(InvalidProblemError):
        apply_orientation_mismatch(ms, 0.5, split=(0.5, 0.5, 0.5))
    with pytest.raises(InvalidProblemError):
        apply_orientation_mismatch(ms, 0.5, split=(1.0, 1.0))


def test_benchmark_table():
    expected = {
        1: (np.pi / 12, np.pi / 6, 0.0),
        2: (np.pi / 2, np.pi / 2, 0.1),
        3: (-np.pi / 4, -np.pi / 2, np.pi / 2),
    }
    for pid, (phi1, phi2, eps) in expected.items():
        prob = benchmark_problem(pid)
        assert prob.ground_truth.phi1 == pytest.approx(phi1, abs=1e-15)
        assert prob.ground_truth.phi2 == pytest.approx(phi2, abs=1e-15)
        assert prob.epsilon == pytest.approx(eps, abs=1e-15)
        np.testing.assert_allclose(prob.ground_truth.p1, [1, 0])
        np.testing.assert_allclose(prob.ground_truth.p2, [1, 1])
        assert prob.measurements.sigma == 1.0
        assert abs(wrap(mismatch(prob.measurements) - eps)) <= 1e-12


def test_benchmark_unknown_id():
    with pytest.raises(ValueError):
        benchmark_problem(4)


def test_benchmark_position_override():
    prob = benchmark_problem(3, p1=(3.0, 0.0), p2=(3.0, 3.0))
    np.testing.assert_allclose(prob.ground_truth.p2, [3, 3])
    assert prob.epsilon == pytest.approx(np.pi / 2)


def test_benchmark_invariant_enforced():
    prob = benchmark_problem(2)
    with pytest.raises(InvalidProblemError):
        BenchmarkProblem(
            ground_truth=prob.ground_truth,
            epsilon=0.5,  # does not match the stored measurements
            measurements=prob.measurements,
            label="broken",
        )


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(p1=(0.0, 0.0), p2=(1.0, 1.0), phi1=0.0, phi2=0.0),  # pose 1 on origin
        dict(p1=(1.0, 0.0), p2=(1.0, 0.0), phi1=0.0, phi2=0.0),  # coincident poses
        dict(p1=(1.0, np.nan), p2=(1.0, 1.0), phi1=0.0, phi2=0.0),
        dict(p1=(1.0, 0.0), p2=(1.0, 1.0), phi1=np.inf, phi2=0.0),
    ],
)
def test_ground_truth_rejects_degenerate(kwargs):
    with pytest.raises(InvalidProblemError):
        GroundTruth(**kwargs)


def test_measurement_set_rejects_degenerate():
    ok = dict(p01=(1, 0), p12=(0, 1), p02=(1, 1), phi01=0.0, phi12=0.0, phi02=0.0, sigma=1.0)
    MeasurementSet(**ok)
    with pytest.raises(InvalidProblemError):
        MeasurementSet(**{**ok, "p12": (0.0, 0.0)})
    with pytest.raises(InvalidProblemError):
        MeasurementSet(**{**ok, "sigma": 0.0})
    with pytest.raises(InvalidProblemError):
        MeasurementSet(**{**ok, "sigma": -1.0})
    with pytest.raises(InvalidProblemError):
        MeasurementSet(**{**ok, "phi02": np.nan})


def test_sigma_split_defaults_to_shared_scale():
    ms = measurements_from_ground_truth(
        GroundTruth(p1=(1, 0), p2=(1, 1), phi1=0.1, phi2=0.2), 2.0
    )
    assert ms.position_sigma == ms.heading_sigma == 2.0
    import dataclasses

    both = dataclasses.replace(ms, sigma_p=0.5)
    assert both.position_sigma == 0.5
    assert both.heading_sigma == 2.0


def test_save_load_round_trip(tmp_path, rng):
    for eps, split in [(0.0, DEFAULT_SPLIT), (0.4, DEFAULT_SPLIT), (np.pi, LOOP_SPLIT)]:
        prob = custom_problem(random_ground_truth(rng), eps, 1.3, split=split)
        path = tmp_path / "prob.json"
        save_problem(prob, path)
        back = load_problem(path)
        np.testing.assert_allclose(back.ground_truth.p1, prob.ground_truth.p1, atol=1e-15)
        np.testing.assert_allclose(back.ground_truth.p2, prob.ground_truth.p2, atol=1e-15)
        assert back.epsilon == pytest.approx(prob.epsilon, abs=1e-15)
        ms0, ms1 = prob.measurements, back.measurements
        for name in ("phi01", "phi12", "phi02", "sigma"):
            assert getattr(ms1, name) == pytest.approx(getattr(ms0, name), abs=1e-12)


def test_nondefault_split_survives_serialization(rng):
    prob = custom_problem(random_ground_truth(rng), np.pi, 1.0, split=LOOP_SPLIT)
    data = problem_to_dict(prob)
    assert data["split"] == pytest.approx([0.0, 0.5, -0.5], abs=1e-12)
    back = problem_from_dict(data)
    assert back.measurements.phi01 == pytest.approx(prob.measurements.phi01, abs=1e-12)


def test_load_rejects_corrupted_files(tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{ not json")
    with pytest.raises(InvalidProblemError):
        load_problem(bad_json)

    missing = tmp_path / "missing_key.json"
    missing.write_text('{"epsilon": 0.0, "sigma": 1.0}')
    with pytest.raises(InvalidProblemError):
        load_problem(missing)

    toplevel = tmp_path / "list.json"
    toplevel.write_text("[1, 2, 3]")
    with pytest.raises(InvalidProblemError):
        load_problem(toplevel)
