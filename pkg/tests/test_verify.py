"""The named self-check suite should be green on its builtin problems."""

import numpy as np

from poselab.problem import benchmark_problem
from poselab.verify import (
    CheckResult,
    check_anchor_heading_phase,
    check_corrupted_problem_rejected,
    default_problem_set,
    run_checks,
)


def test_default_problem_set_composition():
    problems = default_problem_set()
    labels = [p.label for p in problems]
    assert len(labels) == len(set(labels))
    assert len(problems) == 5
    # one perfect, one antipodal, and a wide-triangle quarter-turn variant
    eps = [abs(p.epsilon) for p in problems]
    assert min(eps) < 1e-12
    assert any(abs(e - np.pi) < 1e-12 for e in eps)
    assert any("wide" in lbl for lbl in labels)


def test_run_checks_all_green():
    results = run_checks()
    assert len(results) == 56
    names = [r.name for r in results]
    assert len(names) == len(set(names))
    failed = [r for r in results if not r.passed]
    assert failed == []
    for r in results:
        assert isinstance(r, CheckResult)
        assert r.detail  # every check explains itself


def test_run_checks_single_problem_subset():
    results = run_checks([benchmark_problem(2)])
    # ten unconditional checks plus the problem-free corruption check;
    # benchmark 2 carries a generic mismatch so no conditional checks fire
    assert len(results) == 11
    assert all(r.passed for r in results)
    assert all("[benchmark2]" in r.name or "corrupted" in r.name for r in results)


def test_individual_check_callable():
    r = check_anchor_heading_phase(benchmark_problem(1))
    assert r.passed
    assert r.name == "anchor-heading-phase"
    assert "worst" in r.detail


def test_corruption_check_standalone():
    r = check_corrupted_problem_rejected()
    assert r.passed
    assert "rejected" in r.detail
