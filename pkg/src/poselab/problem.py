"""Problem definitions: ground truth, measurement synthesis, benchmarks.

A problem instance is three planar poses. Pose 0 is pinned to the origin
with zero heading and is never stored; poses 1 and 2 carry a position and
a heading angle. Measurements are the three relative translations and the
three relative headings along the edges (0,1), (1,2), (0,2), all sharing
one noise scale sigma.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .angles import rot2, wrap

_COINCIDENT_TOL = 1e-12


class InvalidProblemError(ValueError):
    """Raised when a problem violates a structural invariant."""


def _as_point(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (2,):
        raise InvalidProblemError(f"{name} must be a length-2 point, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidProblemError(f"{name} must be finite")
    return arr


@dataclass(frozen=True)
class GroundTruth:
    """True poses 1 and 2 (pose 0 is the fixed origin with zero heading).

    Attributes
    ----------
    p1, p2 : ndarray, shape (2,)
        Positions. Neither may coincide with the origin or with each other.
    phi1, phi2 : float
        Headings in radians, stored unwrapped.
    """

    p1: np.ndarray
    p2: np.ndarray
    phi1: float
    phi2: float

    def __post_init__(self):
        object.__setattr__(self, "p1", _as_point(self.p1, "p1"))
        object.__setattr__(self, "p2", _as_point(self.p2, "p2"))
        for name in ("phi1", "phi2"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise InvalidProblemError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if np.linalg.norm(self.p1) < _COINCIDENT_TOL or np.linalg.norm(self.p2) < _COINCIDENT_TOL:
            raise InvalidProblemError("poses must not sit on the fixed origin pose")
        if np.linalg.norm(self.p2 - self.p1) < _COINCIDENT_TOL:
            raise InvalidProblemError("poses 1 and 2 must not coincide")


@dataclass(frozen=True)
class MeasurementSet:
    """The six relative measurements plus their shared noise scale.

    Attributes
    ----------
    p01, p12, p02 : ndarray, shape (2,)
        Relative translations, expressed in the frame of the first pose
        of each edge. None may be the zero vector.
    phi01, phi12, phi02 : float
        Relative headings in radians, stored unwrapped.
    sigma : float
        Standard deviation of every measurement channel. The position
        and heading channels may be given different scales through
        ``sigma_p``; by default both equal ``sigma``.
    sigma_p : float or None
        Optional separate scale for the position channels.
    """

    p01: np.ndarray
    p12: np.ndarray
    p02: np.ndarray
    phi01: float
    phi12: float
    phi02: float
    sigma: float
    sigma_p: float | None = None

    def __post_init__(self):
        for name in ("p01", "p12", "p02"):
            arr = _as_point(getattr(self, name), name)
            if np.linalg.norm(arr) < _COINCIDENT_TOL:
                raise InvalidProblemError(f"measurement {name} must not be the zero vector")
            object.__setattr__(self, name, arr)
        for name in ("phi01", "phi12", "phi02"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise InvalidProblemError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        sigma = float(self.sigma)
        if not (np.isfinite(sigma) and sigma > 0):
            raise InvalidProblemError("sigma must be a positive finite number")
        object.__setattr__(self, "sigma", sigma)
        if self.sigma_p is not None:
            sp = float(self.sigma_p)
            if not (np.isfinite(sp) and sp > 0):
                raise InvalidProblemError("sigma_p must be a positive finite number")
            object.__setattr__(self, "sigma_p", sp)

    @property
    def position_sigma(self) -> float:
        return self.sigma if self.sigma_p is None else self.sigma_p

    @property
    def heading_sigma(self) -> float:
        return self.sigma


def measurements_from_ground_truth(gt: GroundTruth, sigma: float) -> MeasurementSet:
    """Synthesize the noise-free measurement set of a ground truth.

    Relative translations are the true displacements rotated into the
    source-pose frame; relative headings are plain (unwrapped) heading
    differences. The resulting set has zero heading mismatch and zero
    cost at the ground truth under either error metric.
    """
    p0 = np.zeros(2)
    p01 = gt.p1 - p0
    p12 = rot2(gt.phi1).T @ (gt.p2 - gt.p1)
    p02 = gt.p2 - p0
    return MeasurementSet(
        p01=p01,
        p12=p12,
        p02=p02,
        phi01=gt.phi1,
        phi12=gt.phi2 - gt.phi1,
        phi02=gt.phi2,
        sigma=sigma,
    )


DEFAULT_SPLIT = (1.0 / 3.0, 1.0 / 3.0, -1.0 / 3.0)

# Keeps phi01 exact; the whole mismatch sits on the two loop edges. With
# phi01 untouched, the heading implied by the (noise-free) positions
# stays equal to phi01, which is what the closed-form antipodal
# stationary-point catalog relies on.
LOOP_SPLIT = (0.0, 0.5, -0.5)


def apply_orientation_mismatch(ms: MeasurementSet, eps: float, split=DEFAULT_SPLIT) -> MeasurementSet:
    """Perturb the heading measurements so their loop mismatch equals ``eps``.

    ``split`` gives the per-edge shares (s01, s12, s02): the headings
    become (phi01 + s01*eps, phi12 + s12*eps, phi02 + s02*eps). The
    shares must satisfy s01 + s12 - s02 = 1 so the loop mismatch comes
    out as exactly ``eps``. The default spreads the mismatch evenly over
    all three edges; ``LOOP_SPLIT`` keeps phi01 exact. Positions are
    untouched either way.
    """
    try:
        s01, s12, s02 = (float(s) for s in split)
    except (TypeError, ValueError) as exc:
        raise InvalidProblemError(f"mismatch split must be three numbers, got {split!r}") from exc
    if abs(s01 + s12 - s02 - 1.0) > 1e-12:
        raise InvalidProblemError(
            f"mismatch split {split!r} must satisfy s01 + s12 - s02 = 1"
        )
    return dataclasses.replace(
        ms,
        phi01=ms.phi01 + s01 * eps,
        phi12=ms.phi12 + s12 * eps,
        phi02=ms.phi02 + s02 * eps,
    )


def mismatch(ms: MeasurementSet) -> float:
    """Wrapped loop mismatch of the heading measurements.

    Zero exactly when the three heading measurements are mutually
    consistent around the 0 -> 1 -> 2 -> 0 loop.
    """
    return wrap(ms.phi01 + ms.phi12 - ms.phi02)


@dataclass(frozen=True)
class BenchmarkProblem:
    """A ground truth bundled with its mismatched measurement set."""

    ground_truth: GroundTruth
    epsilon: float
    measurements: MeasurementSet
    label: str

    def __post_init__(self):
        resid = wrap(mismatch(self.measurements) - self.epsilon)
        if abs(resid) > 1e-12:
            raise InvalidProblemError(
                f"measurement mismatch {mismatch(self.measurements):.6g} does not "
                f"equal epsilon {self.epsilon:.6g} (wrapped residual {resid:.3g})"
            )


_BENCHMARK_TABLE = {
    1: (np.pi / 12.0, np.pi / 6.0, 0.0),
    2: (np.pi / 2.0, np.pi / 2.0, 0.1),
    3: (-np.pi / 4.0, -np.pi / 2.0, np.pi / 2.0),
}


def benchmark_problem(problem_id: int, p1=(1.0, 0.0), p2=(1.0, 1.0), sigma: float = 1.0) -> BenchmarkProblem:
    """Build one of the three standard benchmark problems.

    The ids fix the ground-truth headings and the heading mismatch:
    1 -> headings (pi/12, pi/6), mismatch 0; 2 -> (pi/2, pi/2), 0.1;
    3 -> (-pi/4, -pi/2), pi/2. Positions default to p1=(1,0), p2=(1,1)
    and may be overridden; sigma defaults to 1.
    """
    if problem_id not in _BENCHMARK_TABLE:
        raise ValueError(f"unknown benchmark id {problem_id!r}; expected 1, 2 or 3")
    phi1, phi2, eps = _BENCHMARK_TABLE[problem_id]
    gt = GroundTruth(p1=p1, p2=p2, phi1=phi1, phi2=phi2)
    ms = apply_orientation_mismatch(measurements_from_ground_truth(gt, sigma), eps)
    return BenchmarkProblem(ground_truth=gt, epsilon=eps, measurements=ms, label=f"benchmark{problem_id}")


def custom_problem(
    gt: GroundTruth, epsilon: float, sigma: float, label: str = "custom", split=DEFAULT_SPLIT
) -> BenchmarkProblem:
    """Synthesize measurements for ``gt`` and inject the given mismatch."""
    ms = apply_orientation_mismatch(measurements_from_ground_truth(gt, sigma), epsilon, split=split)
    return BenchmarkProblem(ground_truth=gt, epsilon=epsilon, measurements=ms, label=label)


def _recovered_split(problem: BenchmarkProblem):
    """Per-edge mismatch shares, reconstructed from the stored values.

    Returns None for epsilon = 0, where the shares are unobservable.
    """
    eps = problem.epsilon
    if abs(eps) < 1e-12:
        return None
    gt = problem.ground_truth
    ms = problem.measurements
    return (
        (ms.phi01 - gt.phi1) / eps,
        (ms.phi12 - (gt.phi2 - gt.phi1)) / eps,
        (ms.phi02 - gt.phi2) / eps,
    )


def problem_to_dict(problem: BenchmarkProblem) -> dict:
    gt = problem.ground_truth
    data = {
        "ground_truth": {
            "p1": [gt.p1[0], gt.p1[1]],
            "p2": [gt.p2[0], gt.p2[1]],
            "phi1": gt.phi1,
            "phi2": gt.phi2,
        },
        "epsilon": problem.epsilon,
        "sigma": problem.measurements.sigma,
    }
    split = _recovered_split(problem)
    if split is not None and max(abs(s - d) for s, d in zip(split, DEFAULT_SPLIT)) > 1e-9:
        data["split"] = list(split)
    return data


def problem_from_dict(data: dict, label: str = "custom") -> BenchmarkProblem:
    try:
        gt_data = data["ground_truth"]
        gt = GroundTruth(
            p1=gt_data["p1"],
            p2=gt_data["p2"],
            phi1=gt_data["phi1"],
            phi2=gt_data["phi2"],
        )
        epsilon = float(data["epsilon"])
        sigma = float(data["sigma"])
        split = tuple(float(s) for s in data.get("split", DEFAULT_SPLIT))
    except KeyError as exc:
        raise InvalidProblemError(f"problem definition is missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise InvalidProblemError(f"malformed problem definition: {exc}") from exc
    return custom_problem(gt, epsilon, sigma, label=label, split=split)


def save_problem(problem: BenchmarkProblem, path) -> None:
    Path(path).write_text(json.dumps(problem_to_dict(problem), indent=2) + "\n")


def load_problem(path) -> BenchmarkProblem:
    p = Path(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise InvalidProblemError(f"{p}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InvalidProblemError(f"{p}: expected a JSON object at top level")
    return problem_from_dict(data, label=p.stem)
