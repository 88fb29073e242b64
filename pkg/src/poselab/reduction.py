"""Closed-form elimination of the translation variables.

The full cost of the 3-pose problem splits into a translation part and a
heading part. For a fixed heading of pose 1 the translation part is a
linear least-squares problem, so the translations can be eliminated in
closed form. Doing the algebra once yields three scalars (c0, a0,
theta0) such that the optimal translation cost is

    c0 - 2 * a0 * cos(phi1 - theta0),

leaving a two-variable problem in the headings only. This module builds
that reduced model and evaluates the full (unreduced) costs used as
consistency oracles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import chordal_err_sq, rot2, wrap
from .problem import MeasurementSet


class SingularProblemError(ValueError):
    """Raised when a least-squares system is rank deficient or ill posed."""


class DegenerateProblemError(ValueError):
    """Raised when measurements collapse the reduction (a0 = 0)."""


@dataclass(frozen=True)
class GlsSolution:
    """Solution of a generalized least-squares problem.

    Attributes
    ----------
    x_star : ndarray
        Minimizer of |A x - b|^2 weighted by C^{-1}.
    cost_star : float
        Minimal cost value, equal to b^T q b.
    q : ndarray
        Residual projector C^{-1} - C^{-1} A (A^T C^{-1} A)^{-1} A^T C^{-1}.
        Symmetric positive semidefinite; annihilates the column space of A.
    """

    x_star: np.ndarray
    cost_star: float
    q: np.ndarray


def gls_solve(A: np.ndarray, b: np.ndarray, C: np.ndarray) -> GlsSolution:
    """Minimize the C^{-1}-weighted squared residual |A x - b|.

    Parameters
    ----------
    A : ndarray, shape (n, m)
        Design matrix; must have full column rank.
    b : ndarray, shape (n,)
        Observation vector.
    C : ndarray, shape (n, n)
        Symmetric positive-definite covariance of the observations.

    Raises
    ------
    SingularProblemError
        If C is not symmetric positive definite or A is rank deficient.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    C = np.asarray(C, dtype=float)
    n, m = A.shape
    scale = max(1.0, float(np.max(np.abs(C))))
    if not np.allclose(C, C.T, atol=1e-10 * scale):
        raise SingularProblemError("covariance C must be symmetric")
    try:
        np.linalg.cholesky(C)
    except np.linalg.LinAlgError as exc:
        raise SingularProblemError("covariance C must be positive definite") from exc
    Cinv = np.linalg.inv(C)
    M = A.T @ Cinv @ A
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError as exc:
        raise SingularProblemError("design matrix A must have full column rank") from exc
    if np.linalg.cond(M) > 1e12:
        raise SingularProblemError("normal matrix is numerically singular")
    Minv = np.linalg.inv(M)
    x_star = Minv @ (A.T @ (Cinv @ b))
    q = Cinv - Cinv @ A @ Minv @ A.T @ Cinv
    q = 0.5 * (q + q.T)
    cost = float(b @ q @ b)
    return GlsSolution(x_star=x_star, cost_star=cost, q=q)


# Stacked design matrix of the translation subproblem: rows are the
# residuals of edges (0,1), (1,2), (0,2) in the unknowns [p1; p2].
_A6 = np.array(
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 1.0, 0.0],
        [0.0, -1.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)


def _block_rot(phi: float) -> np.ndarray:
    """Block-diagonal rotation diag(R(phi), R(phi), R(phi))."""
    out = np.zeros((6, 6))
    R = rot2(phi)
    for i in range(3):
        out[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = R
    return out


# With a spherical covariance the scale cancels from the minimizer, so the
# translation solve is a fixed pseudo-inverse applied to the stacked data.
_PINV_A6 = np.linalg.pinv(_A6)


def position_design_matrix() -> np.ndarray:
    """Copy of the stacked 6x4 design matrix of the translation system."""
    return _A6.copy()


@dataclass(frozen=True)
class ReducedModel:
    """Precomputed constants of the translation elimination.

    Attributes
    ----------
    c0 : float
        Constant term of the eliminated translation cost.
    a0 : float
        Amplitude of its cosine term; positive for nondegenerate data.
    theta0 : float
        Phase of the cosine term. For noise-free translations it equals
        the measured heading of edge (0,1).
    q6 : ndarray, shape (6, 6)
        Residual projector of the translation system.
    z0, z1 : ndarray, shape (6,)
        Stacked measurement vectors [p01; 0; p02] and [0; p12; 0].
    measurements : MeasurementSet
        The set the model was built from.
    """

    c0: float
    a0: float
    theta0: float
    q6: np.ndarray
    z0: np.ndarray
    z1: np.ndarray
    measurements: MeasurementSet


def build_reduced_model(ms: MeasurementSet) -> ReducedModel:
    """Eliminate the translations of a measurement set in closed form.

    Raises
    ------
    DegenerateProblemError
        If the cosine amplitude a0 vanishes (degenerate geometry), which
        would leave the reduced problem without a translation-induced
        heading preference.
    """
    sp = ms.position_sigma
    C6 = sp * sp * np.eye(6)
    z0 = np.concatenate([ms.p01, np.zeros(2), ms.p02])
    z1 = np.concatenate([np.zeros(2), ms.p12, np.zeros(2)])
    q6 = gls_solve(_A6, z0, C6).q
    u = float(z0 @ q6 @ z1)
    v = float(z0 @ q6 @ _block_rot(np.pi / 2.0) @ z1)
    a0 = float(np.hypot(u, v))
    c0 = float(z0 @ q6 @ z0 + z1 @ q6 @ z1)
    if a0 < 1e-12 * max(1.0, c0):
        raise DegenerateProblemError("degenerate measurements: cosine amplitude a0 vanishes")
    theta0 = float(np.arctan2(-v, -u))
    if c0 <= 0.0 or c0 - 2.0 * a0 < -1e-10:
        raise DegenerateProblemError(
            f"inconsistent reduction constants c0={c0:.6g}, a0={a0:.6g}"
        )
    return ReducedModel(c0=c0, a0=a0, theta0=theta0, q6=q6, z0=z0, z1=z1, measurements=ms)


def eliminated_position_cost(model: ReducedModel, phi1) -> np.ndarray | float:
    """Optimal translation cost as a function of phi1 alone.

    Vectorized over ``phi1``.
    """
    return model.c0 - 2.0 * model.a0 * np.cos(np.asarray(phi1, dtype=float) - model.theta0)


def positions_star(model: ReducedModel, phi1: float) -> np.ndarray:
    """Optimal translations [p1; p2] for a fixed heading of pose 1."""
    b = model.z0 + _block_rot(phi1) @ model.z1
    return _PINV_A6 @ b


def position_cost(ms: MeasurementSet, P, phi1: float) -> float:
    """Translation part of the full cost at translations P = [p1; p2]."""
    P = np.asarray(P, dtype=float).reshape(4)
    p1, p2 = P[:2], P[2:]
    sp = ms.position_sigma
    e01 = ms.p01 - p1
    e12 = ms.p12 - rot2(phi1).T @ (p2 - p1)
    e02 = ms.p02 - p2
    return float(e01 @ e01 + e12 @ e12 + e02 @ e02) / (sp * sp)


def full_geodesic_cost(ms: MeasurementSet, P, Phi) -> float:
    """Full cost with wrapped (arc-length) heading residuals.

    ``P`` stacks the translations [p1; p2]; ``Phi`` holds the headings
    (phi1, phi2). Value is invariant under adding 2*pi to either heading.
    """
    phi1, phi2 = float(Phi[0]), float(Phi[1])
    sh = ms.heading_sigma
    r01 = wrap(ms.phi01 - phi1)
    r12 = wrap(ms.phi12 - (phi2 - phi1))
    r02 = wrap(ms.phi02 - phi2)
    return position_cost(ms, P, phi1) + (r01 * r01 + r12 * r12 + r02 * r02) / (sh * sh)


def full_chordal_cost(ms: MeasurementSet, P, Phi) -> float:
    """Full cost with rotation-matrix (chordal) heading residuals."""
    phi1, phi2 = float(Phi[0]), float(Phi[1])
    sh = ms.heading_sigma
    angular = (
        chordal_err_sq(ms.phi01, phi1)
        + chordal_err_sq(phi1 + ms.phi12, phi2)
        + chordal_err_sq(ms.phi02, phi2)
    )
    return position_cost(ms, P, phi1) + angular / (2.0 * sh * sh)
