"""Rotation-matrix (chordal) heading cost and its critical points.

The chordal heading cost replaces wrapped squared angles with squared
Frobenius distances between rotation matrices, which trades the
geodesic cost's seams for a smooth trigonometric landscape. This module
evaluates the reduced cost, its exact gradient and Hessian, and
enumerates critical points three ways: in closed form for consistent
measurements, in closed form for a half-turn mismatch, and numerically
for any mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angles import wrap
from .geodesic import domain_center, wrap_into_domain
from .problem import MeasurementSet, mismatch
from .reduction import ReducedModel, eliminated_position_cost

KIND_MIN = "min"
KIND_MAX = "max"
KIND_SADDLE = "saddle"
KIND_INDEFINITE = "indefinite"

_EIG_ZERO_TOL = 1e-10
_SEED_GRID = 64
_NEWTON_GRAD_TOL = 1e-10
_NEWTON_MAX_ITER = 200
_NEWTON_MAX_HALVINGS = 50
_DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class CriticalPoint:
    """A stationary point of the reduced chordal cost.

    Attributes
    ----------
    phi : ndarray, shape (2,)
        Location on the closed square S.
    cost : float
        Reduced-cost value.
    kind : str
        One of "min", "max", "saddle", "indefinite"; eigenvalues within
        1e-10 of zero demote the point to "indefinite".
    hessian : ndarray, shape (2, 2)
        Exact Hessian at the point (factor-2 convention of the full
        squared-residual cost).
    grad_norm : float
        Euclidean norm of the exact gradient there.
    on_boundary : bool
        Set when the point lies on the edge of S.
    """

    phi: np.ndarray
    cost: float
    kind: str
    hessian: np.ndarray
    grad_norm: float
    on_boundary: bool


def angular_chordal_cost(ms: MeasurementSet, Phi):
    """Heading part of the chordal cost; smooth and periodic.

    Equals (2/sigma^2) * (3 - cos(d1) - cos(d2) - cos(r12)) where d1, d2
    are the anchored heading residuals and r12 the middle-edge residual.
    Vectorized over leading axes.
    """
    Phi = np.asarray(Phi, dtype=float)
    ms_sh = ms.heading_sigma
    d1 = ms.phi01 - Phi[..., 0]
    d2 = ms.phi02 - Phi[..., 1]
    r12 = ms.phi12 - (Phi[..., 1] - Phi[..., 0])
    out = (2.0 / (ms_sh * ms_sh)) * (3.0 - np.cos(d1) - np.cos(d2) - np.cos(r12))
    if np.ndim(out) == 0:
        return float(out)
    return out


def reduced_chordal_cost(model: ReducedModel, Phi):
    """Chordal cost with translations eliminated."""
    Phi = np.asarray(Phi, dtype=float)
    out = eliminated_position_cost(model, Phi[..., 0]) + angular_chordal_cost(model.measurements, Phi)
    if np.ndim(out) == 0:
        return float(out)
    return out


def reduced_chordal_grad(model: ReducedModel, Phi):
    """Exact gradient of the reduced chordal cost. Vectorized."""
    Phi = np.asarray(Phi, dtype=float)
    ms = model.measurements
    inv = 2.0 / (ms.heading_sigma ** 2)
    d1 = ms.phi01 - Phi[..., 0]
    d2 = ms.phi02 - Phi[..., 1]
    r12 = ms.phi12 - (Phi[..., 1] - Phi[..., 0])
    g1 = 2.0 * model.a0 * np.sin(Phi[..., 0] - model.theta0) + inv * (-np.sin(d1) + np.sin(r12))
    g2 = inv * (-np.sin(d2) - np.sin(r12))
    return np.stack([g1, g2], axis=-1)


def reduced_chordal_hess(model: ReducedModel, Phi):
    """Exact Hessian of the reduced chordal cost. Vectorized."""
    Phi = np.asarray(Phi, dtype=float)
    ms = model.measurements
    inv = 2.0 / (ms.heading_sigma ** 2)
    d1 = ms.phi01 - Phi[..., 0]
    d2 = ms.phi02 - Phi[..., 1]
    r12 = ms.phi12 - (Phi[..., 1] - Phi[..., 0])
    c12 = np.cos(r12)
    h11 = 2.0 * model.a0 * np.cos(Phi[..., 0] - model.theta0) + inv * (np.cos(d1) + c12)
    h12 = inv * (-c12)
    h22 = inv * (np.cos(d2) + c12)
    row1 = np.stack([h11, h12], axis=-1)
    row2 = np.stack([h12, h22], axis=-1)
    return np.stack([row1, row2], axis=-2)


def classify_hessian(H: np.ndarray, zero_tol: float = _EIG_ZERO_TOL) -> str:
    """Kind label from the eigenvalue signs of a symmetric 2x2 matrix."""
    lam = np.linalg.eigvalsh(np.asarray(H, dtype=float))
    if np.any(np.abs(lam) < zero_tol):
        return KIND_INDEFINITE
    if np.all(lam > 0.0):
        return KIND_MIN
    if np.all(lam < 0.0):
        return KIND_MAX
    return KIND_SADDLE


def _b0(model: ReducedModel) -> float:
    sh = model.measurements.heading_sigma
    return 1.0 + model.a0 * sh * sh


def anchor_aligned(model: ReducedModel, tol: float = 1e-9) -> bool:
    """True when the measured 0->1 heading matches the heading implied
    by the positions.

    Both closed-form catalogs lean on this identity: it merges the
    position-elimination term and the first anchored heading term into a
    single cosine. Consistent measurements satisfy it automatically; a
    mismatch injected with ``LOOP_SPLIT`` preserves it, the default
    evenly-spread injection does not.
    """
    return abs(wrap(model.measurements.phi01 - model.theta0)) <= tol


def _on_edge(model: ReducedModel, phi: np.ndarray, tol: float = 1e-9) -> bool:
    c = domain_center(model.measurements)
    return bool(np.any(np.abs(np.abs(phi - c) - np.pi) <= tol))


def _make_point(model: ReducedModel, phi, on_boundary: bool = False) -> CriticalPoint:
    phi = np.asarray(phi, dtype=float)
    H = reduced_chordal_hess(model, phi)
    return CriticalPoint(
        phi=phi,
        cost=reduced_chordal_cost(model, phi),
        kind=classify_hessian(H),
        hessian=H,
        grad_norm=float(np.linalg.norm(reduced_chordal_grad(model, phi))),
        on_boundary=on_boundary or _on_edge(model, phi),
    )


def _sort_points(points: list[CriticalPoint]) -> list[CriticalPoint]:
    return sorted(points, key=lambda p: (p.phi[0], p.phi[1]))


def critical_points_perfect(model: ReducedModel) -> list[CriticalPoint]:
    """The eleven critical points for consistent heading measurements.

    One interior minimum at the measured headings, two interior maxima
    on the branch where the phi2 stationarity holds identically, and
    eight sign-indefinite points on the boundary of S (the corner and
    edge-midpoint offsets of the center).

    Raises
    ------
    ValueError
        If the measurement mismatch is not zero (within 1e-9).
    """
    ms = model.measurements
    if abs(mismatch(ms)) > 1e-9:
        raise ValueError("closed-form enumeration requires consistent heading measurements")
    if not anchor_aligned(model):
        raise ValueError(
            "closed-form enumeration requires the 0->1 heading measurement to match "
            "the heading implied by the positions"
        )
    c = domain_center(ms)
    points = [_make_point(model, c, on_boundary=False)]
    eta = float(np.arccos(-1.0 / (2.0 * _b0(model))))
    for s in (1.0, -1.0):
        phi2 = c[1] + s * eta
        phi1 = 2.0 * phi2 - ms.phi02 - ms.phi12
        phi1 = c[0] + wrap(phi1 - c[0])
        points.append(_make_point(model, (phi1, phi2), on_boundary=False))
    offsets = [(np.pi, np.pi), (np.pi, -np.pi), (-np.pi, np.pi), (-np.pi, -np.pi),
               (np.pi, 0.0), (-np.pi, 0.0), (0.0, np.pi), (0.0, -np.pi)]
    for d1, d2 in offsets:
        points.append(_make_point(model, (c[0] + d1, c[1] + d2), on_boundary=True))
    return _sort_points(points)


def critical_points_antipodal(model: ReducedModel) -> list[CriticalPoint]:
    """Closed-form critical points for a half-turn heading mismatch.

    Parameterized by eta, the offset of phi2 below the measured value,
    along the branch where the phi2 stationarity holds identically:
    two interior minima of equal cost at eta = +-arccos(1/(2*b0)), a
    saddle at eta = 0, and boundary maxima at eta = +-pi. Further
    stationary points on the second branch are left to the numeric
    enumeration.

    Raises
    ------
    ValueError
        If the measurement mismatch is not a half turn (within 1e-9),
        or if the 0->1 heading measurement disagrees with the
        position-implied heading (see ``anchor_aligned``).
    """
    ms = model.measurements
    if abs(abs(mismatch(ms)) - np.pi) > 1e-9:
        raise ValueError("closed-form enumeration requires a half-turn heading mismatch")
    if not anchor_aligned(model):
        raise ValueError(
            "closed-form antipodal enumeration requires the 0->1 heading measurement "
            "to match the heading implied by the positions; inject the mismatch with "
            "LOOP_SPLIT so phi01 stays exact"
        )
    c = domain_center(ms)

    def on_branch(eta: float, on_boundary: bool) -> CriticalPoint:
        phi2 = c[1] - eta
        phi1 = 2.0 * phi2 - ms.phi02 - ms.phi12
        phi1 = c[0] + wrap(phi1 - c[0])
        return _make_point(model, (phi1, phi2), on_boundary=on_boundary)

    eta = float(np.arccos(1.0 / (2.0 * _b0(model))))
    points = [on_branch(eta, False), on_branch(-eta, False), on_branch(0.0, False),
              on_branch(np.pi, True), on_branch(-np.pi, True)]
    return _sort_points(points)


def _newton_refine(model: ReducedModel, seeds: np.ndarray) -> np.ndarray:
    """Damped Newton iteration on the gradient from many seeds.

    Returns the converged points (gradient norm below 1e-10); seeds that
    stall, meet a singular Hessian, or exhaust the iteration budget are
    dropped.
    """
    X = seeds.astype(float).copy()
    g = reduced_chordal_grad(model, X)
    gn = np.linalg.norm(g, axis=1)
    alive = np.isfinite(gn)
    done = alive & (gn <= _NEWTON_GRAD_TOL)
    active = alive & ~done
    for _ in range(_NEWTON_MAX_ITER):
        if not active.any():
            break
        ia = np.flatnonzero(active)
        H = reduced_chordal_hess(model, X[ia])
        det = H[:, 0, 0] * H[:, 1, 1] - H[:, 0, 1] * H[:, 1, 0]
        scale = np.maximum(np.abs(H).max(axis=(1, 2)) ** 2, 1.0)
        singular = np.abs(det) < 1e-13 * scale
        active[ia[singular]] = False
        ia = ia[~singular]
        if len(ia) == 0:
            continue
        Hs = H[~singular]
        ds = det[~singular]
        gs = g[ia]
        step = np.empty_like(gs)
        step[:, 0] = (Hs[:, 1, 1] * gs[:, 0] - Hs[:, 0, 1] * gs[:, 1]) / ds
        step[:, 1] = (-Hs[:, 1, 0] * gs[:, 0] + Hs[:, 0, 0] * gs[:, 1]) / ds
        alpha = np.ones(len(ia))
        improved = np.zeros(len(ia), dtype=bool)
        newX = X[ia].copy()
        newg = gs.copy()
        for _ in range(_NEWTON_MAX_HALVINGS + 1):
            need = ~improved
            if not need.any():
                break
            cand = X[ia][need] - alpha[need, None] * step[need]
            gc = reduced_chordal_grad(model, cand)
            ok = np.linalg.norm(gc, axis=1) < np.linalg.norm(gs[need], axis=1)
            idx = np.flatnonzero(need)[ok]
            newX[idx] = cand[ok]
            newg[idx] = gc[ok]
            improved[idx] = True
            alpha[~improved] *= 0.5
        active[ia[~improved]] = False
        moved = np.flatnonzero(improved)
        im = ia[moved]
        X[im] = newX[moved]
        g[im] = newg[moved]
        conv = np.linalg.norm(g[im], axis=1) <= _NEWTON_GRAD_TOL
        done[im[conv]] = True
        active[im[conv]] = False
    return X[done]


def critical_points_numeric(model: ReducedModel) -> list[CriticalPoint]:
    """Numerically enumerated critical points for any mismatch.

    Newton runs from a 64x64 seed grid of S; converged points are
    wrapped into S, deduplicated modulo 2*pi, and points sitting on the
    lower edges are mirrored to the opposite edges so the closed-square
    census matches the closed-form lists.
    """
    ms = model.measurements
    c = domain_center(ms)
    ax = np.linspace(-np.pi, np.pi, _SEED_GRID)
    G1, G2 = np.meshgrid(c[0] + ax, c[1] + ax, indexing="ij")
    seeds = np.stack([G1.ravel(), G2.ravel()], axis=1)
    found = _newton_refine(model, seeds)
    if len(found) == 0:
        return []
    found = wrap_into_domain(ms, found)
    # Points numerically just below the upper edge are the same boundary
    # point as their lower-edge twin; fold them down so the census and
    # the edge mirroring below see one canonical representative.
    for axis in (0, 1):
        near_upper = (c[axis] + np.pi) - found[:, axis] < _DEDUP_TOL
        found[near_upper, axis] -= 2.0 * np.pi
    order = np.lexsort((found[:, 1], found[:, 0]))
    found = found[order]
    reps: list[np.ndarray] = []
    for p in found:
        dup = False
        for r in reps:
            d = np.max(np.abs(wrap(p - r)))
            if d < _DEDUP_TOL:
                dup = True
                break
        if not dup:
            reps.append(p)
    expanded: list[tuple[np.ndarray, bool]] = []
    for p in reps:
        variants = [np.array(p)]
        boundary = False
        for axis in (0, 1):
            lo = c[axis] - np.pi
            if p[axis] - lo < _DEDUP_TOL:
                boundary = True
                variants = [v.copy() for v in variants] + [
                    v + (2.0 * np.pi) * np.eye(2)[axis] for v in variants
                ]
        for v in variants:
            expanded.append((v, boundary))
    points = [_make_point(model, v, on_boundary=b) for v, b in expanded]
    return _sort_points(points)
