"""Arc-length (geodesic) heading cost on the reduced two-angle domain.

After translation elimination the decision variable is the heading pair
Phi = (phi1, phi2), studied on the closed 2*pi x 2*pi square S centered
at the measured headings (phi01, phi02). The wrapped residual of the
middle edge splits S into three regions; on each region the cost agrees
with a smooth surrogate, and minimizing the surrogate over phi2 leaves a
one-variable profile whose roots enumerate all minima of the cost.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .angles import wrap
from .problem import MeasurementSet
from .reduction import ReducedModel, eliminated_position_cost, gls_solve

_SEAM_TOL = 1e-9


class OutOfDomainError(ValueError):
    """Raised when a heading pair lies outside the fundamental square."""


def domain_center(ms: MeasurementSet) -> np.ndarray:
    """Center (phi01, phi02) of the fundamental square S."""
    return np.array([ms.phi01, ms.phi02])


def in_domain(ms: MeasurementSet, Phi, tol: float = 1e-12) -> bool:
    """True when Phi lies in the closed square S (with slack ``tol``)."""
    Phi = np.asarray(Phi, dtype=float)
    c = domain_center(ms)
    return bool(np.all(np.abs(Phi - c) <= np.pi + tol))


def wrap_into_domain(ms: MeasurementSet, Phi) -> np.ndarray:
    """Translate Phi by multiples of 2*pi per coordinate into S.

    The lower edges of S are kept, the upper edges map to the lower ones
    (same half-open convention as ``wrap``). Cost values are unchanged
    because both costs are 2*pi-periodic per coordinate.
    """
    Phi = np.asarray(Phi, dtype=float)
    c = domain_center(ms)
    return c + wrap(Phi - c)


def heading_residual_12(ms: MeasurementSet, Phi):
    """Unwrapped heading residual of the middle edge (1, 2).

    This is the measured relative heading minus the heading difference
    implied by Phi, left unwrapped; its wrapped value enters the cost
    and its raw value decides the region. Vectorized over the leading
    axes of ``Phi`` (last axis holds the pair).
    """
    Phi = np.asarray(Phi, dtype=float)
    out = ms.phi12 - (Phi[..., 1] - Phi[..., 0])
    if out.ndim == 0:
        return float(out)
    return out


def region_of(ms: MeasurementSet, Phi) -> int:
    """Region index k of a heading pair in S.

    k=1 where the middle-edge residual is <= -pi (upper-left triangle),
    k=-1 where it is >= +pi (lower-right triangle), k=0 between. The
    seam itself belongs to the outer regions, keeping region 0 open.

    Raises
    ------
    OutOfDomainError
        If Phi is not in the closed square S; wrap it there first.
    """
    if not in_domain(ms, Phi):
        raise OutOfDomainError(f"heading pair {np.asarray(Phi)} lies outside the fundamental square")
    r = heading_residual_12(ms, Phi)
    if r <= -np.pi:
        return 1
    if r >= np.pi:
        return -1
    return 0


def angular_geodesic_cost(ms: MeasurementSet, Phi):
    """Heading part of the geodesic cost, all residuals wrapped.

    Periodic in both coordinates; vectorized over leading axes.
    """
    Phi = np.asarray(Phi, dtype=float)
    sh = ms.heading_sigma
    r01 = wrap(ms.phi01 - Phi[..., 0])
    r12 = wrap(heading_residual_12(ms, Phi))
    r02 = wrap(ms.phi02 - Phi[..., 1])
    out = (np.square(r01) + np.square(r12) + np.square(r02)) / (sh * sh)
    if np.ndim(out) == 0:
        return float(out)
    return out


def angular_geodesic_piece(ms: MeasurementSet, Phi, k: int):
    """Smooth surrogate of the heading cost for region k.

    Uses raw residuals with the middle one shifted by 2*k*pi; agrees
    with ``angular_geodesic_cost`` on region k and is defined (smooth)
    everywhere.
    """
    Phi = np.asarray(Phi, dtype=float)
    sh = ms.heading_sigma
    r01 = ms.phi01 - Phi[..., 0]
    r12 = heading_residual_12(ms, Phi) + 2.0 * k * np.pi
    r02 = ms.phi02 - Phi[..., 1]
    out = (np.square(r01) + np.square(r12) + np.square(r02)) / (sh * sh)
    if np.ndim(out) == 0:
        return float(out)
    return out


def reduced_geodesic_cost(model: ReducedModel, Phi):
    """Geodesic cost with translations eliminated, as a function of Phi."""
    Phi = np.asarray(Phi, dtype=float)
    out = eliminated_position_cost(model, Phi[..., 0]) + angular_geodesic_cost(model.measurements, Phi)
    if np.ndim(out) == 0:
        return float(out)
    return out


def reduced_geodesic_grad(model: ReducedModel, Phi):
    """Gradient of the reduced geodesic cost from the active region piece.

    Returns ``(grad, on_seam)``. On the region seam (wrapped middle
    residual at +-pi) the gradient of the outer-region piece is returned,
    matching the seam assignment of ``region_of``, and the flag is set.
    Vectorized over leading axes.
    """
    Phi = np.asarray(Phi, dtype=float)
    ms = model.measurements
    sh = ms.heading_sigma
    inv = 2.0 / (sh * sh)
    w01 = wrap(np.asarray(ms.phi01 - Phi[..., 0]))
    w02 = wrap(np.asarray(ms.phi02 - Phi[..., 1]))
    raw12 = np.asarray(heading_residual_12(ms, Phi))
    w12 = wrap(raw12)
    seam = np.asarray(w12 == -np.pi)
    # wrap() collapses both seam sides to -pi; the side with raw residual
    # below zero belongs to region k=1 whose piece uses +pi instead.
    w12 = np.where(seam & (raw12 < 0.0), np.pi, w12)
    on_seam = seam | (np.pi - np.abs(w12) <= 1e-12)
    g1 = 2.0 * model.a0 * np.sin(Phi[..., 0] - model.theta0) + inv * (-w01 + w12)
    g2 = inv * (-w02 - w12)
    grad = np.stack([g1, g2], axis=-1)
    if Phi.ndim == 1:
        return grad, bool(on_seam)
    return grad, on_seam


@dataclass(frozen=True)
class ProfileModel:
    """Coefficient bundle of the one-variable heading profile for region k.

    The heading residual vector is zk + a1*phi1 + a2*phi2; eliminating
    phi2 with the projector q2 leaves a quadratic-plus-cosine profile in
    phi1.

    Attributes
    ----------
    a1, a2 : ndarray, shape (3,)
        Coefficient vectors of phi1 and phi2 in the stacked residuals.
    zk : ndarray, shape (3,)
        Constant residual part [phi01; phi12 + 2*k*pi; phi02].
    q2 : ndarray, shape (3, 3)
        Residual projector after eliminating phi2.
    c_phi : ndarray, shape (3, 3)
        Diagonal heading covariance sigma^2 * I.
    """

    a1: np.ndarray
    a2: np.ndarray
    zk: np.ndarray
    q2: np.ndarray
    c_phi: np.ndarray


def profile_model(model: ReducedModel, k: int) -> ProfileModel:
    ms = model.measurements
    sh = ms.heading_sigma
    a1 = np.array([-1.0, 1.0, 0.0])
    a2 = np.array([0.0, -1.0, -1.0])
    zk = np.array([ms.phi01, ms.phi12 + 2.0 * k * np.pi, ms.phi02])
    c_phi = sh * sh * np.eye(3)
    q2 = gls_solve(a2.reshape(3, 1), np.zeros(3), c_phi).q
    return ProfileModel(a1=a1, a2=a2, zk=zk, q2=q2, c_phi=c_phi)


def optimal_phi2_in_region(model: ReducedModel, phi1, k: int):
    """Minimizer of the region-k surrogate over phi2 at fixed phi1."""
    ms = model.measurements
    out = 0.5 * (np.asarray(phi1, dtype=float) + 2.0 * k * np.pi + ms.phi12 + ms.phi02)
    if np.ndim(out) == 0:
        return float(out)
    return out


def _profile_coeffs(model: ReducedModel, k: int):
    # Closed-form expansion of the quadratic (zk + a1*phi1)^T q2 (...);
    # equals the projector route of profile_model, but cheap enough for
    # the root-scan inner loops.
    ms = model.measurements
    sh = ms.heading_sigma
    inv = 1.0 / (sh * sh)
    mid = ms.phi12 + 2.0 * k * np.pi
    alpha = inv * (ms.phi01 * ms.phi01 + 0.5 * (mid - ms.phi02) ** 2)
    beta = inv * (-2.0 * ms.phi01 + mid - ms.phi02)
    gamma = 1.5 * inv
    return alpha, beta, gamma


def profile_cost(model: ReducedModel, phi1, k: int):
    """One-variable cost of region k after eliminating phi2."""
    phi1 = np.asarray(phi1, dtype=float)
    alpha, beta, gamma = _profile_coeffs(model, k)
    out = eliminated_position_cost(model, phi1) + alpha + beta * phi1 + gamma * np.square(phi1)
    if np.ndim(out) == 0:
        return float(out)
    return out


def profile_cost_prime(model: ReducedModel, phi1, k: int):
    """First derivative of ``profile_cost`` in phi1."""
    phi1 = np.asarray(phi1, dtype=float)
    _, beta, gamma = _profile_coeffs(model, k)
    out = 2.0 * model.a0 * np.sin(phi1 - model.theta0) + beta + 2.0 * gamma * phi1
    if np.ndim(out) == 0:
        return float(out)
    return out


def profile_cost_second(model: ReducedModel, phi1, k: int):
    """Second derivative of ``profile_cost`` in phi1."""
    phi1 = np.asarray(phi1, dtype=float)
    _, _, gamma = _profile_coeffs(model, k)
    out = 2.0 * model.a0 * np.cos(phi1 - model.theta0) + 2.0 * gamma
    if np.ndim(out) == 0:
        return float(out)
    return out


def curvature_case(model: ReducedModel) -> str:
    """Convexity regime of the one-variable profiles.

    Returns "a" when 3 / (2 * a0 * sigma^2) >= 1 (each profile has a
    single stationary point, its minimum); "b" otherwise (profiles can
    undulate). The threshold itself is labeled "a"."""
    sh = model.measurements.heading_sigma
    ratio = 3.0 / (2.0 * model.a0 * sh * sh)
    return "a" if ratio >= 1.0 else "b"


@dataclass(frozen=True)
class GeodesicMinimum:
    """A local minimum of the reduced geodesic cost.

    Attributes
    ----------
    phi : ndarray, shape (2,)
        Location in the closed square S.
    cost : float
        Reduced-cost value there.
    region : int
        Region index k the minimum lives in.
    is_global : bool
        Set for the lowest-cost catalog entries.
    second_derivative_1d : float
        Curvature of the region profile at the minimum (positive).
    on_boundary : bool
        Set when the minimum sits within 1e-9 of a region seam.
    """

    phi: np.ndarray
    cost: float
    region: int
    is_global: bool
    second_derivative_1d: float
    on_boundary: bool = False


_SCAN_POINTS = 2000
_BISECT_WIDTH = 1e-12


def _profile_roots(model: ReducedModel, k: int) -> list[float]:
    """All roots of the region-k profile derivative on the phi1 range of S."""
    ms = model.measurements
    lo = ms.phi01 - np.pi
    hi = ms.phi01 + np.pi
    grid = np.linspace(lo, hi, _SCAN_POINTS)
    vals = profile_cost_prime(model, grid, k)
    roots: list[float] = []
    for i in range(len(grid) - 1):
        va, vb = vals[i], vals[i + 1]
        if va == 0.0:
            roots.append(float(grid[i]))
            continue
        if va * vb < 0.0:
            a, b = float(grid[i]), float(grid[i + 1])
            fa = va
            while b - a > _BISECT_WIDTH:
                m = 0.5 * (a + b)
                fm = profile_cost_prime(model, m, k)
                if fm == 0.0:
                    a = b = m
                    break
                if fa * fm < 0.0:
                    b = m
                else:
                    a, fa = m, fm
            roots.append(0.5 * (a + b))
    if len(vals) and vals[-1] == 0.0:
        roots.append(float(grid[-1]))
    deduped: list[float] = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > 1e-9:
            deduped.append(r)
    return deduped


def enumerate_1d_minima(model: ReducedModel, k: int) -> list[GeodesicMinimum]:
    """All minima of the reduced geodesic cost inside region k.

    Scans the profile derivative for sign changes, refines each by
    bisection, keeps roots with positive curvature, lifts them to the
    pair (phi1, optimal phi2) and keeps those that land in region k.
    A root whose lift sits within 1e-9 of a seam is kept and flagged
    rather than dropped. The returned list is sorted by cost; an empty
    list is a legitimate outcome.
    """
    ms = model.measurements
    minima: list[GeodesicMinimum] = []
    for phi1 in _profile_roots(model, k):
        second = profile_cost_second(model, phi1, k)
        if second <= 0.0:
            continue
        phi2 = optimal_phi2_in_region(model, phi1, k)
        Phi = np.array([phi1, phi2])
        if not in_domain(ms, Phi):
            continue
        r = heading_residual_12(ms, Phi)
        near_seam = min(abs(r + np.pi), abs(r - np.pi)) <= _SEAM_TOL
        if region_of(ms, Phi) != k and not near_seam:
            continue
        minima.append(
            GeodesicMinimum(
                phi=Phi,
                cost=profile_cost(model, phi1, k),
                region=k,
                is_global=False,
                second_derivative_1d=float(second),
                on_boundary=near_seam,
            )
        )
    minima.sort(key=lambda m: m.cost)
    return minima


def geodesic_minima_catalog(model: ReducedModel) -> list[GeodesicMinimum]:
    """All minima of the reduced geodesic cost on S, lowest cost first.

    Entries whose cost ties the lowest one (within 1e-9) are marked
    global. Near-seam duplicates found from both adjacent regions are
    collapsed to a single entry.
    """
    entries: list[GeodesicMinimum] = []
    for k in (-1, 0, 1):
        for m in enumerate_1d_minima(model, k):
            dup = any(np.max(np.abs(wrap(m.phi - e.phi))) < 1e-8 for e in entries)
            if not dup:
                entries.append(m)
    entries.sort(key=lambda m: m.cost)
    if not entries:
        return entries
    best = entries[0].cost
    tol = 1e-9 * (1.0 + abs(best))
    return [replace(m, is_global=(m.cost - best) <= tol) for m in entries]
