"""Region-of-attraction grid experiments on the fundamental square.

A sweep starts the local minimizer from every node of a uniform grid
over S, wraps each final iterate back into S, and labels the node by
the catalog minimum it landed on: 0 for a global minimum, the catalog
index for a non-global one, -1 when no catalog entry is within the
match tolerance. Grid points sit at cell centers, so no start coincides
with the stationary boundary points of S and the label fractions are
plain area estimates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import wrap
from .chordal import KIND_MIN, critical_points_numeric
from .geodesic import domain_center, geodesic_minima_catalog
from .optimizer import MinimizeOptions, chordal_objective, geodesic_objective, minimize_batch
from .problem import BenchmarkProblem
from .reduction import build_reduced_model

COST_GEODESIC = "geodesic"
COST_CHORDAL = "chordal"

LABEL_GLOBAL = 0
LABEL_FAILED = -1

_GLOBAL_COST_TOL = 1e-9


class SweepConfigError(ValueError):
    """Raised for unusable sweep configurations (e.g. empty catalog)."""


@dataclass(frozen=True)
class SweepConfig:
    grid_n: int = 500
    cost_kind: str = COST_GEODESIC
    match_tol: float = 1e-3
    minimize_options: MinimizeOptions = field(default_factory=MinimizeOptions)

    def __post_init__(self):
        if self.grid_n < 2:
            raise SweepConfigError("grid_n must be at least 2")
        if self.cost_kind not in (COST_GEODESIC, COST_CHORDAL):
            raise SweepConfigError(f"unknown cost kind {self.cost_kind!r}")
        if not self.match_tol > 0:
            raise SweepConfigError("match_tol must be positive")


@dataclass
class SweepResult:
    """Labels and diagnostics of one grid sweep.

    ``labels[i, j]`` covers the start with phi2 = axis2[i] and
    phi1 = axis1[j]; the flat arrays follow the same row-major order.
    ``catalog`` holds the minima objects the labels index into
    (GeodesicMinimum or CriticalPoint depending on the cost kind) and
    ``global_mask`` marks which of them count as global.
    """

    labels: np.ndarray
    catalog: list
    global_mask: np.ndarray
    pct_global: float
    pct_local: float
    pct_failed: float
    config: SweepConfig
    problem: BenchmarkProblem
    axis1: np.ndarray
    axis2: np.ndarray
    final_phi: np.ndarray
    terminations: np.ndarray
    grad_norms: np.ndarray
    iterations: np.ndarray


def catalog_for(problem: BenchmarkProblem, cost_kind: str):
    """Minima catalog and global mask for the requested cost."""
    model = build_reduced_model(problem.measurements)
    if cost_kind == COST_GEODESIC:
        entries = geodesic_minima_catalog(model)
        mask = np.array([m.is_global for m in entries], dtype=bool)
        return entries, mask
    entries = [p for p in critical_points_numeric(model) if p.kind == KIND_MIN]
    entries.sort(key=lambda p: p.cost)
    if entries:
        best = entries[0].cost
        mask = np.array([(p.cost - best) <= _GLOBAL_COST_TOL * (1.0 + abs(best)) for p in entries], dtype=bool)
    else:
        mask = np.zeros(0, dtype=bool)
    return entries, mask


def _min_pair_separation(phis: np.ndarray) -> float:
    best = np.inf
    for i in range(len(phis)):
        for j in range(i + 1, len(phis)):
            d = np.max(np.abs(wrap(phis[i] - phis[j])))
            best = min(best, float(d))
    return best


def run_sweep(problem: BenchmarkProblem, cfg: SweepConfig | None = None) -> SweepResult:
    """Minimize from every grid cell of S and label the basins."""
    if cfg is None:
        cfg = SweepConfig()
    catalog, global_mask = catalog_for(problem, cfg.cost_kind)
    if len(catalog) == 0:
        raise SweepConfigError("empty minima catalog; nothing to match against")
    target_phi = np.stack([np.asarray(m.phi, dtype=float) for m in catalog])
    if len(catalog) >= 2:
        sep = _min_pair_separation(target_phi)
        if not cfg.match_tol < 0.5 * sep:
            raise SweepConfigError(
                f"match_tol {cfg.match_tol:g} is not below half the minimum "
                f"catalog separation {sep:g}"
            )

    model = build_reduced_model(problem.measurements)
    objective = geodesic_objective(model) if cfg.cost_kind == COST_GEODESIC else chordal_objective(model)
    c = domain_center(problem.measurements)
    n = cfg.grid_n
    h = 2.0 * np.pi / n
    axis1 = c[0] - np.pi + (np.arange(n) + 0.5) * h
    axis2 = c[1] - np.pi + (np.arange(n) + 0.5) * h
    G2, G1 = np.meshgrid(axis2, axis1, indexing="ij")
    X0 = np.stack([G1.ravel(), G2.ravel()], axis=1)

    batch = minimize_batch(objective, X0, cfg.minimize_options)
    final = c + wrap(batch.phi - c)

    diffs = wrap(final[:, None, :] - target_phi[None, :, :])
    dists = np.max(np.abs(diffs), axis=2)
    nearest = np.argmin(dists, axis=1)
    nearest_d = dists[np.arange(len(final)), nearest]
    matched = nearest_d <= cfg.match_tol
    labels_flat = np.where(matched, np.where(global_mask[nearest], LABEL_GLOBAL, nearest), LABEL_FAILED)

    n_total = labels_flat.size
    n_global = int(np.sum(matched & global_mask[nearest]))
    n_failed = int(np.sum(~matched))
    n_local = n_total - n_global - n_failed
    return SweepResult(
        labels=labels_flat.reshape(n, n),
        catalog=catalog,
        global_mask=global_mask,
        pct_global=100.0 * n_global / n_total,
        pct_local=100.0 * n_local / n_total,
        pct_failed=100.0 * n_failed / n_total,
        config=cfg,
        problem=problem,
        axis1=axis1,
        axis2=axis2,
        final_phi=final.reshape(n, n, 2),
        terminations=batch.termination_code.reshape(n, n),
        grad_norms=batch.grad_norm.reshape(n, n),
        iterations=batch.iterations.reshape(n, n),
    )


def summarize(result: SweepResult) -> dict:
    """One table row describing a sweep."""
    return {
        "label": result.problem.label,
        "cost_kind": result.config.cost_kind,
        "epsilon": result.problem.epsilon,
        "grid_n": result.config.grid_n,
        "pct_global": result.pct_global,
        "pct_local": result.pct_local,
        "pct_failed": result.pct_failed,
        "catalog_size": len(result.catalog),
    }
