"""Unconstrained 2D local minimization with diagnostics.

One quasi-Newton implementation serves two entry points: ``minimize``
for a single start and ``minimize_batch`` for many starts advanced in
lockstep as numpy arrays. Per-point arithmetic is identical in both, so
results do not depend on how starts are batched.

The method is the standard inverse-curvature rank-two update with a
backtracking line search enforcing sufficient decrease. The curvature
seed is a scaled identity; after the first accepted step the seed is
replaced by the measured curvature scale before updates begin, the
usual warm-start rescaling. Iterates are never wrapped; both reduced
costs are periodic, so callers wrap the final point afterwards if they
need it inside the fundamental square.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chordal import reduced_chordal_cost, reduced_chordal_grad
from .geodesic import reduced_geodesic_cost, reduced_geodesic_grad
from .reduction import ReducedModel

TERM_GRAD_TOL = "grad_tol"
TERM_STEP_TOL = "step_tol"
TERM_MAX_ITER = "max_iter"
TERM_LINE_SEARCH_FAIL = "line_search_fail"

# Fixed mapping from the int8 codes used in batch results.
TERMINATION_NAMES = (TERM_GRAD_TOL, TERM_STEP_TOL, TERM_MAX_ITER, TERM_LINE_SEARCH_FAIL)
_GRAD, _STEP, _MAXIT, _LSFAIL = range(4)

_ARMIJO_C1 = 1e-4
_SHRINK = 0.5
_MAX_BACKTRACKS = 40
_CURVATURE_FLOOR = 1e-12


@dataclass(frozen=True)
class MinimizeOptions:
    """Knobs of the quasi-Newton method.

    ``initial_hessian_scale`` multiplies the identity seed of the
    inverse-curvature matrix; it only affects steps taken before the
    first curvature pair is absorbed.
    """

    grad_tol: float = 1e-6
    step_tol: float = 1e-10
    max_iter: int = 500
    initial_hessian_scale: float = 1.0

    def __post_init__(self):
        if not (self.grad_tol > 0 and self.step_tol > 0 and self.initial_hessian_scale > 0):
            raise ValueError("tolerances and scales must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of one minimization.

    ``hessian_condition_estimate`` is the condition number of the final
    inverse-curvature approximation, or None when no curvature update
    ever happened (for example a start that already satisfied the
    gradient tolerance).
    """

    phi: np.ndarray
    cost: float
    grad_norm: float
    iterations: int
    termination: str
    hessian_condition_estimate: float | None


@dataclass
class BatchMinimizeResult:
    phi: np.ndarray
    cost: np.ndarray
    grad_norm: np.ndarray
    iterations: np.ndarray
    termination_code: np.ndarray
    hessian_condition: np.ndarray  # NaN where no estimate exists

    def termination_names(self) -> np.ndarray:
        return np.array(TERMINATION_NAMES, dtype=object)[self.termination_code]


def _sym2x2_condition(H: np.ndarray) -> np.ndarray:
    """Condition numbers of a stack of symmetric 2x2 matrices."""
    a, b, c = H[:, 0, 0], H[:, 0, 1], H[:, 1, 1]
    mid = 0.5 * (a + c)
    rad = np.sqrt(np.maximum(0.25 * (a - c) ** 2 + b * b, 0.0))
    mags = np.sort(np.abs(np.stack([mid - rad, mid + rad], axis=1)), axis=1)
    lo, hi = mags[:, 0], mags[:, 1]
    return np.where(lo > 0.0, hi / np.where(lo > 0.0, lo, 1.0), np.inf)


def minimize_batch(cost_and_grad, X0: np.ndarray, opts: MinimizeOptions | None = None) -> BatchMinimizeResult:
    """Run the quasi-Newton method from every row of ``X0`` at once.

    ``cost_and_grad`` must accept an (N, 2) array and return a pair of
    arrays with shapes (N,) and (N, 2). Each row is advanced with its
    own line-search step and its own curvature state; rows that finish
    are frozen while the rest continue.
    """
    if opts is None:
        opts = MinimizeOptions()
    X = np.array(X0, dtype=float)
    n = X.shape[0]
    f, g = cost_and_grad(X)
    f = np.asarray(f, dtype=float).copy()
    g = np.asarray(g, dtype=float).copy()

    term = np.full(n, -1, dtype=np.int8)
    iters = np.zeros(n, dtype=np.int64)
    Hinv = np.broadcast_to(opts.initial_hessian_scale * np.eye(2), (n, 2, 2)).copy()
    updated = np.zeros(n, dtype=bool)
    fresh = np.ones(n, dtype=bool)  # no curvature pair absorbed yet

    bad_start = ~(np.isfinite(f) & np.all(np.isfinite(g), axis=1))
    term[bad_start] = _LSFAIL
    gnorm0 = np.linalg.norm(np.where(np.isfinite(g), g, 0.0), axis=1)
    term[(term == -1) & (gnorm0 <= opts.grad_tol)] = _GRAD

    for it in range(1, opts.max_iter + 1):
        active = term == -1
        if not active.any():
            break
        ia = np.flatnonzero(active)
        Xa, fa, ga = X[ia], f[ia], g[ia]
        d = -np.einsum("nij,nj->ni", Hinv[ia], ga)
        gd = np.einsum("ni,ni->n", ga, d)
        not_descent = gd >= 0.0
        if not_descent.any():
            # Curvature state went bad; restart it and fall back to the
            # raw downhill direction for this step.
            d[not_descent] = -ga[not_descent]
            gd[not_descent] = -np.einsum("ni,ni->n", ga[not_descent], ga[not_descent])
            Hinv[ia[not_descent]] = np.eye(2)
            fresh[ia[not_descent]] = True

        alpha = np.ones(len(ia))
        accepted = np.zeros(len(ia), dtype=bool)
        Xn = Xa.copy()
        fn = fa.copy()
        gn = ga.copy()
        for _ in range(_MAX_BACKTRACKS + 1):
            need = ~accepted
            if not need.any():
                break
            cand = Xa[need] + alpha[need, None] * d[need]
            fc, gc = cost_and_grad(cand)
            fc = np.asarray(fc, dtype=float)
            gc = np.asarray(gc, dtype=float)
            ok = np.isfinite(fc) & np.all(np.isfinite(gc), axis=1)
            ok &= fc <= fa[need] + _ARMIJO_C1 * alpha[need] * gd[need]
            idx = np.flatnonzero(need)[ok]
            Xn[idx] = cand[ok]
            fn[idx] = fc[ok]
            gn[idx] = gc[ok]
            accepted[idx] = True
            alpha[~accepted] *= _SHRINK

        failed = ~accepted
        if failed.any():
            term[ia[failed]] = _LSFAIL
            iters[ia[failed]] = it - 1

        moved = np.flatnonzero(accepted)
        if len(moved) == 0:
            continue
        im = ia[moved]
        s = alpha[moved, None] * d[moved]
        y = gn[moved] - ga[moved]
        sy = np.einsum("ni,ni->n", s, y)
        snorm = np.linalg.norm(s, axis=1)
        ynorm = np.linalg.norm(y, axis=1)
        good = sy > _CURVATURE_FLOOR * snorm * ynorm

        if good.any():
            ig = im[good]
            sg, yg, syg = s[good], y[good], sy[good]
            scale_first = fresh[ig]
            if scale_first.any():
                yy = np.einsum("ni,ni->n", yg, yg)[scale_first]
                gamma = syg[scale_first] / np.maximum(yy, 1e-300)
                Hinv[ig[scale_first]] = gamma[:, None, None] * np.eye(2)
                fresh[ig[scale_first]] = False
            rho = 1.0 / syg
            Hsub = Hinv[ig]
            V = np.eye(2) - rho[:, None, None] * np.einsum("ni,nj->nij", sg, yg)
            Hsub = np.einsum("nij,njk,nlk->nil", V, Hsub, V)
            Hsub += rho[:, None, None] * np.einsum("ni,nj->nij", sg, sg)
            Hinv[ig] = 0.5 * (Hsub + np.swapaxes(Hsub, 1, 2))
            updated[ig] = True

        X[im] = Xn[moved]
        f[im] = fn[moved]
        g[im] = gn[moved]
        iters[im] = it
        gn_norm = np.linalg.norm(gn[moved], axis=1)
        conv = gn_norm <= opts.grad_tol
        term[im[conv]] = _GRAD
        small = (~conv) & (snorm <= opts.step_tol)
        term[im[small]] = _STEP

    term[term == -1] = _MAXIT
    gnorm = np.linalg.norm(np.where(np.isfinite(g), g, np.inf), axis=1)
    cond = np.full(n, np.nan)
    if updated.any():
        cond[updated] = _sym2x2_condition(Hinv[updated])
    return BatchMinimizeResult(
        phi=X,
        cost=f,
        grad_norm=gnorm,
        iterations=iters,
        termination_code=term,
        hessian_condition=cond,
    )


def minimize(cost_and_grad, phi0, opts: MinimizeOptions | None = None) -> MinimizeResult:
    """Minimize from a single start.

    ``cost_and_grad`` maps a length-2 array to (cost, gradient). The
    same iteration as ``minimize_batch`` runs on a batch of one.
    """

    def batched(X):
        costs = np.empty(X.shape[0])
        grads = np.empty_like(X)
        for i, row in enumerate(X):
            ci, gi = cost_and_grad(row)
            costs[i] = ci
            grads[i] = np.asarray(gi, dtype=float)
        return costs, grads

    phi0 = np.asarray(phi0, dtype=float).reshape(2)
    batch = minimize_batch(batched, phi0[None, :], opts)
    cond = float(batch.hessian_condition[0])
    return MinimizeResult(
        phi=batch.phi[0],
        cost=float(batch.cost[0]),
        grad_norm=float(batch.grad_norm[0]),
        iterations=int(batch.iterations[0]),
        termination=TERMINATION_NAMES[int(batch.termination_code[0])],
        hessian_condition_estimate=None if np.isnan(cond) else cond,
    )


def geodesic_objective(model: ReducedModel):
    """Cost-and-gradient callable of the reduced geodesic cost.

    The gradient is that of the active region piece; the seam flag is
    dropped (the line search treats seam chatter like any other step).
    """

    def fn(X):
        return reduced_geodesic_cost(model, X), reduced_geodesic_grad(model, X)[0]

    return fn


def chordal_objective(model: ReducedModel):
    """Cost-and-gradient callable of the reduced chordal cost."""

    def fn(X):
        return reduced_chordal_cost(model, X), reduced_chordal_grad(model, X)

    return fn
