"""Angle arithmetic on the circle.

Everything in this package funnels angle handling through these four
helpers so that the wrap convention lives in exactly one place: the
half-open interval [-pi, pi), with -pi included and +pi excluded.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap(a):
    """Wrap angles into [-pi, pi).

    Accepts a scalar or an ndarray and returns the same shape. The
    convention is half-open: ``wrap(pi) == -pi`` and ``wrap(-pi) == -pi``.

    Raises
    ------
    ValueError
        If any input entry is NaN or infinite. Silent propagation of
        non-finite angles has a way of surfacing three modules later as
        an inexplicable empty region, so it is rejected at the door.
    """
    arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("wrap() requires finite angles")
    wrapped = arr - TWO_PI * np.floor((arr + np.pi) / TWO_PI)
    # floor() can land on the excluded endpoint when arr is a tiny amount
    # below an odd multiple of pi; fold it back.
    wrapped = np.where(wrapped >= np.pi, wrapped - TWO_PI, wrapped)
    if np.ndim(a) == 0:
        return float(wrapped)
    return wrapped


def rot2(theta: float) -> np.ndarray:
    """2x2 counter-clockwise rotation matrix for angle ``theta``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def geodesic_err(a, b):
    """Shortest angular distance ``|wrap(a - b)|``, in [0, pi]."""
    out = np.abs(wrap(np.subtract(a, b)))
    if np.ndim(out) == 0:
        return float(out)
    return out


def chordal_err_sq(a, b):
    """Squared Frobenius distance between the rotations by ``a`` and ``b``.

    For planar rotations ``||R(a) - R(b)||_F^2 == 4 * (1 - cos(a - b))``,
    which is what this computes; no matrices are formed.
    """
    out = 4.0 * (1.0 - np.cos(np.subtract(a, b)))
    if np.ndim(out) == 0:
        return float(out)
    return out
