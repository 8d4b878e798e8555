"""Vectorised bisection on monotone membership indicators."""

from __future__ import annotations

from typing import Callable

import numpy as np


def threshold_bisect(
    member: Callable[[np.ndarray], np.ndarray],
    lo,
    hi,
    tol: float,
    max_iter: int = 200,
) -> np.ndarray:
    """Locate ``inf{t : member(t)}`` for indicators of the form ``t > T``.

    ``member`` receives an array of times (one per query) and returns a
    boolean array.  Returns ``-inf`` where membership already holds at ``lo``
    and ``+inf`` where it still fails at ``hi``.  Otherwise the result is the
    midpoint of a final bracket of width ``<= tol``.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    in_lo = np.asarray(member(lo), dtype=bool)
    in_hi = np.asarray(member(hi), dtype=bool)
    active = ~in_lo & in_hi
    for _ in range(max_iter):
        if not np.any(active & (hi - lo > tol)):
            break
        mid = 0.5 * (lo + hi)
        inside = np.asarray(member(mid), dtype=bool)
        step = active & (hi - lo > tol)
        hi = np.where(step & inside, mid, hi)
        lo = np.where(step & ~inside, mid, lo)
    out = 0.5 * (lo + hi)
    out = np.where(in_lo, -np.inf, out)
    out = np.where(~in_lo & ~in_hi, np.inf, out)
    return out
