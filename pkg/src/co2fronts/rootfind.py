"""Bracketed bisection used by every root-finder in the package.

All inversions (fan sampling, interaction thresholds, asymptotic states,
characteristic foot-points) go through safeguarded bisection on an analytic
bracket.  No open Newton iterations: correctness over speed at these scales.
"""

from __future__ import annotations

from typing import Callable

MAX_ITER = 200


def bisect_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-10,
    residual_tol: float | None = None,
) -> float:
    """Root of g on [lo, hi] where g(lo) and g(hi) have opposite signs.

    Stops once the bracket is narrower than xtol; if residual_tol is given,
    iteration continues (up to MAX_ITER) until |g(mid)| also drops below it.
    Endpoints with vanishing g are returned immediately.
    """
    if lo > hi:
        lo, hi = hi, lo
    glo = g(lo)
    if glo == 0.0:
        return lo
    ghi = g(hi)
    if ghi == 0.0:
        return hi
    if glo * ghi > 0.0:
        raise ValueError(f"no sign change on bracket [{lo}, {hi}]")
    mid = 0.5 * (lo + hi)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (hi - lo) <= xtol and (residual_tol is None or abs(gm) <= residual_tol):
            return mid
        if glo * gm < 0.0:
            hi = mid
        else:
            lo, glo = mid, gm
    return mid
