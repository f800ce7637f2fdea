"""
Vectorised root finding for increasing scalar functions.

Every inversion in the suite reduces to g(x) = 0 with g strictly increasing on
a known bracket [lo, hi]. Newton steps are taken when they stay inside the
bracket, bisection otherwise, so convergence only relies on monotonicity.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from model.errors import RootFindError

ArrayFn = Callable[[np.ndarray], np.ndarray]

_EPS = np.finfo(float).eps


def expand_upper(f: ArrayFn, hi: np.ndarray, max_doublings: int = 60) -> np.ndarray:
    """Grow ``hi`` geometrically until f(hi) >= 0 everywhere."""
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(max_doublings):
        short = f(hi) < 0
        if not short.any():
            return hi
        hi = np.where(short, 2.0 * hi + 1.0, hi)
    raise RootFindError(
        "upper bracket could not be expanded; the function is not increasing as assumed",
        indices=np.flatnonzero(f(hi) < 0).tolist(),
    )


def solve_increasing(
    f: ArrayFn,
    df: ArrayFn,
    lo: np.ndarray,
    hi: np.ndarray,
    *,
    x0: Optional[np.ndarray] = None,
    scale: Optional[np.ndarray] = None,
    rtol: float = 1e-12,
    max_iter: int = 200,
    polish: int = 2,
) -> np.ndarray:
    """
    Solve f(x) = 0 elementwise for f increasing with f(lo) <= 0 <= f(hi).

    ``scale`` sets the residual tolerance |f| <= rtol * scale (default 1).
    After convergence ``polish`` extra Newton steps are taken, each kept only
    if it does not increase |f|; this brings the result to round-off.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    lo = lo.copy()
    hi = hi.copy()
    tol = rtol * (np.ones_like(lo) if scale is None else np.broadcast_to(np.asarray(scale, dtype=float), lo.shape))

    if x0 is None:
        x = 0.5 * (lo + hi)
    else:
        x = np.clip(np.broadcast_to(np.asarray(x0, dtype=float), lo.shape), lo, hi).copy()

    for _ in range(max_iter):
        fx = f(x)
        if not np.all(np.isfinite(fx)):
            raise RootFindError("non-finite residual", indices=np.flatnonzero(~np.isfinite(fx)).tolist())
        done = np.abs(fx) <= tol
        collapsed = (hi - lo) <= 8.0 * _EPS * np.maximum(1.0, np.abs(x))
        if np.all(done | collapsed):
            break

        neg = fx < 0
        lo = np.where(neg & ~done, x, lo)
        hi = np.where(~neg & ~done, x, hi)

        slope = df(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - fx / slope
        inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
        x = np.where(done, x, np.where(inside, newton, 0.5 * (lo + hi)))
    else:
        fx = f(x)
        bad = np.abs(fx) > tol
        raise RootFindError(
            f"no convergence after {max_iter} iterations",
            indices=np.flatnonzero(bad).tolist(),
        )

    for _ in range(polish):
        fx = f(x)
        if not np.any(fx):
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = np.clip(x - fx / df(x), lo, hi)
        cand = np.where(np.isfinite(cand), cand, x)
        fc = f(cand)
        x = np.where(np.abs(fc) < np.abs(fx), cand, x)

    return x
