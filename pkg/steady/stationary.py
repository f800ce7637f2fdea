"""
Stationary 2x2 problem used as the comparison profile of the L-infinity bound.

With U - V = K constant the system reduces to

    eps U' = h(U - K, x) - U,    U(0) = U0,    V(L) = alpha U(L)

so U(L) = K / (1 - alpha). The ODE is stiff and decays towards decreasing x,
so it is integrated from x = L to x = 0 with implicit Euler and K is found by
shooting on r(K) = U_K(0) - U0 over the bracket [0, U0].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from model.errors import BracketError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, solve_level
from run_logger import jlog

# Below this ratio eps/dx the boundary layer at x = L is sub-grid.
EQUILIBRIUM_SWITCH = 1.0 / 50.0
SCAN_POINTS = 17
REFINE_POINTS = 8
K_RTOL = 1e-12


@dataclass(frozen=True)
class SteadyProfile:
    U: np.ndarray
    V: np.ndarray
    K: float
    epsilon: float
    U0: float
    alpha: float
    U_L: float
    branch: str = "shooting"
    residual: float = 0.0
    roots: List[float] = field(default_factory=list)

    @property
    def multiple_roots(self) -> bool:
        return len(self.roots) > 1

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "epsilon": self.epsilon,
            "U0": self.U0,
            "alpha": self.alpha,
            "U_L": self.U_L,
            "branch": self.branch,
            "residual": self.residual,
            "roots": list(self.roots),
            "multiple_roots": self.multiple_roots,
            "max_U": float(self.U.max()) if self.U.size else 0.0,
        }


def _check_inputs(het: Heterogeneity, epsilon: float, U0: float, alpha: float) -> None:
    if not U0 > 0:
        raise ModelDomainError("U0 must be positive")
    if not 0.0 < alpha < 1.0:
        raise ModelDomainError("alpha must lie in (0,1)")
    if not epsilon > 0:
        raise ModelDomainError("epsilon must be positive")
    if not het.beta > 1.0:
        raise ModelDomainError("the stationary 2x2 problem needs beta > 1")


def _nodes(grid: Grid) -> np.ndarray:
    """Integration nodes from x = L down to x = 0 through every cell centre."""
    return np.concatenate(([grid.length], grid.centers[::-1], [0.0]))


def _integrate(het: Heterogeneity, grid: Grid, epsilon: float, alpha: float, K: np.ndarray) -> np.ndarray:
    """
    Backward implicit Euler for every K at once.

    Returns an array of shape (len(K), n_nodes) ordered as ``_nodes``.
    """
    K = np.asarray(K, dtype=float)
    nodes = _nodes(grid)
    out = np.empty((K.size, nodes.size))
    U = K / (1.0 - alpha)
    out[:, 0] = U
    for i in range(1, nodes.size):
        lam = (nodes[i - 1] - nodes[i]) / epsilon
        # lam h(U - K) + (1 - lam)(U - K) = U_prev - (1 - lam) K
        target = np.maximum(U - (1.0 - lam) * K, 0.0)
        v = solve_level(het, lam, 1.0 - lam, target, np.full(K.shape, nodes[i]), x0=U - K)
        U = K + v
        out[:, i] = U
    return out


def shooting_residuals(
    het: Heterogeneity, grid: Grid, epsilon: float, U0: float, alpha: float, Ks: np.ndarray
) -> np.ndarray:
    """r(K) = U_K(0) - U0 for each K."""
    return _integrate(het, grid, epsilon, alpha, np.asarray(Ks, dtype=float))[:, -1] - U0


def _refine(het: Heterogeneity, grid: Grid, epsilon: float, U0: float, alpha: float,
            lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Multisection of every bracket [lo_i, hi_i] in parallel."""
    frac = np.linspace(0.0, 1.0, REFINE_POINTS + 2)
    while np.any(hi - lo > K_RTOL * U0):
        pts = lo[:, None] + (hi - lo)[:, None] * frac[None, :]
        r = shooting_residuals(het, grid, epsilon, U0, alpha, pts.ravel()).reshape(pts.shape)
        # first sub-interval with a sign change (r[k] <= 0 <= r[k+1])
        change = (r[:, :-1] <= 0.0) & (r[:, 1:] >= 0.0)
        first = np.argmax(change, axis=1)
        rows = np.arange(lo.size)
        lo, hi = pts[rows, first], pts[rows, first + 1]
    return lo, hi


def equilibrium_profile(het: Heterogeneity, grid: Grid, K: float) -> Tuple[np.ndarray, np.ndarray]:
    """Outer solution h(U - K, x) = U at the cell centres, returned as (U, V)."""
    x = grid.centers
    V = solve_level(het, 1.0, -1.0, np.full(x.shape, float(K)), x)
    return K + V, V


def solve_stationary_2x2(het: Heterogeneity, grid: Grid, epsilon: float, U0: float, alpha: float) -> SteadyProfile:
    _check_inputs(het, epsilon, U0, alpha)

    if epsilon < EQUILIBRIUM_SWITCH * grid.dx:
        v0 = float(solve_level(het, 1.0, 0.0, np.array(U0), np.array(0.0)))
        K = min(max(U0 - v0, 0.0), U0)
        U, V = equilibrium_profile(het, grid, K)
        jlog("stationary_equilibrium_branch", epsilon=epsilon, dx=grid.dx, K=K)
        return SteadyProfile(
            U=U, V=V, K=K, epsilon=epsilon, U0=U0, alpha=alpha,
            U_L=K / (1.0 - alpha), branch="equilibrium", roots=[K],
        )

    Ks = np.linspace(0.0, U0, SCAN_POINTS)
    r = shooting_residuals(het, grid, epsilon, U0, alpha, Ks)
    sign_change = np.flatnonzero((r[:-1] <= 0.0) & (r[1:] >= 0.0))
    if sign_change.size == 0:
        raise BracketError(f"shooting residual keeps one sign on [0, {U0}]: r(0)={r[0]:.3g}, r(U0)={r[-1]:.3g}")

    # Adjacent brackets sharing an exact zero describe the same root.
    keep = [int(sign_change[0])]
    for idx in sign_change[1:]:
        if not (idx == keep[-1] + 1 and r[idx] == 0.0):
            keep.append(int(idx))
    lo, hi = _refine(het, grid, epsilon, U0, alpha, Ks[keep], Ks[np.array(keep) + 1])

    ends = np.stack([lo, hi], axis=1)
    r_ends = shooting_residuals(het, grid, epsilon, U0, alpha, ends.ravel()).reshape(ends.shape)
    pick = np.argmin(np.abs(r_ends), axis=1)
    roots = ends[np.arange(lo.size), pick]
    residuals = r_ends[np.arange(lo.size), pick]
    if roots.size > 1:
        jlog("stationary_multiple_roots", epsilon=epsilon, roots=roots.tolist())

    K = float(roots[0])
    nodes_U = _integrate(het, grid, epsilon, alpha, np.array([K]))[0]
    # nodes run L, centres reversed, 0
    U = nodes_U[1:-1][::-1].copy()
    return SteadyProfile(
        U=U,
        V=U - K,
        K=K,
        epsilon=epsilon,
        U0=U0,
        alpha=alpha,
        U_L=float(nodes_U[0]),
        branch="shooting",
        residual=float(abs(residuals[0])),
        roots=[float(k) for k in roots],
    )


def supersolution_bound(profile: SteadyProfile, het: Heterogeneity) -> float:
    """Uniform ceiling max(U0/(1-alpha), beta K/(beta-1), U0)."""
    if not het.beta > 1.0:
        raise ModelDomainError("supersolution bound needs beta > 1")
    return float(max(
        profile.U0 / (1.0 - profile.alpha),
        het.beta * profile.K / (het.beta - 1.0),
        profile.U0,
    ))
