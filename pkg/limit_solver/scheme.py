# -*- coding: utf-8 -*-
"""
Well-balanced upwind scheme for the heterogeneous limit laws

    d/dt rho + d/dx F(rho, x) = 0,   rho(0, t) = rho_in,

with F = A = h(v, x) - v where h(v, x) + v = rho (TwoByTwo), or
F = B = 2h(v, x) - v where 2h(v, x) + v = rho (ThreeByThree).

Both fluxes are strictly increasing in rho, so every characteristic enters at
x = 0 and leaves at x = L; the interface flux at j+1/2 is F(rho_j, x_j).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from model.errors import CflError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind, h_values, solve_level

ArrayLike = Union[float, np.ndarray]


# ============================
# Types
# ============================

@dataclass(frozen=True)
class LimitState:
    rho: np.ndarray
    t: float
    system: SystemKind
    rho_in: float

    def to_dict(self) -> dict:
        return {"t": self.t, "system": self.system.value, "rho_in": self.rho_in, "rho": self.rho.tolist()}


def _coeff(system: SystemKind) -> float:
    return 1.0 if SystemKind(system) == SystemKind.TWO_BY_TWO else 2.0


# ============================
# Flux and reconstructions
# ============================

def reconstruct_v(het: Heterogeneity, rho: ArrayLike, x: ArrayLike, system: SystemKind) -> np.ndarray:
    """v with c h(v, x) + v = rho."""
    rho, x = np.broadcast_arrays(np.asarray(rho, dtype=float), np.asarray(x, dtype=float))
    return solve_level(het, _coeff(system), 1.0, rho, x)


def flux_values(het: Heterogeneity, rho: ArrayLike, x: ArrayLike, system: SystemKind) -> np.ndarray:
    c = _coeff(system)
    v = reconstruct_v(het, rho, x, system)
    return c * h_values(het, v, x) - v


def flux(het: Heterogeneity, rho: ArrayLike, x: ArrayLike, system: SystemKind) -> ArrayLike:
    if np.any(np.asarray(rho) < 0):
        raise ModelDomainError("rho must be >= 0")
    out = flux_values(het, rho, x, system)
    return float(out) if np.ndim(out) == 0 else out


def density_at_level(het: Heterogeneity, level: ArrayLike, x: ArrayLike, system: SystemKind) -> np.ndarray:
    """Density at x whose flux equals ``level`` (the steady state through that level)."""
    c = _coeff(system)
    level, x = np.broadcast_arrays(np.asarray(level, dtype=float), np.asarray(x, dtype=float))
    v = solve_level(het, c, -1.0, np.maximum(level, 0.0), x)
    return v + c * h_values(het, v, x)


def max_speed(het: Heterogeneity, system: SystemKind) -> float:
    if SystemKind(system) == SystemKind.TWO_BY_TWO:
        return (het.mu - 1.0) / (het.mu + 1.0)
    return (2.0 * het.mu - 1.0) / (2.0 * het.mu + 1.0)


def inflow_density(
    het: Heterogeneity,
    system: SystemKind,
    *,
    u0: Optional[float] = None,
    c01: Optional[float] = None,
    c02: Optional[float] = None,
) -> float:
    system = SystemKind(system)
    if system == SystemKind.TWO_BY_TWO:
        if u0 is None or u0 < 0:
            raise ModelDomainError("TwoByTwo inflow density needs u0 >= 0")
        return float(u0 + solve_level(het, 1.0, 0.0, np.array(u0), np.array(0.0)))
    if c01 is None or c02 is None or c01 < 0 or c02 < 0:
        raise ModelDomainError("ThreeByThree inflow density needs c01, c02 >= 0")
    total = c01 + c02
    return float(total + solve_level(het, 1.0, 0.0, np.array(0.5 * total), np.array(0.0)))


# ============================
# Stepping
# ============================

def stable_dt(het: Heterogeneity, grid: Grid, system: SystemKind, cfl: float) -> float:
    return cfl * grid.dx / max_speed(het, system)


def step_limit(state: LimitState, het: Heterogeneity, grid: Grid, dt: float) -> LimitState:
    limit = grid.dx / max_speed(het, state.system)
    if not 0.0 < dt <= limit * (1.0 + 1e-12):
        raise CflError(f"dt={dt:.6g} violates dt <= dx/max_speed = {limit:.6g}")
    F = flux_values(het, state.rho, grid.centers, state.system)
    F_in = flux_values(het, state.rho_in, 0.0, state.system)
    upstream = np.concatenate((np.atleast_1d(F_in), F[:-1]))
    rho = state.rho - (dt / grid.dx) * (F - upstream)
    return LimitState(rho=rho, t=state.t + dt, system=state.system, rho_in=state.rho_in)


def l1_distance(a: np.ndarray, b: np.ndarray, grid: Grid) -> float:
    return float(np.abs(np.asarray(a) - np.asarray(b)).sum() * grid.dx)


def limit_maximum_principle(flux_before: np.ndarray, flux_after: np.ndarray, flux_in: float) -> float:
    """How far the new cell fluxes leave the range of the old ones and the inflow flux (0 when inside)."""
    lo = min(float(np.min(flux_before)), flux_in)
    hi = max(float(np.max(flux_before)), flux_in)
    return max(float(np.max(flux_after)) - hi, lo - float(np.min(flux_after)), 0.0)
