"""
Discrete norms and functionals measured on relaxation and limit runs.

- bv_x / time_bv_step: total variation in space and in time
- initial_bv_bound: K1 + K2, x-variation of the initial data with boundary ghosts
- combined_flux_bv: x-variation of the interface flux of the conserved total
- equilibrium_deviation / time_trapezoid: L2(x, t) distance to the equilibrium manifold
- compare_with_limit / fit_order: convergence measurements
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple, Union

import numpy as np

from limit_solver.scheme import LimitState
from model.errors import GridMismatchError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, h_values
from relax_solver.state import Boundary, Boundary2, Boundary3, State2, State3

RelaxState = Union[State2, State3]


def bv_x(field: np.ndarray) -> float:
    f = np.asarray(field, dtype=float)
    return float(np.abs(np.diff(f)).sum()) if f.size > 1 else 0.0


def time_bv_step(prev: RelaxState, nxt: RelaxState, dt: float, dx: float) -> float:
    """sum_j sum_components |f^{n+1}_j - f^n_j| dx / dt."""
    total = sum(float(np.abs(b - a).sum()) for a, b in zip(prev.fields(), nxt.fields()))
    return total * dx / dt


def combined_quantity(state: RelaxState) -> np.ndarray:
    """u - v for the 2x2 system, c1 + c2 + c3 for the 3x3 system."""
    if isinstance(state, State2):
        return state.u - state.v
    return state.c1 + state.c2 + state.c3


def initial_bv_bound(state: RelaxState, boundary: Boundary) -> float:
    """x-variation of every component including the jump to its boundary ghost."""
    if isinstance(state, State2):
        assert isinstance(boundary, Boundary2)
        u_ext, v_ext = boundary.padded(state)
        return bv_x(u_ext) + bv_x(v_ext)
    assert isinstance(boundary, Boundary3)
    c1_ext, c2_ext, c3_ext = boundary.padded(state)
    return bv_x(c1_ext) + bv_x(c2_ext) + bv_x(c3_ext)


def interface_flux(state: RelaxState, boundary: Boundary) -> np.ndarray:
    """Flux of the conserved total through the N + 1 faces, boundary faces included."""
    if isinstance(state, State2):
        assert isinstance(boundary, Boundary2)
        u_ext, v_ext = boundary.padded(state)
        # face j+1/2 carries u_j rightwards and v_{j+1} leftwards
        return u_ext - v_ext
    assert isinstance(boundary, Boundary3)
    c1_ext, c2_ext, c3_ext = boundary.padded(state)
    return c1_ext + c2_ext - c3_ext


def combined_flux_bv(state: RelaxState, boundary: Boundary) -> float:
    return bv_x(interface_flux(state, boundary))


def equilibrium_defects(state: RelaxState, het: Heterogeneity, grid: Grid) -> Tuple[np.ndarray, ...]:
    x = grid.centers
    if isinstance(state, State2):
        return (state.u - h_values(het, state.v, x),)
    hc3 = h_values(het, state.c3, x)
    return (state.c2 + hc3 - 2.0 * state.c1, state.c1 + hc3 - 2.0 * state.c2)


def defect_integral(state: RelaxState, het: Heterogeneity, grid: Grid) -> Tuple[float, ...]:
    """Per-defect integral of the squared defect over [0, L] at one time."""
    return tuple(float((d * d).sum() * grid.dx) for d in equilibrium_defects(state, het, grid))


def time_trapezoid(total: np.ndarray, first: np.ndarray, last: np.ndarray, dt: float) -> np.ndarray:
    """
    Trapezoid rule on equally spaced snapshots from running sums.

    ``total`` sums every snapshot including both ends; interior snapshots
    weigh dt, the two ends dt/2.
    """
    return dt * (np.asarray(total, dtype=float) - 0.5 * (np.asarray(first, dtype=float) + np.asarray(last, dtype=float)))


def equilibrium_deviation(snapshots: Sequence[RelaxState], het: Heterogeneity, grid: Grid, dt: float) -> float:
    """L2 norm over space-time of the equilibrium defect, trapezoid rule on equally spaced snapshots."""
    if len(snapshots) < 2:
        return 0.0
    per_time = [np.array(defect_integral(s, het, grid)) for s in snapshots]
    per_defect = time_trapezoid(np.sum(per_time, axis=0), per_time[0], per_time[-1], dt)
    return float(math.sqrt(max(float(per_defect.sum()), 0.0)))


def quadratic_entropy_dissipation(eq_dev_l2: float, epsilon: float) -> float:
    """(1/eps) times the squared space-time defect, the dissipation of the quadratic entropy pair."""
    return eq_dev_l2 * eq_dev_l2 / epsilon


def compare_with_limit(relax_state: RelaxState, limit_state: LimitState, relax_grid: Grid, limit_grid: Grid) -> float:
    relax_grid.require_same(limit_grid)
    if abs(relax_state.t - limit_state.t) > 1e-9 * max(1.0, abs(limit_state.t)):
        raise GridMismatchError(f"time mismatch: relax t={relax_state.t} vs limit t={limit_state.t}")
    if relax_state.system != limit_state.system:
        raise GridMismatchError("relaxation and limit runs belong to different systems")
    return float(np.abs(relax_state.total() - limit_state.rho).sum() * relax_grid.dx)


def fit_order(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log(ys) against log(xs)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise ModelDomainError("fit_order needs at least 3 paired points")
    if np.any(x <= 0) or np.any(y <= 0):
        raise ModelDomainError("fit_order needs positive values")
    lx = np.log(x)
    if np.ptp(lx) < 1e-12:
        raise ModelDomainError("fit_order needs spread in xs")
    slope, _ = np.polyfit(lx, np.log(y), 1)
    return float(slope)
