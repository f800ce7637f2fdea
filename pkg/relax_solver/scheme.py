"""
Transport / relaxation splitting for the 2x2 and 3x3 systems.

One step = upwind transport at unit speeds, then an implicit relaxation solved
cell by cell through the invariants of the source:
- 2x2: s = u + v is conserved, u solves a scalar monotone equation
- 3x3: s = c1 + c2 + c3 is conserved, d = c1 - c2 decays like exp(-t/eps),
  c3 solves a scalar monotone equation
"""

from __future__ import annotations

import math
from typing import Optional, Tuple, Union

import numpy as np

from model.errors import CflError, RootFindError, SolverError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, h_slope, h_values, solve_level
from model.roots import solve_increasing
from relax_solver.state import Boundary2, Boundary3, RelaxConfig, State2, State3


def _courant(dt: float, dx: float) -> float:
    lam = dt / dx
    if not 0.0 <= lam <= 1.0 + 1e-12:
        raise CflError(f"dt/dx = {lam:.6g} outside (0, 1] for unit transport speeds")
    return min(lam, 1.0)


def _upwind(values: np.ndarray, upstream: np.ndarray, lam: float) -> np.ndarray:
    if lam == 1.0:
        return upstream.copy()
    return values - lam * (values - upstream)


# ============================
# Transport
# ============================

def transport_2x2(state: State2, bc: Boundary2, dt: float, dx: float) -> State2:
    lam = _courant(dt, dx)
    u_ext, v_ext = bc.padded(state)
    return state.with_fields(_upwind(state.u, u_ext[:-1], lam), _upwind(state.v, v_ext[1:], lam))


def transport_3x3(state: State3, bc: Boundary3, dt: float, dx: float) -> State3:
    lam = _courant(dt, dx)
    c1_ext, c2_ext, c3_ext = bc.padded(state)
    return state.with_fields(
        _upwind(state.c1, c1_ext[:-1], lam),
        _upwind(state.c2, c2_ext[:-1], lam),
        _upwind(state.c3, c3_ext[1:], lam),
    )


def boundary_mass_change(state: Union[State2, State3], bc: Union[Boundary2, Boundary3], dt: float) -> float:
    """Change of sum(total)*dx over one step, from the boundary fluxes alone."""
    if isinstance(state, State2):
        assert isinstance(bc, Boundary2)
        u_out = state.u[-1]
        return float(dt * (bc.u0 - u_out + bc.alpha * u_out - state.v[0]))
    assert isinstance(bc, Boundary3)
    return float(dt * (bc.c01 + bc.c02 - state.c1[-1] - state.c3[0]))


# ============================
# Relaxation
# ============================

def relax_cells_2x2(
    u: np.ndarray, v: np.ndarray, het: Heterogeneity, x: np.ndarray, dt: float, epsilon: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Implicit relaxation u' = u + (dt/eps)(h(s - u', x) - u'), v' = s - u'.

    Raises RootFindError with the failing cell indices.
    """
    lam = dt / epsilon
    s = u + v

    def f(w: np.ndarray) -> np.ndarray:
        return (1.0 + lam) * w - u - lam * h_values(het, s - w, x)

    def df(w: np.ndarray) -> np.ndarray:
        return (1.0 + lam) + lam * h_slope(het, s - w, x)

    w = solve_increasing(
        f, df, np.zeros_like(s), s, x0=u, scale=(1.0 + lam) * np.maximum(1.0, s)
    )
    return w, s - w


def relax_cells_3x3(
    c1: np.ndarray, c2: np.ndarray, c3: np.ndarray, het: Heterogeneity, x: np.ndarray, dt: float, epsilon: float
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    s = c1 + c2 + c3
    d = (c1 - c2) * math.exp(-dt / epsilon)
    lam3 = dt / (3.0 * epsilon)
    # (1 + lam3) w + 2 lam3 h(w, x) = c3 + lam3 s
    w = solve_level(het, 2.0 * lam3, 1.0 + lam3, c3 + lam3 * s, x, x0=c3)
    m = s - w
    return 0.5 * (m + d), 0.5 * (m - d), w


# ============================
# Steps
# ============================

def _solver_error(exc: RootFindError, t: float) -> SolverError:
    cell = exc.indices[0] if exc.indices else None
    return SolverError(f"relaxation root-find failed: {exc}", time=t, cell=cell)


def step_2x2(state: State2, het: Heterogeneity, grid: Grid, config: RelaxConfig, dt: Optional[float] = None) -> State2:
    """
    One transport + relaxation step of the 2x2 system.

    The reflected ghost value v(L) = alpha*u(L) is taken from the last cell
    before transport, so the outflow and the reflection use the same u_{N-1}.
    """
    assert isinstance(config.boundary, Boundary2)
    if dt is None:
        dt = config.cfl * grid.dx
    moved = transport_2x2(state, config.boundary, dt, grid.dx)
    try:
        u, v = relax_cells_2x2(moved.u, moved.v, het, grid.centers, dt, config.epsilon)
    except RootFindError as exc:
        raise _solver_error(exc, state.t) from exc
    out = State2(u=u, v=v, t=state.t + dt)
    _require_finite(out, state.t)
    return out


def step_3x3(state: State3, het: Heterogeneity, grid: Grid, config: RelaxConfig, dt: Optional[float] = None) -> State3:
    """One step of the 3x3 system; the c3 ghost at x = L is c2 of the last cell before transport."""
    assert isinstance(config.boundary, Boundary3)
    if dt is None:
        dt = config.cfl * grid.dx
    moved = transport_3x3(state, config.boundary, dt, grid.dx)
    try:
        c1, c2, c3 = relax_cells_3x3(moved.c1, moved.c2, moved.c3, het, grid.centers, dt, config.epsilon)
    except RootFindError as exc:
        raise _solver_error(exc, state.t) from exc
    out = State3(c1=c1, c2=c2, c3=c3, t=state.t + dt)
    _require_finite(out, state.t)
    return out


def _require_finite(state: Union[State2, State3], t: float) -> None:
    for arr in state.fields():
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise SolverError("non-finite value after step", time=t, cell=int(bad[0]))
