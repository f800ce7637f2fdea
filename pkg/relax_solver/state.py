# -*- coding: utf-8 -*-
"""
State, boundary and run configuration types of the relaxation systems.

- State2: (u, v) of the 2x2 system, u moves right and v moves left
- State3: (c1, c2, c3) of the 3x3 system, c1 and c2 move right and c3 moves left
- Boundary2 / Boundary3: inflow data and the reflection rule at x = L
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np

from model.errors import ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind, h_values


# ============================
# States
# ============================

@dataclass(frozen=True)
class State2:
    u: np.ndarray
    v: np.ndarray
    t: float = 0.0

    names = ("u", "v")
    system = SystemKind.TWO_BY_TWO

    def fields(self) -> Tuple[np.ndarray, ...]:
        return (self.u, self.v)

    def total(self) -> np.ndarray:
        return self.u + self.v

    def with_fields(self, u: np.ndarray, v: np.ndarray, t: Optional[float] = None) -> "State2":
        return State2(u=u, v=v, t=self.t if t is None else t)


@dataclass(frozen=True)
class State3:
    c1: np.ndarray
    c2: np.ndarray
    c3: np.ndarray
    t: float = 0.0

    names = ("c1", "c2", "c3")
    system = SystemKind.THREE_BY_THREE

    def fields(self) -> Tuple[np.ndarray, ...]:
        return (self.c1, self.c2, self.c3)

    def total(self) -> np.ndarray:
        return self.c1 + self.c2 + self.c3

    def with_fields(self, c1: np.ndarray, c2: np.ndarray, c3: np.ndarray, t: Optional[float] = None) -> "State3":
        return State3(c1=c1, c2=c2, c3=c3, t=self.t if t is None else t)


RelaxState = Union[State2, State3]


# ============================
# Boundary data
# ============================

@dataclass(frozen=True)
class Boundary2:
    u0: float
    alpha: float

    def padded(self, state: State2) -> Tuple[np.ndarray, np.ndarray]:
        """u with the inflow value prepended, v with the reflected value alpha*u(L) appended."""
        u_ext = np.concatenate(([self.u0], state.u))
        v_ext = np.concatenate((state.v, [self.alpha * state.u[-1]]))
        return u_ext, v_ext

    def to_dict(self) -> dict:
        return {"u0": self.u0, "alpha": self.alpha}


@dataclass(frozen=True)
class Boundary3:
    c01: float
    c02: float

    def padded(self, state: State3) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """c1, c2 with inflow values prepended; c3 with c2(L) appended."""
        c1_ext = np.concatenate(([self.c01], state.c1))
        c2_ext = np.concatenate(([self.c02], state.c2))
        c3_ext = np.concatenate((state.c3, [state.c2[-1]]))
        return c1_ext, c2_ext, c3_ext

    def to_dict(self) -> dict:
        return {"c01": self.c01, "c02": self.c02}


Boundary = Union[Boundary2, Boundary3]


# ============================
# Run configuration
# ============================

@dataclass(frozen=True)
class RelaxConfig:
    system: SystemKind
    epsilon: float
    cfl: float
    t_end: float
    boundary: Boundary
    initial: RelaxState
    well_prepared: bool = True
    snapshot_every: int = 40

    def time_steps(self, grid: Grid) -> Tuple[int, float]:
        """Uniform step count and size with dt <= cfl * dx landing exactly on t_end."""
        if self.t_end == 0:
            return 0, 0.0
        n = max(1, int(math.ceil(self.t_end / (self.cfl * grid.dx) - 1e-9)))
        return n, self.t_end / n

    def to_dict(self) -> dict:
        return {
            "system": self.system.value,
            "epsilon": self.epsilon,
            "cfl": self.cfl,
            "t_end": self.t_end,
            "boundary": self.boundary.to_dict(),
            "well_prepared": self.well_prepared,
            "snapshot_every": self.snapshot_every,
        }


def well_prepared_2x2(het: Heterogeneity, grid: Grid, v0: np.ndarray) -> State2:
    v0 = np.asarray(v0, dtype=float)
    return State2(u=h_values(het, v0, grid.centers), v=v0.copy(), t=0.0)


def well_prepared_3x3(het: Heterogeneity, grid: Grid, c3: np.ndarray) -> State3:
    c3 = np.asarray(c3, dtype=float)
    hc = h_values(het, c3, grid.centers)
    return State3(c1=hc.copy(), c2=hc.copy(), c3=c3.copy(), t=0.0)


def corner_mismatch(state: RelaxState, boundary: Boundary) -> float:
    """Incompatibility of the initial data with the inflow data at x = 0."""
    if isinstance(state, State2):
        return float(abs(state.u[0] - boundary.u0))
    return float(abs(state.c1[0] - boundary.c01) + abs(state.c2[0] - boundary.c02))


def make_relax_config(
    het: Heterogeneity,
    grid: Grid,
    *,
    system: SystemKind,
    epsilon: float,
    t_end: float,
    cfl: float = 1.0,
    u0: float = 0.0,
    alpha: float = 0.5,
    c01: float = 0.0,
    c02: float = 0.0,
    v0: Optional[np.ndarray] = None,
    u_init: Optional[np.ndarray] = None,
    c3_init: Optional[np.ndarray] = None,
    c1_init: Optional[np.ndarray] = None,
    c2_init: Optional[np.ndarray] = None,
    well_prepared: bool = True,
    snapshot_every: int = 40,
) -> RelaxConfig:
    """
    Validate parameters and build the initial state.

    With well_prepared=True the rightward components are derived from the
    profile of the leftward one (u = h(v, x), resp. c1 = c2 = h(c3, x)) and
    any explicitly passed rightward profiles are ignored.
    """
    system = SystemKind(system)
    if not epsilon > 0:
        raise ModelDomainError("epsilon must be positive")
    if not 0.0 < cfl <= 1.0:
        raise ModelDomainError("cfl must lie in (0,1]")
    if t_end < 0:
        raise ModelDomainError("t_end must be >= 0")
    if snapshot_every < 1:
        raise ModelDomainError("snapshot_every must be >= 1")

    n = grid.n_cells

    def _profile(arr: Optional[np.ndarray], name: str) -> np.ndarray:
        if arr is None:
            raise ModelDomainError(f"initial profile {name} is required")
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (n,):
            raise ModelDomainError(f"initial profile {name} must have {n} cells, got {arr.shape}")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ModelDomainError(f"initial profile {name} must be finite and >= 0")
        return arr

    initial: RelaxState
    boundary: Boundary
    if system == SystemKind.TWO_BY_TWO:
        if not 0.0 < alpha < 1.0:
            raise ModelDomainError("alpha must lie in (0,1)")
        if u0 < 0:
            raise ModelDomainError("u0 must be >= 0")
        boundary = Boundary2(u0=float(u0), alpha=float(alpha))
        v = _profile(v0, "v0")
        if well_prepared:
            initial = well_prepared_2x2(het, grid, v)
        else:
            initial = State2(u=_profile(u_init, "u0_profile").copy(), v=v.copy())
    else:
        if c01 < 0 or c02 < 0:
            raise ModelDomainError("c01 and c02 must be >= 0")
        boundary = Boundary3(c01=float(c01), c02=float(c02))
        c3 = _profile(c3_init, "c3")
        if well_prepared:
            initial = well_prepared_3x3(het, grid, c3)
        else:
            initial = State3(c1=_profile(c1_init, "c1").copy(), c2=_profile(c2_init, "c2").copy(), c3=c3.copy())

    return RelaxConfig(
        system=system,
        epsilon=float(epsilon),
        cfl=float(cfl),
        t_end=float(t_end),
        boundary=boundary,
        initial=initial,
        well_prepared=bool(well_prepared),
        snapshot_every=int(snapshot_every),
    )


def with_epsilon(config: RelaxConfig, epsilon: float) -> RelaxConfig:
    if not epsilon > 0:
        raise ModelDomainError("epsilon must be positive")
    return replace(config, epsilon=float(epsilon))
