"""
Time loop of the relaxation systems.

run() advances a RelaxConfig to t_end, records boundary traces every step,
folds every step into a RunAccumulator and calls observers at the snapshot
cadence (step 0, every ``snapshot_every`` steps, and the last step).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from diagnostics.report import DiagnosticsReport, RunAccumulator
from limit_solver.entropy import DEFAULT_P_SAMPLES, sample_p_levels
from limit_solver.scheme import flux_values, inflow_density
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind
from relax_solver.scheme import boundary_mass_change, step_2x2, step_3x3
from relax_solver.state import Boundary2, Boundary3, RelaxConfig, State2, State3
from run_logger import dlog, jlog
from steady.kp import KpProfile, solve_kp

RelaxState = Union[State2, State3]
Observer = Callable[[RelaxState, int], None]


@dataclass(frozen=True)
class TraceSeries:
    times: np.ndarray
    values: Dict[str, np.ndarray]

    def columns(self) -> List[str]:
        return ["t"] + list(self.values.keys())

    def rows(self) -> List[List[float]]:
        cols = [self.times] + list(self.values.values())
        return [list(map(float, r)) for r in zip(*cols)]


def _trace_point(state: RelaxState) -> Dict[str, float]:
    if isinstance(state, State2):
        return {"u_L": float(state.u[-1]), "v_0": float(state.v[0])}
    return {"c1_L": float(state.c1[-1]), "c2_L": float(state.c2[-1]), "c3_0": float(state.c3[0])}


def inflow_density_for(het: Heterogeneity, config: RelaxConfig) -> float:
    bc = config.boundary
    if isinstance(bc, Boundary2):
        return inflow_density(het, SystemKind.TWO_BY_TWO, u0=bc.u0)
    assert isinstance(bc, Boundary3)
    return inflow_density(het, SystemKind.THREE_BY_THREE, c01=bc.c01, c02=bc.c02)


def default_p_levels(het: Heterogeneity, grid: Grid, config: RelaxConfig, n_samples: int = DEFAULT_P_SAMPLES) -> List[float]:
    """Flux levels spanning the initial data and the inflow level."""
    system = config.system
    F = flux_values(het, config.initial.total(), grid.centers, system)
    F_in = float(flux_values(het, inflow_density_for(het, config), 0.0, system))
    return sample_p_levels(max(float(F.max()), F_in), [F_in], n_samples)


def run(
    config: RelaxConfig,
    het: Heterogeneity,
    grid: Grid,
    observers: Sequence[Observer] = (),
    *,
    p_levels: Optional[Sequence[float]] = None,
    ceiling: Optional[float] = None,
) -> Tuple[RelaxState, TraceSeries, DiagnosticsReport]:
    n, dt = config.time_steps(grid)
    step = step_2x2 if config.system == SystemKind.TWO_BY_TWO else step_3x3

    kps: List[KpProfile] = []
    if config.system == SystemKind.THREE_BY_THREE or het.beta > 1.0:
        levels = default_p_levels(het, grid, config) if p_levels is None else list(p_levels)
        kps = [solve_kp(het, grid, p, config.system) for p in levels]

    if not config.well_prepared:
        jlog("initial_layer_flagged", system=config.system.value, epsilon=config.epsilon)

    state: RelaxState = config.initial
    acc = RunAccumulator(
        het=het,
        grid=grid,
        boundary=config.boundary,
        epsilon=config.epsilon,
        dt=dt,
        initial=state,
        kps=kps,
        well_prepared=config.well_prepared,
    )

    times = [state.t]
    trace: Dict[str, List[float]] = {k: [v] for k, v in _trace_point(state).items()}
    for obs in observers:
        obs(state, 0)

    for k in range(1, n + 1):
        nxt = step(state, het, grid, config, dt)  # type: ignore[arg-type]
        acc.observe(state, nxt, boundary_mass_change(state, config.boundary, dt))
        state = nxt
        times.append(state.t)
        for key, val in _trace_point(state).items():
            trace[key].append(val)
        if k % config.snapshot_every == 0 or k == n:
            dlog("run_progress", solver="relax", system=config.system.value, step=k, t=state.t)
            for obs in observers:
                obs(state, k)

    series = TraceSeries(times=np.asarray(times), values={k: np.asarray(v) for k, v in trace.items()})
    return state, series, acc.finish(state, ceiling=ceiling)
