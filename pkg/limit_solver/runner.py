"""Time loop of the limit scheme with boundary traces and entropy tracking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence

import numpy as np

from limit_solver.entropy import entropy_residual_limit
from limit_solver.scheme import LimitState, flux_values, limit_maximum_principle, stable_dt, step_limit
from steady.kp import KpProfile, rho_of_kp
from model.errors import CflError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity
from run_logger import dlog


LimitObserver = Callable[[LimitState, int], None]


@dataclass
class LimitRun:
    final: LimitState
    n_steps: int
    dt: float
    times: List[float] = field(default_factory=list)
    rho_left: List[float] = field(default_factory=list)
    rho_right: List[float] = field(default_factory=list)
    flux_left: List[float] = field(default_factory=list)
    face_flux_left: List[float] = field(default_factory=list)
    flux_right: List[float] = field(default_factory=list)
    max_principle_violation: float = 0.0
    entropy_worst: Dict[float, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n_steps": self.n_steps,
            "dt": self.dt,
            "t_end": self.final.t,
            "max_principle_violation": self.max_principle_violation,
            "entropy_worst": [{"p": p, "worst": w} for p, w in sorted(self.entropy_worst.items())],
        }


def run_limit(
    het: Heterogeneity,
    grid: Grid,
    initial: LimitState,
    *,
    t_end: float,
    cfl: float = 0.9,
    snapshot_every: int = 40,
    observers: Sequence[LimitObserver] = (),
    entropy_checks: Sequence[KpProfile] = (),
) -> LimitRun:
    """
    Advance ``initial`` to ``t_end``.

    The worst adapted entropy residual of every profile in ``entropy_checks``
    is tracked over all steps.
    """
    if not 0.0 < cfl <= 1.0:
        raise CflError(f"limit cfl must lie in (0,1], got {cfl}")
    if t_end < 0:
        raise ModelDomainError("t_end must be >= 0")

    dt_max = stable_dt(het, grid, initial.system, cfl)
    n = 0 if t_end == 0 else max(1, int(math.ceil(t_end / dt_max - 1e-9)))
    dt = t_end / n if n else 0.0

    run = LimitRun(final=initial, n_steps=n, dt=dt)
    checks = [(kp, rho_of_kp(het, grid, kp)) for kp in entropy_checks]
    run.entropy_worst = {kp.p: -math.inf for kp in entropy_checks}
    F_in = float(flux_values(het, initial.rho_in, 0.0, initial.system))

    def _record(state: LimitState, F: np.ndarray) -> None:
        run.times.append(state.t)
        run.rho_left.append(float(state.rho[0]))
        run.rho_right.append(float(state.rho[-1]))
        run.flux_left.append(float(F[0]))
        # the x = 0 face always carries the inflow flux
        run.face_flux_left.append(F_in)
        run.flux_right.append(float(F[-1]))

    state = initial
    F = flux_values(het, state.rho, grid.centers, state.system)
    _record(state, F)
    for obs in observers:
        obs(state, 0)

    for k in range(1, n + 1):
        nxt = step_limit(state, het, grid, dt)
        F_next = flux_values(het, nxt.rho, grid.centers, nxt.system)
        over = limit_maximum_principle(F, F_next, F_in)
        run.max_principle_violation = max(run.max_principle_violation, over)
        for kp, rho_p in checks:
            R = entropy_residual_limit(state, nxt, het, grid, dt, kp, rho_p, flux_before=F)
            run.entropy_worst[kp.p] = max(run.entropy_worst[kp.p], float(R.max()))
        state, F = nxt, F_next
        _record(state, F)
        if k % snapshot_every == 0 or k == n:
            dlog("run_progress", solver="limit", step=k, t=state.t)
            for obs in observers:
                obs(state, k)

    run.entropy_worst = {p: (0.0 if math.isinf(w) else w) for p, w in run.entropy_worst.items()}
    run.final = state
    return run
