"""relax2 / relax3 experiments and the single-run helper shared with the sweeps."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from diagnostics.report import DiagnosticsReport
from experiments.artifacts import ArtifactWriter
from experiments.config import ExperimentConfig, ProfileConfig, profile_values
from experiments.contract import ExperimentContext
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind
from policy.policy import (
    CheckVerdict,
    decide_ceiling,
    decide_entropy,
    decide_mass_balance,
    decide_time_bv,
)
from relax_solver.runner import RelaxState, TraceSeries, run
from relax_solver.state import RelaxConfig, State2, make_relax_config, with_epsilon
from steady.stationary import solve_stationary_2x2, supersolution_bound


def relax_config_from(
    cfg: ExperimentConfig, het: Heterogeneity, grid: Grid, system: SystemKind, epsilon: Optional[float] = None
) -> RelaxConfig:
    r = cfg.relax

    def _maybe(profile: Optional[ProfileConfig]) -> Optional[np.ndarray]:
        return None if profile is None else profile_values(profile, grid)

    rc = make_relax_config(
        het,
        grid,
        system=system,
        epsilon=r.epsilon,
        t_end=r.t_end,
        cfl=r.cfl,
        u0=r.u0,
        alpha=r.alpha,
        c01=r.c01,
        c02=r.c02,
        v0=profile_values(r.v0, grid),
        u_init=_maybe(r.u_init),
        c3_init=profile_values(r.c3, grid),
        c1_init=_maybe(r.c1_init),
        c2_init=_maybe(r.c2_init),
        well_prepared=r.well_prepared,
        snapshot_every=cfg.snapshot_every,
    )
    return rc if epsilon is None else with_epsilon(rc, epsilon)


def ceiling_for(het: Heterogeneity, grid: Grid, rc: RelaxConfig) -> Optional[float]:
    """Stationary supersolution ceiling of a 2x2 run, None when it does not apply."""
    if rc.system != SystemKind.TWO_BY_TWO or not het.beta > 1.0:
        return None
    init = rc.initial
    assert isinstance(init, State2)
    U0 = max(rc.boundary.u0, float(init.u.max()), float(init.v.max()))  # type: ignore[union-attr]
    if U0 <= 0:
        return None
    profile = solve_stationary_2x2(het, grid, rc.epsilon, U0, rc.boundary.alpha)  # type: ignore[union-attr]
    return supersolution_bound(profile, het)


def _snapshot_rows(state: RelaxState, grid: Grid) -> List[List[float]]:
    cols = [np.full(grid.n_cells, state.t), grid.centers, *state.fields()]
    return [list(map(float, r)) for r in zip(*cols)]


def execute_relax(
    ctx: ExperimentContext, system: SystemKind, writer: ArtifactWriter, epsilon: Optional[float] = None
) -> Tuple[RelaxState, TraceSeries, DiagnosticsReport, List[CheckVerdict]]:
    cfg, het, grid, th = ctx.config, ctx.het, ctx.grid, ctx.thresholds
    rc = relax_config_from(cfg, het, grid, system, epsilon)
    ceiling = ceiling_for(het, grid, rc)

    rows: List[List[float]] = []

    def _snapshot(state: RelaxState, _step: int) -> None:
        rows.extend(_snapshot_rows(state, grid))

    final, traces, report = run(rc, het, grid, [_snapshot], p_levels=cfg.p_samples, ceiling=ceiling)

    verdicts = [decide_ceiling(report, th), *decide_time_bv(report, th), decide_entropy(report, grid.dx, th), decide_mass_balance(report, th)]

    writer.write_csv("snapshots.csv", ["t", "x", *final.names], rows)
    writer.write_csv("traces.csv", traces.columns(), traces.rows())
    writer.write_json(
        "report.json",
        {
            "relax": rc.to_dict(),
            "report": report.to_dict(),
            "checks": [v.to_dict() for v in verdicts],
        },
    )
    return final, traces, report, verdicts


def _run(ctx: ExperimentContext, system: SystemKind) -> Dict[str, Any]:
    _final, _traces, report, verdicts = execute_relax(ctx, system, ctx.writer)
    return {
        "ok": True,
        "checks": verdicts,
        "summary": {
            "epsilon": report.epsilon,
            "n_steps": report.n_steps,
            "linf_max": report.linf_max,
            "bound_ceiling": report.bound_ceiling,
            "eq_dev_l2": report.eq_dev_l2,
            "entropy_worst": report.entropy_worst,
        },
    }


def run_relax2(ctx: ExperimentContext) -> Dict[str, Any]:
    return _run(ctx, SystemKind.TWO_BY_TWO)


def run_relax3(ctx: ExperimentContext) -> Dict[str, Any]:
    return _run(ctx, SystemKind.THREE_BY_THREE)
