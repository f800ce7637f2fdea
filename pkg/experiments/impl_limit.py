"""limit2 / limit3 experiments and the single-run helper shared with compare."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from experiments.artifacts import ArtifactWriter
from experiments.config import profile_values
from experiments.contract import ExperimentContext
from experiments.impl_relax import relax_config_from
from limit_solver.entropy import BlnReport, bln_check, sample_p_levels
from limit_solver.runner import LimitRun, run_limit
from limit_solver.scheme import LimitState, flux_values, inflow_density, reconstruct_v
from model.heterogeneity import SystemKind
from policy.policy import CheckVerdict, Verdict, decide_upper
from steady.kp import KpProfile, solve_kp


def limit_initial(ctx: ExperimentContext, system: SystemKind) -> LimitState:
    cfg, het, grid = ctx.config, ctx.het, ctx.grid
    r = cfg.relax
    if system == SystemKind.TWO_BY_TWO:
        rho_in = inflow_density(het, system, u0=r.u0)
    else:
        rho_in = inflow_density(het, system, c01=r.c01, c02=r.c02)
    if cfg.limit.rho0 is not None:
        rho0 = profile_values(cfg.limit.rho0, grid)
    else:
        rho0 = relax_config_from(cfg, het, grid, system).initial.total()
    return LimitState(rho=np.asarray(rho0, dtype=float), t=0.0, system=system, rho_in=rho_in)


def limit_p_levels(ctx: ExperimentContext, initial: LimitState) -> List[float]:
    if ctx.config.p_samples is not None:
        return list(ctx.config.p_samples)
    F = flux_values(ctx.het, initial.rho, ctx.grid.centers, initial.system)
    F_in = float(flux_values(ctx.het, initial.rho_in, 0.0, initial.system))
    return sample_p_levels(max(float(F.max()), F_in), [F_in], ctx.config.n_p_samples)


def execute_limit(
    ctx: ExperimentContext,
    system: SystemKind,
    writer: ArtifactWriter,
    *,
    t_end: Optional[float] = None,
    w_trace: Optional[Tuple[Sequence[float], Sequence[float]]] = None,
) -> Tuple[LimitRun, BlnReport, List[CheckVerdict]]:
    cfg, het, grid, th = ctx.config, ctx.het, ctx.grid, ctx.thresholds
    initial = limit_initial(ctx, system)
    levels = limit_p_levels(ctx, initial)
    kps: List[KpProfile] = []
    if system == SystemKind.THREE_BY_THREE or het.beta > 1.0:
        kps = [solve_kp(het, grid, p, system) for p in levels]

    rows: List[List[float]] = []

    def _snapshot(state: LimitState, _step: int) -> None:
        v = reconstruct_v(het, state.rho, grid.centers, system)
        rows.extend([state.t, x, r, vv] for x, r, vv in zip(grid.centers.tolist(), state.rho.tolist(), v.tolist()))

    horizon = cfg.limit.t_end if cfg.limit.t_end is not None else cfg.relax.t_end
    run = run_limit(
        het,
        grid,
        initial,
        t_end=horizon if t_end is None else t_end,
        cfl=cfg.limit.cfl,
        snapshot_every=cfg.snapshot_every,
        observers=[_snapshot],
        entropy_checks=kps,
    )

    w_times, w_values = (None, None) if w_trace is None else w_trace
    bln = bln_check(
        het, grid, system, run.times, run.face_flux_left, run.flux_right, initial.rho_in, levels, w_times, w_values
    )
    # first-cell trace: how far the solution next to x = 0 still is from the inflow state
    cell_x0 = bln_check(het, grid, system, run.times, run.flux_left, run.flux_right, initial.rho_in, levels).worst_x0

    entropy_worst = max(run.entropy_worst.values()) if run.entropy_worst else 0.0
    verdicts = [
        decide_upper("entropy_limit", entropy_worst, th.entropy_tol_factor * (grid.dx + run.dt), "dissipative", "entropy_production"),
        decide_upper("limit_max_principle", run.max_principle_violation, th.max_principle_tol, "non_expanding", "range_expanded"),
        decide_upper("bln_boundary", bln.worst, th.bln_tol, "admissible_traces", "boundary_violation"),
        CheckVerdict(
            "bln_x0_cell_transient",
            Verdict.INFO,
            cell_x0,
            th.bln_tol,
            ["inflow_settled" if cell_x0 <= th.bln_tol else "inflow_transient"],
        ),
    ]

    writer.write_csv("limit_snapshots.csv", ["t", "x", "rho", "v_reconstructed"], rows)
    writer.write_csv(
        "limit_traces.csv",
        ["t", "rho_0", "rho_L", "flux_0", "flux_L"],
        zip(run.times, run.rho_left, run.rho_right, run.flux_left, run.flux_right),
    )
    writer.write_json(
        "limit_report.json",
        {
            "limit": {"system": system.value, "rho_in": initial.rho_in, "p_samples": levels, **run.to_dict()},
            "bln": {**bln.to_dict(), "x0_cell_transient": cell_x0},
            "checks": [v.to_dict() for v in verdicts],
        },
    )
    return run, bln, verdicts


def _run(ctx: ExperimentContext, system: SystemKind) -> Dict[str, Any]:
    run, bln, verdicts = execute_limit(ctx, system, ctx.writer)
    return {
        "ok": True,
        "checks": verdicts,
        "summary": {
            "n_steps": run.n_steps,
            "dt": run.dt,
            "entropy_worst": max(run.entropy_worst.values()) if run.entropy_worst else 0.0,
            "bln_worst": bln.worst,
        },
    }


def run_limit2(ctx: ExperimentContext) -> Dict[str, Any]:
    return _run(ctx, SystemKind.TWO_BY_TWO)


def run_limit3(ctx: ExperimentContext) -> Dict[str, Any]:
    return _run(ctx, SystemKind.THREE_BY_THREE)
