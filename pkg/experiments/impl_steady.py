"""steady and kp experiments."""

from __future__ import annotations

from typing import Any, Dict, List

import numpy as np

from experiments.contract import ExperimentContext
from limit_solver.scheme import LimitState, density_at_level, max_speed, step_limit
from policy.policy import CheckVerdict, Verdict, decide_steady_constant, decide_upper
from steady.kp import kp_residual, rho_of_kp, solve_kp
from steady.stationary import solve_stationary_2x2, supersolution_bound

KP_RESIDUAL_TOL = 1e-10
DIFFERENCE_TOL = 1e-9


def run_steady(ctx: ExperimentContext) -> Dict[str, Any]:
    s = ctx.config.steady
    het, grid, th = ctx.het, ctx.grid, ctx.thresholds
    profile = solve_stationary_2x2(het, grid, s.epsilon, s.U0, s.alpha)
    bound = supersolution_bound(profile, het)

    verdicts: List[CheckVerdict] = [
        decide_upper("K_in_bracket", max(-profile.K, profile.K - profile.U0), 0.0, "K_bracketed", "K_outside_bracket"),
        decide_upper("U_L_bound", profile.U_L, profile.U0 / (1.0 - profile.alpha) + th.steady_tol),
        decide_upper("max_U_below_ceiling", float(profile.U.max()), bound + th.steady_tol),
        decide_upper("conserved_difference", float(np.max(np.abs(profile.U - profile.V - profile.K))), DIFFERENCE_TOL),
        CheckVerdict(
            "stationary_root_unique",
            Verdict.FAIL if profile.multiple_roots else Verdict.PASS,
            float(len(profile.roots)),
            1.0,
            ["multiple_roots" if profile.multiple_roots else "unique_root"],
        ),
    ]
    if s.expected_K is not None:
        verdicts.append(decide_steady_constant("K_oracle", profile.K, s.expected_K, th))

    ctx.writer.write_csv("profile.csv", ["x", "U", "V"], zip(grid.centers, profile.U, profile.V))
    ctx.writer.write_json(
        "report.json",
        {"steady": {**profile.to_dict(), "bound_ceiling": bound}, "checks": [v.to_dict() for v in verdicts]},
    )
    return {"ok": True, "checks": verdicts, "summary": {"K": profile.K, "bound_ceiling": bound, "branch": profile.branch}}


def run_kp(ctx: ExperimentContext) -> Dict[str, Any]:
    section = ctx.config.kp
    assert section is not None
    het, grid, th = ctx.het, ctx.grid, ctx.thresholds
    system = section.system

    columns = ["x"]
    table = [grid.centers]
    entries = []
    worst_residual = 0.0
    worst_drift = 0.0
    dt = ctx.config.limit.cfl * grid.dx / max_speed(het, system)
    for i, p in enumerate(section.p):
        kp = solve_kp(het, grid, p, system)
        residual = kp_residual(het, grid, kp)
        rho_p = rho_of_kp(het, grid, kp)
        # one limit step from the steady state, inflow on the same level
        rho_in = float(density_at_level(het, p, 0.0, system))
        after = step_limit(LimitState(rho=rho_p, t=0.0, system=system, rho_in=rho_in), het, grid, dt)
        drift = float(np.max(np.abs(after.rho - rho_p)))
        worst_residual = max(worst_residual, residual)
        worst_drift = max(worst_drift, drift)
        entries.append({"p": p, "residual": residual, "limit_step_drift": drift, "k_min": float(kp.k.min()), "k_max": float(kp.k.max())})
        columns.append(f"k_{i}")
        table.append(kp.k)

    verdicts = [
        decide_upper("kp_residual", worst_residual, KP_RESIDUAL_TOL),
        decide_upper("well_balanced", worst_drift, th.well_balanced_tol, "steady_preserved", "steady_drift"),
    ]
    ctx.writer.write_csv("kp.csv", columns, zip(*table))
    ctx.writer.write_json("report.json", {"kp": {"system": system.value, "profiles": entries}, "checks": [v.to_dict() for v in verdicts]})
    return {"ok": True, "checks": verdicts, "summary": {"n_profiles": len(entries), "worst_residual": worst_residual}}
