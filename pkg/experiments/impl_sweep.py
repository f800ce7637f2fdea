"""
sweep-eps and compare experiments.

Sweep members are independent relaxation runs, executed in a thread pool;
every member writes into its own sub-directory.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

from diagnostics.norms import compare_with_limit, fit_order
from diagnostics.report import DiagnosticsReport, SweepResult
from experiments.contract import ExperimentContext
from experiments.impl_limit import execute_limit
from experiments.impl_relax import execute_relax
from model.heterogeneity import SystemKind
from policy.policy import CheckVerdict, decide_combined_bv, decide_l1_convergence, decide_negative_control, decide_order
from relax_solver.runner import RelaxState, TraceSeries
from run_logger import bind_run_id, jlog, reset_run_id

Member = Tuple[RelaxState, TraceSeries, DiagnosticsReport, List[CheckVerdict]]


def member_dir(index: int, epsilon: float) -> str:
    return f"eps_{index:02d}_{epsilon:.3e}"


def run_members(ctx: ExperimentContext, system: SystemKind) -> List[Member]:
    sweep = ctx.config.sweep
    assert sweep is not None

    def _one(index: int, epsilon: float) -> Member:
        token = bind_run_id(ctx.run_id)
        try:
            jlog("sweep_member_start", index=index, epsilon=epsilon)
            out = execute_relax(ctx, system, ctx.writer.child(member_dir(index, epsilon)), epsilon)
            jlog("sweep_member_done", index=index, epsilon=epsilon, eq_dev_l2=out[2].eq_dev_l2)
            return out
        finally:
            reset_run_id(token)

    jobs = max(1, min(ctx.jobs, len(sweep.epsilons)))
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(_one, i, eps) for i, eps in enumerate(sweep.epsilons)]
        return [f.result() for f in futures]


def _orders(epsilons: List[float], reports: List[DiagnosticsReport], l1: Optional[List[float]]) -> Dict[str, Optional[float]]:
    out: Dict[str, Optional[float]] = {"eq_dev": None, "l1_dist": None}
    if len(epsilons) < 3:
        return out
    devs = [r.eq_dev_l2 for r in reports]
    if min(devs) > 0:
        out["eq_dev"] = fit_order(epsilons, devs)
    if l1 is not None and min(l1) > 0:
        out["l1_dist"] = fit_order(epsilons, l1)
    return out


def _member_checks(members: List[Member]) -> List[CheckVerdict]:
    checks: List[CheckVerdict] = []
    for i, (_f, _t, _rep, verdicts) in enumerate(members):
        for v in verdicts:
            checks.append(CheckVerdict(f"eps_{i:02d}.{v.name}", v.verdict, v.value, v.threshold, v.reason_codes))
    return checks


def _write_sweep(ctx: ExperimentContext, result: SweepResult, checks: List[CheckVerdict]) -> None:
    rows = result.summary_rows()
    columns = ["eps", "eq_dev", "l1_dist", "bvx_combined", "bvx_u", "eq_dev_sq_over_eps", "eq_dev_order", "l1_order"]
    ctx.writer.write_csv("sweep_summary.csv", columns, ([row[c] for c in columns] for row in rows))
    ctx.writer.write_json("sweep.json", {"sweep": result.to_dict(), "checks": [v.to_dict() for v in checks]})


def run_sweep_eps(ctx: ExperimentContext) -> Dict[str, Any]:
    sweep = ctx.config.sweep
    assert sweep is not None
    th = ctx.thresholds
    members = run_members(ctx, sweep.system)
    reports = [m[2] for m in members]
    result = SweepResult(
        system=sweep.system.value,
        epsilons=list(sweep.epsilons),
        reports=reports,
        orders=_orders(list(sweep.epsilons), reports, None),
    )

    checks = _member_checks(members) + [decide_combined_bv(reports, th)]
    if sweep.check_order and len(sweep.epsilons) >= 3:
        checks.append(decide_order("eq_dev_order", result.orders["eq_dev"], th.eq_dev_min_order))
    if sweep.negative_control:
        first = "u" if sweep.system == SystemKind.TWO_BY_TWO else "c1"
        checks.append(decide_negative_control(reports, first, th))

    _write_sweep(ctx, result, checks)
    return {"ok": True, "checks": checks, "summary": {"orders": result.orders, "epsilons": result.epsilons}}


def run_compare(ctx: ExperimentContext) -> Dict[str, Any]:
    sweep = ctx.config.sweep
    assert sweep is not None
    th = ctx.thresholds
    system = sweep.system
    members = run_members(ctx, system)
    reports = [m[2] for m in members]

    w_trace = None
    if system == SystemKind.THREE_BY_THREE:
        traces = members[-1][1]
        w_trace = (traces.times.tolist(), traces.values["c1_L"].tolist())
    limit_run, _bln, limit_checks = execute_limit(
        ctx, system, ctx.writer.child("limit"), t_end=ctx.config.relax.t_end, w_trace=w_trace
    )

    l1 = [compare_with_limit(m[0], limit_run.final, ctx.grid, ctx.grid) for m in members]
    result = SweepResult(
        system=system.value,
        epsilons=list(sweep.epsilons),
        reports=reports,
        l1_distances=l1,
        orders=_orders(list(sweep.epsilons), reports, l1),
    )

    checks = _member_checks(members) + list(limit_checks) + decide_l1_convergence(l1, th)
    checks.append(decide_combined_bv(reports, th))
    _write_sweep(ctx, result, checks)
    return {"ok": True, "checks": checks, "summary": {"l1_distances": l1, "orders": result.orders}}
