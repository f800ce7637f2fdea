"""validate-model experiment."""

from __future__ import annotations

from typing import Any, Dict

from experiments.contract import ExperimentContext
from model.validation import validate_assumptions
from policy.policy import CheckVerdict, Verdict


def run_validate_model(ctx: ExperimentContext) -> Dict[str, Any]:
    a = ctx.config.assumptions
    report = validate_assumptions(ctx.het, ctx.grid, a.v_max, a.n_v_samples)

    def _flag(name: str, ok: bool, ok_code: str, fail_code: str) -> CheckVerdict:
        return CheckVerdict(name, Verdict.PASS if ok else Verdict.FAIL, None, None, [ok_code if ok else fail_code])

    # "not locally affine" is reported only, never a failing check
    verdicts = [
        _flag("zero_at_origin", report.zero_at_origin_ok, "h_vanishes_at_zero", "h_nonzero_at_zero"),
        _flag("slope_bounds", report.bounds_ok, "slope_within_beta_mu", "slope_outside_beta_mu"),
    ]
    ctx.writer.write_json(
        "report.json",
        {"heterogeneity": ctx.het.to_dict(), "validation": report.to_dict(), "checks": [v.to_dict() for v in verdicts]},
    )
    return {
        "ok": True,
        "checks": verdicts,
        "summary": {
            "beta_observed": report.beta_observed,
            "mu_observed": report.mu_observed,
            "hx_l1": report.hx_l1,
            "nonaffine_ok": report.nonaffine_ok,
        },
    }
