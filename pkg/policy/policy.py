# -*- coding: utf-8 -*-
"""
Central verdict policy for invariant checks.

Goals:
- Deterministic, testable PASS/FAIL decisions (no implicit magic)
- Thresholds are data (CheckThresholds), overridable from the experiment config
- Every decision carries machine-readable reason codes
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence

from diagnostics.report import DiagnosticsReport


# ============================
# Types
# ============================

class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    # measured and reported, never fails a run
    INFO = "INFO"


@dataclass(frozen=True)
class CheckThresholds:
    ceiling_tol: float = 1e-8
    bv_t_step_tol: float = 1e-8
    bv_t_initial_tol: float = 1e-8
    bv_x_combined_tol: float = 1e-6
    negative_control_factor: float = 2.0
    eq_dev_min_order: float = 0.4
    l1_drop_factor: float = 4.0
    l1_monotone_rel_tol: float = 0.0
    entropy_tol_factor: float = 10.0
    well_balanced_tol: float = 1e-13
    structural_rel_tol: float = 1e-12
    mass_balance_tol: float = 1e-10
    bln_tol: float = 1e-6
    steady_tol: float = 1e-8
    max_principle_tol: float = 1e-12

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CheckVerdict:
    name: str
    verdict: Verdict
    value: Optional[float]
    threshold: Optional[float]
    reason_codes: List[str]

    @property
    def passed(self) -> bool:
        return self.verdict != Verdict.FAIL

    def line(self) -> str:
        val = "n/a" if self.value is None else f"{self.value:.6g}"
        lim = "n/a" if self.threshold is None else f"{self.threshold:.6g}"
        return f"{self.verdict.value} {self.name} value={val} threshold={lim} [{','.join(self.reason_codes)}]"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "value": self.value,
            "threshold": self.threshold,
            "reason_codes": list(self.reason_codes),
        }


def _decide(name: str, ok: bool, value: Optional[float], threshold: Optional[float], ok_code: str, fail_code: str) -> CheckVerdict:
    return CheckVerdict(
        name=name,
        verdict=Verdict.PASS if ok else Verdict.FAIL,
        value=value,
        threshold=threshold,
        reason_codes=[ok_code if ok else fail_code],
    )


def all_passed(verdicts: Iterable[CheckVerdict]) -> bool:
    return all(v.passed for v in verdicts)


# ============================
# Single-run decisions
# ============================

def decide_ceiling(report: DiagnosticsReport, th: CheckThresholds) -> CheckVerdict:
    """Invariant: fields never exceed the stationary supersolution ceiling."""
    if report.bound_ceiling is None:
        return CheckVerdict("linf_ceiling", Verdict.PASS, report.linf_max, None, ["no_ceiling"])
    limit = report.bound_ceiling + th.ceiling_tol
    return _decide("linf_ceiling", report.linf_max <= limit, report.linf_max, limit, "below_ceiling", "ceiling_exceeded")


def decide_time_bv(report: DiagnosticsReport, th: CheckThresholds) -> List[CheckVerdict]:
    """Invariant: for well-prepared data the time-BV is non-increasing and starts below K1 + K2."""
    if not report.well_prepared:
        return [CheckVerdict("time_bv", Verdict.PASS, None, None, ["not_well_prepared"])]
    out = [
        _decide(
            "time_bv_monotone",
            report.bv_t_max_increase <= th.bv_t_step_tol,
            report.bv_t_max_increase,
            th.bv_t_step_tol,
            "non_increasing",
            "increase_detected",
        )
    ]
    if report.bv_t_series:
        first = report.bv_t_series[0]
        limit = report.bv_t_initial_bound + th.bv_t_initial_tol
        out.append(_decide("time_bv_initial", first <= limit, first, limit, "below_initial_bv", "above_initial_bv"))
    return out


def decide_entropy(report: DiagnosticsReport, dx: float, th: CheckThresholds) -> CheckVerdict:
    limit = th.entropy_tol_factor * (dx + report.dt)
    worst = report.entropy_worst
    return _decide("entropy_relax", worst <= limit, worst, limit, "dissipative", "entropy_production")


def decide_mass_balance(report: DiagnosticsReport, th: CheckThresholds) -> CheckVerdict:
    return _decide(
        "mass_balance", report.mass_balance_error <= th.mass_balance_tol, report.mass_balance_error,
        th.mass_balance_tol, "balanced", "mass_defect",
    )


def decide_steady_constant(name: str, value: float, expected: float, th: CheckThresholds) -> CheckVerdict:
    err = abs(value - expected)
    return _decide(name, err <= th.steady_tol, err, th.steady_tol, "matches_oracle", "oracle_mismatch")


def decide_upper(name: str, value: float, limit: float, ok_code: str = "within_bound", fail_code: str = "bound_exceeded") -> CheckVerdict:
    return _decide(name, value <= limit, value, limit, ok_code, fail_code)


# ============================
# Sweep decisions
# ============================

def decide_combined_bv(reports: Sequence[DiagnosticsReport], th: CheckThresholds) -> CheckVerdict:
    """Invariant: x-BV of the combined quantity is bounded uniformly in epsilon."""
    worst_margin = None
    for r in reports:
        margin = r.bv_x_combined - (r.bv_x_combined_initial + r.bv_t_initial_bound)
        worst_margin = margin if worst_margin is None else max(worst_margin, margin)
    if worst_margin is None:
        return CheckVerdict("bv_x_combined_uniform", Verdict.PASS, None, th.bv_x_combined_tol, ["empty_sweep"])
    return _decide(
        "bv_x_combined_uniform", worst_margin <= th.bv_x_combined_tol, worst_margin, th.bv_x_combined_tol,
        "uniform_in_eps", "combined_bv_growth",
    )


def decide_negative_control(reports: Sequence[DiagnosticsReport], component: str, th: CheckThresholds) -> CheckVerdict:
    """
    Separate x-BV of one component at t_end, smallest epsilon over largest.

    Reported as an observation: the combined quantity is the one with a
    uniform bound, the separate variation carries no claim either way.
    """
    if len(reports) < 2:
        return CheckVerdict("negative_control_bv_x", Verdict.INFO, None, th.negative_control_factor, ["sweep_too_short"])
    coarse = reports[0].bv_x_separate.get(component, 0.0)
    fine = reports[-1].bv_x_separate.get(component, 0.0)
    ratio = fine / coarse if coarse > 0 else float("inf")
    code = "separate_bv_grows" if ratio >= th.negative_control_factor else "separate_bv_bounded"
    return CheckVerdict("negative_control_bv_x", Verdict.INFO, ratio, th.negative_control_factor, [code])


def decide_order(name: str, order: Optional[float], minimum: float) -> CheckVerdict:
    if order is None:
        return CheckVerdict(name, Verdict.FAIL, None, minimum, ["order_unavailable"])
    return _decide(name, order >= minimum, order, minimum, "order_reached", "order_too_low")


def decide_l1_convergence(l1_distances: Sequence[float], th: CheckThresholds) -> List[CheckVerdict]:
    """Distance to the limit decreases along the sweep and drops by a fixed factor overall."""
    d = list(l1_distances)
    if len(d) < 2:
        return [CheckVerdict("l1_convergence", Verdict.FAIL, None, None, ["sweep_too_short"])]
    worst_rise = max((b - a * (1.0 + th.l1_monotone_rel_tol)) for a, b in zip(d[:-1], d[1:]))
    drop = d[0] / d[-1] if d[-1] > 0 else float("inf")
    return [
        _decide("l1_monotone", worst_rise <= 0.0, worst_rise, 0.0, "monotone", "non_monotone"),
        _decide("l1_drop", drop >= th.l1_drop_factor, drop, th.l1_drop_factor, "drop_reached", "drop_too_small"),
    ]
