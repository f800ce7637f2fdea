# -*- coding: utf-8 -*-

from dataclasses import replace

import pytest

from diagnostics.report import DiagnosticsReport
from policy.policy import (
    CheckThresholds,
    Verdict,
    all_passed,
    decide_ceiling,
    decide_combined_bv,
    decide_entropy,
    decide_l1_convergence,
    decide_mass_balance,
    decide_negative_control,
    decide_order,
    decide_time_bv,
)

TH = CheckThresholds()


def _report(**overrides) -> DiagnosticsReport:
    base = DiagnosticsReport(
        system="TwoByTwo",
        epsilon=0.01,
        n_steps=3,
        dt=0.01,
        linf={"u": 1.0, "v": 0.5},
        bv_t_series=[1.0, 0.9, 0.9],
        bv_t_initial_bound=1.2,
        bv_x_combined=0.4,
        bv_x_combined_initial=0.3,
        bv_x_combined_max=0.4,
        combined_flux_bv_max=0.5,
        bv_x_separate={"u": 0.2, "v": 0.1},
        bv_x_separate_initial={"u": 0.1, "v": 0.1},
        eq_dev_l2=0.01,
        eq_dev_components=[0.01],
        quadratic_entropy_dissipation=0.01,
        entropy_worst_residual={0.0: -1.0, 0.5: 1e-15},
        mass_balance_error=1e-14,
        corner_mismatch=0.0,
        well_prepared=True,
        bound_ceiling=2.0,
    )
    return replace(base, **overrides)


def test_ceiling_pass_fail_and_not_applicable():
    assert decide_ceiling(_report(), TH).verdict == Verdict.PASS
    failed = decide_ceiling(_report(linf={"u": 2.1}), TH)
    assert failed.verdict == Verdict.FAIL
    assert failed.reason_codes == ["ceiling_exceeded"]
    assert decide_ceiling(_report(bound_ceiling=None), TH).reason_codes == ["no_ceiling"]


def test_time_bv_monotone_and_initial_bound():
    verdicts = decide_time_bv(_report(), TH)
    assert [v.name for v in verdicts] == ["time_bv_monotone", "time_bv_initial"]
    assert all_passed(verdicts)

    rising = decide_time_bv(_report(bv_t_series=[1.0, 1.1]), TH)
    assert rising[0].verdict == Verdict.FAIL
    assert rising[0].reason_codes == ["increase_detected"]

    above = decide_time_bv(_report(bv_t_series=[1.5]), TH)
    assert above[1].verdict == Verdict.FAIL


def test_time_bv_not_applicable_without_well_prepared_data():
    verdicts = decide_time_bv(_report(well_prepared=False, bv_t_series=[1.0, 5.0]), TH)
    assert len(verdicts) == 1 and verdicts[0].passed
    assert verdicts[0].reason_codes == ["not_well_prepared"]


def test_entropy_threshold_scales_with_mesh():
    report = _report(entropy_worst_residual={0.5: 0.15})
    assert decide_entropy(report, dx=0.01, th=TH).passed
    assert not decide_entropy(report, dx=0.001, th=TH).passed


def test_mass_balance():
    assert decide_mass_balance(_report(), TH).passed
    assert not decide_mass_balance(_report(mass_balance_error=1e-6), TH).passed


def test_combined_bv_uses_the_worst_member():
    ok = _report()
    bad = _report(bv_x_combined=3.0)
    assert decide_combined_bv([ok], TH).passed
    verdict = decide_combined_bv([ok, bad], TH)
    assert verdict.verdict == Verdict.FAIL
    assert verdict.value == 3.0 - (0.3 + 1.2)


def test_negative_control_compares_smallest_and_largest_epsilon():
    grows = decide_negative_control([_report(bv_x_separate={"u": 0.1}), _report(bv_x_separate={"u": 0.5})], "u", TH)
    assert grows.verdict == Verdict.INFO
    assert grows.value == pytest.approx(5.0)
    assert grows.reason_codes == ["separate_bv_grows"]

    shrinks = [_report(bv_x_separate={"u": u}) for u in (0.4, 0.3, 0.2)]
    bounded = decide_negative_control(shrinks, "u", TH)
    assert bounded.value == pytest.approx(0.5)
    assert bounded.reason_codes == ["separate_bv_bounded"]

    short = decide_negative_control([_report()], "u", TH)
    assert short.reason_codes == ["sweep_too_short"]
    # an observation never fails a run
    assert all_passed([grows, bounded, short])


def test_order_decision():
    assert decide_order("eq_dev_order", 0.5, 0.4).passed
    assert not decide_order("eq_dev_order", 0.3, 0.4).passed
    missing = decide_order("eq_dev_order", None, 0.4)
    assert missing.reason_codes == ["order_unavailable"]


def test_l1_convergence_monotone_and_drop():
    monotone, drop = decide_l1_convergence([0.1, 0.05, 0.02, 0.01], TH)
    assert monotone.passed and drop.passed
    assert drop.value == pytest.approx(10.0)

    # any rise fails by default
    monotone, _ = decide_l1_convergence([0.1, 0.03, 0.0301, 0.01], TH)
    assert not monotone.passed
    assert monotone.value == pytest.approx(1e-4)
    slack = replace(TH, l1_monotone_rel_tol=0.05)
    assert decide_l1_convergence([0.1, 0.03, 0.0309, 0.01], slack)[0].passed
    monotone, drop = decide_l1_convergence([0.1, 0.03, 0.05, 0.05], TH)
    assert not monotone.passed
    assert not drop.passed


def test_verdict_line_and_dict():
    v = decide_mass_balance(_report(), TH)
    assert v.line().startswith("PASS mass_balance value=")
    d = v.to_dict()
    assert d["verdict"] == "PASS"
    assert d["reason_codes"] == ["balanced"]
