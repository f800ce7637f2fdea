# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from diagnostics.entropy import entropy_residual_relax, entropy_residual_relax_field
from diagnostics.norms import (
    bv_x,
    combined_flux_bv,
    combined_quantity,
    compare_with_limit,
    equilibrium_defects,
    equilibrium_deviation,
    fit_order,
    initial_bv_bound,
    interface_flux,
    quadratic_entropy_dissipation,
    time_bv_step,
)
from diagnostics.report import SweepResult
from limit_solver.scheme import LimitState
from model.errors import GridMismatchError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import SystemKind, make_heterogeneity
from relax_solver.runner import run
from relax_solver.state import Boundary2, Boundary3, State2, State3, make_relax_config
from steady.kp import solve_kp

AFFINE = make_heterogeneity("Affine", [2.0])


def _steady_state(n=10):
    return State2(u=np.ones(n), v=np.full(n, 0.5))


def test_bv_x_basic():
    assert bv_x(np.array([0.0, 1.0, 0.0, 0.5])) == pytest.approx(2.5)
    assert bv_x(np.array([3.0])) == 0.0


def test_combined_quantities():
    s2 = State2(u=np.array([1.0, 2.0]), v=np.array([0.5, 0.5]))
    assert combined_quantity(s2).tolist() == [0.5, 1.5]
    s3 = State3(c1=np.array([1.0]), c2=np.array([2.0]), c3=np.array([3.0]))
    assert combined_quantity(s3).tolist() == [6.0]


def test_initial_bv_bound_counts_boundary_ghosts():
    state = State2(u=np.array([1.0, 1.0]), v=np.array([0.5, 0.5]))
    assert initial_bv_bound(state, Boundary2(u0=0.0, alpha=0.5)) == pytest.approx(1.0)
    assert initial_bv_bound(state, Boundary2(u0=1.0, alpha=0.5)) == 0.0

    s3 = State3(c1=np.ones(2), c2=np.ones(2), c3=np.full(2, 0.5))
    assert initial_bv_bound(s3, Boundary3(c01=1.0, c02=1.0)) == pytest.approx(0.5)


def test_interface_flux_has_one_value_per_face():
    state = _steady_state(4)
    flux = interface_flux(state, Boundary2(u0=1.0, alpha=0.5))
    assert flux.shape == (5,)
    np.testing.assert_allclose(flux, 0.5)
    assert combined_flux_bv(state, Boundary2(u0=1.0, alpha=0.5)) == 0.0


def test_time_bv_step():
    a = State2(u=np.zeros(4), v=np.zeros(4))
    b = State2(u=np.array([0.0, 1.0, 0.0, 0.0]), v=np.array([0.0, 0.0, 0.5, 0.0]))
    assert time_bv_step(a, b, dt=0.1, dx=0.25) == pytest.approx(1.5 * 0.25 / 0.1)


def test_equilibrium_defects_and_deviation():
    grid = Grid(1.0, 10)
    on = _steady_state()
    assert np.max(np.abs(equilibrium_defects(on, AFFINE, grid)[0])) == 0.0
    off = State2(u=np.full(10, 1.2), v=np.full(10, 0.5))
    # five snapshots, constant defect 0.2: integral 0.04 * L * T with T = 4 dt
    dev = equilibrium_deviation([off] * 5, AFFINE, grid, dt=0.1)
    assert dev == pytest.approx(math.sqrt(0.04 * 0.4))

    s3 = State3(c1=np.full(10, 1.0), c2=np.full(10, 1.0), c3=np.full(10, 0.5))
    d1, d2 = equilibrium_defects(s3, AFFINE, grid)
    np.testing.assert_allclose(d1, 0.0)
    np.testing.assert_allclose(d2, 0.0)


def test_quadratic_entropy_dissipation():
    assert quadratic_entropy_dissipation(0.1, 0.01) == pytest.approx(1.0)


def test_entropy_residual_negative_control():
    grid = Grid(1.0, 10)
    bc = Boundary2(u0=1.0, alpha=0.5)
    kp = solve_kp(AFFINE, grid, 0.5, SystemKind.TWO_BY_TWO)
    prev = _steady_state()
    dt = 0.1
    assert entropy_residual_relax(prev, prev, AFFINE, grid, kp, dt, bc) == pytest.approx(0.0, abs=1e-12)

    u = prev.u.copy()
    u[3] += 0.1
    nxt = State2(u=u, v=prev.v.copy(), t=dt)
    field = entropy_residual_relax_field(prev, nxt, AFFINE, grid, kp, dt, bc)
    assert field[3] == pytest.approx(0.1 / dt)
    assert np.max(np.abs(np.delete(field, 3))) <= 1e-12


def test_compare_with_limit_requires_same_grid_time_and_system():
    grid = Grid(1.0, 4)
    relax = State2(u=np.ones(4), v=np.full(4, 0.5), t=1.0)
    limit = LimitState(rho=np.full(4, 1.25), t=1.0, system=SystemKind.TWO_BY_TWO, rho_in=1.5)
    assert compare_with_limit(relax, limit, grid, grid) == pytest.approx(0.25)
    with pytest.raises(GridMismatchError):
        compare_with_limit(relax, limit, grid, Grid(1.0, 8))
    with pytest.raises(GridMismatchError):
        compare_with_limit(relax, LimitState(limit.rho, 0.5, SystemKind.TWO_BY_TWO, 1.5), grid, grid)
    with pytest.raises(GridMismatchError):
        compare_with_limit(relax, LimitState(limit.rho, 1.0, SystemKind.THREE_BY_THREE, 1.5), grid, grid)


def test_fit_order_recovers_power_laws():
    eps = [1e-1, 1e-2, 1e-3, 1e-4]
    assert fit_order(eps, [e ** 0.5 for e in eps]) == pytest.approx(0.5)
    assert fit_order(eps, [3.0 * e for e in eps]) == pytest.approx(1.0)
    with pytest.raises(ModelDomainError):
        fit_order(eps[:2], [1.0, 2.0])
    with pytest.raises(ModelDomainError):
        fit_order(eps[:3], [1.0, 0.0, 2.0])


def test_sweep_summary_rows_carry_local_orders():
    grid = Grid(1.0, 20)
    reports = []
    for eps in (1e-1, 1e-2):
        cfg = make_relax_config(
            AFFINE, grid, system=SystemKind.TWO_BY_TWO, epsilon=eps, t_end=0.1,
            u0=1.0, alpha=0.5, v0=np.full(20, 0.5),
        )
        reports.append(run(cfg, AFFINE, grid)[2])
    result = SweepResult(system="TwoByTwo", epsilons=[1e-1, 1e-2], reports=reports, l1_distances=[0.1, 0.01])
    rows = result.summary_rows()
    assert [r["eps"] for r in rows] == [1e-1, 1e-2]
    assert rows[0]["l1_order"] is None
    assert rows[1]["l1_order"] == pytest.approx(1.0)
    assert rows[1]["bvx_u"] == pytest.approx(0.0, abs=1e-10)
    assert result.to_dict()["l1_distances"] == [0.1, 0.01]


def test_run_report_integrates_the_defect_like_equilibrium_deviation():
    grid = Grid(1.0, 40)
    y = grid.centers
    cfg = make_relax_config(
        AFFINE, grid, system=SystemKind.TWO_BY_TWO, epsilon=0.05, t_end=0.2, u0=1.0, alpha=0.5,
        v0=np.full(40, 0.5), u_init=1.0 + 0.3 * np.sin(2.0 * np.pi * y), well_prepared=False, snapshot_every=1,
    )
    snapshots = []
    _final, _series, report = run(cfg, AFFINE, grid, [lambda s, _k: snapshots.append(s)], p_levels=[])
    n, dt = cfg.time_steps(grid)
    assert len(snapshots) == n + 1
    assert report.eq_dev_l2 > 0
    assert report.eq_dev_l2 == pytest.approx(equilibrium_deviation(snapshots, AFFINE, grid, dt), rel=1e-12)
