# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

from model.errors import CflError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import SystemKind, h_values, make_heterogeneity
from relax_solver.runner import run
from relax_solver.scheme import (
    boundary_mass_change,
    relax_cells_2x2,
    relax_cells_3x3,
    step_2x2,
    step_3x3,
    transport_2x2,
)
from relax_solver.state import Boundary2, State2, State3, corner_mismatch, make_relax_config, with_epsilon

AFFINE = make_heterogeneity("Affine", [2.0])
SMOOTH = make_heterogeneity("SmoothNonlinear", [2.0, 0.25, 0.25])


def _steady_config(grid, epsilon=0.1, t_end=0.2):
    return make_relax_config(
        AFFINE, grid, system=SystemKind.TWO_BY_TWO, epsilon=epsilon, t_end=t_end,
        u0=1.0, alpha=0.5, v0=np.full(grid.n_cells, 0.5),
    )


def _smooth_config(grid, epsilon=0.01, t_end=0.3):
    y = grid.centers
    return make_relax_config(
        SMOOTH, grid, system=SystemKind.TWO_BY_TWO, epsilon=epsilon, t_end=t_end,
        u0=1.0, alpha=0.3, v0=0.3 + 0.1 * np.cos(2.0 * np.pi * y),
    )


def test_well_prepared_data_lies_on_equilibrium():
    grid = Grid(1.0, 20)
    cfg = _smooth_config(grid)
    np.testing.assert_allclose(cfg.initial.u, h_values(SMOOTH, cfg.initial.v, grid.centers))
    assert corner_mismatch(cfg.initial, cfg.boundary) == pytest.approx(abs(cfg.initial.u[0] - 1.0))


def test_make_relax_config_rejects_bad_input():
    grid = Grid(1.0, 10)
    ok = dict(system=SystemKind.TWO_BY_TWO, epsilon=0.1, t_end=1.0, u0=1.0, v0=np.full(10, 0.5))
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "alpha": 1.0})
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "cfl": 1.5})
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "epsilon": 0.0})
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "v0": np.full(9, 0.5)})
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "v0": np.full(10, -0.5)})
    with pytest.raises(ModelDomainError):
        make_relax_config(AFFINE, grid, **{**ok, "well_prepared": False})
    with pytest.raises(ModelDomainError):
        with_epsilon(make_relax_config(AFFINE, grid, **ok), -1.0)


def test_time_steps_land_on_t_end():
    grid = Grid(1.0, 100)
    n, dt = _steady_config(grid, t_end=1.0).time_steps(grid)
    assert n == 100
    assert dt == pytest.approx(0.01)
    assert _steady_config(grid, t_end=0.0).time_steps(grid) == (0, 0.0)


def test_transport_at_unit_courant_number_is_an_exact_shift():
    state = State2(u=np.array([1.0, 2.0, 3.0]), v=np.array([4.0, 5.0, 6.0]))
    moved = transport_2x2(state, Boundary2(u0=0.5, alpha=0.5), dt=0.1, dx=0.1)
    assert moved.u.tolist() == [0.5, 1.0, 2.0]
    assert moved.v.tolist() == [5.0, 6.0, 1.5]


def test_transport_rejects_courant_above_one():
    state = State2(u=np.ones(3), v=np.ones(3))
    with pytest.raises(CflError):
        transport_2x2(state, Boundary2(u0=1.0, alpha=0.5), dt=0.2, dx=0.1)


def test_affine_steady_state_is_preserved_by_a_step():
    grid = Grid(1.0, 100)
    cfg = _steady_config(grid)
    nxt = step_2x2(cfg.initial, AFFINE, grid, cfg)
    np.testing.assert_allclose(nxt.u, 1.0, atol=1e-12)
    np.testing.assert_allclose(nxt.v, 0.5, atol=1e-12)
    assert nxt.t == pytest.approx(grid.dx)


def test_relaxation_substeps_conserve_cell_sums():
    rng = np.random.default_rng(7)
    x = np.linspace(0.05, 0.95, 10)
    u, v = rng.uniform(0.0, 3.0, 10), rng.uniform(0.0, 3.0, 10)
    u1, v1 = relax_cells_2x2(u, v, SMOOTH, x, 0.01, 1e-3)
    np.testing.assert_allclose(u1 + v1, u + v, rtol=1e-14, atol=1e-13)
    assert np.all(u1 >= 0) and np.all(v1 >= 0)

    c1, c2, c3 = rng.uniform(0.0, 3.0, 10), rng.uniform(0.0, 3.0, 10), rng.uniform(0.0, 3.0, 10)
    d1, d2, d3 = relax_cells_3x3(c1, c2, c3, SMOOTH, x, 0.01, 1e-3)
    np.testing.assert_allclose(d1 + d2 + d3, c1 + c2 + c3, rtol=1e-14, atol=1e-13)


def test_three_by_three_difference_decays_exponentially():
    x = np.linspace(0.05, 0.95, 10)
    c1 = np.full(10, 1.0)
    c2 = np.full(10, 0.2)
    c3 = np.linspace(0.1, 1.0, 10)
    dt, eps = 0.01, 0.02
    d1, d2, _d3 = relax_cells_3x3(c1, c2, c3, SMOOTH, x, dt, eps)
    expected = (c1 - c2) * math.exp(-dt / eps)
    np.testing.assert_allclose(d1 - d2, expected, rtol=1e-12)


def test_step_matches_boundary_mass_change():
    grid = Grid(1.0, 50)
    cfg = _smooth_config(grid)
    dt = grid.dx
    nxt = step_2x2(cfg.initial, SMOOTH, grid, cfg, dt)
    change = float((nxt.total() - cfg.initial.total()).sum() * grid.dx)
    assert change == pytest.approx(boundary_mass_change(cfg.initial, cfg.boundary, dt), abs=1e-13)


def test_equal_inflows_keep_c1_equal_to_c2():
    grid = Grid(1.0, 40)
    c3 = 0.5 + 0.2 * np.sin(np.pi * grid.centers)
    cfg = make_relax_config(
        AFFINE, grid, system=SystemKind.THREE_BY_THREE, epsilon=0.05, t_end=0.25, c01=1.0, c02=1.0, c3_init=c3
    )
    state = cfg.initial
    for _ in range(5):
        state = step_3x3(state, AFFINE, grid, cfg)
    assert isinstance(state, State3)
    np.testing.assert_array_equal(state.c1, state.c2)


def test_run_calls_observers_on_snapshot_cadence():
    grid = Grid(1.0, 100)
    cfg = _steady_config(grid, t_end=1.0)
    seen = []
    final, traces, report = run(cfg, AFFINE, grid, [lambda s, k: seen.append(k)])
    assert seen == [0, 40, 80, 100]
    assert report.n_steps == 100
    assert final.t == pytest.approx(1.0)
    assert traces.columns() == ["t", "u_L", "v_0"]
    assert len(traces.rows()) == 101


def test_steady_run_report():
    grid = Grid(1.0, 50)
    final, _traces, report = run(_steady_config(grid), AFFINE, grid)
    np.testing.assert_allclose(final.u, 1.0, atol=1e-10)
    assert report.mass_balance_error <= 1e-12
    assert report.eq_dev_l2 <= 1e-10
    assert report.entropy_worst <= 1e-9
    assert report.linf_max == pytest.approx(1.0, abs=1e-10)
    assert report.bound_ceiling is None


def test_explicit_p_levels_replace_the_default_sampling():
    grid = Grid(1.0, 20)
    _final, _traces, report = run(_steady_config(grid), AFFINE, grid, p_levels=[0.1, 0.5])
    assert sorted(report.entropy_worst_residual) == [0.1, 0.5]


def test_smooth_run_time_bv_is_non_increasing():
    grid = Grid(1.0, 100)
    cfg = _smooth_config(grid)
    _final, _traces, report = run(cfg, SMOOTH, grid)
    assert report.bv_t_max_increase <= 1e-8
    assert report.bv_t_series[0] <= report.bv_t_initial_bound + 1e-8
    assert report.entropy_worst <= 10.0 * (grid.dx + report.dt)
    assert report.mass_balance_error <= 1e-10


@pytest.mark.parametrize("epsilon", [0.05, 1e-3])
def test_nonnegative_data_stays_nonnegative(epsilon):
    grid = Grid(1.0, 50)
    n, x = grid.n_cells, grid.centers
    gap = np.where(np.abs(x - 0.5) < 0.2, 0.0, 1.0)
    cfg2 = make_relax_config(
        SMOOTH, grid, system=SystemKind.TWO_BY_TWO, epsilon=epsilon, t_end=0.5, u0=0.0, alpha=0.9,
        v0=1.0 - gap, u_init=gap, well_prepared=False,
    )
    cfg3 = make_relax_config(
        SMOOTH, grid, system=SystemKind.THREE_BY_THREE, epsilon=epsilon, t_end=0.5, c01=1.0, c02=0.0,
        c1_init=gap, c2_init=np.zeros(n), c3_init=1.0 - gap, well_prepared=False,
    )
    for cfg, step in ((cfg2, step_2x2), (cfg3, step_3x3)):
        steps, dt = cfg.time_steps(grid)
        state = cfg.initial
        for _ in range(steps):
            state = step(state, SMOOTH, grid, cfg, dt)
            assert min(float(arr.min()) for arr in state.fields()) >= -1e-12
