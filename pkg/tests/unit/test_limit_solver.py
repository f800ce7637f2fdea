# -*- coding: utf-8 -*-

import numpy as np
import pytest

from limit_solver.entropy import bln_check, entropy_residual_limit, sample_p_levels
from limit_solver.runner import run_limit
from limit_solver.scheme import (
    LimitState,
    density_at_level,
    flux,
    flux_values,
    inflow_density,
    l1_distance,
    limit_maximum_principle,
    max_speed,
    stable_dt,
    step_limit,
)
from model.errors import CflError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import SystemKind, make_heterogeneity
from steady.kp import rho_of_kp, solve_kp

AFFINE = make_heterogeneity("Affine", [2.0])
SMOOTH = make_heterogeneity("SmoothNonlinear", [2.0, 0.25, 0.25])
TWO, THREE = SystemKind.TWO_BY_TWO, SystemKind.THREE_BY_THREE


def test_affine_fluxes_and_speeds():
    assert flux(AFFINE, 3.0, 0.5, TWO) == pytest.approx(1.0)
    assert flux(AFFINE, 5.0, 0.5, THREE) == pytest.approx(3.0)
    assert max_speed(AFFINE, TWO) == pytest.approx(1.0 / 3.0)
    assert max_speed(AFFINE, THREE) == pytest.approx(0.6)
    with pytest.raises(ModelDomainError):
        flux(AFFINE, -1.0, 0.5, TWO)


def test_inflow_density_from_boundary_data():
    assert inflow_density(AFFINE, TWO, u0=1.0) == pytest.approx(1.5)
    assert inflow_density(AFFINE, THREE, c01=1.0, c02=1.0) == pytest.approx(2.5)
    with pytest.raises(ModelDomainError):
        inflow_density(AFFINE, THREE, c01=1.0)


@pytest.mark.parametrize("system", [TWO, THREE])
def test_density_at_level_inverts_the_flux(system):
    x = np.linspace(0.0, 1.0, 9)
    levels = np.linspace(0.0, 2.0, 9)
    rho = density_at_level(SMOOTH, levels, x, system)
    np.testing.assert_allclose(flux_values(SMOOTH, rho, x, system), levels, atol=1e-12)


@pytest.mark.parametrize("system", [TWO, THREE])
def test_steady_states_are_preserved_exactly(system):
    grid = Grid(1.0, 100)
    dt = stable_dt(SMOOTH, grid, system, 0.9)
    for p in (0.0, 0.4, 1.3):
        rho_p = rho_of_kp(SMOOTH, grid, solve_kp(SMOOTH, grid, p, system))
        rho_in = float(density_at_level(SMOOTH, p, 0.0, system))
        after = step_limit(LimitState(rho=rho_p, t=0.0, system=system, rho_in=rho_in), SMOOTH, grid, dt)
        assert np.max(np.abs(after.rho - rho_p)) <= 1e-13


def test_step_rejects_unstable_dt():
    grid = Grid(1.0, 10)
    state = LimitState(rho=np.ones(10), t=0.0, system=TWO, rho_in=1.0)
    with pytest.raises(CflError):
        step_limit(state, AFFINE, grid, 2.0 * grid.dx / max_speed(AFFINE, TWO))


def test_pulse_mass_changes_only_through_boundaries():
    grid = Grid(1.0, 100)
    rho = np.where(np.abs(grid.centers - 0.3) < 0.1, 1.5, 0.0)
    state = LimitState(rho=rho, t=0.0, system=TWO, rho_in=0.0)
    dt = stable_dt(AFFINE, grid, TWO, 0.9)
    after = step_limit(state, AFFINE, grid, dt)
    # nothing reaches x = L and the inflow is empty
    assert after.rho.sum() == pytest.approx(rho.sum(), abs=1e-12)
    assert l1_distance(after.rho, rho, grid) > 0


def test_run_limit_on_a_shock_keeps_range_and_entropy():
    grid = Grid(1.0, 100)
    rho0 = np.where(grid.centers < 0.5, 0.5, 2.0)
    rho_in = inflow_density(SMOOTH, TWO, u0=1.5)
    kps = [solve_kp(SMOOTH, grid, p, TWO) for p in (0.1, 0.3, 0.6, 0.9)]
    seen = []
    run = run_limit(
        SMOOTH, grid, LimitState(rho=rho0, t=0.0, system=TWO, rho_in=rho_in),
        t_end=0.5, cfl=0.9, snapshot_every=10, observers=[lambda s, k: seen.append(k)], entropy_checks=kps,
    )
    assert run.final.t == pytest.approx(0.5)
    assert seen[0] == 0 and seen[-1] == run.n_steps
    assert len(run.times) == run.n_steps + 1
    assert run.max_principle_violation <= 1e-12
    assert max(run.entropy_worst.values()) <= 1e-9
    assert set(run.entropy_worst) == {0.1, 0.3, 0.6, 0.9}


def test_run_limit_rejects_bad_cfl():
    grid = Grid(1.0, 10)
    with pytest.raises(CflError):
        run_limit(AFFINE, grid, LimitState(np.ones(10), 0.0, TWO, 1.0), t_end=1.0, cfl=1.5)


def test_entropy_residual_flags_a_perturbed_cell():
    grid = Grid(1.0, 20)
    kp = solve_kp(AFFINE, grid, 0.5, TWO)
    rho_p = rho_of_kp(AFFINE, grid, kp)
    before = LimitState(rho=rho_p, t=0.0, system=TWO, rho_in=1.5)
    bumped = rho_p.copy()
    bumped[7] += 0.2
    after = LimitState(rho=bumped, t=0.01, system=TWO, rho_in=1.5)
    residual = entropy_residual_limit(before, after, AFFINE, grid, 0.01, kp)
    assert residual[7] == pytest.approx(0.2 / 0.01)
    assert np.max(np.abs(np.delete(residual, 7))) <= 1e-9


def test_sample_p_levels_include_boundary_levels():
    levels = sample_p_levels(1.0, [0.37], 17)
    assert len(levels) == 17
    assert levels[0] == 0.0 and levels[-1] == 1.0
    assert 0.37 in levels
    assert levels == sorted(levels)


def test_limit_maximum_principle_measures_range_expansion():
    assert limit_maximum_principle(np.array([0.2, 0.5]), np.array([0.3, 0.4]), 0.1) == 0.0
    assert limit_maximum_principle(np.array([0.2, 0.5]), np.array([0.3, 0.7]), 0.1) == pytest.approx(0.2)


def test_bln_inflow_trace_equal_to_boundary_datum_is_admissible():
    grid = Grid(1.0, 20)
    rho_in = inflow_density(AFFINE, THREE, c01=1.0, c02=1.0)
    F_in = float(flux_values(AFFINE, rho_in, 0.0, THREE))
    times = [0.0, 0.1, 0.2]
    report = bln_check(AFFINE, grid, THREE, times, [F_in] * 3, [F_in] * 3, rho_in, [0.0, 0.5 * F_in, F_in])
    assert report.worst == pytest.approx(0.0, abs=1e-12)
    assert report.worst_xL == 0.0


def test_bln_flags_an_inflow_trace_away_from_the_datum():
    grid = Grid(1.0, 20)
    rho_in = 1.5
    # trace flux 1.0 means rho(0) = 3.0 > rho_in for the affine 2x2 law
    report = bln_check(AFFINE, grid, TWO, [0.0], [1.0], [1.0], rho_in, [0.75])
    assert report.worst_x0 == pytest.approx(0.25)
    assert report.per_p[0]["applicable_x0"] == 1


def test_bln_outflow_uses_the_relaxation_trace():
    grid = Grid(1.0, 20)
    rho_in = inflow_density(AFFINE, THREE, c01=1.0, c02=1.0)
    F_in = float(flux_values(AFFINE, rho_in, 0.0, THREE))
    report = bln_check(
        AFFINE, grid, THREE, [0.0, 1.0], [F_in, F_in], [0.9, 1.2], rho_in, [0.3, 0.6, 1.0, 1.5],
        w_times=[0.0, 1.0], w_values=[0.2, 1.4],
    )
    assert report.worst_xL <= 1e-12
    assert all("worst_xL" in entry for entry in report.per_p)


def test_run_limit_records_the_inflow_flux_on_the_boundary_face():
    grid = Grid(1.0, 50)
    rho_in = inflow_density(SMOOTH, TWO, u0=1.5)
    F_in = float(flux_values(SMOOTH, rho_in, 0.0, TWO))
    run = run_limit(SMOOTH, grid, LimitState(np.full(50, 0.5), 0.0, TWO, rho_in), t_end=0.2)
    np.testing.assert_allclose(run.face_flux_left, F_in)
    assert len(run.face_flux_left) == len(run.flux_left)
    # the first cell starts away from the inflow state
    assert run.flux_left[0] < F_in


def test_limit_scheme_contracts_l1_distance():
    grid = Grid(1.0, 100)
    x = grid.centers
    rho_in = inflow_density(SMOOTH, TWO, u0=1.0)
    a = LimitState(rho=1.0 + 0.5 * np.sin(6.0 * x), t=0.0, system=TWO, rho_in=rho_in)
    b = LimitState(rho=np.where(x < 0.4, 2.5, 0.3), t=0.0, system=TWO, rho_in=rho_in)
    dt = stable_dt(SMOOTH, grid, TWO, 0.9)
    dist = l1_distance(a.rho, b.rho, grid)
    for _ in range(300):
        a, b = step_limit(a, SMOOTH, grid, dt), step_limit(b, SMOOTH, grid, dt)
        nxt = l1_distance(a.rho, b.rho, grid)
        assert nxt <= dist + 1e-13
        dist = nxt


def test_flux_slope_lies_between_the_slope_bounds():
    beta, mu = SMOOTH.beta, SMOOTH.mu
    rho, x = (g.ravel() for g in np.meshgrid(np.linspace(0.1, 5.0, 50), np.linspace(0.0, 1.0, 21)))
    delta = 1e-4
    slope = (flux_values(SMOOTH, rho + delta, x, TWO) - flux_values(SMOOTH, rho - delta, x, TWO)) / (2.0 * delta)
    assert slope.min() >= (beta - 1.0) / (beta + 1.0) - 1e-6
    assert slope.max() <= (mu - 1.0) / (mu + 1.0) + 1e-6


def test_pulse_centroid_moves_at_the_affine_speed():
    grid = Grid(1.0, 400)
    x = grid.centers
    rho_in = inflow_density(AFFINE, TWO, u0=1.0)
    excess0 = np.where(np.abs(x - 0.3) < 0.1, 0.5, 0.0)
    run = run_limit(AFFINE, grid, LimitState(rho=rho_in + excess0, t=0.0, system=TWO, rho_in=rho_in), t_end=0.6)
    excess = run.final.rho - rho_in
    shift = float(np.sum(x * excess) / np.sum(excess)) - float(np.sum(x * excess0) / np.sum(excess0))
    assert shift / 0.6 == pytest.approx(1.0 / 3.0, rel=0.02)
