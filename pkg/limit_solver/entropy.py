"""
Adapted entropy and boundary-entropy checks of the limit laws.

Entropies are indexed by the steady states k_p:
    eta_p = |rho - rho_p(x)|,   q_p = |F(rho, x) - p|
Boundary conditions follow the Kruzkov-type inequalities at an inflow and an
outflow boundary, evaluated at every recorded time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from limit_solver.scheme import LimitState, density_at_level, flux_values
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind, h_values, solve_level
from steady.kp import KpProfile, kp_values, rho_of_kp

DEFAULT_P_SAMPLES = 17


def sample_p_levels(max_level: float, boundary_levels: Sequence[float], n_samples: int = DEFAULT_P_SAMPLES) -> List[float]:
    """Uniform levels on [0, max_level] completed by the boundary levels, sorted."""
    n_uniform = max(2, n_samples - len(boundary_levels))
    levels = list(np.linspace(0.0, max(float(max_level), 0.0), n_uniform)) + [float(b) for b in boundary_levels]
    return sorted(float(p) for p in levels)


def entropy_residual_limit(
    before: LimitState,
    after: LimitState,
    het: Heterogeneity,
    grid: Grid,
    dt: float,
    kp: KpProfile,
    rho_p: Optional[np.ndarray] = None,
    flux_before: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Per-cell residual of d/dt eta_p + d/dx q_p (<= 0 up to round-off for the monotone scheme)."""
    if rho_p is None:
        rho_p = rho_of_kp(het, grid, kp)
    p = kp.p
    F = flux_values(het, before.rho, grid.centers, before.system) if flux_before is None else flux_before
    F_in = float(flux_values(het, before.rho_in, 0.0, before.system))
    q = np.abs(F - p)
    q_up = np.concatenate(([abs(F_in - p)], q[:-1]))
    eta_new = np.abs(after.rho - rho_p)
    eta_old = np.abs(before.rho - rho_p)
    return (eta_new - eta_old) / dt + (q - q_up) / grid.dx


# ============================
# Boundary inequalities
# ============================

@dataclass
class BlnReport:
    worst_x0: float = 0.0
    worst_xL: float = 0.0
    per_p: List[Dict[str, float]] = field(default_factory=list)
    not_applicable: List[float] = field(default_factory=list)

    @property
    def worst(self) -> float:
        return max(self.worst_x0, self.worst_xL)

    def to_dict(self) -> dict:
        return {
            "worst": self.worst,
            "worst_x0": self.worst_x0,
            "worst_xL": self.worst_xL,
            "per_p": list(self.per_p),
            "not_applicable": list(self.not_applicable),
        }


def _steady_density(het: Heterogeneity, p: float, x: float, system: SystemKind) -> float:
    k = kp_values(het, p, np.array(x), system)
    c = 1.0 if system == SystemKind.TWO_BY_TWO else 2.0
    return float(k + c * h_values(het, k, x))


def bln_check(
    het: Heterogeneity,
    grid: Grid,
    system: SystemKind,
    times: Sequence[float],
    flux_left: Sequence[float],
    flux_right: Sequence[float],
    rho_in: float,
    p_samples: Sequence[float],
    w_times: Optional[Sequence[float]] = None,
    w_values: Optional[Sequence[float]] = None,
) -> BlnReport:
    """
    Worst violation of the boundary entropy inequalities.

    ``flux_left`` and ``flux_right`` are the flux traces at the two boundary
    faces; densities are recovered along the steady state through each level.
    For the upwind scheme the x = 0 face carries the inflow flux and the x = L
    face the last cell flux. The outflow check needs the w_L series
    (ThreeByThree only); without it only x = 0 is checked.
    """
    system = SystemKind(system)
    t = np.asarray(times, dtype=float)
    level0 = np.asarray(flux_left, dtype=float)
    levelL = np.asarray(flux_right, dtype=float)
    rho0 = density_at_level(het, level0, np.zeros_like(level0), system)
    rhoL = density_at_level(het, levelL, np.full_like(levelL, grid.length), system)

    check_right = system == SystemKind.THREE_BY_THREE and w_values is not None and w_times is not None
    if check_right:
        w = np.interp(t, np.asarray(w_times, dtype=float), np.asarray(w_values, dtype=float))
        v_w = solve_level(het, 1.0, 0.0, np.maximum(w, 0.0), np.full_like(w, grid.length))
        rho_w = 2.0 * w + v_w

    report = BlnReport()
    for p in p_samples:
        p = float(p)
        rp0 = _steady_density(het, p, 0.0, system)
        app0 = (np.minimum(rho0, rho_in) < rp0) & (rp0 < np.maximum(rho0, rho_in))
        viol0 = np.maximum(0.0, np.sign(rho0 - rho_in) * (level0 - p))
        worst0 = float(viol0[app0].max()) if app0.any() else 0.0
        entry = {"p": p, "applicable_x0": int(app0.sum()), "worst_x0": worst0}
        applicable = bool(app0.any())

        if check_right:
            rpL = _steady_density(het, p, grid.length, system)
            appL = (np.minimum(rhoL, rho_w) < rpL) & (rpL < np.maximum(rhoL, rho_w))
            violL = np.maximum(0.0, -np.sign(rhoL - rho_w) * (levelL - p))
            worstL = float(violL[appL].max()) if appL.any() else 0.0
            entry.update({"applicable_xL": int(appL.sum()), "worst_xL": worstL})
            applicable = applicable or bool(appL.any())
            report.worst_xL = max(report.worst_xL, worstL)

        report.worst_x0 = max(report.worst_x0, worst0)
        report.per_p.append(entry)
        if not applicable:
            report.not_applicable.append(p)
    return report
