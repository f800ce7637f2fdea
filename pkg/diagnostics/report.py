# -*- coding: utf-8 -*-
"""
Report types and the per-step accumulator of a relaxation run.

DiagnosticsReport is what a single run produces; SweepResult aggregates a
family of runs indexed by strictly decreasing epsilon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from diagnostics.entropy import entropy_residual_relax
from diagnostics.norms import (
    bv_x,
    combined_flux_bv,
    combined_quantity,
    defect_integral,
    initial_bv_bound,
    quadratic_entropy_dissipation,
    time_bv_step,
    time_trapezoid,
)
from model.grid import Grid
from model.heterogeneity import Heterogeneity
from relax_solver.state import Boundary, State2, State3, corner_mismatch
from steady.kp import KpProfile

RelaxState = Union[State2, State3]


# ============================
# Report types
# ============================

@dataclass(frozen=True)
class DiagnosticsReport:
    system: str
    epsilon: float
    n_steps: int
    dt: float
    linf: Dict[str, float]
    bv_t_series: List[float]
    bv_t_initial_bound: float
    bv_x_combined: float
    bv_x_combined_initial: float
    bv_x_combined_max: float
    combined_flux_bv_max: float
    bv_x_separate: Dict[str, float]
    bv_x_separate_initial: Dict[str, float]
    eq_dev_l2: float
    eq_dev_components: List[float]
    quadratic_entropy_dissipation: float
    entropy_worst_residual: Dict[float, float]
    mass_balance_error: float
    corner_mismatch: float
    well_prepared: bool
    bound_ceiling: Optional[float] = None
    ceiling_violated: bool = False

    @property
    def linf_max(self) -> float:
        return max(self.linf.values()) if self.linf else 0.0

    @property
    def bv_t_max_increase(self) -> float:
        """Largest step-to-step increase of the time-BV series (<= 0 means non-increasing)."""
        s = self.bv_t_series
        if len(s) < 2:
            return 0.0
        return float(np.max(np.diff(np.asarray(s))))

    @property
    def entropy_worst(self) -> float:
        return max(self.entropy_worst_residual.values()) if self.entropy_worst_residual else 0.0

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "epsilon": self.epsilon,
            "n_steps": self.n_steps,
            "dt": self.dt,
            "linf": dict(self.linf),
            "bv_t_series": list(self.bv_t_series),
            "bv_t_initial_bound": self.bv_t_initial_bound,
            "bv_t_max_increase": self.bv_t_max_increase,
            "bv_x_combined": self.bv_x_combined,
            "bv_x_combined_initial": self.bv_x_combined_initial,
            "bv_x_combined_max": self.bv_x_combined_max,
            "combined_flux_bv_max": self.combined_flux_bv_max,
            "bv_x_separate": dict(self.bv_x_separate),
            "bv_x_separate_initial": dict(self.bv_x_separate_initial),
            "eq_dev_l2": self.eq_dev_l2,
            "eq_dev_components": list(self.eq_dev_components),
            "quadratic_entropy_dissipation": self.quadratic_entropy_dissipation,
            "entropy_worst_residual": [
                {"p": p, "worst": w} for p, w in sorted(self.entropy_worst_residual.items())
            ],
            "mass_balance_error": self.mass_balance_error,
            "corner_mismatch": self.corner_mismatch,
            "well_prepared": self.well_prepared,
            "bound_ceiling": self.bound_ceiling,
            "ceiling_violated": self.ceiling_violated,
        }


@dataclass(frozen=True)
class SweepResult:
    system: str
    epsilons: List[float]
    reports: List[DiagnosticsReport]
    l1_distances: Optional[List[float]] = None
    orders: Dict[str, Optional[float]] = field(default_factory=dict)

    @property
    def eq_dev_sq_over_eps(self) -> List[float]:
        return [r.quadratic_entropy_dissipation for r in self.reports]

    def summary_rows(self) -> List[Dict[str, object]]:
        rows: List[Dict[str, object]] = []
        first = "u" if self.system == "TwoByTwo" else "c1"
        for i, (eps, rep) in enumerate(zip(self.epsilons, self.reports)):
            l1 = self.l1_distances[i] if self.l1_distances is not None else None
            row: Dict[str, object] = {
                "eps": eps,
                "eq_dev": rep.eq_dev_l2,
                "l1_dist": l1,
                "bvx_combined": rep.bv_x_combined,
                "bvx_u": rep.bv_x_separate.get(first),
                "eq_dev_sq_over_eps": rep.quadratic_entropy_dissipation,
                "eq_dev_order": None,
                "l1_order": None,
            }
            if i > 0:
                row["eq_dev_order"] = _local_slope(self.epsilons[i - 1], eps, self.reports[i - 1].eq_dev_l2, rep.eq_dev_l2)
                if self.l1_distances is not None:
                    row["l1_order"] = _local_slope(self.epsilons[i - 1], eps, self.l1_distances[i - 1], self.l1_distances[i])
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "epsilons": list(self.epsilons),
            "l1_distances": None if self.l1_distances is None else list(self.l1_distances),
            "orders": dict(self.orders),
            "eq_dev_sq_over_eps": self.eq_dev_sq_over_eps,
            "summary": self.summary_rows(),
            "reports": [r.to_dict() for r in self.reports],
        }


def _local_slope(x0: float, x1: float, y0: float, y1: float) -> Optional[float]:
    if min(x0, x1, y0, y1) <= 0 or x0 == x1:
        return None
    return math.log(y1 / y0) / math.log(x1 / x0)


# ============================
# Accumulator
# ============================

class RunAccumulator:
    """Folds every step of a relaxation run into the running diagnostics."""

    def __init__(
        self,
        *,
        het: Heterogeneity,
        grid: Grid,
        boundary: Boundary,
        epsilon: float,
        dt: float,
        initial: RelaxState,
        kps: Sequence[KpProfile] = (),
        well_prepared: bool = True,
    ):
        self.het = het
        self.grid = grid
        self.boundary = boundary
        self.epsilon = epsilon
        self.dt = dt
        self.kps = list(kps)
        self.well_prepared = well_prepared
        self.system = initial.system.value

        self.linf = {name: float(np.max(f)) for name, f in zip(initial.names, initial.fields())}
        self.bv_t_series: List[float] = []
        self.k1k2 = initial_bv_bound(initial, boundary)
        self.bv_combined_initial = bv_x(combined_quantity(initial))
        self.bv_combined_max = self.bv_combined_initial
        self.flux_bv_max = combined_flux_bv(initial, boundary)
        self.bv_separate_initial = {name: bv_x(f) for name, f in zip(initial.names, initial.fields())}
        self.corner = corner_mismatch(initial, boundary)
        self.mass_error = 0.0
        self.n_steps = 0
        self.entropy_worst = {kp.p: -math.inf for kp in self.kps}

        self._defects_first = np.array(defect_integral(initial, het, grid))
        self._defects_sum = self._defects_first.copy()
        self._defects_last = self._defects_first

    def observe(self, prev: RelaxState, nxt: RelaxState, expected_mass_change: float) -> None:
        dx = self.grid.dx
        self.n_steps += 1
        self.bv_t_series.append(time_bv_step(prev, nxt, self.dt, dx))

        mass_change = float((nxt.total() - prev.total()).sum() * dx)
        self.mass_error = max(self.mass_error, abs(mass_change - expected_mass_change))

        for name, f in zip(nxt.names, nxt.fields()):
            self.linf[name] = max(self.linf[name], float(np.max(f)))

        self.bv_combined_max = max(self.bv_combined_max, bv_x(combined_quantity(nxt)))
        self.flux_bv_max = max(self.flux_bv_max, combined_flux_bv(nxt, self.boundary))

        d = np.array(defect_integral(nxt, self.het, self.grid))
        self._defects_sum = self._defects_sum + d
        self._defects_last = d

        for kp in self.kps:
            r = entropy_residual_relax(prev, nxt, self.het, self.grid, kp, self.dt, self.boundary)
            self.entropy_worst[kp.p] = max(self.entropy_worst[kp.p], r)

    def finish(self, final: RelaxState, ceiling: Optional[float] = None) -> DiagnosticsReport:
        if self.n_steps:
            per_defect = time_trapezoid(self._defects_sum, self._defects_first, self._defects_last, self.dt)
        else:
            per_defect = np.zeros_like(self._defects_first)
        per_defect = np.maximum(per_defect, 0.0)
        eq_components = [float(math.sqrt(c)) for c in per_defect]
        eq_dev = float(math.sqrt(float(per_defect.sum())))

        linf_max = max(self.linf.values())
        return DiagnosticsReport(
            system=self.system,
            epsilon=self.epsilon,
            n_steps=self.n_steps,
            dt=self.dt,
            linf=dict(self.linf),
            bv_t_series=list(self.bv_t_series),
            bv_t_initial_bound=self.k1k2,
            bv_x_combined=bv_x(combined_quantity(final)),
            bv_x_combined_initial=self.bv_combined_initial,
            bv_x_combined_max=self.bv_combined_max,
            combined_flux_bv_max=self.flux_bv_max,
            bv_x_separate={name: bv_x(f) for name, f in zip(final.names, final.fields())},
            bv_x_separate_initial=dict(self.bv_separate_initial),
            eq_dev_l2=eq_dev,
            eq_dev_components=eq_components,
            quadratic_entropy_dissipation=quadratic_entropy_dissipation(eq_dev, self.epsilon),
            entropy_worst_residual={p: (0.0 if math.isinf(w) else w) for p, w in self.entropy_worst.items()},
            mass_balance_error=self.mass_error,
            corner_mismatch=self.corner,
            well_prepared=self.well_prepared,
            bound_ceiling=ceiling,
            ceiling_violated=bool(ceiling is not None and linf_max > ceiling + 1e-8),
        )
