"""
Sampled checks of the structural assumptions on h.

Nothing here raises on a violated assumption: the report carries flags and
the caller decides.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from model.errors import ModelDomainError
from model.grid import Grid
from model.heterogeneity import Family, Heterogeneity, h_slope, h_values

# Second difference of h in v below this is treated as locally affine.
NONAFFINE_THRESHOLD = 1e-10
BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class ModelValidationReport:
    beta_observed: float
    mu_observed: float
    hx_l1: float
    zero_at_origin_ok: bool
    nonaffine_ok: bool
    bounds_ok: bool
    v_max: float
    n_v_samples: int
    nonaffine_threshold: float = NONAFFINE_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "beta_observed": self.beta_observed,
            "mu_observed": self.mu_observed,
            "hx_l1": self.hx_l1,
            "zero_at_origin_ok": self.zero_at_origin_ok,
            "nonaffine_ok": self.nonaffine_ok,
            "bounds_ok": self.bounds_ok,
            "v_max": self.v_max,
            "n_v_samples": self.n_v_samples,
            "nonaffine_threshold": self.nonaffine_threshold,
        }


def _x_samples(grid: Grid) -> np.ndarray:
    return np.concatenate(([0.0], grid.centers, [grid.length]))


def eval_h_x_variation(het: Heterogeneity, grid: Grid, v: np.ndarray) -> np.ndarray:
    """Total variation in x of h(v, .) over the grid, one value per entry of v."""
    v = np.atleast_1d(np.asarray(v, dtype=float))
    xs = _x_samples(grid)
    table = h_values(het, v[:, None], xs[None, :])
    return np.abs(np.diff(table, axis=1)).sum(axis=1)


def validate_assumptions(het: Heterogeneity, grid: Grid, v_max: float, n_v_samples: int) -> ModelValidationReport:
    if not v_max > 0:
        raise ModelDomainError("v_max must be positive")
    if n_v_samples < 2:
        raise ModelDomainError("n_v_samples must be >= 2")

    vs = np.linspace(0.0, v_max, n_v_samples)
    xs = _x_samples(grid)
    slopes = h_slope(het, vs[:, None], xs[None, :])
    beta_obs = float(slopes.min())
    mu_obs = float(slopes.max())

    zero_ok = bool(np.all(h_values(het, 0.0, xs) == 0.0))

    if het.family == Family.AFFINE or n_v_samples < 3:
        nonaffine_ok = het.family == Family.AFFINE
    else:
        table = h_values(het, vs[:, None], xs[None, :])
        second = np.abs(table[2:] - 2.0 * table[1:-1] + table[:-2])
        nonaffine_ok = bool(np.all(second.max(axis=0) > NONAFFINE_THRESHOLD))

    hx_l1 = float(eval_h_x_variation(het, grid, vs).max())

    bounds_ok = beta_obs >= het.beta - BOUND_SLACK and mu_obs <= het.mu + BOUND_SLACK
    return ModelValidationReport(
        beta_observed=beta_obs,
        mu_observed=mu_obs,
        hx_l1=hx_l1,
        zero_at_origin_ok=zero_ok,
        nonaffine_ok=nonaffine_ok,
        bounds_ok=bool(bounds_ok),
        v_max=float(v_max),
        n_v_samples=int(n_v_samples),
    )
