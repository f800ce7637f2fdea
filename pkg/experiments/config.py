# -*- coding: utf-8 -*-
"""
Experiment configuration (JSON document, validated with pydantic).

- Unknown keys are rejected at every level
- Every section has documented defaults; defaults are echoed in reports
- Validation failures surface as ConfigError carrying the dotted JSON path
"""

from __future__ import annotations

import json
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from model.errors import ConfigError, ModelDomainError
from model.grid import Grid
from model.heterogeneity import Family, Heterogeneity, SystemKind, make_heterogeneity
from experiments.registry import get_experiment_spec, validate_sections
from policy.policy import CheckThresholds

ExperimentKind = Literal[
    "relax2", "relax3", "limit2", "limit3", "steady", "kp", "sweep-eps", "validate-model", "compare"
]

_DEFAULT_THRESHOLDS = CheckThresholds()
_PROFILE_SAMPLES = 2001


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _alpha_in_unit_interval(v: float) -> float:
    if not 0.0 < v < 1.0:
        raise ValueError("alpha must lie in (0,1)")
    return v


# ============================
# Sections
# ============================

class HeterogeneityConfig(_Section):
    family: Family
    params: List[float]


class GridConfig(_Section):
    L: float = Field(default=1.0, gt=0)
    n_cells: int = Field(default=400, ge=1)


class ProfileConfig(_Section):
    """
    Initial profile f(x), y = x / L:
    constant: value;  linear: value + amplitude*y;  cosine: value + amplitude*cos(2 pi periods y)
    bump: value + amplitude*max(0, 1 - ((y-center)/width)^2)^2
    step: value + amplitude*[y > center];  pulse: value + amplitude*[|y-center| < width/2]
    """

    kind: Literal["constant", "linear", "cosine", "bump", "step", "pulse"] = "constant"
    value: float = 0.5
    amplitude: float = 0.0
    center: float = 0.5
    width: float = Field(default=0.2, gt=0)
    periods: float = 1.0

    @model_validator(mode="after")
    def nonnegative_on_unit_interval(self) -> "ProfileConfig":
        if self.kind == "constant":
            low = 0.0
        elif self.kind == "cosine":
            y = np.linspace(0.0, 1.0, _PROFILE_SAMPLES)
            low = float(np.min(self.amplitude * np.cos(2.0 * np.pi * self.periods * y)))
        else:
            low = min(0.0, self.amplitude)
        if self.value + low < 0:
            raise ValueError(f"{self.kind} profile takes negative values (min {self.value + low:.3g})")
        return self


class RelaxSection(_Section):
    epsilon: float = Field(default=0.01, gt=0)
    cfl: float = Field(default=1.0, gt=0, le=1.0)
    t_end: float = Field(default=1.0, ge=0)
    u0: float = Field(default=1.0, ge=0)
    alpha: float = 0.5
    c01: float = Field(default=1.0, ge=0)
    c02: float = Field(default=1.0, ge=0)
    well_prepared: bool = True
    v0: ProfileConfig = ProfileConfig()
    c3: ProfileConfig = ProfileConfig()
    u_init: Optional[ProfileConfig] = None
    c1_init: Optional[ProfileConfig] = None
    c2_init: Optional[ProfileConfig] = None

    @field_validator("alpha")
    @classmethod
    def alpha_in_unit_interval(cls, v: float) -> float:
        return _alpha_in_unit_interval(v)


class LimitSection(_Section):
    cfl: float = Field(default=0.9, gt=0, le=1.0)
    t_end: Optional[float] = Field(default=None, ge=0)
    rho0: Optional[ProfileConfig] = None


class SteadySection(_Section):
    epsilon: float = Field(default=0.1, gt=0)
    U0: float = Field(default=1.0, gt=0)
    alpha: float = 0.5
    expected_K: Optional[float] = None

    @field_validator("alpha")
    @classmethod
    def alpha_in_unit_interval(cls, v: float) -> float:
        return _alpha_in_unit_interval(v)


class KpSection(_Section):
    system: SystemKind = SystemKind.TWO_BY_TWO
    p: List[float] = Field(min_length=1)

    @field_validator("p")
    @classmethod
    def nonnegative_levels(cls, v: List[float]) -> List[float]:
        if any(p < 0 for p in v):
            raise ValueError("flux levels p must be >= 0")
        return v


class AssumptionsSection(_Section):
    v_max: float = Field(default=10.0, gt=0)
    n_v_samples: int = Field(default=101, ge=2)


class SweepSection(_Section):
    system: SystemKind = SystemKind.TWO_BY_TWO
    epsilons: List[float] = Field(min_length=1)
    negative_control: bool = False
    check_order: bool = True

    @field_validator("epsilons")
    @classmethod
    def strictly_decreasing(cls, v: List[float]) -> List[float]:
        if any(e <= 0 for e in v):
            raise ValueError("epsilons must be > 0")
        if any(b >= a for a, b in zip(v[:-1], v[1:])):
            raise ValueError("epsilons must be strictly decreasing")
        return v


class ChecksSection(_Section):
    ceiling_tol: float = _DEFAULT_THRESHOLDS.ceiling_tol
    bv_t_step_tol: float = _DEFAULT_THRESHOLDS.bv_t_step_tol
    bv_t_initial_tol: float = _DEFAULT_THRESHOLDS.bv_t_initial_tol
    bv_x_combined_tol: float = _DEFAULT_THRESHOLDS.bv_x_combined_tol
    negative_control_factor: float = _DEFAULT_THRESHOLDS.negative_control_factor
    eq_dev_min_order: float = _DEFAULT_THRESHOLDS.eq_dev_min_order
    l1_drop_factor: float = _DEFAULT_THRESHOLDS.l1_drop_factor
    l1_monotone_rel_tol: float = _DEFAULT_THRESHOLDS.l1_monotone_rel_tol
    entropy_tol_factor: float = _DEFAULT_THRESHOLDS.entropy_tol_factor
    well_balanced_tol: float = _DEFAULT_THRESHOLDS.well_balanced_tol
    structural_rel_tol: float = _DEFAULT_THRESHOLDS.structural_rel_tol
    mass_balance_tol: float = _DEFAULT_THRESHOLDS.mass_balance_tol
    bln_tol: float = _DEFAULT_THRESHOLDS.bln_tol
    steady_tol: float = _DEFAULT_THRESHOLDS.steady_tol
    max_principle_tol: float = _DEFAULT_THRESHOLDS.max_principle_tol

    def to_thresholds(self) -> CheckThresholds:
        return CheckThresholds(**self.model_dump())


class ExperimentConfig(_Section):
    kind: ExperimentKind
    heterogeneity: HeterogeneityConfig
    grid: GridConfig = GridConfig()
    relax: RelaxSection = RelaxSection()
    limit: LimitSection = LimitSection()
    steady: SteadySection = SteadySection()
    kp: Optional[KpSection] = None
    assumptions: AssumptionsSection = AssumptionsSection()
    sweep: Optional[SweepSection] = None
    output_dir: Optional[str] = None
    snapshot_every: int = Field(default=40, ge=1)
    n_p_samples: int = Field(default=17, ge=3)
    p_samples: Optional[List[float]] = None
    checks: ChecksSection = ChecksSection()

    def explicit_sections(self) -> List[str]:
        return sorted(self.model_fields_set)

    def resolved(self) -> dict:
        return self.model_dump(mode="json")


# ============================
# Parsing
# ============================

def _loc_to_path(loc: tuple) -> str:
    return ".".join(str(part) for part in loc)


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a UTF-8 JSON experiment document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg} (line {e.lineno}, column {e.colno})") from e
    if not isinstance(doc, dict):
        raise ConfigError("top-level JSON value must be an object")

    try:
        cfg = ExperimentConfig.model_validate(doc)
    except ValidationError as e:
        first = e.errors()[0]
        msg = str(first.get("msg", "invalid value"))
        raise ConfigError(msg, path=_loc_to_path(tuple(first.get("loc", ())))) from e

    problem = validate_sections(cfg)
    if problem:
        raise ConfigError(problem[1], path=problem[0])

    try:
        het = build_heterogeneity(cfg)
    except ModelDomainError as e:
        raise ConfigError(str(e), path="heterogeneity") from e
    if run_system(cfg) == SystemKind.TWO_BY_TWO and not het.beta > 1.0:
        raise ConfigError(
            f"TwoByTwo experiments need beta > 1, got beta = {het.beta}", path="heterogeneity.params"
        )
    return cfg


def run_system(cfg: ExperimentConfig) -> Optional[SystemKind]:
    """System a kind integrates; None for validate-model."""
    spec = get_experiment_spec(cfg.kind)
    if spec is not None and spec.system is not None:
        return spec.system
    if cfg.kind == "kp" and cfg.kp is not None:
        return cfg.kp.system
    if cfg.kind in ("sweep-eps", "compare") and cfg.sweep is not None:
        return cfg.sweep.system
    return None


# ============================
# Builders
# ============================

def build_heterogeneity(cfg: ExperimentConfig) -> Heterogeneity:
    return make_heterogeneity(cfg.heterogeneity.family, cfg.heterogeneity.params, length=cfg.grid.L)


def build_grid(cfg: ExperimentConfig) -> Grid:
    return Grid(length=cfg.grid.L, n_cells=cfg.grid.n_cells)


def profile_values(profile: ProfileConfig, grid: Grid) -> np.ndarray:
    y = grid.centers / grid.length
    if profile.kind == "constant":
        shape = np.zeros_like(y)
    elif profile.kind == "linear":
        shape = y
    elif profile.kind == "cosine":
        shape = np.cos(2.0 * np.pi * profile.periods * y)
    elif profile.kind == "bump":
        shape = np.maximum(0.0, 1.0 - ((y - profile.center) / profile.width) ** 2) ** 2
    elif profile.kind == "step":
        shape = (y > profile.center).astype(float)
    else:
        shape = (np.abs(y - profile.center) < 0.5 * profile.width).astype(float)
    values = profile.value + profile.amplitude * shape
    if np.any(values < 0):
        raise ConfigError(f"{profile.kind} profile takes negative values (min {values.min():.3g})")
    return values
