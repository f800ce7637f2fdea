"""
Experiment registry.

Defines:
- canonical experiment kinds
- the system each kind runs (when fixed by the kind)
- config sections that must be present explicitly, and those the kind reads

Sections outside a kind's surface are accepted with a soft warning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from model.heterogeneity import SystemKind

ALWAYS_ALLOWED = ("kind", "heterogeneity", "grid", "output_dir", "snapshot_every", "n_p_samples", "p_samples", "checks")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    description: str
    system: Optional[SystemKind] = None
    required_sections: Tuple[str, ...] = ()
    optional_sections: Tuple[str, ...] = ()


EXPERIMENT_SPECS: Dict[str, ExperimentSpec] = {
    "relax2": ExperimentSpec(
        name="relax2",
        description="Time-integrate the 2x2 relaxation system and check its run invariants.",
        system=SystemKind.TWO_BY_TWO,
        optional_sections=("relax",),
    ),
    "relax3": ExperimentSpec(
        name="relax3",
        description="Time-integrate the 3x3 relaxation system and check its run invariants.",
        system=SystemKind.THREE_BY_THREE,
        optional_sections=("relax",),
    ),
    "limit2": ExperimentSpec(
        name="limit2",
        description="Solve the 2x2 limit law with entropy, maximum-principle and inflow boundary checks.",
        system=SystemKind.TWO_BY_TWO,
        optional_sections=("limit", "relax"),
    ),
    "limit3": ExperimentSpec(
        name="limit3",
        description="Solve the 3x3 limit law with entropy, maximum-principle and inflow boundary checks.",
        system=SystemKind.THREE_BY_THREE,
        optional_sections=("limit", "relax"),
    ),
    "steady": ExperimentSpec(
        name="steady",
        description="Stationary 2x2 profile by shooting, with its a-priori bounds and ceiling.",
        system=SystemKind.TWO_BY_TWO,
        optional_sections=("steady",),
    ),
    "kp": ExperimentSpec(
        name="kp",
        description="Steady states k_p of the limit law and their exact preservation by the limit scheme.",
        required_sections=("kp",),
        optional_sections=("limit",),
    ),
    "sweep-eps": ExperimentSpec(
        name="sweep-eps",
        description="Relaxation runs over a decreasing epsilon list: uniform BV, equilibrium order, negative control.",
        required_sections=("sweep",),
        optional_sections=("relax",),
    ),
    "validate-model": ExperimentSpec(
        name="validate-model",
        description="Sampled check of the structural assumptions on h.",
        optional_sections=("assumptions",),
    ),
    "compare": ExperimentSpec(
        name="compare",
        description="Epsilon sweep against the limit solution: L1 convergence and boundary entropy checks.",
        required_sections=("sweep",),
        optional_sections=("relax", "limit"),
    ),
}


def get_experiment_spec(kind: str) -> Optional[ExperimentSpec]:
    return EXPERIMENT_SPECS.get(kind)


def is_kind_known(kind: str) -> bool:
    return kind in EXPERIMENT_SPECS


def validate_sections(cfg: Any) -> Optional[Tuple[str, str]]:
    """(path, message) for a missing required section, None otherwise."""
    spec = get_experiment_spec(cfg.kind)
    if not spec:
        return ("kind", f"Unknown experiment kind: {cfg.kind}")
    present = set(cfg.model_fields_set)
    for section in spec.required_sections:
        if section not in present:
            return (section, f"Missing required section for {cfg.kind}: {section}")
    return None


def unexpected_sections(cfg: Any) -> Tuple[str, ...]:
    spec = get_experiment_spec(cfg.kind)
    if not spec:
        return ()
    allowed = set(ALWAYS_ALLOWED) | set(spec.required_sections) | set(spec.optional_sections)
    return tuple(sorted(k for k in cfg.model_fields_set if k not in allowed))
