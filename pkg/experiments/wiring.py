"""
Experiment wiring.

Provides a single factory for the ExperimentExecutor wired with every
registered experiment kind. main.py uses get_experiment_executor() as the
only execution path for experiments.
"""

from __future__ import annotations

from experiments.executor import ExperimentExecutor
from experiments.impl_limit import run_limit2, run_limit3
from experiments.impl_model import run_validate_model
from experiments.impl_relax import run_relax2, run_relax3
from experiments.impl_steady import run_kp, run_steady
from experiments.impl_sweep import run_compare, run_sweep_eps


def get_experiment_executor() -> ExperimentExecutor:
    impls = {
        "relax2": run_relax2,
        "relax3": run_relax3,
        "limit2": run_limit2,
        "limit3": run_limit3,
        "steady": run_steady,
        "kp": run_kp,
        "sweep-eps": run_sweep_eps,
        "validate-model": run_validate_model,
        "compare": run_compare,
    }
    return ExperimentExecutor(impls=impls)
