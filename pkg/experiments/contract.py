"""
Experiment contract types.

- Experiments are executed only by the central executor
- Every execution has a run_id
- ExperimentResult is normalized (the executor never raises upstream)
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional

from experiments.artifacts import ArtifactWriter
from experiments.config import ExperimentConfig
from model.grid import Grid
from model.heterogeneity import Heterogeneity
from policy.policy import CheckThresholds

ErrorKind = Literal["config", "solver", "internal"]

EXIT_PASS = 0
EXIT_CHECK_FAILED = 1
EXIT_SOLVER_ERROR = 2
EXIT_CONFIG_ERROR = 3


def now_ms() -> int:
    return int(time.time() * 1000)


@dataclass(frozen=True)
class ExperimentRequest:
    run_id: str
    config: ExperimentConfig
    out_dir: str
    jobs: int = 1

    requested_at_ms: int = field(default_factory=now_ms)

    @property
    def kind(self) -> str:
        return self.config.kind

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "kind": self.kind,
            "out_dir": self.out_dir,
            "jobs": self.jobs,
            "requested_at_ms": self.requested_at_ms,
        }


@dataclass(frozen=True)
class ExperimentResult:
    run_id: str
    kind: str
    ok: bool

    # Normalized payload
    result: Optional[Dict[str, Any]] = None
    checks: List[Dict[str, Any]] = field(default_factory=list)
    artifacts: List[str] = field(default_factory=list)
    error: Optional[str] = None
    error_kind: Optional[ErrorKind] = None

    # Timing
    started_at_ms: int = field(default_factory=now_ms)
    finished_at_ms: int = field(default_factory=now_ms)
    duration_ms: int = 0

    audit: Optional[Dict[str, Any]] = None

    @property
    def checks_passed(self) -> bool:
        return all(c.get("verdict") != "FAIL" for c in self.checks)

    @property
    def exit_code(self) -> int:
        if self.error_kind == "config":
            return EXIT_CONFIG_ERROR
        if self.error_kind is not None:
            return EXIT_SOLVER_ERROR
        return EXIT_PASS if self.ok and self.checks_passed else EXIT_CHECK_FAILED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "run_id": self.run_id,
            "kind": self.kind,
            "ok": self.ok,
            "result": self.result,
            "checks": list(self.checks),
            "artifacts": list(self.artifacts),
            "error": self.error,
            "error_kind": self.error_kind,
            "started_at_ms": self.started_at_ms,
            "finished_at_ms": self.finished_at_ms,
            "duration_ms": self.duration_ms,
            "audit": self.audit,
            "exit_code": self.exit_code,
        }


def ok_result(
    *, run_id: str, kind: str, result: Dict[str, Any], checks: List[Dict[str, Any]], artifacts: List[str], started_at_ms: int
) -> ExperimentResult:
    finished = now_ms()
    return ExperimentResult(
        run_id=run_id,
        kind=kind,
        ok=True,
        result=result,
        checks=checks,
        artifacts=artifacts,
        started_at_ms=started_at_ms,
        finished_at_ms=finished,
        duration_ms=max(0, finished - started_at_ms),
    )


def error_result(
    *, run_id: str, kind: str, error: str, error_kind: ErrorKind, started_at_ms: int,
    result: Optional[Dict[str, Any]] = None, artifacts: Optional[List[str]] = None,
) -> ExperimentResult:
    finished = now_ms()
    return ExperimentResult(
        run_id=run_id,
        kind=kind,
        ok=False,
        result=result,
        artifacts=list(artifacts or []),
        error=error,
        error_kind=error_kind,
        started_at_ms=started_at_ms,
        finished_at_ms=finished,
        duration_ms=max(0, finished - started_at_ms),
    )


@dataclass
class ExperimentContext:
    """Everything an experiment implementation needs; built by the executor."""

    run_id: str
    config: ExperimentConfig
    het: Heterogeneity
    grid: Grid
    writer: ArtifactWriter
    thresholds: CheckThresholds
    jobs: int = 1
