"""
Central experiment executor.

Responsibilities:
- Registry enforcement (known kinds, required sections)
- Normalized ExperimentResult envelopes (never throw upstream)
- run_id binding for every log line of the experiment
- Timing + audit metadata
- Error payloads written next to the artifacts of a failed run
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, List

from experiments.artifacts import ArtifactWriter
from experiments.config import build_grid, build_heterogeneity
from experiments.contract import (
    ExperimentContext,
    ExperimentRequest,
    ExperimentResult,
    error_result,
    now_ms,
    ok_result,
)
from experiments.registry import get_experiment_spec, is_kind_known, unexpected_sections
from model.errors import ConfigError, ModelDomainError, RelaxBenchError, SolverError
from policy.policy import CheckVerdict
from run_logger import bind_run_id, jlog, reset_run_id

ExperimentImpl = Callable[[ExperimentContext], Dict[str, Any]]


class ExperimentExecutor:
    def __init__(self, impls: Dict[str, ExperimentImpl]):
        self.impls = impls

    def execute(self, req: ExperimentRequest) -> ExperimentResult:
        started = now_ms()
        token = bind_run_id(req.run_id)
        try:
            return self._execute(req, started)
        finally:
            reset_run_id(token)

    def _execute(self, req: ExperimentRequest, started: int) -> ExperimentResult:
        kind = req.kind

        # Registry
        if not is_kind_known(kind):
            return error_result(
                run_id=req.run_id, kind=kind, error=f"Unknown experiment kind: {kind}", error_kind="config", started_at_ms=started
            )

        impl = self.impls.get(kind)
        if impl is None:
            return error_result(
                run_id=req.run_id,
                kind=kind,
                error=f"No implementation registered for experiment: {kind}",
                error_kind="internal",
                started_at_ms=started,
            )

        warn = unexpected_sections(req.config)
        if warn:
            jlog("config_sections_ignored", kind=kind, sections=list(warn))

        writer = ArtifactWriter(Path(req.out_dir), run_id=req.run_id, resolved_config=req.config.resolved())
        jlog("experiment_start", kind=kind, out_dir=req.out_dir, jobs=req.jobs)

        try:
            het = build_heterogeneity(req.config)
            grid = build_grid(req.config)
        except ModelDomainError as e:
            return error_result(run_id=req.run_id, kind=kind, error=str(e), error_kind="config", started_at_ms=started)

        ctx = ExperimentContext(
            run_id=req.run_id,
            config=req.config,
            het=het,
            grid=grid,
            writer=writer,
            thresholds=req.config.checks.to_thresholds(),
            jobs=req.jobs,
        )

        try:
            out = impl(ctx)
        except ConfigError as e:
            jlog("experiment_failed", kind=kind, error_kind="config", error=str(e))
            return error_result(run_id=req.run_id, kind=kind, error=str(e), error_kind="config", started_at_ms=started)
        except (RelaxBenchError, ValueError, ArithmeticError) as e:
            payload = e.to_dict() if isinstance(e, SolverError) else {"error": str(e)}
            payload["error_type"] = type(e).__name__
            writer.write_json("error.json", {"failure": payload})
            jlog("experiment_failed", kind=kind, error_kind="solver", **payload)
            return error_result(
                run_id=req.run_id,
                kind=kind,
                error=str(e),
                error_kind="solver",
                started_at_ms=started,
                result={"failure": payload},
                artifacts=sorted(writer.written),
            )
        except Exception as e:
            jlog("experiment_failed", kind=kind, error_kind="internal", error=repr(e))
            return error_result(run_id=req.run_id, kind=kind, error=repr(e), error_kind="internal", started_at_ms=started)

        verdicts: List[CheckVerdict] = list(out.get("checks", []))
        for v in verdicts:
            jlog("check_verdict", kind=kind, **v.to_dict())

        spec = get_experiment_spec(kind)
        res = ok_result(
            run_id=req.run_id,
            kind=kind,
            result=out.get("summary", {}),
            checks=[v.to_dict() for v in verdicts],
            artifacts=sorted(writer.written),
            started_at_ms=started,
        )
        audit = {
            "kind": kind,
            "system": getattr(getattr(spec, "system", None), "value", None),
            "explicit_sections": req.config.explicit_sections(),
            "section_warning": list(warn),
            "jobs": req.jobs,
        }
        jlog("experiment_done", kind=kind, passed=res.checks_passed, duration_ms=res.duration_ms)
        # attach audit without mutating the frozen envelope
        return ExperimentResult(
            run_id=res.run_id,
            kind=res.kind,
            ok=res.ok,
            result=res.result,
            checks=res.checks,
            artifacts=res.artifacts,
            error=res.error,
            error_kind=res.error_kind,
            started_at_ms=res.started_at_ms,
            finished_at_ms=res.finished_at_ms,
            duration_ms=res.duration_ms,
            audit=audit,
        )
