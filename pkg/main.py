# -*- coding: utf-8 -*-
"""
relaxbench command line.

    relaxbench run <config.json> [--out DIR] [--jobs N]
    relaxbench validate <config.json>

stdout carries one PASS/FAIL line per check and a final RESULT line;
structured logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from experiments.config import ExperimentConfig, parse_config
from experiments.contract import EXIT_CONFIG_ERROR, EXIT_PASS, ExperimentRequest, ExperimentResult
from experiments.wiring import get_experiment_executor
from model.errors import ConfigError
from run_logger import jlog, new_run_id


# ============================
# CONFIG (env fallbacks)
# ============================

DEFAULT_OUT = "relaxbench_out"


def resolve_jobs(cli_jobs: Optional[int]) -> int:
    if cli_jobs is not None:
        return max(1, cli_jobs)
    raw = os.getenv("RELAXBENCH_JOBS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"RELAXBENCH_JOBS must be an integer, got {raw!r}", path="RELAXBENCH_JOBS")


def resolve_out(cli_out: Optional[str], cfg: ExperimentConfig) -> str:
    return cli_out or cfg.output_dir or os.getenv("RELAXBENCH_OUT") or DEFAULT_OUT


def load_config(path: str) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read config file: {e}") from e
    cfg = parse_config(text)
    jlog("config_loaded", path=path, kind=cfg.kind)
    return cfg


# ============================
# Commands
# ============================

def run_experiment(cfg: ExperimentConfig, out_dir: str, jobs: int = 1) -> ExperimentResult:
    """Run one experiment through the executor; artifacts land under out_dir."""
    req = ExperimentRequest(run_id=new_run_id(), config=cfg, out_dir=out_dir, jobs=jobs)
    return get_experiment_executor().execute(req)


def cmd_run(args: argparse.Namespace) -> int:
    try:
        cfg = load_config(args.config)
        jobs = resolve_jobs(args.jobs)
    except ConfigError as e:
        print(f"CONFIG ERROR {e}")
        return EXIT_CONFIG_ERROR

    out_dir = resolve_out(args.out, cfg)
    res = run_experiment(cfg, out_dir, jobs)
    run_id = res.run_id

    for check in res.checks:
        val = "n/a" if check["value"] is None else f"{check['value']:.6g}"
        print(f"{check['verdict']} {check['name']} value={val}")
    if res.error:
        print(f"ERROR {res.error_kind}: {res.error}")
    status = "PASS" if res.exit_code == EXIT_PASS else "FAIL"
    print(f"RESULT {status} kind={res.kind} exit={res.exit_code} run_id={run_id} out={out_dir}")
    return res.exit_code


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as e:
        print(f"CONFIG ERROR {e}")
        return EXIT_CONFIG_ERROR
    print(json.dumps(cfg.resolved(), sort_keys=True, indent=2))
    print(f"CONFIG OK kind={cfg.kind}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="relaxbench", description="Relaxation-system verification experiments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment")
    p_run.add_argument("config", help="experiment config (JSON)")
    p_run.add_argument("--out", default=None, help="output directory (env RELAXBENCH_OUT)")
    p_run.add_argument("--jobs", type=int, default=None, help="parallel sweep members (env RELAXBENCH_JOBS)")
    p_run.set_defaults(func=cmd_run)

    p_val = sub.add_parser("validate", help="validate a config and print it with defaults")
    p_val.add_argument("config", help="experiment config (JSON)")
    p_val.set_defaults(func=cmd_validate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    return int(args.func(args))


if __name__ == "__main__":
    sys.exit(main())
