# -*- coding: utf-8 -*-
"""
Structured JSON-lines logging for experiment runs.

- One JSON object per line on stderr (stdout is reserved for verdict lines)
- Every line of an experiment carries its run_id once bind_run_id() was called
- RELAXBENCH_DEBUG=1 enables debug-only events
"""

from __future__ import annotations

import contextvars
import json
import os
import sys
import uuid
from datetime import datetime, timezone
from typing import Any, Optional

_RUN_ID: contextvars.ContextVar[Optional[str]] = contextvars.ContextVar("relaxbench_run_id", default=None)


def debug_enabled() -> bool:
    return os.getenv("RELAXBENCH_DEBUG", "0").strip().lower() in ("1", "true", "yes", "on")


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat().replace("+00:00", "Z")


def new_run_id() -> str:
    return str(uuid.uuid4())


def bind_run_id(run_id: Optional[str]) -> contextvars.Token:
    return _RUN_ID.set(run_id)


def reset_run_id(token: contextvars.Token) -> None:
    _RUN_ID.reset(token)


def jlog(event: str, **fields: Any) -> None:
    payload = {"event": event}
    run_id = _RUN_ID.get()
    if run_id and "run_id" not in fields:
        payload["run_id"] = run_id
    payload.update(fields)
    try:
        print(json.dumps(payload, ensure_ascii=False), file=sys.stderr, flush=True)
    except Exception:
        print(str(payload), file=sys.stderr, flush=True)


def dlog(event: str, **fields: Any) -> None:
    if debug_enabled():
        jlog(event, **fields)
