"""
Artifact files of an experiment.

CSV files start with a header row; JSON reports are written with sorted keys
and embed the resolved config. The only non-deterministic content is the
``metadata`` block (run_id, timestamp).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from run_logger import utc_now_iso


def _clean(value: Any) -> Any:
    """Make a payload strict-JSON: numpy scalars to Python, non-finite floats to None."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, (np.floating, float)):
        f = float(value)
        return f if math.isfinite(f) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


class ArtifactWriter:
    def __init__(self, root: Path, *, run_id: str, resolved_config: Dict[str, Any], base: Optional[Path] = None):
        self.root = Path(root)
        self.base = Path(base) if base is not None else self.root
        self.run_id = run_id
        self.resolved_config = resolved_config
        self.written: List[str] = []

    def child(self, name: str) -> "ArtifactWriter":
        sub = ArtifactWriter(self.root / name, run_id=self.run_id, resolved_config=self.resolved_config, base=self.base)
        sub.written = self.written
        return sub

    def _target(self, name: str) -> Path:
        path = self.root / name
        path.parent.mkdir(parents=True, exist_ok=True)
        self.written.append(str(path.relative_to(self.base)))
        return path

    def write_csv(self, name: str, columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        path = self._target(name)
        with path.open("w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(list(columns))
            for row in rows:
                w.writerow([_cell(v) for v in row])
        return path

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self._target(name)
        doc = {
            "config": self.resolved_config,
            "metadata": {"run_id": self.run_id, "created_at": utc_now_iso()},
            **payload,
        }
        text = json.dumps(_clean(doc), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False)
        path.write_text(text + "\n", encoding="utf-8")
        return path
