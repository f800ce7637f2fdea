from __future__ import annotations

import sys
from pathlib import Path

import pytest

# Ensure repo root is importable (e.g., "model", "experiments", "main")
REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

RELAXBENCH_ENV = ("RELAXBENCH_JOBS", "RELAXBENCH_OUT", "RELAXBENCH_DEBUG")


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch):
    """Tests never see a developer's RELAXBENCH_* settings or .env file."""
    for name in RELAXBENCH_ENV:
        monkeypatch.delenv(name, raising=False)
    import main

    monkeypatch.setattr(main, "load_dotenv", lambda *args, **kwargs: False)
