"""
Error types shared by every package.

Numerical code raises these; the experiment executor is the only place that
turns them into result envelopes and exit codes.
"""

from __future__ import annotations

from typing import Optional, Sequence


class RelaxBenchError(RuntimeError):
    """Base class for every failure raised by the suite."""


class ModelDomainError(RelaxBenchError, ValueError):
    """Argument outside the state space of the model (v < 0, x outside [0, L], ...)."""


class RootFindError(RelaxBenchError):
    def __init__(self, message: str, indices: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.indices = list(indices or [])


class BracketError(RelaxBenchError):
    """Shooting residual does not change sign on the a-priori bracket."""


class CflError(RelaxBenchError):
    pass


class SolverError(RelaxBenchError):
    def __init__(self, message: str, *, time: float, cell: Optional[int] = None):
        super().__init__(f"{message} (t={time:.6g}, cell={cell})")
        self.time = time
        self.cell = cell

    def to_dict(self) -> dict:
        return {"error": str(self), "time": self.time, "cell": self.cell}


class GridMismatchError(RelaxBenchError, ValueError):
    pass


class ConfigError(RelaxBenchError, ValueError):
    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
