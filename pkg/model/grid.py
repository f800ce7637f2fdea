"""Uniform cell-centred mesh on [0, L]."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from model.errors import GridMismatchError, ModelDomainError


@dataclass(frozen=True)
class Grid:
    length: float
    n_cells: int

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise ModelDomainError(f"grid length must be positive, got {self.length}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 1:
            raise ModelDomainError(f"n_cells must be a positive integer, got {self.n_cells}")

    @property
    def dx(self) -> float:
        return self.length / self.n_cells

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.n_cells) + 0.5) * self.dx

    @property
    def faces(self) -> np.ndarray:
        return np.linspace(0.0, self.length, self.n_cells + 1)

    def require_same(self, other: "Grid") -> None:
        if self != other:
            raise GridMismatchError(f"grid mismatch: {self} vs {other}")

    def to_dict(self) -> dict:
        return {"L": self.length, "n_cells": self.n_cells, "dx": self.dx}
