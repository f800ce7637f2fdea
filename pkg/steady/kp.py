"""
Steady states k_p of the limit laws.

k_p is the profile with constant flux level p:
- TwoByTwo:     h(k, x) - k = p
- ThreeByThree: 2 h(k, x) - k = p
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from model.errors import ModelDomainError
from model.grid import Grid
from model.heterogeneity import Heterogeneity, SystemKind, h_values, solve_level


@dataclass(frozen=True)
class KpProfile:
    p: float
    k: np.ndarray
    system: SystemKind

    def to_dict(self) -> dict:
        return {"p": self.p, "system": self.system.value, "k": self.k.tolist()}


def _coeff(system: SystemKind) -> float:
    return 1.0 if system == SystemKind.TWO_BY_TWO else 2.0


def kp_values(het: Heterogeneity, p: float, x: Union[float, np.ndarray], system: SystemKind) -> np.ndarray:
    """k_p evaluated at arbitrary positions (cell centres or the boundary points)."""
    system = SystemKind(system)
    if p < 0:
        raise ModelDomainError(f"flux level p={p} < 0 would need k_p < 0")
    if system == SystemKind.TWO_BY_TWO and not het.beta > 1.0:
        raise ModelDomainError("TwoByTwo steady states need beta > 1")
    x = np.asarray(x, dtype=float)
    return solve_level(het, _coeff(system), -1.0, np.full(x.shape, float(p)), x)


def solve_kp(het: Heterogeneity, grid: Grid, p: float, system: SystemKind) -> KpProfile:
    system = SystemKind(system)
    k = kp_values(het, p, grid.centers, system)
    return KpProfile(p=float(p), k=k, system=system)


def rho_of_kp(het: Heterogeneity, grid: Grid, kp: KpProfile) -> np.ndarray:
    """Conserved density of the steady state: k + h(k, x), or k + 2 h(k, x)."""
    return kp.k + _coeff(kp.system) * h_values(het, kp.k, grid.centers)


def kp_residual(het: Heterogeneity, grid: Grid, kp: KpProfile) -> float:
    flux = _coeff(kp.system) * h_values(het, kp.k, grid.centers) - kp.k
    return float(np.max(np.abs(flux - kp.p))) if kp.k.size else 0.0
