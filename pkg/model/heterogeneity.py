# -*- coding: utf-8 -*-
"""
Heterogeneous nonlinearity h(v, x) and its monotone inversions.

Builtin closed forms (a(x) is the x-dependent linear coefficient):
- Affine:          h = a(x) v,                      params (a0, a1=0),  a = a0 + a1 x/L
- SmoothNonlinear: h = a(x) v + c v^2/(1+v),        params (a0, c, a1=0)
- PiecewiseBV:     h = a(x) v + c v^2/(1+v),        params (a0, c, jump_1, pos_1, ...)
                   a = a0 + sum_k jump_k 1[x > pos_k L]

All operations are pure; Heterogeneity is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from model.errors import ModelDomainError
from model.roots import expand_upper, solve_increasing

ArrayLike = Union[float, np.ndarray]


# ============================
# Types
# ============================

class Family(str, Enum):
    AFFINE = "Affine"
    SMOOTH_NONLINEAR = "SmoothNonlinear"
    PIECEWISE_BV = "PiecewiseBV"


class SystemKind(str, Enum):
    TWO_BY_TWO = "TwoByTwo"
    THREE_BY_THREE = "ThreeByThree"


@dataclass(frozen=True)
class Heterogeneity:
    family: Family
    params: Tuple[float, ...]
    beta: float
    mu: float
    length: float = 1.0

    def to_dict(self) -> dict:
        return {
            "family": self.family.value,
            "params": list(self.params),
            "beta": self.beta,
            "mu": self.mu,
            "length": self.length,
        }


# ============================
# Construction
# ============================

def _split_params(family: Family, params: Tuple[float, ...]) -> Tuple[float, float, float, Tuple[Tuple[float, float], ...]]:
    """Return (a0, a1, c, jumps) for any family."""
    if family == Family.AFFINE:
        if len(params) not in (1, 2):
            raise ModelDomainError("Affine expects params (a0[, a1])")
        a1 = params[1] if len(params) == 2 else 0.0
        return params[0], a1, 0.0, ()
    if family == Family.SMOOTH_NONLINEAR:
        if len(params) not in (2, 3):
            raise ModelDomainError("SmoothNonlinear expects params (a0, c[, a1])")
        a1 = params[2] if len(params) == 3 else 0.0
        return params[0], a1, params[1], ()
    if len(params) < 2 or len(params) % 2 != 0:
        raise ModelDomainError("PiecewiseBV expects params (a0, c, jump_1, pos_1, ...)")
    jumps = tuple((params[i], params[i + 1]) for i in range(2, len(params), 2))
    for _jump, pos in jumps:
        if not 0.0 <= pos <= 1.0:
            raise ModelDomainError("PiecewiseBV jump positions are fractions of L in [0, 1]")
    return params[0], 0.0, params[1], jumps


def make_heterogeneity(family: Union[Family, str], params: Sequence[float], length: float = 1.0) -> Heterogeneity:
    """Build a Heterogeneity with beta/mu read off the closed form."""
    fam = Family(family)
    pars = tuple(float(p) for p in params)
    if not length > 0:
        raise ModelDomainError("length must be positive")
    a0, a1, c, jumps = _split_params(fam, pars)
    if c < 0:
        raise ModelDomainError("c must be nonnegative (h(., x) convex)")

    if jumps:
        levels = [a0]
        running = a0
        for jump, _pos in sorted(jumps, key=lambda jp: jp[1]):
            running += jump
            levels.append(running)
        a_min, a_max = min(levels), max(levels)
    else:
        a_min, a_max = min(a0, a0 + a1), max(a0, a0 + a1)

    if a_min < 1.0:
        raise ModelDomainError(f"dh/dv must stay >= 1, got min a(x) = {a_min}")
    return Heterogeneity(family=fam, params=pars, beta=a_min, mu=a_max + c, length=float(length))


# ============================
# Raw evaluations (no domain checks; used inside solvers)
# ============================

def a_of_x(het: Heterogeneity, x: ArrayLike) -> np.ndarray:
    a0, a1, _c, jumps = _split_params(het.family, het.params)
    x = np.asarray(x, dtype=float)
    a = a0 + a1 * (x / het.length)
    for jump, pos in jumps:
        a = a + jump * (x > pos * het.length)
    return np.asarray(a, dtype=float)


def _c(het: Heterogeneity) -> float:
    return _split_params(het.family, het.params)[2]


def h_values(het: Heterogeneity, v: ArrayLike, x: ArrayLike) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = a_of_x(het, x) * v
    c = _c(het)
    if c:
        out = out + c * v * v / (1.0 + v)
    return out


def h_slope(het: Heterogeneity, v: ArrayLike, x: ArrayLike) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = a_of_x(het, x) + 0.0 * v
    c = _c(het)
    if c:
        out = out + c * (1.0 - 1.0 / ((1.0 + v) * (1.0 + v)))
    return out


def solve_level(
    het: Heterogeneity,
    coeff: ArrayLike,
    shift: ArrayLike,
    target: ArrayLike,
    x: ArrayLike,
    *,
    x0: Optional[ArrayLike] = None,
) -> np.ndarray:
    """
    Solve coeff*h(v, x) + shift*v = target for v >= 0.

    The left-hand side is increasing with slope >= coeff*beta + shift > 0 and
    vanishes at v = 0, so target >= 0 has a unique nonnegative root.
    """
    coeff = np.asarray(coeff, dtype=float)
    shift = np.asarray(shift, dtype=float)
    target, x = np.broadcast_arrays(np.asarray(target, dtype=float), np.asarray(x, dtype=float))
    if np.any(target < 0):
        raise ModelDomainError("level below zero has no nonnegative root")
    slope_min = coeff * het.beta + shift
    if np.any(slope_min <= 0):
        raise ModelDomainError("level function is not strictly increasing for this heterogeneity")

    def g(v: np.ndarray) -> np.ndarray:
        return coeff * h_values(het, v, x) + shift * v - target

    def dg(v: np.ndarray) -> np.ndarray:
        return coeff * h_slope(het, v, x) + shift

    lo = np.zeros_like(target)
    hi = expand_upper(g, target / slope_min + 1.0)
    return solve_increasing(g, dg, lo, hi, x0=x0, scale=np.maximum(1.0, target))


# ============================
# Public operations (domain-checked)
# ============================

def _check_domain(het: Heterogeneity, x: ArrayLike, **nonneg: ArrayLike) -> None:
    for name, value in nonneg.items():
        if np.any(np.asarray(value) < 0):
            raise ModelDomainError(f"{name} must be >= 0")
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0) or np.any(xs > het.length * (1.0 + 1e-12)):
        raise ModelDomainError(f"x must lie in [0, {het.length}]")


def _out(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def eval_h(het: Heterogeneity, v: ArrayLike, x: ArrayLike) -> ArrayLike:
    _check_domain(het, x, v=v)
    return _out(h_values(het, v, x))


def eval_h_v(het: Heterogeneity, v: ArrayLike, x: ArrayLike) -> ArrayLike:
    _check_domain(het, x, v=v)
    return _out(h_slope(het, v, x))


def invert_h(het: Heterogeneity, u: ArrayLike, x: ArrayLike) -> ArrayLike:
    """v with h(v, x) = u."""
    _check_domain(het, x, u=u)
    return _out(solve_level(het, 1.0, 0.0, u, x))


def invert_rho2(het: Heterogeneity, rho: ArrayLike, x: ArrayLike) -> ArrayLike:
    """v with h(v, x) + v = rho."""
    _check_domain(het, x, rho=rho)
    return _out(solve_level(het, 1.0, 1.0, rho, x))


def invert_rho3(het: Heterogeneity, rho: ArrayLike, x: ArrayLike) -> ArrayLike:
    """v with 2 h(v, x) + v = rho."""
    _check_domain(het, x, rho=rho)
    return _out(solve_level(het, 2.0, 1.0, rho, x))
