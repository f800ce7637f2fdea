"""
Adapted Kruzkov entropies of the relaxation systems.

For a steady state k = k_p and a = h(k, x):
- 2x2: eta = |u - a| + |v - k|,               flux |u - a| - |v - k|
- 3x3: eta = |c1 - a| + |c2 - a| + |c3 - k|,  flux |c1 - a| + |c2 - a| - |c3 - k|

Spatial differences are upwinded along each transport direction with the
receiving cell's (a, k).
"""

from __future__ import annotations

from typing import Union

import numpy as np

from model.grid import Grid
from model.heterogeneity import Heterogeneity, h_values
from relax_solver.state import Boundary, Boundary2, Boundary3, State2, State3
from steady.kp import KpProfile

RelaxState = Union[State2, State3]


def entropy_residual_relax_field(
    prev: RelaxState,
    nxt: RelaxState,
    het: Heterogeneity,
    grid: Grid,
    kp: KpProfile,
    dt: float,
    boundary: Boundary,
) -> np.ndarray:
    k = kp.k
    a = h_values(het, k, grid.centers)
    dx = grid.dx
    if isinstance(prev, State2):
        assert isinstance(nxt, State2) and isinstance(boundary, Boundary2)
        u_ext, v_ext = boundary.padded(prev)
        eta_old = np.abs(prev.u - a) + np.abs(prev.v - k)
        eta_new = np.abs(nxt.u - a) + np.abs(nxt.v - k)
        right = np.abs(prev.u - a) - np.abs(u_ext[:-1] - a)
        left = np.abs(prev.v - k) - np.abs(v_ext[1:] - k)
        return (eta_new - eta_old) / dt + (right + left) / dx

    assert isinstance(nxt, State3) and isinstance(boundary, Boundary3)
    c1_ext, c2_ext, c3_ext = boundary.padded(prev)
    eta_old = np.abs(prev.c1 - a) + np.abs(prev.c2 - a) + np.abs(prev.c3 - k)
    eta_new = np.abs(nxt.c1 - a) + np.abs(nxt.c2 - a) + np.abs(nxt.c3 - k)
    right = (np.abs(prev.c1 - a) - np.abs(c1_ext[:-1] - a)) + (np.abs(prev.c2 - a) - np.abs(c2_ext[:-1] - a))
    left = np.abs(prev.c3 - k) - np.abs(c3_ext[1:] - k)
    return (eta_new - eta_old) / dt + (right + left) / dx


def entropy_residual_relax(
    prev: RelaxState,
    nxt: RelaxState,
    het: Heterogeneity,
    grid: Grid,
    kp: KpProfile,
    dt: float,
    boundary: Boundary,
) -> float:
    """Worst cell of the discrete entropy balance; <= 0 up to round-off for the splitting scheme."""
    return float(entropy_residual_relax_field(prev, nxt, het, grid, kp, dt, boundary).max())
