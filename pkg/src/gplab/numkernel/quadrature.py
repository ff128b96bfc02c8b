"""Radial quadrature on graded grids."""
from __future__ import annotations

import numpy as np

from .grid import RadialGrid, RadialProfile
from .special import sphere_measure


def param_trapezoid(grid: RadialGrid, g) -> float:
    """``int_{r_min}^{r_max} g(r) dr`` by the trapezoid rule in ``s``.

    Second order in general; spectrally accurate when ``g dr/ds`` vanishes
    smoothly at both ends, which is the case for log grids and integrands
    that decay at zero and infinity.
    """
    y = np.asarray(g, dtype=float) * grid.dr_ds
    return float(grid.ds * (y.sum() - 0.5 * (y[0] + y[-1])))


def radial_integral(grid: RadialGrid, g) -> float:
    """``|S^{d-1}| int g(r) r^(d-1) dr`` over the grid range."""
    r = grid.nodes
    return sphere_measure(grid.d) * param_trapezoid(grid, g * r ** (grid.d - 1))


def quad_radial(f: RadialProfile, q: float) -> float:
    """``|S^{d-1}| int |f|^q r^(d-1) dr``, the q-th power of the L^q norm."""
    return radial_integral(f.grid, np.abs(f.values) ** q)
