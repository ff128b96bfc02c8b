"""Radial grids and sampled radial functions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError

# 7-point central stencils (sixth order) for first and second derivatives
_D1 = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2 = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Strictly increasing radii on ``[r_min, r_max]`` with a uniform parameter.

    Every grid is the image of the uniform parameter ``s_i = i / (n - 1)``
    under a smooth increasing map. Quadrature and finite differences work in
    ``s`` and use the stored Jacobians ``dr/ds`` and ``d2r/ds2``.

    Parameters
    ----------
    nodes : ndarray
        Radii, strictly increasing and positive.
    d : int
        Spatial dimension, at least 3.
    kind : str
        ``"log"`` or ``"power"``.
    grading : float
        Grading exponent of the ``"power"`` map, 1 for uniform spacing.
    """

    nodes: np.ndarray
    d: int
    kind: str = "log"
    grading: float = 1.0
    dr_ds: np.ndarray = field(repr=False, default=None)
    d2r_ds2: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        r = np.asarray(self.nodes, dtype=float)
        if r.ndim != 1 or r.size < 2:
            raise DomainError("grid needs at least two nodes")
        if not (r[0] > 0.0 and np.all(np.diff(r) > 0.0)):
            raise DomainError("nodes must be positive and strictly increasing")
        if int(self.d) < 3:
            raise DomainError("dimension must be at least 3")
        r.setflags(write=False)
        object.__setattr__(self, "nodes", r)
        object.__setattr__(self, "d", int(self.d))

    @classmethod
    def log(cls, r_min: float, r_max: float, n: int, d: int) -> "RadialGrid":
        """Log-uniform grid ``r_i = r_min (r_max/r_min)^(i/(n-1))``."""
        _check_range(r_min, r_max, n)
        s = np.linspace(0.0, 1.0, n)
        span = np.log(r_max / r_min)
        r = r_min * np.exp(span * s)
        r[0], r[-1] = r_min, r_max
        return cls(r, d, "log", 1.0, span * r, span * span * r)

    @classmethod
    def power(cls, r_min: float, r_max: float, n: int, d: int,
              grading: float = 2.0) -> "RadialGrid":
        """Power-graded grid ``r_i = r_min + (r_max - r_min) s_i^grading``."""
        _check_range(r_min, r_max, n)
        if grading < 1.0:
            raise DomainError("grading exponent must be >= 1")
        s = np.linspace(0.0, 1.0, n)
        w = r_max - r_min
        r = r_min + w * s ** grading
        r[-1] = r_max
        with np.errstate(divide="ignore", invalid="ignore"):
            j1 = w * grading * s ** (grading - 1.0)
            j2 = w * grading * (grading - 1.0) * s ** (grading - 2.0)
        j2[~np.isfinite(j2)] = 0.0
        return cls(r, d, "power", float(grading), j1, j2)

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def r_min(self) -> float:
        return float(self.nodes[0])

    @property
    def r_max(self) -> float:
        return float(self.nodes[-1])

    @property
    def ds(self) -> float:
        """Spacing of the uniform parameter."""
        return 1.0 / (self.n - 1)

    def with_dimension(self, d: int) -> "RadialGrid":
        return RadialGrid(self.nodes, d, self.kind, self.grading,
                          self.dr_ds, self.d2r_ds2)

    def spec(self) -> tuple:
        return (self.kind, self.r_min, self.r_max, self.n, self.grading)


def _check_range(r_min, r_max, n):
    if not (r_min > 0.0 and r_max > r_min):
        raise DomainError("need 0 < r_min < r_max")
    if n < 2:
        raise DomainError("need at least two nodes")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """A radial function sampled on a :class:`RadialGrid`.

    Parameters
    ----------
    grid : RadialGrid
    values : ndarray
        Samples, finite at every node.
    label : str
    deriv : ndarray, optional
        Exact radial derivative at the nodes when the producer knows it.
    """

    grid: RadialGrid
    values: np.ndarray
    label: str = ""
    deriv: np.ndarray | None = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.shape != self.grid.nodes.shape:
            raise DomainError("values must match the grid")
        if not np.all(np.isfinite(v)):
            raise DomainError("profile values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.deriv is not None:
            dv = np.array(self.deriv, dtype=float)
            if dv.shape != v.shape:
                raise DomainError("derivative must match the grid")
            dv.setflags(write=False)
            object.__setattr__(self, "deriv", dv)

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def d(self) -> int:
        return self.grid.d

    def __call__(self, r):
        """Monotone cubic interpolation in ``log r``."""
        from scipy.interpolate import PchipInterpolator

        f = PchipInterpolator(np.log(self.grid.nodes), self.values)
        return f(np.log(np.asarray(r, dtype=float)))


def param_derivatives(grid: RadialGrid, values):
    """First and second r-derivatives by sixth-order differences in ``s``.

    Only the interior nodes ``3 .. n-4`` are filled; the rest are NaN.

    Returns
    -------
    du, d2u : ndarray
    """
    f = np.asarray(values, dtype=float)
    n = f.size
    h = grid.ds
    fs = np.full(n, np.nan)
    fss = np.full(n, np.nan)
    if n >= 7:
        win = np.lib.stride_tricks.sliding_window_view(f, 7)
        fs[3:-3] = win @ _D1 / h
        fss[3:-3] = win @ _D2 / (h * h)
    j1, j2 = grid.dr_ds, grid.d2r_ds2
    du = fs / j1
    d2u = (fss - j2 * du) / (j1 * j1)
    return du, d2u
