"""Radial spectra of the linearization around the singular solution.

With ``t = log r`` and ``chi = r^k phi``, ``k = (d-2)/2``, the radial
eigenproblem ``-Delta phi + V phi = lam phi`` becomes the pencil

    -chi_tt + (k^2 + r^2 V) chi = lam r^2 chi,

which a uniform grid in ``t`` turns into a symmetric tridiagonal matrix
with a positive diagonal weight. Dirichlet truncation at both ends selects
the Friedrichs extension, and Sturm counts give exact eigenvalue counts.

For the linearization ``V = r^2 - 3 u_inf^2`` the inverse-square part of
``k^2 + r^2 V`` tends to ``(d^2 - 16d + 40) / 4``. It is negative for
``5 <= d <= 12``, where the count of eigenvalues below ``omega_inf`` grows
without bound as ``r_min -> 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure
from .numkernel.grid import RadialGrid
from .numkernel.linalg import (TridiagonalOperator, count_eigs_below,
                               eigenvalue_bisect)
from .numkernel.special import kummer_poly_coeffs
from .shooting import SingularSolution

_EIG_TOL = 1e-8


def discriminant(d: int) -> int:
    """``d^2 - 16 d + 40``, four times the limiting inverse-square term."""
    return d * d - 16 * d + 40


@dataclass(frozen=True)
class KummerSpec:
    """Closed-form data of ``-Delta + r^2 - 3(d-3)/r^2``.

    Attributes
    ----------
    d : int
    l_plus, l_minus : float
        Indicial exponents ``(2 - d +- sqrt(d^2 - 16d + 40)) / 2``; NaN for
        ``d <= 12``.
    sigma : ndarray
        Eigenvalues ``d + 4n + 2 l_plus``, ``n = 0 .. n_levels-1``; empty
        for ``d <= 12``.
    alpha_osc : float
        ``sqrt(-(d^2 - 16d + 40)) / 2`` for ``5 <= d <= 12``, else NaN.
    beta_osc : float
        ``(d - 4) / 2``.
    """

    d: int
    l_plus: float
    l_minus: float
    sigma: np.ndarray
    alpha_osc: float
    beta_osc: float


def kummer_spec(d: int, n_levels: int = 8) -> KummerSpec:
    if int(d) != d or d < 5:
        raise DomainError("d must be an integer >= 5")
    d = int(d)
    D = discriminant(d)
    nan = math.nan
    if D >= 0:
        s = math.sqrt(D)
        lp, lm = 0.5 * (2 - d + s), 0.5 * (2 - d - s)
        sigma = d + 4.0 * np.arange(n_levels) + 2.0 * lp
        alpha = nan
    else:
        lp = lm = nan
        sigma = np.empty(0)
        alpha = 0.5 * math.sqrt(-D)
    sigma.setflags(write=False)
    return KummerSpec(d, lp, lm, sigma, alpha, 0.5 * (d - 4.0))


def kummer_eigenfunction(d: int, n: int, r):
    """``W_n = r^l+ exp(-r^2/2) M(-n; l+ + d/2; r^2)`` with two derivatives.

    Returns
    -------
    w, dw, d2w : ndarray
    """
    ks = kummer_spec(d)
    if not math.isfinite(ks.l_plus):
        raise DomainError("needs d >= 13")
    lp = ks.l_plus
    c = kummer_poly_coeffs(n, lp + 0.5 * d)
    r = np.asarray(r, dtype=float)
    x = r * r
    P = np.polynomial.polynomial.polyval(x, c)
    dc = np.polynomial.polynomial.polyder(c)
    P1 = np.polynomial.polynomial.polyval(x, dc) if n > 0 else 0.0 * x
    P2 = (np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(dc))
          if n > 1 else 0.0 * x)
    f = r ** lp * np.exp(-0.5 * x)
    g = lp / r - r
    f1 = f * g
    f2 = f * (g * g - lp / x - 1.0)
    q, q1, q2 = P, 2.0 * r * P1, 2.0 * P1 + 4.0 * x * P2
    return f * q, f1 * q + f * q1, f2 * q + 2.0 * f1 * q1 + f * q2


def eigenfunction_residual(d: int, n: int, r_samples) -> float:
    """Max relative residual of ``W_n`` in the limiting eigen-equation.

    Residual of ``-W'' - (d-1) W'/r + r^2 W - 3(d-3) W/r^2 - sigma_n W``
    divided, per sample, by the largest of its terms.
    """
    r = np.asarray(r_samples, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("samples must be positive")
    sig = d + 4.0 * n + 2.0 * kummer_spec(d).l_plus
    w, dw, d2w = kummer_eigenfunction(d, n, r)
    terms = np.vstack([-d2w, -(d - 1.0) / r * dw, r * r * w,
                       -3.0 * (d - 3.0) / (r * r) * w, -sig * w])
    res = np.abs(terms.sum(axis=0)) / np.max(np.abs(terms), axis=0)
    return float(res.max())


# -- discretization ------------------------------------------------------------------

def _pencil(grid: RadialGrid, r2V) -> TridiagonalOperator:
    if grid.kind != "log":
        raise DomainError("spectral operators need a log-uniform grid")
    r = grid.nodes
    h = math.log(r[1] / r[0])
    k = 0.5 * (grid.d - 2.0)
    diag = 2.0 / (h * h) + k * k + r2V
    off = np.full(r.size - 1, -1.0 / (h * h))
    return TridiagonalOperator(diag, off, grid, r * r)


def build_limiting(d: int, grid: RadialGrid) -> TridiagonalOperator:
    """Pencil of ``-Delta + r^2 - 3(d-3)/r^2`` on ``grid``."""
    grid = grid.with_dimension(d)
    r = grid.nodes
    return _pencil(grid, r ** 4 - 3.0 * (d - 3.0))


def build_linearized(sing: SingularSolution, grid: RadialGrid,
                     shift: bool = True) -> TridiagonalOperator:
    """Pencil of ``-Delta + r^2 - 3 u_inf^2`` (minus ``omega_inf`` if shift).

    Values of ``u_inf`` below its start radius come from the near-origin
    expansion.
    """
    grid = grid.with_dimension(sing.d)
    r = grid.nodes
    u = sing.sample(r)
    w = sing.omega_inf if shift else 0.0
    return _pencil(grid, r * r * (r * r - w - 3.0 * u * u))


def log_grid(d: int, r_min: float, r_max: float, h: float) -> RadialGrid:
    """Log-uniform grid with ``t`` spacing at most ``h``."""
    n = int(math.ceil(math.log(r_max / r_min) / h)) + 1
    return RadialGrid.log(r_min, r_max, n, d)


def limiting_eigenvalues(d: int, m: int = 4, r_min: float = 1e-6,
                         r_max: float = 10.0, n: int = 2000,
                         richardson: bool = True,
                         tol: float = 1e-11) -> np.ndarray:
    """Lowest ``m`` eigenvalues of the limiting operator.

    With ``richardson`` the values on ``n`` and ``2n - 1`` nodes (``t``
    spacing halved) are combined as ``(4 lam_fine - lam_coarse) / 3``.
    """
    def eig(nn):
        T = build_limiting(d, RadialGrid.log(r_min, r_max, nn, d))
        lo, hi = T.gershgorin()
        return np.array([eigenvalue_bisect(T, j, tol, (lo, hi))
                         for j in range(m)])

    fine = eig(2 * n - 1)
    if not richardson:
        return fine
    return (4.0 * fine - eig(n)) / 3.0


# -- Morse index -------------------------------------------------------------------

@dataclass(frozen=True)
class RefinementPolicy:
    """Grids visited by :func:`morse_index`.

    For ``d >= 13`` the count must agree on the base grid, ``r_min / 2``,
    ``r_min / 4``, then ``r_max + dr_max`` and finally ``h / 2``. For
    ``d <= 12`` ``r_min`` is divided by ``factor`` at each of ``steps``
    steps and the count must strictly increase at every step.

    The default factor 16 (four halvings per step) reflects the growth rate
    of the count, ``alpha ln 2 / pi`` per halving, which is below 1 for
    every ``5 <= d <= 12``.
    """

    r_min: float = 1e-2
    r_max: float | None = None
    h: float = 2e-3
    dr_max: float = 4.0
    factor: float = 16.0
    steps: int = 3


@dataclass(frozen=True)
class SpectralReport:
    """Morse index of the singular solution and the lowest eigenvalues.

    Attributes
    ----------
    d : int
    omega_inf : float
    morse_index : int or float
        Count of eigenvalues of ``-Delta + r^2 - 3 u_inf^2`` below
        ``omega_inf`` on the finest grid; ``inf`` when unbounded.
    unbounded : bool
    stabilized : bool
        ``d >= 13``: the count agreed over the whole trace.
    tau : ndarray
        Lowest eigenvalues of the unshifted operator (``d >= 13``).
    tau_error : ndarray
        Discretization error estimate for ``tau``.
    refinement_trace : tuple of (r_min, r_max, n, count)
    """

    d: int
    omega_inf: float
    morse_index: float
    unbounded: bool
    stabilized: bool
    tau: np.ndarray
    tau_error: np.ndarray
    refinement_trace: tuple


def _count(sing, grid):
    return count_eigs_below(build_linearized(sing, grid, shift=True), 0.0)


def _lowest(T, m, tol):
    lo, hi = T.gershgorin()
    return np.array([eigenvalue_bisect(T, j, tol, (lo, hi))
                     for j in range(m)])


def morse_index(sing: SingularSolution,
                policy: RefinementPolicy | None = None,
                n_tau: int = 3, tol: float = _EIG_TOL) -> SpectralReport:
    """Negative-eigenvalue count of ``-Delta + r^2 - omega_inf - 3 u_inf^2``.

    Raises
    ------
    NumericalFailure
        If ``d >= 13`` and the count does not stabilize over the trace.
    """
    policy = RefinementPolicy() if policy is None else policy
    d = sing.d
    r_max = (math.sqrt(sing.omega_inf) + 10.0 if policy.r_max is None
             else policy.r_max)
    trace = []

    def visit(r_min, rmax, h):
        g = log_grid(d, r_min, rmax, h)
        c = _count(sing, g)
        trace.append((float(r_min), float(rmax), g.n, int(c)))
        return g, c

    if d <= 12:
        r_min = policy.r_min
        counts = [visit(r_min, r_max, policy.h)[1]]
        for _ in range(policy.steps):
            r_min /= policy.factor
            counts.append(visit(r_min, r_max, policy.h)[1])
        unbounded = all(b > a for a, b in zip(counts, counts[1:]))
        idx = math.inf if unbounded else float(counts[-1])
        return SpectralReport(d, sing.omega_inf, idx, unbounded, False,
                              np.empty(0), np.empty(0), tuple(trace))

    r0 = policy.r_min
    visit(r0, r_max, policy.h)
    visit(r0 / 2.0, r_max, policy.h)
    g_mid, _ = visit(r0 / 4.0, r_max, policy.h)
    visit(r0 / 4.0, r_max + policy.dr_max, policy.h)
    g_fine, c = visit(r0 / 4.0, r_max + policy.dr_max, 0.5 * policy.h)
    counts = [t[3] for t in trace]
    stabilized = len(set(counts)) == 1
    if not stabilized:
        raise NumericalFailure(f"Morse count did not stabilize for d={d}: "
                               f"trace {trace}")
    # tau on the finest grid; error from the h and r_min refinements
    fine = _lowest(build_linearized(sing, g_fine, shift=False), n_tau, tol)
    coarse_h = _lowest(build_linearized(
        sing, log_grid(d, r0 / 4.0, r_max + policy.dr_max, policy.h),
        shift=False), n_tau, tol)
    coarse_r = _lowest(build_linearized(
        sing, log_grid(d, r0 / 2.0, r_max + policy.dr_max, 0.5 * policy.h),
        shift=False), n_tau, tol)
    err = np.maximum(np.abs(fine - coarse_h), np.abs(fine - coarse_r))
    err = np.maximum(err, tol)
    for a in (fine, err):
        a.setflags(write=False)
    return SpectralReport(d, sing.omega_inf, float(c), False, True, fine, err,
                          tuple(trace))


def nondegeneracy_gap(report: SpectralReport) -> tuple[float, float, str]:
    """``(tau_1, tau_2, verdict)`` for the test ``tau_1 < omega_inf < tau_2``.

    ``verdict`` is ``"nondegenerate"`` when the test holds with a margin of
    at least 10 error estimates, ``"separated-fails"`` when it fails with
    that margin, and ``"inconclusive"`` otherwise.
    """
    if report.d < 13 or report.tau.size < 2:
        raise DomainError("needs a d >= 13 report with two eigenvalues")
    t1, t2 = float(report.tau[0]), float(report.tau[1])
    w = report.omega_inf
    err = 10.0 * float(max(report.tau_error[0], report.tau_error[1]))
    margin = min(w - t1, t2 - w)
    if margin >= err:
        verdict = "nondegenerate"
    elif margin <= -err:
        verdict = "separated-fails"
    else:
        verdict = "inconclusive"
    return t1, t2, verdict
