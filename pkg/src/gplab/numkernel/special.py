"""Special functions: log-gamma, sphere measures, Beta integrals, Kummer M."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DivergentIntegralError, DomainError, NumericalFailure

# consecutive small terms required before a non-terminating series stops
_TAIL_RUN = 5
_TAIL_REL = 1e-16


def log_gamma(x: float) -> float:
    """Natural logarithm of the Gamma function for ``x > 0``.

    Raises
    ------
    DomainError
        If ``x <= 0``.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def sphere_measure(d: int) -> float:
    """Surface measure ``2 pi^(d/2) / Gamma(d/2)`` of the unit sphere in R^d."""
    if d < 2:
        raise DomainError("sphere_measure requires d >= 2")
    return math.exp(math.log(2.0) + 0.5 * d * math.log(math.pi)
                    - log_gamma(0.5 * d))


def log_beta(x: float, y: float) -> float:
    return log_gamma(x) + log_gamma(y) - log_gamma(x + y)


def power_integral(a: float, b: float) -> float:
    """Closed form of ``int_0^inf r^a (1 + r^2)^(-b) dr``.

    Equals ``B((a+1)/2, b-(a+1)/2) / 2``.

    Raises
    ------
    DivergentIntegralError
        Unless ``b > (a+1)/2 > 0``.
    """
    x = 0.5 * (a + 1.0)
    if not (x > 0.0 and b > x):
        raise DivergentIntegralError(
            f"integral of r^{a} (1+r^2)^-{b} diverges")
    return 0.5 * math.exp(log_beta(x, b - x))


def kummer_M(a: float, b: float, x, max_terms: int = 100_000):
    """Confluent hypergeometric function ``M(a; b; x)``.

    Sums ``sum_n (a)_n / (b)_n x^n / n!``. When ``-a`` is a non-negative
    integer the sum terminates and is exact up to rounding. Otherwise the
    series stops once ``|term| < 1e-16 |sum|`` for five consecutive terms.

    Parameters
    ----------
    a, b : float
        ``b`` must not be zero or a negative integer.
    x : float or array_like

    Raises
    ------
    DomainError
        If ``b`` is a pole.
    NumericalFailure
        If the non-terminating series has not met the tail rule after
        ``max_terms`` terms.
    """
    if b <= 0 and float(b).is_integer():
        raise DomainError(f"M(a; b; x) undefined for b = {b}")
    xv = np.asarray(x, dtype=float)
    scalar = xv.ndim == 0
    xv = np.atleast_1d(xv)
    total = np.ones_like(xv)
    term = np.ones_like(xv)
    n_poly = _polynomial_degree(a)
    if n_poly is not None:
        for k in range(n_poly):
            term = term * ((a + k) / ((b + k) * (k + 1.0))) * xv
            total = total + term
    else:
        run = np.zeros(xv.shape, dtype=int)
        for k in range(max_terms):
            term = term * ((a + k) / ((b + k) * (k + 1.0))) * xv
            total = total + term
            small = np.abs(term) < _TAIL_REL * np.abs(total)
            run = np.where(small, run + 1, 0)
            if np.all(run >= _TAIL_RUN):
                break
        else:
            raise NumericalFailure("Kummer series did not meet the tail rule")
    return float(total[0]) if scalar else total


def _polynomial_degree(a: float):
    """Return ``n`` when ``a = -n`` for a non-negative integer ``n``."""
    if a <= 0 and float(a).is_integer():
        return int(-a)
    return None


def kummer_poly_coeffs(n: int, b: float) -> np.ndarray:
    """Coefficients ``c_k`` of ``M(-n; b; x) = sum_k c_k x^k``, ascending."""
    c = np.empty(n + 1)
    c[0] = 1.0
    for k in range(n):
        c[k + 1] = c[k] * (k - n) / ((b + k) * (k + 1.0))
    return c
