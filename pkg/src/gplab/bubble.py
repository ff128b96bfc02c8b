"""Aubin-Talenti bubbles: pointwise values, norms and the Sobolev constant.

All norms come from Beta-function closed forms. Norms that diverge in a given
dimension are stored as ``math.inf`` and flagged, never NaN.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergentIntegralError, DomainError
from .numkernel.special import power_integral, sphere_measure


def _check_d(d):
    if int(d) != d or d < 3:
        raise DomainError("dimension must be an integer >= 3")
    return int(d)


def bubble_peak(d: int) -> float:
    """``U_1(0) = [d(d-2)]^((d-2)/4)``."""
    return (d * (d - 2.0)) ** ((d - 2.0) / 4.0)


def bubble_eval(d: int, eps: float, r):
    """``U_eps(r) = eps^((d-2)/2) [d(d-2)]^((d-2)/4) (eps^2 + r^2)^(-(d-2)/2)``.

    Solves ``-Delta U = U^((d+2)/(d-2))`` in R^d.
    """
    d = _check_d(d)
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    k = 0.5 * (d - 2.0)
    r = np.asarray(r, dtype=float)
    out = bubble_peak(d) * eps ** k * (eps * eps + r * r) ** (-k)
    return float(out) if out.ndim == 0 else out


def bubble_deriv(d: int, eps: float, r):
    """Radial derivative of :func:`bubble_eval`."""
    r = np.asarray(r, dtype=float)
    return -(d - 2.0) * r / (eps * eps + r * r) * bubble_eval(d, eps, r)


def bubble_power_norm(d: int, q: float) -> float:
    """``int_{R^d} U_1^q dx``, or ``inf`` when it diverges."""
    d = _check_d(d)
    c = bubble_peak(d)
    try:
        return c ** q * sphere_measure(d) * power_integral(
            d - 1.0, 0.5 * q * (d - 2.0))
    except DivergentIntegralError:
        return math.inf


@dataclass(frozen=True)
class BubbleConstants:
    """Norms of ``U = U_1`` that enter the concentration laws.

    Attributes
    ----------
    d : int
    norm_L2_sq : float
        ``||U||_2^2``; ``inf`` unless ``d >= 5``.
    norm_xU_sq : float
        ``||x U||_2^2``; ``inf`` unless ``d >= 7``.
    norm_L3_cubed_d4 : float
        ``||U||_3^3`` of the four-dimensional bubble.
    norm_L73_d5 : float
        ``int U^(7/3)`` of the five-dimensional bubble.
    sobolev_S : float
    critical_norm : float
        ``||U||_{2d/(d-2)}^{2d/(d-2)}`` in dimension ``d``.
    grad_norm_sq : float
        ``||grad U||_2^2`` in dimension ``d``.
    """

    d: int
    norm_L2_sq: float
    norm_xU_sq: float
    norm_L3_cubed_d4: float
    norm_L73_d5: float
    sobolev_S: float
    critical_norm: float
    grad_norm_sq: float

    @property
    def has_L2(self) -> bool:
        return math.isfinite(self.norm_L2_sq)

    @property
    def has_xU(self) -> bool:
        return math.isfinite(self.norm_xU_sq)


def bubble_constants(d: int) -> BubbleConstants:
    d = _check_d(d)
    c = bubble_peak(d)
    s = sphere_measure(d)
    try:
        xu = c * c * s * power_integral(d + 1.0, d - 2.0)
    except DivergentIntegralError:
        xu = math.inf
    crit = bubble_power_norm(d, 2.0 * d / (d - 2.0))
    # |U'|^2 = c^2 (d-2)^2 r^2 (1+r^2)^-d
    grad = c * c * (d - 2.0) ** 2 * s * power_integral(d + 1.0, float(d))
    return BubbleConstants(
        d=d,
        norm_L2_sq=bubble_power_norm(d, 2.0),
        norm_xU_sq=xu,
        norm_L3_cubed_d4=bubble_power_norm(4, 3.0),
        norm_L73_d5=bubble_power_norm(5, 7.0 / 3.0),
        sobolev_S=crit ** (2.0 / d),
        critical_norm=crit,
        grad_norm_sq=grad,
    )


def sobolev_constant(d: int) -> float:
    """Best Sobolev constant ``S`` with ``S^(d/2) = ||U||_{2d/(d-2)}^{2d/(d-2)}``."""
    d = _check_d(d)
    return bubble_power_norm(d, 2.0 * d / (d - 2.0)) ** (2.0 / d)


def quadrature_power_norm(d: int, q: float) -> float:
    """``int_{R^d} U_1^q dx`` by adaptive quadrature, independent of Beta forms.

    Splits ``[0, inf)`` at 1 and maps the tail with ``r = 1/s``.
    """
    from scipy.integrate import quad

    d = _check_d(d)
    k = 0.5 * q * (d - 2.0)
    if not 2.0 * k > d:
        return math.inf
    c = bubble_peak(d) ** q * sphere_measure(d)
    head = quad(lambda r: r ** (d - 1.0) * (1.0 + r * r) ** -k, 0.0, 1.0,
                epsabs=0.0, epsrel=1e-13, limit=200)[0]
    # r = 1/s: r^(d-1) (1+r^2)^-k dr = s^(2k-d-1) (1+s^2)^-k ds
    tail = quad(lambda s: s ** (2.0 * k - d - 1.0) * (1.0 + s * s) ** -k,
                0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return c * (head + tail)
