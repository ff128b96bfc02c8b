"""Concentration rate and energy of critical ground states near ``omega_*``.

A ground state concentrating at the origin looks like a bubble ``U_eps``
(or its projection ``P U_eps`` for ``d <= 6``). This module extracts the
scale ``eps_omega`` and the energy ``I_omega`` from computed profiles and
compares them with the per-dimension laws ``omega -> eps`` and
``omega -> S - I``.

Two families of laws are provided. :func:`target_constants` evaluates the
target laws checked by the acceptance criteria. :func:`matched_constants`
gives the leading terms obtained by expanding the bubble quotient (and, for
``d = 3``, by matching inner and outer solutions); for ``d = 4``
:func:`d4_log_rate` gives the exponential rate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .bubble import BubbleConstants, bubble_constants, bubble_eval, bubble_peak
from .errors import DomainError, GPLabError
from .greenfn import GreenData, green_L2_norm_sq, omega_star, projected_bubble
from .numkernel.quadrature import radial_integral
from .numkernel.special import sphere_measure
from .shooting import ShotSolution, find_ground_state

LAW_KINDS = ("d3_linear", "d4_log", "d5_linear", "d6_sqrt_log", "d7plus_sqrt")

_ROUTE_TOL = 1e-4  # energy cross-check beyond this flags the profile


class MissingGreenData(GPLabError, ValueError):
    """A law for ``d <= 5`` needs Green-function data that was not given."""


class UnconvergedProfileWarning(RuntimeWarning):
    """The two energy formulas disagree beyond the cross-check tolerance."""


def law_kind(d: int) -> str:
    if d < 3:
        raise DomainError("dimension must be >= 3")
    return LAW_KINDS[min(d, 7) - 3]


@dataclass(frozen=True)
class Law:
    """A leading-order law ``omega -> value``.

    Attributes
    ----------
    d : int
    kind : str
        One of :data:`LAW_KINDS`.
    quantity : str
        ``"eps"`` for the concentration rate, ``"gap"`` for ``S - I``.
    constant : float
        Leading constant of the law.
    fn : callable
        ``fn(omega, constant)`` evaluates the law.
    """

    d: int
    kind: str
    quantity: str
    constant: float
    fn: Callable[[float, float], float]

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        out = self.fn(w, self.constant)
        return float(out) if np.ndim(out) == 0 else out


def _need_green(d, green):
    if green is None:
        raise MissingGreenData(f"d={d} law needs GreenData")
    if green.d != d:
        raise DomainError(f"GreenData is for d={green.d}, not d={d}")


def _pow(w, c, e):
    return c * w ** e


def target_constants(d: int, green: GreenData | None,
                     bub: BubbleConstants | None = None,
                     variant: str = "statement") -> tuple[Law, Law]:
    """Target laws for ``eps_omega`` and ``S - I_omega``.

    Parameters
    ----------
    d : int
    green : GreenData or None
        Required for ``d <= 5``: ``||G||_2^2`` for d=3, ``H(0)`` for d=4,5.
    bub : BubbleConstants, optional
        Defaults to ``bubble_constants(d)``.
    variant : {"statement", "proof"}
        Two candidate d=6 energy denominators: ``24^3`` (``"statement"``)
        and ``12 * 24^2`` (``"proof"``). Other dimensions ignore it.

    Notes
    -----
    The d=4 exponents are negative, ``exp(-c / omega)``, so that both laws
    vanish as ``omega -> 0``.
    """
    bub = bubble_constants(d) if bub is None else bub
    if bub.d != d:
        raise DomainError("bubble constants are for another dimension")
    if variant not in ("statement", "proof"):
        raise DomainError("variant must be 'statement' or 'proof'")
    kind = law_kind(d)
    S = bub.sobolev_S
    if d == 3:
        _need_green(d, green)
        g2 = green_L2_norm_sq(green)
        ce = 3.0 ** 1.25 * g2 / (20.0 * math.pi)
        cg = S ** -1.5 * 3.0 ** 0.75 * g2 * g2 / (40.0 * math.pi)
        return (Law(d, kind, "eps", ce, lambda w, c: c * (w - 1.0)),
                Law(d, kind, "gap", cg, lambda w, c: c * (w - 1.0) ** 2))
    if d == 4:
        _need_green(d, green)
        a = 3.0 * math.sqrt(2.0) * green.H_at_zero * bub.norm_L3_cubed_d4 \
            / sphere_measure(4)
        pre = math.sqrt(2.0) / (S * S) * green.H_at_zero * bub.norm_L3_cubed_d4
        return (Law(d, kind, "eps", a / 4.0, lambda w, c: np.exp(-c / w)),
                Law(d, kind, "gap", a / 2.0,
                    lambda w, c: pre * np.exp(-c / w)))
    if d == 5:
        _need_green(d, green)
        hq = green.H_at_zero * bub.norm_L73_d5
        ce = 3.0 * bub.norm_L2_sq / (7.0 * 15.0 ** 0.75 * hq)
        cg = S ** -2.5 * 54.0 * bub.norm_L2_sq ** 3 / (
            1715.0 * 15.0 ** 1.5 * hq * hq)
        return (Law(d, kind, "eps", ce, lambda w, c: _pow(w, c, 1.0)),
                Law(d, kind, "gap", cg, lambda w, c: _pow(w, c, 3.0)))
    if d == 6:
        s5 = sphere_measure(6)
        ce = bub.norm_L2_sq / (12.0 * 24.0 ** 2 * s5)
        den = 24.0 ** 3 if variant == "statement" else 12.0 * 24.0 ** 2
        cg = bub.norm_L2_sq ** 2 / (S * S * den * s5)
        return (Law(d, kind, "eps", ce,
                    lambda w, c: np.sqrt(c * w / np.abs(np.log(w)))),
                Law(d, kind, "gap", cg,
                    lambda w, c: c * w * w / np.abs(np.log(w))))
    A, B = bub.norm_xU_sq, bub.norm_L2_sq
    ce = B / (2.0 * A)
    cg = S ** (-(d - 2.0) / 2.0) * B * B / (2.0 * d * A)
    return (Law(d, kind, "eps", ce, lambda w, c: np.sqrt(c * w)),
            Law(d, kind, "gap", cg, lambda w, c: _pow(w, c, 2.0)))


def matched_constants(d: int, green: GreenData | None = None,
                      bub: BubbleConstants | None = None) -> tuple[Law, Law]:
    """Independently derived leading laws for ``d = 3``, ``5``, ``6`` and ``d >= 7``.

    With ``kappa = U_1(0)`` the far-field coefficient of the bubble, the
    projection defect is ``U_eps - PU_eps ~ kappa eps^((d-2)/2) H`` and the
    quotient of ``PU_eps`` (``U_eps`` for ``d >= 7``) expands as
    ``S + S^(1-d/2) f(eps)``; minimizing ``f`` gives ``eps`` and
    ``S - I = -S^(1-d/2) min f``.

    - ``d >= 7``: ``f = eps^4 ||xU||^2 - omega eps^2 ||U||^2``, so
      ``eps^2 = omega ||U||^2 / (2 ||xU||^2)`` and
      ``S - I = S^(-(d-2)/2) ||U||^4 omega^2 / (4 ||xU||^2)``.
    - ``d = 6``: ``f = kappa ||U||^2 eps^4 |log eps| / 4 - omega eps^2 ||U||^2``
      with ``|log eps| ~ |log omega| / 2``, so
      ``eps^2 = omega / (6 |log omega|)`` and
      ``S - I = ||U||^2 omega^2 / (12 S^2 |log omega|)``. Corrections are
      relative ``O(log|log omega| / |log omega|)``.
    - ``d = 5``: ``f = kappa H(0) Q eps^3 - omega ||U||^2 eps^2`` with
      ``Q = int U^(7/3)``, so ``eps = 2 omega ||U||^2 / (3 kappa H(0) Q)`` and
      ``S - I = 4 ||U||^6 omega^3 / (27 kappa^2 H(0)^2 Q^2 S^(3/2))``.
    - ``d = 3``: matching the inner correction of the bubble (whose
      constant term is ``3^(1/4) pi eps^(3/2)``) to the outer solution
      ``3^(1/4) eps^(1/2) G_omega`` gives ``eps = ||G||^2 (omega-1) / (4 pi^2)``;
      ``dI/domega = -||u||_2^2 / ||u||_6^2`` then gives
      ``S - I = sqrt(3) ||G||^4 (omega-1)^2 / (8 pi^2 sqrt(S))``.

    For ``d = 4`` the same expansion gives ``log eps = -c / omega + O(1)``
    with ``c = sqrt(2) H(0) ||U||_3^3 / (4 |S^3|)``; the prefactor is not
    determined at this order, so no law is returned.
    """
    bub = bubble_constants(d) if bub is None else bub
    S = bub.sobolev_S
    kind = law_kind(d)
    if d == 3:
        _need_green(d, green)
        g2 = green_L2_norm_sq(green)
        ce = g2 / (4.0 * math.pi ** 2)
        cg = math.sqrt(3.0) * g2 * g2 / (8.0 * math.pi ** 2 * math.sqrt(S))
        return (Law(d, kind, "eps", ce, lambda w, c: c * (w - 1.0)),
                Law(d, kind, "gap", cg, lambda w, c: c * (w - 1.0) ** 2))
    if d == 5:
        _need_green(d, green)
        B = bub.norm_L2_sq
        kq = bubble_peak(5) * green.H_at_zero * bub.norm_L73_d5
        ce = 2.0 * B / (3.0 * kq)
        cg = 4.0 * B ** 3 / (27.0 * kq * kq * S ** 1.5)
        return (Law(d, kind, "eps", ce, lambda w, c: _pow(w, c, 1.0)),
                Law(d, kind, "gap", cg, lambda w, c: _pow(w, c, 3.0)))
    if d == 6:
        cg = bub.norm_L2_sq / (12.0 * S * S)
        return (Law(d, kind, "eps", 1.0 / 6.0,
                    lambda w, c: np.sqrt(c * w / np.abs(np.log(w)))),
                Law(d, kind, "gap", cg,
                    lambda w, c: c * w * w / np.abs(np.log(w))))
    if d >= 7:
        A, B = bub.norm_xU_sq, bub.norm_L2_sq
        cg = S ** (-(d - 2.0) / 2.0) * B * B / (4.0 * A)
        return (Law(d, kind, "eps", B / (2.0 * A),
                    lambda w, c: np.sqrt(c * w)),
                Law(d, kind, "gap", cg, lambda w, c: _pow(w, c, 2.0)))
    raise DomainError("no closed leading law for d=4 (prefactor undetermined)")


def d4_log_rate(green: GreenData, bub: BubbleConstants | None = None) -> float:
    """``c`` in ``log eps_omega = -c / omega + O(1)`` for ``d = 4``."""
    _need_green(4, green)
    bub = bubble_constants(4) if bub is None else bub
    return math.sqrt(2.0) * green.H_at_zero * bub.norm_L3_cubed_d4 \
        / (4.0 * sphere_measure(4))


# -- extraction ------------------------------------------------------------------

def _critical(sol):
    if sol.params.mode != "critical":
        raise DomainError("needs a critical-mode solution")


def extract_eps(sol: ShotSolution) -> float:
    """Bubble scale from the peak: ``eps = (U_1(0) / u(0))^(2/(d-2))``."""
    _critical(sol)
    d = sol.params.d
    return (bubble_peak(d) / sol.b) ** (2.0 / (d - 2.0))


def fit_eps(sol: ShotSolution, core: float = 4.0) -> float:
    """Least-squares bubble scale over the core ``r <= core * eps_peak``.

    Minimizes ``int (u - U_eps)^2 r^(d-1) dr`` over the core with
    ``eps`` in ``[eps_peak / 3, 3 eps_peak]``.
    """
    _critical(sol)
    d = sol.params.d
    e0 = extract_eps(sol)
    r = sol.profile.r
    sel = r <= core * e0
    rc, uc = r[sel], sol.profile.values[sel]
    if rc.size < 8:
        raise DomainError("profile grid does not resolve the core")
    w = np.gradient(rc) * rc ** (d - 1.0)

    def cost(le):
        return float(np.sum(w * (uc - bubble_eval(d, math.exp(le), rc)) ** 2))

    res = minimize_scalar(cost, bounds=(math.log(e0 / 3.0), math.log(3.0 * e0)),
                          method="bounded", options={"xatol": 1e-12})
    return math.exp(res.x)


@dataclass(frozen=True)
class EnergyRoutes:
    """``I_omega`` by the critical norm and by the quadratic form."""

    via_norm: float
    via_form: float

    @property
    def mismatch(self) -> float:
        return abs(self.via_form / self.via_norm - 1.0)


def energy_routes(sol: ShotSolution) -> EnergyRoutes:
    """Both energy formulas.

    ``I = (int u^(2d/(d-2)))^(2/d)`` and
    ``I = (||u||_X^2 - omega ||u||_2^2)^(2/d)`` with
    ``||u||_X^2 = int (u'^2 + r^2 u^2)``. They agree for exact solutions.
    """
    _critical(sol)
    d, w = sol.params.d, sol.params.omega
    g = sol.profile.grid
    u = sol.profile.values
    du = sol.profile.deriv
    r = g.nodes
    crit = radial_integral(g, np.abs(u) ** (2.0 * d / (d - 2.0)))
    form = radial_integral(g, du * du + (r * r - w) * u * u)
    return EnergyRoutes(crit ** (2.0 / d), max(form, 0.0) ** (2.0 / d))


def energy_level(sol: ShotSolution) -> float:
    """``I_omega`` via the critical norm.

    Issues :class:`UnconvergedProfileWarning` when the quadratic-form route
    differs by more than 1e-4 relative.
    """
    e = energy_routes(sol)
    if not e.mismatch <= _ROUTE_TOL:
        warnings.warn(f"energy routes differ by {e.mismatch:.2e}",
                      UnconvergedProfileWarning, stacklevel=2)
    return e.via_norm


def remainder_norm(sol: ShotSolution, green: GreenData | None = None,
                   eps: float | None = None) -> float:
    """X-norm of ``u - P U_eps`` (``d <= 6``) or ``u - U_eps`` (``d >= 7``).

    ``(|S^{d-1}| int (w'^2 + r^2 w^2) r^(d-1) dr)^(1/2)`` with derivatives
    by second-order differences. ``green`` is accepted for symmetry with the
    laws and is not needed.
    """
    _critical(sol)
    d = sol.params.d
    eps = extract_eps(sol) if eps is None else eps
    g = sol.profile.grid
    r = g.nodes
    if d <= 6:
        ref = projected_bubble(d, eps, g).values
    else:
        ref = bubble_eval(d, eps, r)
    w = sol.profile.values - ref
    dw = np.gradient(w, r)
    return math.sqrt(radial_integral(g, dw * dw + r * r * w * w))


# -- fitting ---------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticFit:
    """Computed samples against a law.

    Attributes
    ----------
    d : int
    samples : tuple of (omega, eps, I, b)
        Ordered toward ``omega_*``.
    target_constant : float
        Constant of the law.
    fitted_constant : float
        ``target_constant`` times the ratio at the sample closest to
        ``omega_*``.
    relative_error : float
        ``|ratio - 1|`` there.
    law_kind : str
    quantity : str
    ratios : tuple of float
        Sample quantity over law prediction, in sample order.
    monotone : bool
        False flags a non-monotone ratio sequence (regime not asymptotic).
    """

    d: int
    samples: tuple
    target_constant: float
    fitted_constant: float
    relative_error: float
    law_kind: str
    quantity: str
    ratios: tuple
    monotone: bool


def fit_law(samples, law: Law) -> AsymptoticFit:
    """Ratios of sample quantity to ``law`` along samples approaching omega_*.

    Parameters
    ----------
    samples : sequence of (omega, eps, I, b)
        At least 4, ordered toward ``omega_*``, with ``omega - omega_*``
        spanning a factor 4 or more.
    law : Law
    """
    samples = tuple(tuple(float(x) for x in s) for s in samples)
    if len(samples) < 4:
        raise DomainError("need at least 4 samples")
    ws = omega_star(law.d)
    dist = np.array([s[0] - ws for s in samples])
    if np.any(dist <= 0.0) or np.any(np.diff(dist) >= 0.0):
        raise DomainError("samples must approach omega_* strictly")
    if dist[0] / dist[-1] < 4.0:
        raise DomainError("samples must span a factor 4 toward omega_*")
    S = bubble_constants(law.d).sobolev_S
    vals = np.array([s[1] if law.quantity == "eps" else S - s[2]
                     for s in samples])
    ratios = vals / np.array([law(s[0]) for s in samples])
    steps = np.diff(ratios)
    monotone = bool(np.all(steps > 0.0) or np.all(steps < 0.0))
    last = float(ratios[-1])
    return AsymptoticFit(law.d, samples, law.constant, law.constant * last,
                         abs(last - 1.0), law.kind, law.quantity,
                         tuple(float(x) for x in ratios), monotone)


def collect_samples(d: int, omegas, n: int = 4000):
    """Ground states and ``(omega, eps, I, b)`` samples at each omega.

    Returns
    -------
    samples : list of tuple
    solutions : list of ShotSolution
    """
    sols = [find_ground_state(d, float(w), n=n) for w in omegas]
    samples = [(s.params.omega, extract_eps(s), energy_level(s), s.b)
               for s in sols]
    return samples, sols
