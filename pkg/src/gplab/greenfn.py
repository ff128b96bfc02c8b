"""Green function of ``-Delta + r^2 - omega_*`` and the projected bubble.

G is assembled from two pieces joined at a matching radius ``r_m``:

* outside, ``G = c g`` with ``g`` the decaying solution, integrated inward
  from a two-term Gaussian asymptote;
* inside, ``G = r^(2-d) - H`` with ``H = H_p + lam phi``, where ``H_p`` is
  the particular solution of the regular-part equation with ``H_p(0) = 0``
  (plus ``-log(r)/4`` in d=6) and ``phi`` the regular homogeneous solution.

Value and slope matching fixes ``c`` and ``lam``. This normalizes
``r^(d-2) G -> 1`` without ever subtracting two large numbers near r=0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .bubble import bubble_eval, bubble_peak
from .errors import DomainError, NormalizationError
from .numkernel.grid import RadialGrid, RadialProfile
from .numkernel.linalg import TridiagonalOperator, solve_tridiagonal
from .numkernel.quadrature import radial_integral

_RTOL = 1e-12
_R_START = 1e-6  # series start of the inner solutions
_N_FIT = 5  # smallest nodes used for the H(0) and log-coefficient fits


def omega_star(d: int) -> float:
    """Existence threshold: 1 for d=3 and 0 for d >= 4."""
    return 1.0 if d == 3 else 0.0


def _ivp(rhs, r0, y0, r_eval, atol):
    """Integrate ``y' = rhs(r, y)`` from ``r0`` and sample at ``r_eval``.

    ``r_eval`` must be monotone away from ``r0``.
    """
    r_eval = np.asarray(r_eval, dtype=float)
    if r_eval.size == 0:
        return np.empty((len(y0), 0))
    sol = solve_ivp(rhs, (r0, float(r_eval[-1])), y0, method="DOP853",
                    t_eval=r_eval, rtol=_RTOL, atol=atol)
    if not sol.success:
        raise NormalizationError(f"linear radial solve failed: {sol.message}")
    return sol.y


def decaying_solution(d: int, omega: float, r_eval, r_far: float | None = None):
    """Solution of ``u'' + (d-1)/r u' + (omega - r^2) u = 0`` decaying at infinity.

    Normalized so that ``u ~ r^k exp(-r^2/2)`` with ``k = (omega - d)/2``.
    Integration runs inward in ``w = u exp(r^2/2)``, which satisfies
    ``w'' + ((d-1)/r - 2r) w' + (omega - d) w = 0``; the unwanted solution
    decays inward, so the start error dies out.

    Parameters
    ----------
    r_eval : array_like
        Increasing radii.
    r_far : float, optional
        Start radius, at least ``max(r_eval)``. Defaults to ``max(r_eval, 12)``.

    Returns
    -------
    u, du : ndarray
    """
    r_eval = np.asarray(r_eval, dtype=float)
    R = max(float(r_eval[-1]), 12.0) if r_far is None else float(r_far)
    k = 0.5 * (omega - d)
    a1 = -k * (k + d - 2.0) / 4.0
    w0 = R ** k * (1.0 + a1 / R ** 2)
    dw0 = k * R ** (k - 1.0) + a1 * (k - 2.0) * R ** (k - 3.0)
    dm1 = d - 1.0
    om = omega - d

    def rhs(r, y):
        return [y[1], -(dm1 / r - 2.0 * r) * y[1] - om * y[0]]

    # reversed evaluation order, R itself may coincide with the last node
    rev = r_eval[::-1]
    inner = rev < R
    y = np.empty((2, rev.size))
    y[:, ~inner] = np.array([[w0], [dw0]])
    scale = abs(w0) + abs(dw0)
    y[:, inner] = _ivp(rhs, R, [w0, dw0], rev[inner], 1e-300 + 1e-30 * scale)
    w, dw = y[0][::-1], y[1][::-1]
    gauss = np.exp(-0.5 * r_eval ** 2)
    return gauss * w, gauss * (dw - r_eval * w)


def _regular_solution(d, omega, r_eval):
    """Solution of the homogeneous equation with ``phi(0) = 1``."""
    r0 = min(_R_START, float(r_eval[0]))
    y0 = [1.0 - omega * r0 ** 2 / (2.0 * d), -omega * r0 / d]
    dm1 = d - 1.0

    def rhs(r, y):
        return [y[1], -dm1 / r * y[1] + (r * r - omega) * y[0]]

    return _ivp(rhs, r0, y0, r_eval, 1e-16)


def _particular_regular_part(d, omega, r_eval):
    """Particular solution of the regular-part equation, zero at the origin.

    Solves ``-Delta H + (r^2 - omega) H = (r^2 - omega) r^(2-d)`` for d=3,4,5.
    For d=6 returns ``-log(r)/4 + Hhat`` where ``Hhat(0) = 0`` solves
    ``-Delta Hhat + r^2 Hhat = r^2 log(r) / 4``.
    """
    r0 = min(_R_START, float(r_eval[0]))
    dm1 = d - 1.0
    if d == 6:
        y0 = [0.0, 0.0]

        def src(r):
            return 0.25 * r * r * math.log(r)
    else:
        # leading terms of the series
        y0 = {3: [r0 / 2.0 - r0 ** 3 / 8.0, 0.5 - 3.0 * r0 ** 2 / 8.0],
              4: [-r0 ** 2 / 8.0, -r0 / 4.0],
              5: [-r0 / 4.0, -0.25]}[d]

        def src(r):
            return (r * r - omega) * r ** (2.0 - d)

    def rhs(r, y):
        return [y[1], -dm1 / r * y[1] + (r * r - omega) * y[0] - src(r)]

    h, dh = _ivp(rhs, r0, y0, r_eval, 1e-16)
    if d == 6:
        r_eval = np.asarray(r_eval)
        h = h - 0.25 * np.log(r_eval)
        dh = dh - 0.25 / r_eval
    return h, dh


@dataclass(frozen=True, eq=False)
class GreenData:
    """Green function, regular part and derived constants.

    Attributes
    ----------
    d : int
    omega_star : float
    G, H : RadialProfile
    H_at_zero : float
        Five-node linear fit of H at the origin; NaN for d=6.
    G_L2_sq : float
        ``||G||_2^2`` for d=3, NaN otherwise.
    log_coeff_d6 : float
        Fitted coefficient of ``log r`` in H for d=6, NaN otherwise.
    matched_H0 : float
        Regular-part constant from the matching solve.
    decay_sigma : float
        Fitted ``sigma`` in ``log G <= -sigma r^2 + C`` over the outer half.
    scale : float
        Matching constant ``c`` in ``G = c g`` on the outer region.
    r_match : float
    """

    d: int
    omega_star: float
    G: RadialProfile
    H: RadialProfile
    H_at_zero: float
    G_L2_sq: float
    log_coeff_d6: float
    matched_H0: float
    decay_sigma: float
    scale: float
    r_match: float


def solve_green(d: int, grid: RadialGrid, r_match: float = 1.0) -> GreenData:
    """Green function G and regular part H of ``-Delta + r^2 - omega_*``.

    Parameters
    ----------
    d : int
        3 <= d <= 6.
    grid : RadialGrid
        ``r_min <= 1e-4`` and ``r_max > r_match``.
    r_match : float
        Radius where the inner and outer solutions are joined.

    Raises
    ------
    NormalizationError
        If the matching system is singular or ``r^(d-2) G`` fails to plateau
        at 1 near ``r_min``.
    """
    if d not in (3, 4, 5, 6):
        raise DomainError("Green function is defined here for 3 <= d <= 6")
    if grid.r_min > 1e-4:
        raise DomainError("r_min must be <= 1e-4 to resolve r^(2-d)")
    if not grid.r_min < r_match < grid.r_max:
        raise DomainError("r_match must lie inside the grid")
    grid = grid.with_dimension(d)
    ws = omega_star(d)
    r = grid.nodes
    r_in = np.concatenate([r[r < r_match], [r_match]])
    hp, dhp = _particular_regular_part(d, ws, r_in)
    phi, dphi = _regular_solution(d, ws, r_in)
    r_out = np.concatenate([[r_match], r[r >= r_match]])
    g, dg = decaying_solution(d, ws, r_out)

    sing = r_match ** (2.0 - d)
    dsing = (2.0 - d) * r_match ** (1.0 - d)
    m = np.array([[phi[-1], g[0]], [dphi[-1], dg[0]]])
    rhs = np.array([sing - hp[-1], dsing - dhp[-1]])
    try:
        lam, c = np.linalg.solve(m, rhs)
    except np.linalg.LinAlgError as exc:
        raise NormalizationError("matching system is singular") from exc

    H_in = hp[:-1] + lam * phi[:-1]
    dH_in = dhp[:-1] + lam * dphi[:-1]
    G_out, dG_out = c * g[1:], c * dg[1:]
    r_i, r_o = r_in[:-1], r_out[1:]
    G = np.concatenate([r_i ** (2.0 - d) - H_in, G_out])
    dG = np.concatenate([(2.0 - d) * r_i ** (1.0 - d) - dH_in, dG_out])
    H = np.concatenate([H_in, r_o ** (2.0 - d) - G_out])
    dH = np.concatenate([dH_in, (2.0 - d) * r_o ** (1.0 - d) - dG_out])

    plateau = G[:_N_FIT] * r[:_N_FIT] ** (d - 2.0)
    if not np.all(np.abs(plateau - 1.0) < 1e-3):
        raise NormalizationError("r^(d-2) G does not plateau at 1")

    Gp = RadialProfile(grid, G, f"G_d{d}", dG)
    Hp = RadialProfile(grid, H, f"H_d{d}", dH)
    h0 = log_coeff = float("nan")
    rs, hs = r[:_N_FIT], H[:_N_FIT]
    if d == 6:
        log_coeff = float(np.polyfit(np.log(rs), hs, 1)[0])
    else:
        h0 = float(np.polyfit(rs, hs, 1)[1])
    l2 = _green_l2(Gp) if d == 3 else float("nan")
    return GreenData(d, ws, Gp, Hp, h0, l2, log_coeff, float(lam),
                     _decay_sigma(Gp), float(c), float(r_match))


def _decay_sigma(G: RadialProfile) -> float:
    """Least-squares slope of ``-log G`` against ``r^2`` on the outer half."""
    r, v = G.r, G.values
    sel = (r >= 0.5 * r[-1]) & (v > 0.0)
    if np.count_nonzero(sel) < 2:
        return float("nan")
    return float(-np.polyfit(r[sel] ** 2, np.log(v[sel]), 1)[0])


def _green_l2(G: RadialProfile) -> float:
    # r^2 G^2 -> 1 at the origin in d=3; add the analytic core on [0, r_min]
    r0 = G.r[0]
    core = 4.0 * math.pi * r0 * (r0 * G.values[0]) ** 2
    return radial_integral(G.grid, G.values ** 2) + core


def green_L2_norm_sq(data: GreenData) -> float:
    """``4 pi int G^2 r^2 dr`` in three dimensions."""
    if data.d != 3:
        raise DomainError("||G||_2^2 is used only for d=3")
    return _green_l2(data.G)


def projected_bubble(d: int, eps: float, grid: RadialGrid) -> RadialProfile:
    """Solution of ``-Delta u + (r^2 - omega_*) u = U_eps^((d+2)/(d-2))``.

    Second-order differences in ``t = log r`` applied to ``chi = r^k u``,
    ``k = (d-2)/2``, which turns the radial operator into
    ``-chi_tt + (k^2 + r^2 (r^2 - omega_*)) chi``. The inner boundary
    follows ``chi ~ r^k`` (``u' = 0``); ``chi`` vanishes past ``r_max``.

    Raises
    ------
    SingularMatrixError
        If the discrete system cannot be solved to residual 1e-10.
    """
    if d not in (3, 4, 5, 6):
        raise DomainError("projected bubble is defined here for 3 <= d <= 6")
    if not 0.0 < eps <= 0.5:
        raise DomainError("need 0 < eps <= 0.5")
    if grid.kind != "log":
        raise DomainError("projected bubble needs a log-uniform grid")
    grid = grid.with_dimension(d)
    r = grid.nodes
    k = 0.5 * (d - 2.0)
    h = np.log(r[1] / r[0])
    ws = omega_star(d)
    # fitted k^2 makes the scheme exact on r^k and r^-k
    k2 = (2.0 * math.cosh(k * h) - 2.0) / (h * h)
    c = k2 + r * r * (r * r - ws)
    diag = 2.0 / (h * h) + c
    off = np.full(r.size - 1, -1.0 / (h * h))
    f = r ** (k + 2.0) * bubble_eval(d, eps, r) ** ((d + 2.0) / (d - 2.0))
    # ghost node chi_{-1} = exp(-k h) chi_0
    diag[0] -= math.exp(-k * h) / (h * h)
    chi = solve_tridiagonal(TridiagonalOperator(diag, off, grid), f)
    return RadialProfile(grid, chi * r ** (-k), f"PU_d{d}_eps{eps:g}")


def bubble_defect_scale(d: int, eps: float) -> float:
    """``eps^((d-2)/2) [d(d-2)]^((d-2)/4)``, the size of ``U_eps - PU_eps``."""
    return eps ** (0.5 * (d - 2.0)) * bubble_peak(d)
