"""Radial shooting for the stationary equation.

    u'' + (d-1)/r u' + (omega - r^2) u + |u|^(p-2) u = 0

Critical mode uses ``p = 2d/(d-2)`` and bisects on ``b = u(0)`` at fixed
omega. Supercritical mode uses ``p = 4`` and bisects on omega, either at
fixed ``b`` or from the singular start ``sqrt(d-3)/r``.

A shot ends at the first event: a sign change, or growth (the profile turns
up while positive, or exceeds ``10 b``). Bisection brackets the decaying
solution between the two event classes. The assembled profile averages the
final pair of shots where they agree and continues with the decaying
solution of the linear equation beyond.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (DomainError, ExpansionError, IntegrationError, NoBracket,
                     NoSolution)
from .greenfn import decaying_solution, omega_star
from .numkernel._backend import kernels
from .numkernel.grid import RadialGrid, RadialProfile, param_derivatives

EVENT_NAMES = {0: "end", 1: "sign_change", 2: "blowup", 3: "turn_up",
               -1: "step_underflow", -2: "max_steps"}
CROSS, GROW, END = "cross", "grow", "end"

_RTOL = 1e-13
_ATOL_REL = 1e-30  # absolute floor relative to the start amplitude
_AGREE = 1e-8  # relative agreement of the bracketing shots
_MAX_BISECT = 200
_BLOWUP_FACTOR = 10.0


@dataclass(frozen=True)
class ProblemParams:
    """Dimension, exponent and frequency of the stationary equation."""

    d: int
    p: float
    omega: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 3:
            raise DomainError("d must be an integer >= 3")
        if not self.p > 2.0:
            raise DomainError("p must exceed 2")
        if self.mode is None:
            raise DomainError(
                f"p={self.p} is neither critical 2d/(d-2) nor supercritical "
                "p=4 with d >= 5")

    @classmethod
    def critical(cls, d: int, omega: float) -> "ProblemParams":
        return cls(d, 2.0 * d / (d - 2.0), omega)

    @classmethod
    def supercritical(cls, d: int, omega: float) -> "ProblemParams":
        return cls(d, 4.0, omega)

    @property
    def mode(self):
        if abs(self.p - 2.0 * self.d / (self.d - 2.0)) < 1e-14:
            return "critical"
        if self.p == 4.0 and self.d >= 5:
            return "supercritical"
        return None


@dataclass(frozen=True)
class ShotResult:
    """Outcome of a single shot sampled on grid nodes.

    Only the first ``n_done`` nodes were reached before the event.
    """

    grid: RadialGrid
    u: np.ndarray
    v: np.ndarray
    n_done: int
    event: int
    r_event: float
    steps: int

    @property
    def event_name(self) -> str:
        return EVENT_NAMES[self.event]

    @property
    def outcome(self) -> str:
        return _classify(self.event)

    @property
    def profile(self) -> RadialProfile:
        if self.n_done < self.grid.n:
            raise DomainError(
                f"shot stopped at r={self.r_event:.6g} ({self.event_name})")
        return RadialProfile(self.grid, self.u, "ivp", self.v)


@dataclass(frozen=True, eq=False)
class ShotSolution:
    """A certified positive decaying solution.

    Attributes
    ----------
    params : ProblemParams
    b : float
        ``u(0)``.
    profile : RadialProfile
    ode_residual : float
        Max interior residual of the ODE relative to the largest term.
    decay_certified : bool
    r_cut : float
        Radius up to which the bracketing shots agree.
    bracket : tuple of float
        Final bisection interval (on b or omega).
    """

    params: ProblemParams
    b: float
    profile: RadialProfile
    ode_residual: float
    decay_certified: bool
    r_cut: float
    bracket: tuple = field(default=())


@dataclass(frozen=True, eq=False)
class SingularSolution:
    """Singular solution ``u ~ sqrt(d-3)/r`` and its frequency.

    Attributes
    ----------
    d : int
    omega_inf : float
    profile : RadialProfile
        On ``[r0, r_max]``.
    inner_constant : float
        ``sqrt(d-3)``.
    r0 : float
        Start radius of the expansion.
    bracket : tuple of float
        Final bisection interval on omega.
    ode_residual : float
    decay_certified : bool
    """

    d: int
    omega_inf: float
    profile: RadialProfile
    inner_constant: float
    r0: float
    bracket: tuple
    ode_residual: float
    decay_certified: bool

    def sample(self, r) -> np.ndarray:
        """Values at arbitrary increasing radii.

        Uses the three-term expansion below ``r0`` and re-integration at
        the bracketing frequencies above it.
        """
        r = np.asarray(r, dtype=float)
        u, *_ = _assemble(self.d, 4.0, self.bracket,
                               lambda w: _singular_start(self.d, w, self.r0),
                               lambda w: w, r, 1.0)
        return u


# -- starts -----------------------------------------------------------------

@dataclass(frozen=True)
class _Start:
    r_s: float
    u_s: float
    v_s: float
    coeffs: tuple  # series (A, B, C) in powers (-1, 1, 3) or (0, 2, 4)
    powers: tuple
    scale: float

    def series(self, r):
        r = np.asarray(r, dtype=float)
        u = sum(c * r ** k for c, k in zip(self.coeffs, self.powers))
        v = sum(c * k * r ** (k - 1) for c, k in zip(self.coeffs, self.powers))
        return u, v


def _regular_start(d, p, omega, b):
    fb = b ** (p - 1.0)
    dfb = (p - 1.0) * b ** (p - 2.0)
    a2 = -(omega * b + fb) / (2.0 * d)
    a4 = (b - omega * a2 - dfb * a2) / (4.0 * (d + 2.0))
    r_s = min(1e-6, 1e-3 * b ** (-(p - 2.0) / 2.0))
    st = _Start(r_s, 0.0, 0.0, (b, a2, a4), (0, 2, 4), b)
    u, v = st.series(r_s)
    return _Start(r_s, float(u), float(v), st.coeffs, st.powers, b)


def singular_coefficients(d: int, omega: float) -> tuple:
    """``(A, B, C)`` of ``u = A/r + B r + C r^3 + ...`` near the origin."""
    A = math.sqrt(d - 3.0)
    B = -omega * A / (4.0 * d - 10.0)
    C = (A - omega * B - 3.0 * A * B * B) / (6.0 * (d - 1.0))
    return A, B, C


def _singular_start(d, omega, r0):
    A, B, C = singular_coefficients(d, omega)
    st = _Start(r0, 0.0, 0.0, (A, B, C), (-1, 1, 3), A / r0)
    u, v = st.series(r0)
    if r0 * u > A:
        raise ExpansionError(
            f"r u(r0) = {r0 * u:.6g} exceeds sqrt(d-3) = {A:.6g}")
    return _Start(r0, float(u), float(v), st.coeffs, st.powers, A / r0)


# -- single shots -------------------------------------------------------------

def _classify(event):
    if event == kernels.EVENT_SIGN:
        return CROSS
    if event in (kernels.EVENT_BLOWUP, kernels.EVENT_TURN):
        return GROW
    if event == kernels.EVENT_END:
        return END
    raise IntegrationError(f"integration failed ({EVENT_NAMES[event]})")


def _shoot(d, p, omega, start, r_nodes, rtol=_RTOL, stop_on_turn=True):
    """Integrate from ``start`` onto ``r_nodes``; nodes inside use the series."""
    r_nodes = np.asarray(r_nodes, dtype=float)
    inner = r_nodes <= start.r_s
    k0 = int(np.count_nonzero(inner))
    u = np.empty(r_nodes.size)
    v = np.empty(r_nodes.size)
    u[:k0], v[:k0] = start.series(r_nodes[:k0])
    atol = _ATOL_REL * start.scale
    uo, vo, n_done, event, r_event, steps = kernels.integrate_radial(
        float(d), float(p), float(omega), 1.0, start.r_s, start.u_s,
        start.v_s, r_nodes[k0:], rtol, atol, atol * 1e3,
        _BLOWUP_FACTOR * start.scale, stop_on_turn)
    n_done = int(n_done)
    u[k0:k0 + n_done] = uo[:n_done]
    v[k0:k0 + n_done] = vo[:n_done]
    if event in (kernels.EVENT_STIFF, kernels.EVENT_MAXSTEPS):
        raise IntegrationError(
            f"integration failed ({EVENT_NAMES[event]}) at r={r_event:.6g}",
            r_event)
    return u, v, k0 + n_done, int(event), float(r_event), int(steps)


def integrate_ivp(params: ProblemParams, b: float, grid: RadialGrid,
                  rtol: float = _RTOL, stop_on_turn: bool = True) -> ShotResult:
    """Shoot from ``u(0) = b`` with a four-term series start.

    The start radius is ``min(1e-6, 1e-3 b^(-(p-2)/2))``. Stops at the first
    sign change, at growth past ``10 b`` (or an upturn while positive when
    ``stop_on_turn``), or at ``r_max``.

    Raises
    ------
    IntegrationError
        On step-size underflow, with the radius attached.
    """
    if not b > 0.0:
        raise DomainError("b must be positive")
    start = _regular_start(params.d, params.p, params.omega, b)
    u, v, n, ev, re, steps = _shoot(params.d, params.p, params.omega, start,
                                    grid.nodes, rtol, stop_on_turn)
    return ShotResult(grid, u[:n], v[:n], n, ev, re, steps)


def integrate_linear(d: int, omega: float, b: float, grid: RadialGrid,
                     rtol: float = _RTOL) -> ShotResult:
    """Shoot the linear equation (nonlinearity off) from ``u(0) = b``."""
    r_s = 1e-6
    a2 = -omega * b / (2.0 * d)
    a4 = (b - omega * a2) / (4.0 * (d + 2.0))
    st = _Start(r_s, 0.0, 0.0, (b, a2, a4), (0, 2, 4), b)
    u0, v0 = st.series(r_s)
    st = _Start(r_s, float(u0), float(v0), st.coeffs, st.powers, b)
    r_nodes = grid.nodes
    inner = r_nodes <= r_s
    k0 = int(np.count_nonzero(inner))
    u = np.empty(r_nodes.size)
    v = np.empty(r_nodes.size)
    u[:k0], v[:k0] = st.series(r_nodes[:k0])
    atol = _ATOL_REL * b
    uo, vo, n_done, event, r_event, steps = kernels.integrate_radial(
        float(d), 2.5, float(omega), 0.0, r_s, st.u_s, st.v_s,
        r_nodes[k0:], rtol, atol, atol, math.inf, False)
    n = k0 + int(n_done)
    u[k0:n], v[k0:n] = uo[:n_done], vo[:n_done]
    return ShotResult(grid, u[:n], v[:n], n, int(event), float(r_event),
                      int(steps))


# -- bisection ----------------------------------------------------------------

def _outcome(d, p, omega, start, r_max):
    nodes = np.array([r_max])
    *_, event, _, _ = _shoot(d, p, omega, start, nodes)
    return _classify(event)


def _bisect(outcome, lo, hi, out_lo, geometric):
    """Shrink ``[lo, hi]`` until adjacent floats; ``out_lo`` is lo's class."""
    for _ in range(_MAX_BISECT):
        if geometric and hi / lo > 1.0 + 1e-3:
            mid = math.sqrt(lo * hi)
        else:
            mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        o = outcome(mid)
        if o == END:
            return mid, mid
        if o == out_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _scan(outcome, values):
    """First adjacent pair of scan values with different outcomes."""
    seen = []
    prev = None
    for x in values:
        o = outcome(x)
        seen.append((float(x), o))
        if o == END:
            return (x, x), o, seen
        if prev is not None and o != prev[1]:
            return (prev[0], x), prev[1], seen
        prev = (x, o)
    return None, None, seen


def default_r_max(omega: float) -> float:
    """``sqrt(omega) + 10``, well past the classical turning point."""
    return math.sqrt(max(omega, 0.0)) + 10.0


# -- profile assembly -----------------------------------------------------------

def _assemble(d, p, bracket, start_of, omega_of, r_nodes, agree):
    """Average the bracketing shots and continue with the decaying tail.

    Returns ``(u, v, j_cut, omega, join)`` where nodes ``< j_cut`` come
    from the shots and the rest from the linear decaying solution. ``join``
    is the relative derivative mismatch where the two pieces meet.
    """
    lo, hi = bracket
    omega = 0.5 * (omega_of(lo) + omega_of(hi))
    s_lo, s_hi = start_of(lo), start_of(hi)
    u1, v1, n1, *_ = _shoot(d, p, omega_of(lo), s_lo, r_nodes)
    u2, v2, n2, *_ = _shoot(d, p, omega_of(hi), s_hi, r_nodes)
    m = min(n1, n2)
    ua = 0.5 * (u1[:m] + u2[:m])
    va = 0.5 * (v1[:m] + v2[:m])
    ok = np.abs(u1[:m] - u2[:m]) <= agree * np.abs(ua)
    ok &= ua > 0.0
    bad = np.flatnonzero(~ok)
    j = int(bad[0]) if bad.size else m
    if j < 2:
        raise NoSolution("bracketing shots disagree at the first node")
    u = np.empty(r_nodes.size)
    v = np.empty(r_nodes.size)
    u[:j], v[:j] = ua[:j], va[:j]
    join = 0.0
    if j < r_nodes.size:
        # continue from the last trusted node with the decaying solution
        tail_r = r_nodes[j - 1:]
        g, dg = decaying_solution(d, omega, tail_r)
        c = u[j - 1] / g[0]
        u[j:], v[j:] = c * g[1:], c * dg[1:]
        join = abs(v[j - 1] / (c * dg[0]) - 1.0)
    return u, v, j, omega, join


def ode_residual(profile: RadialProfile, params: ProblemParams) -> float:
    """Max interior residual of the ODE relative to its largest term.

    The equation is multiplied by ``(dr/ds)^2`` so that it is evaluated in
    the grid parameter ``s``; near the origin of a log grid this is the
    ``r^2``-weighted form, which keeps roundoff in the differences bounded.
    """
    g = profile.grid
    r, u = g.nodes, profile.values
    j1, j2 = g.dr_ds, g.d2r_ds2
    du, d2u = param_derivatives(g, u)
    us = du * j1
    uss = d2u * j1 * j1 + j2 * du
    k1 = j1 * (params.d - 1.0) / r - j2 / j1
    terms = np.abs(np.vstack([uss, k1 * us, j1 * j1 * (params.omega - r * r) * u,
                              j1 * j1 * np.abs(u) ** (params.p - 1.0)]))
    res = (uss + k1 * us + j1 * j1 * ((params.omega - r * r) * u
                                      + np.abs(u) ** (params.p - 2.0) * u))
    sel = np.isfinite(res)
    return float(np.max(np.abs(res[sel])) / np.max(terms[:, sel]))


def _certify(r, u, omega, d, j_cut, join):
    """Decay check against ``r^((omega-d)/2) exp(-r^2/2)``.

    The shot and the linear tail must meet with slopes agreeing to 1e-3,
    and the ratio to the envelope must stay within a factor 2 band from
    past the turning point to r_max.
    """
    if join > 1e-3:
        return False
    turn = math.sqrt(max(omega, 0.0)) + 1.0
    r_cut = r[j_cut - 1]
    sel = r >= max(turn, r_cut - 1.0)
    env = r[sel] ** (0.5 * (omega - d)) * np.exp(-0.5 * r[sel] ** 2)
    ratio = u[sel] / env
    if np.any(ratio <= 0.0):
        return False
    return bool(ratio.max() / ratio.min() <= 2.0)


def _default_grid(d, r_min, r_max, n):
    return RadialGrid.log(r_min, r_max, n, d)


def _refine(d, p, bracket, start_of, omega_of, r_nodes):
    """Re-establish the bracket with shots onto the profile nodes.

    The integrator's step sequence depends on the output nodes, so at
    adjacent-float resolution the class found with a single end node can
    differ from the class on the profile grid. The bracket is widened until
    its ends separate on ``r_nodes`` and bisected again there.
    """
    def outcome(x):
        return _classify(_shoot(d, p, omega_of(x), start_of(x), r_nodes)[3])

    lo, hi = bracket
    w = max(hi - lo, 4.0 * np.spacing(abs(hi)))
    for _ in range(40):
        o_lo, o_hi = outcome(lo), outcome(hi)
        if END in (o_lo, o_hi):
            x = lo if o_lo == END else hi
            return x, x
        if o_lo != o_hi:
            return _bisect(outcome, lo, hi, o_lo, False)
        lo, hi, w = lo - w, hi + w, 2.0 * w
    return bracket


def _solution(params, b, start_of, omega_of, bracket, grid, on_b=False):
    bracket = _refine(params.d, params.p, bracket, start_of, omega_of,
                      grid.nodes)
    if on_b:
        b = 0.5 * (bracket[0] + bracket[1])
    u, v, j, omega, join = _assemble(params.d, params.p, bracket, start_of,
                                     omega_of, grid.nodes, _AGREE)
    params = ProblemParams(params.d, params.p, omega)
    prof = RadialProfile(grid, u, f"u_d{params.d}", v)
    res = ode_residual(prof, params)
    decreasing = bool(np.all(v[1:] < 0.0) and np.all(np.diff(u) <= 0.0))
    cert = _certify(grid.nodes, u, omega, params.d, j, join) and decreasing
    return ShotSolution(params, b, prof, res, cert, float(grid.nodes[j - 1]),
                        tuple(float(x) for x in bracket))


# -- public drivers --------------------------------------------------------------

def resolvable_b_max(d: int) -> float:
    """Largest ``b`` whose shot outcome is decided by the physics.

    An error ``delta ~ 1e-13`` in the bubble core of width ``eps`` leaves a
    spurious regular component of relative size ``delta / eps^(d-2)`` at
    ``r ~ 1``. Keeping that below 1e-3 means ``eps >= 1e-10^(1/(d-2))``,
    that is ``b <= 1e5 U_1(0)``.
    """
    return 1e5 * (d * (d - 2.0)) ** ((d - 2.0) / 4.0)


def find_ground_state(d: int, omega: float, grid: RadialGrid | None = None,
                      n: int = 4000, b_range=None) -> ShotSolution:
    """Positive decaying ground state of the critical problem at ``omega``.

    Scans ``b`` geometrically (factor 2) from 1e-3 to
    :func:`resolvable_b_max` for the change from growth to a sign change,
    then bisects. For ``omega`` outside ``(omega_*, d)`` the scan never
    separates and :class:`NoSolution` is raised.
    """
    if b_range is None:
        b_range = (1e-3, resolvable_b_max(d))
    params = ProblemParams.critical(d, omega)
    ws = omega_star(d)
    if omega >= d:
        reason = "no positive solutions for omega >= d (first eigenvalue)"
    elif omega <= 0.0:
        reason = "no positive solutions for omega <= 0 (Pohozaev identity)"
    elif omega <= ws:
        reason = f"no positive solutions for omega <= {ws:g} in d={d}"
    else:
        reason = None
    r_max = default_r_max(omega) if grid is None else grid.r_max
    p = params.p

    def outcome(b):
        return _outcome(d, p, omega, _regular_start(d, p, omega, b), r_max)

    bs = np.geomspace(b_range[0], b_range[1],
                      int(round(math.log2(b_range[1] / b_range[0]))) + 1)
    br, o_lo, seen = _scan(outcome, bs)
    if br is None:
        raise NoSolution(reason or "event types never separate in b "
                         f"(all {seen[0][1]}) on [{bs[0]:g}, {bs[-1]:g}]")
    if reason is not None:
        # at the threshold itself the scan can separate at the b cap, where
        # shots no longer resolve the bubble core
        raise NoSolution(f"{reason}; event change near b={br[1]:.3g} is "
                         "a resolution artifact")
    lo, hi = _bisect(outcome, br[0], br[1], o_lo, True)
    b = 0.5 * (lo + hi)
    if grid is None:
        r_min = 1e-7 * b ** (-(p - 2.0) / 2.0)
        grid = _default_grid(d, r_min, r_max, n)
    return _solution(params, b, lambda x: _regular_start(d, p, omega, x),
                     lambda x: omega, (lo, hi), grid, on_b=True)


def _omega_scan(d, n_scan):
    """Uniform points in ``(d-4, d)`` plus geometric clusters at both ends."""
    uni = d - 4.0 + 4.0 * np.arange(1, n_scan) / n_scan
    delta = 4.0 / n_scan * 2.0 ** -np.arange(1, 31)
    return np.unique(np.concatenate([uni, d - 4.0 + delta, d - delta]))


def find_omega_b(d: int, b: float, grid: RadialGrid | None = None,
                 n: int = 4000, n_scan: int = 40,
                 r_max: float | None = None) -> ShotSolution:
    """Frequency ``omega_b`` in ``(d-4, d)`` of the decaying solution with ``u(0) = b``.

    Raises
    ------
    NoBracket
        If the event types do not separate on the scan of ``(d-4, d)``.
    """
    if d < 5:
        raise DomainError("supercritical family needs d >= 5")
    if not b > 0.0:
        raise DomainError("b must be positive")
    r_max = (default_r_max(d) if grid is None else grid.r_max) \
        if r_max is None else r_max

    def outcome(w):
        return _outcome(d, 4.0, w, _regular_start(d, 4.0, w, b), r_max)

    br, o_lo, seen = _scan(outcome, _omega_scan(d, n_scan))
    if br is None:
        raise NoBracket(f"no event change on (d-4, d) for d={d}, b={b:g}",
                        seen)
    lo, hi = _bisect(outcome, br[0], br[1], o_lo, False)
    if grid is None:
        grid = _default_grid(d, 1e-7 / b, r_max, n)
    return _solution(ProblemParams.supercritical(d, 0.5 * (lo + hi)), b,
                     lambda w: _regular_start(d, 4.0, w, b), lambda w: w,
                     (lo, hi), grid)


def find_singular(d: int, r0: float = 1e-3, grid: RadialGrid | None = None,
                  n: int = 4000, n_scan: int = 40,
                  r_max: float | None = None) -> SingularSolution:
    """Singular solution and ``omega_inf`` by bisection on omega.

    Starts at ``r0`` from ``sqrt(d-3)/r - omega sqrt(d-3) r/(4d-10) + C r^3``.

    Raises
    ------
    NoBracket
        If the event types do not separate on ``(d-4, d)``.
    ExpansionError
        If the start violates ``r0 u(r0) <= sqrt(d-3)``.
    """
    if d < 5:
        raise DomainError("singular solution needs d >= 5")
    if not 1e-4 <= r0 <= 1e-2:
        raise DomainError("r0 must lie in [1e-4, 1e-2]")
    r_max = (default_r_max(d) if grid is None else grid.r_max) \
        if r_max is None else r_max

    def outcome(w):
        return _outcome(d, 4.0, w, _singular_start(d, w, r0), r_max)

    br, o_lo, seen = _scan(outcome, _omega_scan(d, n_scan))
    if br is None:
        raise NoBracket(f"no event change on (d-4, d) for the singular "
                        f"start, d={d}", seen)
    lo, hi = _bisect(outcome, br[0], br[1], o_lo, False)
    if grid is None:
        grid = _default_grid(d, r0, r_max, n)
    if grid.r_min < r0:
        raise DomainError("profile grid must start at or beyond r0")
    params = ProblemParams.supercritical(d, 0.5 * (lo + hi))
    sol = _solution(params, math.inf, lambda w: _singular_start(d, w, r0),
                    lambda w: w, (lo, hi), grid)
    return SingularSolution(d, sol.params.omega, sol.profile,
                            math.sqrt(d - 3.0), r0, sol.bracket,
                            sol.ode_residual, sol.decay_certified)


@dataclass(frozen=True)
class SweepEntry:
    """One ``(b, omega_b)`` result; failures carry their diagnostic."""

    b: float
    omega_b: float
    ok: bool
    error: str = ""


def _sweep_one(args):
    d, b, kw = args
    try:
        sol = find_omega_b(d, b, **kw)
        return SweepEntry(b, sol.params.omega, True)
    except (NoBracket, IntegrationError, NoSolution) as exc:
        return SweepEntry(b, math.nan, False, f"{type(exc).__name__}: {exc}")


def sweep_b(d: int, b_values, workers: int | None = None,
            **kwargs) -> list[SweepEntry]:
    """``omega_b`` along increasing ``b_values``, in input order.

    Failures are flagged per entry. ``workers > 1`` uses a process pool.
    """
    b_values = [float(b) for b in b_values]
    if any(b1 <= b0 for b0, b1 in zip(b_values, b_values[1:])):
        raise DomainError("b_values must be increasing")
    kwargs.setdefault("n", 64)
    tasks = [(d, b, kwargs) for b in b_values]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_one, tasks))
    return [_sweep_one(t) for t in tasks]


def sign_changes(values) -> int:
    """Number of strict sign changes in a sequence, ignoring NaN."""
    s = np.sign(np.asarray([x for x in values if np.isfinite(x)]))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))
