"""Pure-Python reference implementation of the hot kernels.

Semantics must match ``_kernels.pyx`` exactly; the test-suite runs both
backends against each other.
"""
import numpy as np

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)

EVENT_END = 0
EVENT_SIGN = 1
EVENT_BLOWUP = 2
EVENT_TURN = 3
EVENT_STIFF = -1
EVENT_MAXSTEPS = -2


def _rhs(r, u, v, dm1, om, nl, pm2):
    if u > 0.0:
        f = nl * u ** (pm2 + 1.0)
    elif u < 0.0:
        f = -nl * (-u) ** (pm2 + 1.0)
    else:
        f = 0.0
    return v, -dm1 * v / r - (om - r * r) * u - f


def integrate_radial(d, p, omega, nonlin, r_start, u_start, v_start,
                     r_nodes, rtol, atol_u, atol_v, blowup, stop_on_turn,
                     max_steps=2_000_000):
    """Integrate u'' + (d-1)/r u' + (omega - r^2) u + nonlin |u|^(p-2) u = 0.

    Starts from ``(u_start, v_start)`` at ``r_start`` and lands exactly on
    every entry of the increasing array ``r_nodes``. Stops at the first event.

    Returns ``(u, v, n_done, event, r_event, n_steps)`` where only the first
    ``n_done`` node values are meaningful.
    """
    r_nodes = np.asarray(r_nodes, dtype=float).tolist()
    n = len(r_nodes)
    u_out = np.zeros(n)
    v_out = np.zeros(n)
    dm1 = d - 1.0
    pm2 = p - 2.0
    r, u, v = float(r_start), float(u_start), float(v_start)
    h = 0.01 * r if r > 0.0 else 1e-8
    k = 0
    # nodes that coincide with the start
    while k < n and r_nodes[k] <= r:
        u_out[k] = u
        v_out[k] = v
        k += 1
    if k == n:
        return u_out, v_out, k, EVENT_END, r, 0
    k1u, k1v = _rhs(r, u, v, dm1, omega, nonlin, pm2)
    steps = 0
    while True:
        target = r_nodes[k]
        hit = False
        h_free = h
        if r + h >= target:
            h = target - r
            hit = True
        if h < 1e-14 * r:
            return u_out, v_out, k, EVENT_STIFF, r, steps
        y2u = u + h * _A21 * k1u
        y2v = v + h * _A21 * k1v
        k2u, k2v = _rhs(r + _C2 * h, y2u, y2v, dm1, omega, nonlin, pm2)
        y3u = u + h * (_A31 * k1u + _A32 * k2u)
        y3v = v + h * (_A31 * k1v + _A32 * k2v)
        k3u, k3v = _rhs(r + _C3 * h, y3u, y3v, dm1, omega, nonlin, pm2)
        y4u = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
        y4v = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4u, k4v = _rhs(r + _C4 * h, y4u, y4v, dm1, omega, nonlin, pm2)
        y5u = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
        y5v = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5u, k5v = _rhs(r + _C5 * h, y5u, y5v, dm1, omega, nonlin, pm2)
        y6u = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u
                       + _A65 * k5u)
        y6v = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v
                       + _A65 * k5v)
        k6u, k6v = _rhs(r + h, y6u, y6v, dm1, omega, nonlin, pm2)
        un = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u
                      + _B6 * k6u)
        vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v
                      + _B6 * k6v)
        rn = target if hit else r + h
        k7u, k7v = _rhs(rn, un, vn, dm1, omega, nonlin, pm2)
        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u
                  + _E7 * k7u)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v
                  + _E7 * k7v)
        su = atol_u + rtol * max(abs(u), abs(un))
        sv = atol_v + rtol * max(abs(v), abs(vn))
        err = max(abs(eu) / su, abs(ev) / sv)
        steps += 1
        if steps > max_steps:
            return u_out, v_out, k, EVENT_MAXSTEPS, r, steps
        if err <= 1.0:
            if un <= 0.0:
                re = r + h * u / (u - un)
                return u_out, v_out, k, EVENT_SIGN, re, steps
            if un > blowup:
                return u_out, v_out, k, EVENT_BLOWUP, rn, steps
            if stop_on_turn and vn > 0.0:
                return u_out, v_out, k, EVENT_TURN, rn, steps
            r, u, v = rn, un, vn
            k1u, k1v = k7u, k7v
            if hit:
                u_out[k] = u
                v_out[k] = v
                k += 1
                if k == n:
                    return u_out, v_out, k, EVENT_END, r, steps
            fac = 5.0 if err == 0.0 else min(5.0, 0.9 * err ** -0.2)
            h = h * fac
            if hit and h_free > h:
                h = h_free
        else:
            h = h * max(0.2, 0.9 * err ** -0.2)


def _sturm(diag, offdiag, weight, lam):
    n = len(diag)
    count = 0
    perturbed = False
    q = 1.0
    for i in range(n):
        a = diag[i] - lam * weight[i]
        if i == 0:
            q = a
        else:
            e = offdiag[i - 1]
            q = a - e * e / q
        if q == 0.0:
            scale = abs(diag[i]) + abs(lam * weight[i])
            if i > 0:
                scale += abs(offdiag[i - 1])
            if i < n - 1:
                scale += abs(offdiag[i])
            q = 1e-14 * (scale if scale > 0.0 else 1.0)
            perturbed = True
        if q < 0.0:
            count += 1
    return count, perturbed


def _as_lists(diag, offdiag, weight):
    return (np.asarray(diag, dtype=float).tolist(),
            np.asarray(offdiag, dtype=float).tolist(),
            np.asarray(weight, dtype=float).tolist())


def sturm_count(diag, offdiag, weight, lam):
    """Number of eigenvalues of the pencil (A, W) strictly below ``lam``.

    A is symmetric tridiagonal, W diagonal positive. Counts negative pivots
    of the LDL^T factorisation of ``A - lam W`` (Sylvester inertia).
    Returns ``(count, perturbed)``.
    """
    return _sturm(*_as_lists(diag, offdiag, weight), float(lam))


def sturm_count_many(diag, offdiag, weight, lams):
    dl, ol, wl = _as_lists(diag, offdiag, weight)
    out = np.empty(len(lams), dtype=np.int64)
    flag = False
    for j, lam in enumerate(lams):
        c, f = _sturm(dl, ol, wl, float(lam))
        out[j] = c
        flag = flag or f
    return out, flag


BACKEND = "python"
