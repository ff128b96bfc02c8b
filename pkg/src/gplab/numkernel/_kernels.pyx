# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: adaptive radial shooting and Sturm counting.

Mirrors ``_kernels_py`` exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow

cnp.import_array()

cdef double _C2 = 1.0 / 5.0
cdef double _C3 = 3.0 / 10.0
cdef double _C4 = 4.0 / 5.0
cdef double _C5 = 8.0 / 9.0
cdef double _A21 = 1.0 / 5.0
cdef double _A31 = 3.0 / 40.0
cdef double _A32 = 9.0 / 40.0
cdef double _A41 = 44.0 / 45.0
cdef double _A42 = -56.0 / 15.0
cdef double _A43 = 32.0 / 9.0
cdef double _A51 = 19372.0 / 6561.0
cdef double _A52 = -25360.0 / 2187.0
cdef double _A53 = 64448.0 / 6561.0
cdef double _A54 = -212.0 / 729.0
cdef double _A61 = 9017.0 / 3168.0
cdef double _A62 = -355.0 / 33.0
cdef double _A63 = 46732.0 / 5247.0
cdef double _A64 = 49.0 / 176.0
cdef double _A65 = -5103.0 / 18656.0
cdef double _B1 = 35.0 / 384.0
cdef double _B3 = 500.0 / 1113.0
cdef double _B4 = 125.0 / 192.0
cdef double _B5 = -2187.0 / 6784.0
cdef double _B6 = 11.0 / 84.0
cdef double _E1 = 71.0 / 57600.0
cdef double _E3 = -71.0 / 16695.0
cdef double _E4 = 71.0 / 1920.0
cdef double _E5 = -17253.0 / 339200.0
cdef double _E6 = 22.0 / 525.0
cdef double _E7 = -1.0 / 40.0

cdef enum:
    EV_END = 0
    EV_SIGN = 1
    EV_BLOWUP = 2
    EV_TURN = 3
    EV_STIFF = -1
    EV_MAXSTEPS = -2

EVENT_END = EV_END
EVENT_SIGN = EV_SIGN
EVENT_BLOWUP = EV_BLOWUP
EVENT_TURN = EV_TURN
EVENT_STIFF = EV_STIFF
EVENT_MAXSTEPS = EV_MAXSTEPS

BACKEND = "cython"


cdef inline double _dv(double r, double u, double v, double dm1, double om,
                       double nl, double pm2) noexcept nogil:
    cdef double f
    if u > 0.0:
        f = nl * pow(u, pm2 + 1.0)
    elif u < 0.0:
        f = -nl * pow(-u, pm2 + 1.0)
    else:
        f = 0.0
    return -dm1 * v / r - (om - r * r) * u - f


cdef inline double _max(double a, double b) noexcept nogil:
    return a if a > b else b


cdef inline double _min(double a, double b) noexcept nogil:
    return a if a < b else b


def integrate_radial(double d, double p, double omega, double nonlin,
                     double r_start, double u_start, double v_start,
                     r_nodes, double rtol, double atol_u, double atol_v,
                     double blowup, bint stop_on_turn,
                     long max_steps=2000000):
    """Integrate u'' + (d-1)/r u' + (omega - r^2) u + nonlin |u|^(p-2) u = 0.

    See ``_kernels_py.integrate_radial`` for the contract.
    """
    cdef const double[::1] nodes = np.ascontiguousarray(r_nodes, dtype=np.float64)
    cdef Py_ssize_t n = nodes.shape[0]
    u_arr = np.zeros(n)
    v_arr = np.zeros(n)
    cdef double[::1] u_out = u_arr
    cdef double[::1] v_out = v_arr
    cdef double dm1 = d - 1.0
    cdef double pm2 = p - 2.0
    cdef double r = r_start, u = u_start, v = v_start
    cdef double h = 0.01 * r if r > 0.0 else 1e-8
    cdef double h_free, target, rn, un, vn, eu, ev, su, sv, err, fac
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v
    cdef double k6u, k6v, k7u, k7v, yu, yv
    cdef Py_ssize_t k = 0
    cdef long steps = 0
    cdef bint hit
    cdef int event = EV_END
    cdef double r_event = r

    while k < n and nodes[k] <= r:
        u_out[k] = u
        v_out[k] = v
        k += 1
    if k == n:
        return u_arr, v_arr, k, EVENT_END, r, 0

    with nogil:
        k1u = v
        k1v = _dv(r, u, v, dm1, omega, nonlin, pm2)
        while True:
            target = nodes[k]
            hit = False
            h_free = h
            if r + h >= target:
                h = target - r
                hit = True
            if h < 1e-14 * r:
                event = EV_STIFF
                r_event = r
                break
            yu = u + h * _A21 * k1u
            yv = v + h * _A21 * k1v
            k2u = yv
            k2v = _dv(r + _C2 * h, yu, yv, dm1, omega, nonlin, pm2)
            yu = u + h * (_A31 * k1u + _A32 * k2u)
            yv = v + h * (_A31 * k1v + _A32 * k2v)
            k3u = yv
            k3v = _dv(r + _C3 * h, yu, yv, dm1, omega, nonlin, pm2)
            yu = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
            yv = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
            k4u = yv
            k4v = _dv(r + _C4 * h, yu, yv, dm1, omega, nonlin, pm2)
            yu = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
            yv = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
            k5u = yv
            k5v = _dv(r + _C5 * h, yu, yv, dm1, omega, nonlin, pm2)
            yu = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u
                          + _A65 * k5u)
            yv = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v
                          + _A65 * k5v)
            k6u = yv
            k6v = _dv(r + h, yu, yv, dm1, omega, nonlin, pm2)
            un = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u
                          + _B6 * k6u)
            vn = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v
                          + _B6 * k6v)
            rn = target if hit else r + h
            k7u = vn
            k7v = _dv(rn, un, vn, dm1, omega, nonlin, pm2)
            eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u
                      + _E6 * k6u + _E7 * k7u)
            ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v
                      + _E6 * k6v + _E7 * k7v)
            su = atol_u + rtol * _max(fabs(u), fabs(un))
            sv = atol_v + rtol * _max(fabs(v), fabs(vn))
            err = _max(fabs(eu) / su, fabs(ev) / sv)
            steps += 1
            if steps > max_steps:
                event = EV_MAXSTEPS
                r_event = r
                break
            if err <= 1.0:
                if un <= 0.0:
                    event = EV_SIGN
                    r_event = r + h * u / (u - un)
                    break
                if un > blowup:
                    event = EV_BLOWUP
                    r_event = rn
                    break
                if stop_on_turn and vn > 0.0:
                    event = EV_TURN
                    r_event = rn
                    break
                r = rn
                u = un
                v = vn
                k1u = k7u
                k1v = k7v
                if hit:
                    u_out[k] = u
                    v_out[k] = v
                    k += 1
                    if k == n:
                        event = EV_END
                        r_event = r
                        break
                if err == 0.0:
                    fac = 5.0
                else:
                    fac = _min(5.0, 0.9 * pow(err, -0.2))
                h = h * fac
                if hit and h_free > h:
                    h = h_free
            else:
                h = h * _max(0.2, 0.9 * pow(err, -0.2))
    return u_arr, v_arr, k, event, r_event, steps


cdef (long, bint) _sturm(const double[::1] diag, const double[::1] off,
                         const double[::1] w,
                         double lam) noexcept nogil:
    cdef Py_ssize_t n = diag.shape[0]
    cdef Py_ssize_t i
    cdef long count = 0
    cdef bint perturbed = False
    cdef double q = 1.0, a, e, scale
    for i in range(n):
        a = diag[i] - lam * w[i]
        if i == 0:
            q = a
        else:
            e = off[i - 1]
            q = a - e * e / q
        if q == 0.0:
            scale = fabs(diag[i]) + fabs(lam * w[i])
            if i > 0:
                scale += fabs(off[i - 1])
            if i < n - 1:
                scale += fabs(off[i])
            q = 1e-14 * (scale if scale > 0.0 else 1.0)
            perturbed = True
        if q < 0.0:
            count += 1
    return count, perturbed


def sturm_count(diag, offdiag, weight, double lam):
    """Number of eigenvalues of the pencil (A, W) strictly below ``lam``."""
    cdef const double[::1] dv = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] ov = np.ascontiguousarray(offdiag, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weight, dtype=np.float64)
    cdef long c
    cdef bint f
    with nogil:
        c, f = _sturm(dv, ov, wv, lam)
    return int(c), bool(f)


def sturm_count_many(diag, offdiag, weight, lams):
    cdef const double[::1] dv = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] ov = np.ascontiguousarray(offdiag, dtype=np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(weight, dtype=np.float64)
    cdef const double[::1] lv = np.ascontiguousarray(lams, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(lv.shape[0],
                                                         dtype=np.int64)
    cdef Py_ssize_t j
    cdef long c
    cdef bint f, flag = False
    for j in range(lv.shape[0]):
        with nogil:
            c, f = _sturm(dv, ov, wv, lv[j])
        out[j] = c
        flag = flag or f
    return out, bool(flag)
