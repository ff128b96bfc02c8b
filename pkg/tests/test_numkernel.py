import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from gplab.errors import DivergentIntegralError, DomainError, SingularMatrixError
from gplab.numkernel import (RadialGrid, RadialProfile, TridiagonalOperator,
                             count_eigs_below, eigenvalue_bisect, kummer_M,
                             kummer_poly_coeffs, log_gamma, lowest_eigenvalues,
                             power_integral, quad_radial, solve_tridiagonal,
                             sphere_measure)
from gplab.numkernel import _backend, _kernels_py

compiled = pytest.importorskip("gplab.numkernel._kernels")


# -- special functions ---------------------------------------------------------

@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)),
                                         (0.5, 0.5 * math.log(math.pi))])
def test_log_gamma_examples(x, expected):
    assert log_gamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


@given(st.floats(min_value=1e-3, max_value=300.0))
def test_log_gamma_matches_reference(x):
    ref = math.lgamma(x)
    assert abs(log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@pytest.mark.parametrize("d, expected", [(3, 4 * math.pi),
                                         (4, 2 * math.pi ** 2),
                                         (6, math.pi ** 3)])
def test_sphere_measure(d, expected):
    assert sphere_measure(d) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("a, b, expected", [
    (1.0, 2.0, 0.5), (0.0, 1.0, math.pi / 2),
    (6.0, 5.0, 0.5 * sp.beta(3.5, 1.5))])
def test_power_integral_examples(a, b, expected):
    assert power_integral(a, b) == pytest.approx(expected, rel=1e-13)


def test_power_integral_divergent():
    with pytest.raises(DivergentIntegralError):
        power_integral(3.0, 2.0)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 12.0), st.floats(0.2, 8.0))
def test_power_integral_matches_quadrature(a, excess):
    from scipy.integrate import quad
    b = (a + 1.0) / 2.0 + excess
    f = lambda r: r ** a * (1.0 + r * r) ** -b
    num = quad(f, 0, 1, epsabs=0, epsrel=1e-13, limit=200)[0] + quad(
        lambda s: f(1.0 / s) / (s * s), 0, 1, epsabs=0, epsrel=1e-13,
        limit=200)[0]
    assert power_integral(a, b) == pytest.approx(num, rel=1e-10)


def test_kummer_examples():
    assert kummer_M(0.7, 2.3, 0.0) == 1.0
    x = np.linspace(0, 3, 7)
    assert np.allclose(kummer_M(-1.0, 2.5, x), 1 - x / 2.5, rtol=1e-15)
    assert kummer_M(-2.0, 3.0, 1.0) == pytest.approx(1 - 2 / 3 + 1 / 12,
                                                     rel=1e-15)


@pytest.mark.parametrize("n, b", [(1, Fraction(5, 2)), (3, Fraction(7, 3)),
                                  (4, Fraction(-3, 2))])
def test_kummer_polynomial_coefficients_exact(n, b):
    exact, term = [], Fraction(1)
    for k in range(n + 1):
        exact.append(term)
        term = term * (k - n) / ((b + k) * (k + 1))
    got = kummer_poly_coeffs(n, float(b))
    assert np.allclose(got, [float(c) for c in exact], rtol=1e-15, atol=0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-4.5, 3.0), st.floats(0.6, 6.0), st.floats(-3.0, 3.0))
def test_kummer_matches_reference(a, b, x):
    # 30-digit reference; scipy's hyp1f1 overflows for |x| near 1e-215
    with mpmath.workdps(30):
        ref = float(mpmath.hyp1f1(a, b, x))
    assert kummer_M(a, b, x) == pytest.approx(ref, rel=1e-9, abs=1e-12)


# -- grids and quadrature --------------------------------------------------------

@given(st.floats(1e-6, 1.0), st.floats(1.5, 50.0), st.integers(2, 400))
def test_log_grid_invariants(r_min, factor, n):
    g = RadialGrid.log(r_min, r_min * factor, n, 3)
    assert g.nodes[0] == r_min and g.nodes[-1] == r_min * factor
    assert np.all(np.diff(g.nodes) > 0)
    assert np.array_equal(g.nodes, RadialGrid.log(r_min, r_min * factor, n,
                                                  3).nodes)


def test_grid_rejects_bad_nodes():
    with pytest.raises(DomainError):
        RadialGrid(np.array([1.0, 0.5]), 3)
    with pytest.raises(DomainError):
        RadialGrid(np.array([0.0, 0.5]), 3)


def test_profile_rejects_nonfinite():
    g = RadialGrid.log(0.1, 1.0, 3, 3)
    with pytest.raises(DomainError):
        RadialProfile(g, [1.0, np.nan, 1.0])


def test_quad_radial_examples():
    g = RadialGrid.log(1e-8, 12.0, 3000, 3)
    f = RadialProfile(g, np.exp(-g.nodes ** 2 / 2))
    assert quad_radial(f, 2.0) == pytest.approx(math.pi ** 1.5, rel=1e-9)
    g = RadialGrid.power(1.0, 2.0, 2001, 3, 1.0)
    one = RadialProfile(g, np.ones(g.n))
    assert quad_radial(one, 1.0) == pytest.approx(4 * math.pi * 7 / 3,
                                                  rel=1e-6)


def test_quad_radial_halving_order():
    def integral(n):
        g = RadialGrid.power(0.5, 3.0, n, 3, 1.0)
        return quad_radial(RadialProfile(g, np.sin(g.nodes)), 2.0)
    i1, i2, i3 = integral(41), integral(81), integral(161)
    assert abs(i1 - i3) / abs(i2 - i3) >= 3.0


# -- tridiagonal algebra ---------------------------------------------------------

def test_solve_tridiagonal_examples():
    T = TridiagonalOperator(np.ones(3), np.zeros(2))
    assert np.allclose(solve_tridiagonal(T, [1, 2, 3]), [1, 2, 3])
    T = TridiagonalOperator([2.0, 2.0], [-1.0])
    assert np.allclose(solve_tridiagonal(T, [1, 0]), [2 / 3, 1 / 3],
                       rtol=1e-15)


def test_solve_tridiagonal_singular():
    with pytest.raises(SingularMatrixError):
        solve_tridiagonal(TridiagonalOperator([1.0, 1.0], [1.0]), [1.0, 0.0])


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 60), st.integers(0, 2 ** 31))
def test_solve_tridiagonal_residual(n, seed):
    rng = np.random.default_rng(seed)
    e = rng.uniform(-1, 1, n - 1)
    a = 3.0 + rng.uniform(0, 1, n)
    T = TridiagonalOperator(a, e)
    rhs = rng.normal(size=n)
    x = solve_tridiagonal(T, rhs)
    assert np.max(np.abs(T.matvec(x) - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_count_examples():
    T = TridiagonalOperator([1.0, 2.0, 3.0], [0.0, 0.0])
    assert count_eigs_below(T, 2.5) == 2
    assert count_eigs_below(T, 0.0) == 0
    L = TridiagonalOperator([2.0, 2.0, 2.0], [-1.0, -1.0])
    assert count_eigs_below(L, 2.0 + 1e-12) == 2
    assert count_eigs_below(L, 2.0 - 1e-12) == 1


def _random_pencil(n, seed):
    rng = np.random.default_rng(seed)
    return TridiagonalOperator(rng.normal(size=n), rng.normal(size=n - 1),
                               weight=rng.uniform(0.5, 2.0, n))


def _dense_eigs(T):
    A = np.diag(T.diag) + np.diag(T.offdiag, 1) + np.diag(T.offdiag, -1)
    w = 1.0 / np.sqrt(T.weight)
    return np.linalg.eigvalsh(w[:, None] * A * w[None, :])


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2 ** 31), st.floats(-4, 4),
       st.floats(0, 3))
def test_count_monotone_and_exact(n, seed, lam, step):
    T = _random_pencil(n, seed)
    ev = _dense_eigs(T)
    if np.min(np.abs(ev - lam)) > 1e-9 and np.min(np.abs(ev - lam - step)) > 1e-9:
        assert count_eigs_below(T, lam) == int(np.sum(ev < lam))
    assert count_eigs_below(T, lam) <= count_eigs_below(T, lam + step)


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 30), st.integers(0, 2 ** 31))
def test_lowest_eigenvalues_match_dense(n, seed):
    T = _random_pencil(n, seed)
    ev = _dense_eigs(T)
    got = lowest_eigenvalues(T, 3, tol=1e-11)
    assert np.allclose(got, ev[:3], atol=1e-9)
    assert eigenvalue_bisect(T, 1, tol=1e-11) == pytest.approx(ev[1],
                                                               abs=1e-9)


# -- backend parity ----------------------------------------------------------------

def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
    assert _kernels_py.BACKEND == "python"


@pytest.mark.parametrize("d, p, omega, nonlin, b", [
    (5, 10 / 3, 3.0, 1.0, 7.6), (8, 4.0, 7.5, 1.0, 50.0),
    (3, 6.0, 1.1, 1.0, 0.5), (4, 2.5, 4.0, 0.0, 1.0)])
def test_integrator_parity(d, p, omega, nonlin, b):
    nodes = np.geomspace(1e-3, 6.0, 300)
    args = (float(d), p, omega, nonlin, 1e-6, b, 0.0, nodes, 1e-11,
            1e-14 * b, 1e-14 * b, 10 * b, True)
    out_c = compiled.integrate_radial(*args)
    out_p = _kernels_py.integrate_radial(*args)
    n = out_c[2]
    assert out_c[2:] == pytest.approx(out_p[2:], rel=0, abs=0)
    assert np.allclose(out_c[0][:n], out_p[0][:n], rtol=1e-12, atol=0)
    assert np.allclose(out_c[1][:n], out_p[1][:n], rtol=1e-12, atol=1e-300)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 50), st.integers(0, 2 ** 31), st.floats(-3, 3))
def test_sturm_parity(n, seed, lam):
    T = _random_pencil(n, seed)
    args = (T.diag, T.offdiag, T.weight, lam)
    assert compiled.sturm_count(*args) == _kernels_py.sturm_count(*args)
    lams = np.array([lam - 1.0, lam, lam + 1.0])
    c_counts, c_flag = compiled.sturm_count_many(T.diag, T.offdiag, T.weight,
                                                 lams)
    p_counts, p_flag = _kernels_py.sturm_count_many(T.diag, T.offdiag,
                                                    T.weight, lams)
    assert np.array_equal(c_counts, p_counts) and c_flag == p_flag


def test_pure_python_switch(tmp_path):
    import subprocess
    import sys
    code = "from gplab.numkernel import BACKEND; print(BACKEND)"
    env = {"GPLAB_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
