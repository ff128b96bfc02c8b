import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gplab.errors import DomainError
from gplab.numkernel import RadialGrid, count_eigs_below
from gplab.shooting import find_singular
from gplab.spectral import (RefinementPolicy, build_limiting,
                            build_linearized, discriminant,
                            eigenfunction_residual, kummer_eigenfunction,
                            kummer_spec, limiting_eigenvalues, log_grid,
                            morse_index, nondegeneracy_gap)


@pytest.fixture(scope="module")
def sing():
    return {d: find_singular(d, r0=1e-4) for d in (8, 13, 16)}


@pytest.fixture(scope="module")
def report16(sing):
    return morse_index(sing[16])


# -- closed-form spectrum ------------------------------------------------------------

def test_kummer_spec_examples():
    k13 = kummer_spec(13)
    assert (k13.l_plus, k13.l_minus) == (-5.0, -6.0)
    assert np.allclose(k13.sigma[:4], [3, 7, 11, 15], rtol=0, atol=1e-14)
    k16 = kummer_spec(16)
    assert k16.sigma[2] == pytest.approx(10 + math.sqrt(40), rel=1e-15)
    assert k16.sigma[2] > 16
    assert kummer_spec(15).sigma[2] == pytest.approx(15.0, abs=1e-13)


@given(st.integers(13, 60))
def test_kummer_spec_invariants(d):
    k = kummer_spec(d)
    D = discriminant(d)
    assert D >= 0
    assert k.l_plus == pytest.approx((2 - d + math.sqrt(D)) / 2)
    assert k.l_minus == pytest.approx((2 - d - math.sqrt(D)) / 2)
    assert np.allclose(np.diff(k.sigma), 4.0, rtol=0, atol=1e-12)
    assert k.sigma[2] == pytest.approx(10 + math.sqrt(D), rel=1e-14)
    assert k.sigma[3] == pytest.approx(14 + math.sqrt(D), rel=1e-14)
    assert math.isnan(k.alpha_osc)


@given(st.integers(5, 12))
def test_oscillatory_range(d):
    k = kummer_spec(d)
    assert discriminant(d) < 0
    assert k.alpha_osc == pytest.approx(math.sqrt(-d * d + 16 * d - 40) / 2)
    assert k.beta_osc == (d - 4) / 2
    assert k.sigma.size == 0 and math.isnan(k.l_plus)


@given(st.integers(5, 80))
def test_inverse_square_coefficient(d):
    # chi = r^((d-2)/2) phi in t = log r vs psi = r^((d-1)/2) phi in r
    assert discriminant(d) / 4 == pytest.approx((d - 3) * (d - 13) / 4 + 0.25)


def test_kummer_spec_domain():
    with pytest.raises(DomainError):
        kummer_spec(4)


@pytest.mark.parametrize("d, n, tol", [(13, 0, 1e-8), (16, 0, 1e-8),
                                       (20, 0, 1e-8), (13, 1, 1e-7),
                                       (16, 2, 1e-6), (20, 3, 1e-6)])
def test_eigenfunction_residual(d, n, tol):
    r = np.geomspace(1e-3, 8.0, 400)
    assert eigenfunction_residual(d, n, r) <= tol


def test_eigenfunction_derivatives():
    r = np.linspace(0.3, 4.0, 50)
    h = 1e-5
    w, dw, d2w = kummer_eigenfunction(16, 2, r)
    wp, _, _ = kummer_eigenfunction(16, 2, r + h)
    wm, _, _ = kummer_eigenfunction(16, 2, r - h)
    assert np.allclose(dw, (wp - wm) / (2 * h), rtol=1e-6, atol=1e-12)
    assert np.allclose(d2w, (wp - 2 * w + wm) / h ** 2, rtol=1e-4, atol=1e-8)


@pytest.mark.parametrize("d", [13, 16, 20])
def test_limiting_eigenvalues_match(d):
    sigma = kummer_spec(d).sigma[:4]
    fd = limiting_eigenvalues(d, 4)
    assert np.max(np.abs(fd / sigma - 1)) <= 5e-3


@pytest.mark.parametrize("d", [13, 16, 20])
def test_limiting_convergence_order(d):
    # t spacing halved and r_min divided by 10 at each level
    sigma = kummer_spec(d).sigma[0]
    errs = []
    for r_min, h in ((1e-3, 0.02), (1e-4, 0.01), (1e-5, 0.005)):
        n = int(math.ceil(math.log(10.0 / r_min) / h)) + 1
        lam = limiting_eigenvalues(d, 1, r_min=r_min, n=n, richardson=False)
        errs.append(abs(lam[0] - sigma))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.5)


def test_limiting_count_unbounded_d5():
    counts = []
    for r_min in (1e-2, 1e-2 / 16, 1e-2 / 256):
        T = build_limiting(5, log_grid(5, r_min, 8.0, 2e-3))
        counts.append(count_eigs_below(T, 0.0))
    assert counts[0] < counts[1] < counts[2]


def test_pencil_needs_log_grid():
    with pytest.raises(DomainError):
        build_limiting(13, RadialGrid.power(1e-3, 5.0, 100, 13))


# -- linearized operator -------------------------------------------------------------

@pytest.mark.parametrize("d", [8, 13, 16])
def test_comparison_principle(sing, d):
    s = sing[d]
    grid = log_grid(d, 1e-3, 10.0, 1e-2)
    r2 = grid.nodes ** 2
    lin = build_linearized(s, grid).diag
    lim = build_limiting(d, grid).diag - r2 * s.omega_inf
    assert np.all(lin >= lim)


def test_morse_index_d16(report16):
    rep = report16
    assert rep.morse_index == 1 and not rep.unbounded and rep.stabilized
    assert len({c for *_, c in rep.refinement_trace}) == 1


def test_nondegeneracy_d16(report16):
    t1, t2, verdict = nondegeneracy_gap(report16)
    assert verdict == "nondegenerate"
    assert t1 < report16.omega_inf < t2
    err = float(max(report16.tau_error[:2]))
    assert min(report16.omega_inf - t1, t2 - report16.omega_inf) >= 10 * err


@pytest.mark.parametrize("d", [13, 16])
def test_bottom_of_spectrum_positive(sing, d):
    rep = morse_index(sing[d])
    assert rep.tau[0] > 0
    assert rep.morse_index >= 1
    if d == 13:
        assert rep.morse_index in (1, 2)


def test_unbounded_d8(sing):
    rep = morse_index(sing[8])
    counts = [c for *_, c in rep.refinement_trace]
    assert rep.unbounded and math.isinf(rep.morse_index)
    assert all(b > a for a, b in zip(counts, counts[1:]))


def test_halving_trace_refinement_monotone(sing):
    # nondecreasing, with a strict increase at least once per two halvings
    rep = morse_index(sing[8], RefinementPolicy(factor=2.0))
    counts = [c for *_, c in rep.refinement_trace]
    assert all(b >= a for a, b in zip(counts, counts[1:]))
    assert all(counts[k + 2] > counts[k] for k in range(len(counts) - 2))


def test_nondegeneracy_needs_d13(sing):
    rep = morse_index(sing[8])
    with pytest.raises(DomainError):
        nondegeneracy_gap(rep)
