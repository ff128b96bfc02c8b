import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gplab.asymptotics import energy_routes
from gplab.errors import DomainError, NoSolution
from gplab.numkernel import RadialGrid
from gplab.shooting import (ProblemParams, default_r_max, find_ground_state,
                            find_omega_b, find_singular, integrate_ivp,
                            integrate_linear, ode_residual, sign_changes,
                            singular_coefficients, sweep_b)


@pytest.fixture(scope="module")
def ground_d5():
    return find_ground_state(5, 2.0)


@pytest.fixture(scope="module")
def singular():
    return {d: find_singular(d) for d in (8, 13, 16)}


def _decreasing(profile):
    # strict wherever neighbouring values are resolvable in double precision
    du = np.diff(profile.values)
    r = profile.r[1:]
    return bool(np.all(du <= 0) and np.all(du[r > 1e-2 * r[-1]] < 0))


# -- parameters and the integrator -------------------------------------------------

def test_problem_params_modes():
    assert ProblemParams.critical(5, 1.0).mode == "critical"
    assert ProblemParams.supercritical(8, 1.0).mode == "supercritical"
    with pytest.raises(DomainError):
        ProblemParams(5, 5.0, 1.0)
    with pytest.raises(DomainError):
        ProblemParams(4, 3.0, 1.0)
    assert ProblemParams(4, 4.0, 1.0).mode == "critical"
    with pytest.raises(DomainError):
        ProblemParams(2, 4.0, 1.0)


@pytest.mark.parametrize("d", [3, 5, 8])
def test_linear_gaussian_mode(d):
    grid = RadialGrid.log(1e-4, 6.0, 600, d)
    shot = integrate_linear(d, float(d), 1.0, grid)
    assert shot.n_done == grid.n
    exact = np.exp(-grid.nodes ** 2 / 2)
    assert np.max(np.abs(shot.u - exact)) <= 1e-8


def test_event_type_monotone_in_b():
    # below the threshold the shot grows, above it it crosses zero
    params = ProblemParams.critical(5, 3.0)
    grid = RadialGrid.log(1e-6, default_r_max(3.0), 400, 5)
    outcomes = [integrate_ivp(params, b, grid).outcome
                for b in (0.01, 0.1, 1.0, 5.0, 10.0, 100.0, 1000.0)]
    first = outcomes.index("cross")
    assert set(outcomes[:first]) == {"grow"}
    assert set(outcomes[first:]) == {"cross"}


def test_integrate_ivp_rejects_nonpositive_b():
    with pytest.raises(DomainError):
        integrate_ivp(ProblemParams.critical(5, 3.0), 0.0,
                      RadialGrid.log(1e-6, 5.0, 10, 5))


# -- ground states -----------------------------------------------------------------

def test_ground_state_exists(ground_d5):
    sol = ground_d5
    assert sol.b > 0 and sol.decay_certified
    assert sol.ode_residual <= 1e-7
    u = sol.profile.values
    assert np.all(u > 0) and _decreasing(sol.profile)
    assert sol.profile.values[0] == pytest.approx(sol.b, rel=1e-6)


def test_ground_state_residual_recomputed(ground_d5):
    assert ode_residual(ground_d5.profile, ground_d5.params) <= 1e-7


def test_energy_routes_agree(ground_d5):
    assert energy_routes(ground_d5).mismatch <= 1e-5


@pytest.mark.parametrize("d, omega", [(5, 5.5), (3, 0.5), (5, -1.0),
                                      (5, 5.0), (3, 1.0), (4, 0.0), (7, 8.0)])
def test_nonexistence(d, omega):
    with pytest.raises(NoSolution):
        find_ground_state(d, omega)


def test_amplitude_decreases_toward_first_eigenvalue():
    bs = [find_ground_state(5, w).b for w in (4.6, 4.75, 4.9)]
    assert bs[0] > bs[1] > bs[2]


@settings(max_examples=6, deadline=None)
@given(st.sampled_from([3, 4, 5, 6, 7]), st.floats(0.15, 0.85))
def test_ground_state_properties(d, frac):
    lo = 1.0 if d == 3 else 0.0
    omega = lo + frac * (d - lo)
    sol = find_ground_state(d, omega, n=1500)
    u = sol.profile.values
    assert np.all(u > 0) and _decreasing(sol.profile)
    assert sol.decay_certified
    assert sol.ode_residual <= 1e-7
    assert energy_routes(sol).mismatch <= 1e-5


# -- supercritical family -----------------------------------------------------------

def test_singular_coefficients():
    a, b, c = singular_coefficients(13, 11.0)
    assert a == pytest.approx(math.sqrt(10.0))
    assert b == pytest.approx(-11.0 * math.sqrt(10.0) / 42.0)


@pytest.mark.parametrize("d", [8, 13, 16])
def test_singular_invariants(singular, d):
    s = singular[d]
    assert d - 4 < s.omega_inf < d
    assert s.inner_constant == pytest.approx(math.sqrt(d - 3))
    r, u = s.profile.r, s.profile.values
    F = r * u
    assert np.all(np.diff(F) < 0)
    assert F[0] <= math.sqrt(d - 3)
    assert np.all(u < math.sqrt(d - 3) / r)
    assert s.decay_certified and s.ode_residual <= 1e-7


@pytest.mark.parametrize("d", [8, 13])
def test_singular_start_robust(singular, d):
    half = find_singular(d, r0=0.5e-3)
    assert abs(half.omega_inf - singular[d].omega_inf) < 1e-6


def test_singular_sample_extends_below_r0(singular):
    s = singular[13]
    r = np.array([1e-4, 5e-4, 2e-3, 0.1, 1.0])
    u = s.sample(r)
    assert np.all(u > 0) and np.all(u < math.sqrt(10) / r)
    assert u[-1] == pytest.approx(float(s.profile(1.0)), rel=1e-6)


def test_singular_domain():
    with pytest.raises(DomainError):
        find_singular(4)
    with pytest.raises(DomainError):
        find_singular(8, r0=0.1)


def test_omega_b_range_and_convergence(singular):
    w_inf = singular[13].omega_inf
    s10 = find_omega_b(13, 10.0)
    s1000 = find_omega_b(13, 1000.0)
    assert 9.0 < s10.params.omega < 13.0
    assert abs(s1000.params.omega - w_inf) < abs(s10.params.omega - w_inf)
    u = s10.profile.values
    assert np.all(u > 0) and s10.decay_certified


def test_oscillation_d8(singular):
    w_inf = singular[8].omega_inf
    entries = sweep_b(8, [10.0, 1e2, 1e3, 1e4])
    assert all(e.ok for e in entries)
    assert sign_changes([e.omega_b - w_inf for e in entries]) >= 1


def test_monotone_d16(singular):
    w_inf = singular[16].omega_inf
    gaps = [abs(e.omega_b - w_inf) for e in sweep_b(16, [10.0, 1e2, 1e3])]
    assert gaps[0] > gaps[1] > gaps[2]


def test_sweep_preserves_order_and_parallel_parity():
    b = [10.0, 30.0, 100.0]
    serial = sweep_b(13, b)
    parallel = sweep_b(13, b, workers=2)
    assert [e.b for e in serial] == b
    assert [e.omega_b for e in serial] == [e.omega_b for e in parallel]


def test_sweep_rejects_unsorted():
    with pytest.raises(DomainError):
        sweep_b(8, [10.0, 5.0])


def test_sweep_flags_failures_individually():
    # a coarse scan of (d-4, d) may miss the bracket; any failure must be
    # reported on its own entry
    entries = sweep_b(8, [10.0, 100.0], n_scan=2)
    assert len(entries) == 2
    for e in entries:
        assert e.ok or (math.isnan(e.omega_b) and e.error)


@given(st.lists(st.floats(-10, 10, allow_nan=False), max_size=30))
def test_sign_changes_bounds(values):
    n = sign_changes(values)
    nz = [v for v in values if v != 0]
    assert 0 <= n <= max(len(nz) - 1, 0)
    assert sign_changes([-v for v in values]) == n
