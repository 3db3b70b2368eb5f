import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate
from scipy.optimize import brentq

from ougrowth.meanfield import entropy_density, lyapunov_bounds, transition_beta
from ougrowth.ou import InitCondition
from ougrowth.spectral import coupling, k_coupling
from ougrowth.variational import (DensityProfile, cell_weights, euler_lagrange_residual, evaluate_functional,
                                  interaction_energy, kernel, solve_variational)

S, Z = InitCondition.STATIONARY, InitCondition.ZERO_START


def test_kernel_examples():
    assert kernel(0.3, 0.3, 2.0, S) == pytest.approx(0.25)
    assert kernel(0.0, 0.7, 2.0, Z) == 0.0
    assert kernel(0.7, 0.0, 2.0, Z) == 0.0


@pytest.mark.parametrize("a", [0.5, 1.0, 4.0])
@pytest.mark.parametrize("model", [S, Z])
def test_kernel_mass(a, model):
    f = lambda z, y: float(kernel(y, z, a, model))
    val = 2 * integrate.dblquad(f, 0, 1, 0, lambda y: y, epsabs=1e-14, epsrel=1e-13)[0]
    assert val == pytest.approx(coupling(a, model), abs=1e-10)
    assert cell_weights(64, a, model).sum() == pytest.approx(coupling(a, model), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(y=st.floats(0, 1), z=st.floats(0, 1), c=st.floats(-1, 1), a=st.floats(0.01, 50))
def test_kernel_symmetry_and_translation(y, z, c, a):
    assert kernel(y, z, a, S) == kernel(z, y, a, S)
    assert kernel(y, z, a, Z) == kernel(z, y, a, Z)
    if 0 <= y + c <= 1 and 0 <= z + c <= 1:
        assert kernel(y + c, z + c, a, S) == pytest.approx(float(kernel(y, z, a, S)), rel=1e-12)


@pytest.mark.parametrize("model", [S, Z])
def test_cell_weights_are_exact_cell_integrals(model):
    m, a = 16, 3.0
    w = cell_weights(m, a, model)
    h = 1.0 / m
    for i, j in [(0, 0), (3, 3), (2, 5), (15, 0), (7, 8)]:
        f = lambda z, y: float(kernel(y, z, a, model))
        if i == j:
            # split the cell along the kink
            ref = 2 * integrate.dblquad(f, i * h, (i + 1) * h, i * h, lambda y: y, epsabs=1e-16, epsrel=1e-12)[0]
        else:
            ref = integrate.dblquad(f, i * h, (i + 1) * h, j * h, (j + 1) * h, epsabs=1e-16, epsrel=1e-12)[0]
        assert w[i, j] == pytest.approx(ref, rel=1e-10, abs=1e-15)
    assert not w.flags.writeable


def test_cell_weights_small_cells():
    # ah far below the series switch
    w = cell_weights(4096, 1e-3, S)
    assert w.sum() == pytest.approx(k_coupling(1e-3), rel=1e-10)


def test_profile_validation():
    with pytest.raises(ValueError):
        DensityProfile(np.array([0.2, 1.2]))
    with pytest.raises(ValueError):
        DensityProfile(np.array([]))
    p = DensityProfile.constant(0.3, 8)
    assert p.total == pytest.approx(0.3) and p.m == 8
    assert np.allclose(p.grid, (np.arange(8) + 0.5) / 8)
    assert p.coarsen().m == 4


@pytest.mark.parametrize("model", [S, Z])
def test_functional_constant_profile(model):
    x, rho, beta, a = 0.4, 0.05, 3.0, 1.5
    val = evaluate_functional(DensityProfile.constant(x, 128), rho, beta, a, model)
    expected = math.log(rho) * x + beta * coupling(a, model) * x * x - float(entropy_density(x))
    assert val == pytest.approx(expected, rel=1e-12)


def test_functional_trivial_values():
    assert evaluate_functional(DensityProfile.constant(0.0, 64), 0.1, 5.0, 1.0) == 0.0
    rho = 0.025
    val = evaluate_functional(DensityProfile.constant(rho / (1 + rho), 64), rho, 0.0, 1.0)
    assert val == pytest.approx(math.log1p(rho), abs=1e-15)


def test_stationary_kernel_equals_zero_start_plus_initial_term():
    rng = np.random.default_rng(3)
    m, a, rho, beta = 64, 2.0, 0.05, 4.0
    prof = DensityProfile(rng.uniform(0, 1, m))
    h = 1 / m
    # exact cell integrals of e^{-a y}
    c = np.exp(-a * h * np.arange(m)) * -math.expm1(-a * h) / a
    extra = beta / (2 * a) * float(prof.values @ c) ** 2
    lhs = evaluate_functional(prof, rho, beta, a, S)
    rhs = evaluate_functional(prof, rho, beta, a, Z) + extra
    assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("model", [S, Z])
def test_zero_beta_solution(model):
    rho = 0.025
    r = solve_variational(rho, 0.0, 1.0, model)
    assert r.converged
    assert np.allclose(r.profile.values, rho / (1 + rho), atol=1e-14)
    assert r.lambda_value == pytest.approx(math.log1p(rho), abs=1e-12)


def test_moderate_beta_in_narrow_sandwich():
    r = solve_variational(0.025, 5.0, 1.0, S, estimate_error=True)
    b = lyapunov_bounds(0.025, 5.0, 1.0, S)
    assert b.lower - r.quadrature_error <= r.lambda_value <= b.upper + r.quadrature_error
    assert (b.upper - b.lower) / b.upper < 0.005


def test_result_invariants():
    r = solve_variational(0.05, 8.0, 2.0, Z, tol=1e-12)
    assert r.converged and r.residual < 1e-12
    assert r.lambda_value == pytest.approx(evaluate_functional(r.profile, 0.05, 8.0, 2.0, Z), rel=1e-14)


def test_large_a_gas_side_matches_mean_field():
    a, rho = 50.0, 0.025
    beta = 0.95 * transition_beta(rho, k_coupling(a))
    r = solve_variational(rho, beta, a, S)
    b = lyapunov_bounds(rho, beta, a, S)
    for ref in (b.lower, b.upper):
        assert abs(r.lambda_value - ref) < 0.01 * abs(ref)


def test_large_a_liquid_side_stays_in_sandwich():
    a, rho = 50.0, 0.025
    beta = 1.05 * transition_beta(rho, k_coupling(a))
    r = solve_variational(rho, beta, a, S, estimate_error=True)
    b = lyapunov_bounds(rho, beta, a, S)
    assert b.lower - r.quadrature_error <= r.lambda_value <= b.upper + r.quadrature_error


@pytest.mark.parametrize("beta", [2.0, 9.0, 12.0])
def test_monotone_improvement(beta):
    r = solve_variational(0.025, beta, 1.0, S, track=True)
    trace = np.array(r.lambda_trace)
    assert trace[-1] >= trace[0] - 1e-15
    assert np.all(np.diff(trace[5:]) >= -1e-13)


def test_grid_convergence_order():
    vals = {m: solve_variational(0.1, 4.0, 2.0, S, grid_m=m).lambda_value for m in (64, 128, 256, 512)}
    d1, d2, d3 = (abs(vals[64] - vals[128]), abs(vals[128] - vals[256]), abs(vals[256] - vals[512]))
    assert d2 < d1 and d3 < d2
    # second order: halving h cuts the change by about four
    assert 3.0 < d2 / d3 < 5.0


@pytest.mark.parametrize("model", [S, Z])
@pytest.mark.parametrize("beta", [1.0, 6.0, 14.0])
def test_euler_lagrange_residual(model, beta):
    r = solve_variational(0.025, beta, 1.0, model)
    assert euler_lagrange_residual(r.profile, 0.025, beta, 1.0, model) < 1e-8


def test_near_coexistence_flag():
    m = 128

    def diff(b):
        c = solve_variational(0.025, b, 1.0, S, grid_m=m).candidates
        return c["high"] - c["low"]

    b_star = brentq(diff, 10.0, 10.1, xtol=1e-14)
    r = solve_variational(0.025, b_star, 1.0, S, grid_m=m, estimate_error=True)
    assert r.near_coexistence and r.start == "low"
    away = solve_variational(0.025, 11.0, 1.0, S, grid_m=m, estimate_error=True)
    assert not away.near_coexistence and away.start == "high"


def test_interaction_energy_matches_dense_quadrature():
    prof = DensityProfile(np.linspace(0.1, 0.9, 64))
    x = prof.grid
    # midpoint product rule with the diagonal handled exactly converges to the same value
    fine = DensityProfile(np.repeat(prof.values, 8))
    assert interaction_energy(fine, 2.0) == pytest.approx(interaction_energy(prof, 2.0), rel=1e-14)
    assert len(x) == 64


@pytest.mark.parametrize("bad", [dict(grid_m=32), dict(damping=0.0), dict(damping=1.5), dict(rho=0.0), dict(a=0.0)])
def test_validation(bad):
    kw = dict(rho=0.025, beta=1.0, a=1.0, model=S)
    kw.update(bad)
    with pytest.raises(ValueError):
        solve_variational(**kw)


def test_nonconvergence_flagged():
    r = solve_variational(0.025, 12.0, 1.0, S, max_iter=3)
    assert not r.converged and r.iterations == 3
