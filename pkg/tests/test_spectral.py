import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ougrowth.ou import InitCondition
from ougrowth.spectral import (SERIES_CUTOFF, asymptotic_check, coupling, eigenfunction, k2_coupling, k_coupling,
                               solve_eigen, upper_coupling)

from oracles import eigen_residual, kernel_mass, nystrom_top_eigenvalue
from published_values import COUPLING_TABLE, matches_sig_figs

S, Z = InitCondition.STATIONARY, InitCondition.ZERO_START
A_GRID = sorted(COUPLING_TABLE)


def close_to_printed(value, text):
    return matches_sig_figs(value, text, 5)


@pytest.mark.parametrize("a", A_GRID)
def test_couplings_match_table(a):
    y0, lam, k, y02, lam2, k2 = COUPLING_TABLE[a]
    assert close_to_printed(k_coupling(a), k)
    assert close_to_printed(k2_coupling(a), k2)
    s1, s2 = solve_eigen(a, S), solve_eigen(a, Z)
    assert close_to_printed(s1.y0, y0) and close_to_printed(s1.lambda0, lam)
    assert close_to_printed(s2.y0, y02) and close_to_printed(s2.lambda0, lam2)


@pytest.mark.parametrize("a", [1e-3, 0.05, 0.5, 1.0, 3.0, 12.0])
def test_couplings_equal_kernel_mass(a):
    assert k_coupling(a) == pytest.approx(kernel_mass(a), rel=1e-10)
    assert k2_coupling(a) == pytest.approx(kernel_mass(a, zero_start=True), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5])
@pytest.mark.parametrize("model", [S, Z])
def test_lambda0_against_nystrom(a, model):
    ref = nystrom_top_eigenvalue(a, zero_start=model is Z)
    assert upper_coupling(a, model) == pytest.approx(ref, rel=1e-6)


def test_series_branch_continuous():
    below = SERIES_CUTOFF * (1 - 1e-9)
    assert k_coupling(below) == pytest.approx(k_coupling(SERIES_CUTOFF), rel=1e-8)
    assert k2_coupling(below) == pytest.approx(k2_coupling(SERIES_CUTOFF), rel=1e-8)


@pytest.mark.parametrize("a", [1e-8, 1e-6, 1e-4, 1e-3])
def test_small_a_limits(a):
    assert k_coupling(a) * a == pytest.approx(0.5 - a / 6, abs=a * a)
    # k2 = 1/3 - a/4 + O(a^2)
    assert abs(k2_coupling(a) - (1 / 3 - a / 4)) < a * a


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_invalid_a(bad):
    for fn in (k_coupling, k2_coupling, lambda a: solve_eigen(a, S)):
        with pytest.raises(ValueError):
            fn(bad)


@pytest.mark.parametrize("a", [1e-3, 0.1, 1.0, 9.4, 100.0, 1e3])
def test_root_brackets_and_residuals(a):
    s = solve_eigen(a, S)
    assert 0 < s.y0 < math.pi / a
    assert abs(s.residual()) < 1e-12
    assert s.y0 * math.tan(a * s.y0 / 2) == pytest.approx(1.0, rel=1e-9)
    z = solve_eigen(a, Z)
    assert math.pi / (2 * a) < z.y0 < math.pi / a
    assert abs(z.residual()) < 1e-12
    assert math.tan(a * z.y0) + z.y0 == pytest.approx(0.0, abs=1e-9 * max(1.0, z.y0))
    for sol in (s, z):
        assert sol.lambda0 == pytest.approx(1 / (a * a * (1 + sol.y0**2)), rel=1e-15)


def test_eigenfunction_values():
    s = solve_eigen(1.0, S)
    assert eigenfunction(s, 0.0) == pytest.approx(s.y0)
    assert eigenfunction(solve_eigen(1.0, Z), 0.0) == 0.0
    with pytest.raises(ValueError):
        eigenfunction(s, 1.5)
    with pytest.raises(ValueError):
        eigenfunction(s, -0.1)
    assert eigenfunction(s, np.array([0.0, 0.5])).shape == (2,)


@pytest.mark.parametrize("a", [0.5, 3.0])
@pytest.mark.parametrize("model", [S, Z])
def test_eigenfunction_solves_integral_equation(a, model):
    s = solve_eigen(a, model)
    assert eigen_residual(s.y0, s.lambda0, a, zero_start=model is Z, points=128) < 1e-8


def test_asymptotics_at_twenty():
    a = 20.0
    ap = asymptotic_check(a, S)
    assert abs(k_coupling(a) - ap.k_approx) < 10 * math.exp(-a)
    # remainder constant fitted once at large a (limit 4 pi^2) and frozen
    assert abs(upper_coupling(a, S) - ap.lambda0_approx) < 40.0 / a**5
    assert abs(solve_eigen(a, S).y0 - ap.y0_approx) < 0.05 / a
    az = asymptotic_check(a, Z)
    assert abs(k2_coupling(a) - az.k_approx) < 10 * math.exp(-a)
    assert abs(upper_coupling(a, Z) - az.lambda0_approx) < 40.0 / a**5
    assert abs(solve_eigen(a, Z).y0 - az.y0_approx) < 0.05 / a


def test_large_a_scaling():
    a = 1e3
    for model in (S, Z):
        assert abs(a * a * upper_coupling(a, model) - 1) < 1e-2
        assert abs(a * a * coupling(a, model) - 1) < 1e-2


def test_relative_gap_profile():
    grid = np.geomspace(0.01, 100.0, 801)
    gap = np.array([(upper_coupling(a, S) - k_coupling(a)) / upper_coupling(a, S) for a in grid])
    assert np.all(gap > 0) and gap.max() < 0.04
    assert 8.5 < grid[np.argmax(gap)] < 10.5


@settings(max_examples=60, deadline=None)
@given(a=st.floats(1e-3, 300.0))
def test_orderings(a):
    k, k2 = k_coupling(a), k2_coupling(a)
    assert upper_coupling(a, S) > k > 0
    assert upper_coupling(a, Z) > k2 > 0
    assert k > k2
