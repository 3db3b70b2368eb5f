"""Couplings and leading eigenvalues of the exponential kernels.

Stationary driver:  K(y, z)  = exp(-a|y - z|) / (2a)
Zero start:         K2(y, z) = (exp(-a|y - z|) - exp(-a(y + z))) / (2a)

k(a) and k2(a) are the double integrals of the kernels over the unit square;
lambda0(a) is the largest eigenvalue, 1 / (a^2 (1 + y0^2)), where y0 is the
smallest positive root of y tan(a y / 2) = 1 (stationary) or
tan(a y) + y = 0 (zero start).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .ou import InitCondition

SERIES_CUTOFF = 0.1
_N_SERIES = 18


def _check_a(a: float) -> float:
    a = float(a)
    if not a > 0 or not math.isfinite(a):
        raise ValueError(f"a must be positive and finite, got {a}")
    return a


def k_coupling(a: float) -> float:
    """k(a) = (a + e^{-a} - 1) / a^3."""
    a = _check_a(a)
    if a < SERIES_CUTOFF:
        # a k(a) = sum_j (-a)^j / (j + 2)!
        s = sum((-a) ** j / math.factorial(j + 2) for j in range(_N_SERIES))
        return s / a
    return (a + math.expm1(-a)) / a**3


def k2_coupling(a: float) -> float:
    """k2(a) = (1 + 2a - (2 - e^{-a})^2) / (2 a^3); tends to 1/3 as a -> 0."""
    a = _check_a(a)
    if a < SERIES_CUTOFF:
        # numerator = sum_{j>=2} (-1)^j (4 - 2^j) a^j / j!
        return sum((-1) ** j * (4 - 2**j) * a ** (j - 3) / (2 * math.factorial(j)) for j in range(3, 3 + _N_SERIES))
    return (1.0 + 2.0 * a - (2.0 - math.exp(-a)) ** 2) / (2.0 * a**3)


def coupling(a: float, model: InitCondition | str) -> float:
    """Lower-bound coupling for the given driver: k(a) or k2(a)."""
    model = InitCondition.parse(model)
    return k_coupling(a) if model is InitCondition.STATIONARY else k2_coupling(a)


@dataclass(frozen=True)
class EigenSolution:
    y0: float
    lambda0: float
    a: float
    model: InitCondition

    def residual(self) -> float:
        """Residual of the pole-free form of the root equation at y0."""
        return float(_root_function(self.model, self.a)(self.y0))


def _root_function(model: InitCondition, a: float):
    if model is InitCondition.STATIONARY:
        return lambda y: y * math.sin(0.5 * a * y) - math.cos(0.5 * a * y)
    return lambda y: math.sin(a * y) + y * math.cos(a * y)


def solve_eigen(a: float, model: InitCondition | str = InitCondition.STATIONARY) -> EigenSolution:
    """Smallest positive root y0 and the largest kernel eigenvalue lambda0."""
    a = _check_a(a)
    model = InitCondition.parse(model)
    g = _root_function(model, a)
    hi = math.pi / a
    lo = 0.0 if model is InitCondition.STATIONARY else 0.5 * math.pi / a
    # g(lo) and g(hi) have opposite signs exactly at the interval ends
    try:
        y0 = brentq(g, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    except ValueError as exc:
        raise RuntimeError(f"root bracket failed for a={a}, model={model.value}: {exc}") from exc
    return EigenSolution(y0=y0, lambda0=1.0 / (a * a * (1.0 + y0 * y0)), a=a, model=model)


def upper_coupling(a: float, model: InitCondition | str) -> float:
    """Upper-bound coupling lambda0(a) for the given driver."""
    return solve_eigen(a, model).lambda0


def eigenfunction(sol: EigenSolution, u):
    """Unnormalised eigenfunction in the stretched variable u = a x, u in [0, a].

    Stationary: sin(y0 u) + y0 cos(y0 u).  Zero start: sin(y0 u).
    """
    u = np.asarray(u, dtype=float)
    if np.any(u < 0) or np.any(u > sol.a * (1 + 1e-12)):
        raise ValueError(f"u must lie in [0, {sol.a}]")
    y = sol.y0
    if sol.model is InitCondition.STATIONARY:
        out = np.sin(y * u) + y * np.cos(y * u)
    else:
        out = np.sin(y * u)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Asymptotics:
    k_approx: float
    lambda0_approx: float
    y0_approx: float


def asymptotic_check(a: float, model: InitCondition | str = InitCondition.STATIONARY) -> Asymptotics:
    """Large-a expansions of the coupling, eigenvalue and root.

    Stationary: k ~ 1/a^2 - 1/a^3, lambda0 ~ 1/a^2 - pi^2/a^4,
    y0 ~ pi/a - 2 pi/(a (a + 2)).
    Zero start: k2 ~ 1/a^2 - 3/(2 a^3); setting a y = pi - d in tan(a y) = -y
    gives y0 ~ pi/(a + 1), so lambda0 keeps the same 1/a^2 - pi^2/a^4 form.
    """
    a = _check_a(a)
    model = InitCondition.parse(model)
    lam = 1.0 / a**2 - math.pi**2 / a**4
    if model is InitCondition.STATIONARY:
        return Asymptotics(1.0 / a**2 - 1.0 / a**3, lam, math.pi / a - 2.0 * math.pi / (a * (a + 2.0)))
    return Asymptotics(1.0 / a**2 - 1.5 / a**3, lam, math.pi / (a + 1.0))
