"""Curie-Weiss (lattice van der Waals) solution of the constant-profile problem.

    lambda_vdW(rho, beta) = sup_{0<=x<=1} { log(rho) x + k beta x^2 - I(x) },
    I(x) = x log x + (1 - x) log(1 - x).

Stationary points satisfy log(rho) = -2 k beta x + log(x / (1 - x)).  The
roots are searched in the logit variable u = log(x / (1 - x)), where the
equation reads u - 2 k beta expit(u) = log(rho) and every root lies in
[log(rho), log(rho) + 2 k beta].
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, xlogy

from .ou import InitCondition
from .spectral import coupling, upper_coupling

COEXISTENCE_TOL = 1e-12
RHO_CRITICAL = math.exp(-2.0)


class Phase(enum.Enum):
    UNIQUE = "unique"
    GAS = "gas"
    LIQUID = "liquid"
    COEXISTENCE = "coexistence"


@dataclass(frozen=True)
class PhasePoint:
    rho: float
    beta: float
    k: float
    x_star: float
    lambda_vdw: float
    phase: Phase
    x1: float | None = None
    x2: float | None = None
    a: float | None = None
    model: InitCondition | None = None
    logit_star: float | None = None


def entropy_density(x):
    """I(x) = x log x + (1-x) log(1-x) with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    return xlogy(x, x) + xlogy(1.0 - x, 1.0 - x)


def vdw_objective(x, rho: float, beta: float, k: float):
    """log(rho) x + k beta x^2 - I(x)."""
    x = np.asarray(x, dtype=float)
    return math.log(rho) * x + k * beta * x * x - entropy_density(x)


def _stationary_roots(log_rho: float, kb: float) -> list[float]:
    """All roots (logit scale) of u - 2 kb expit(u) = log_rho, ascending."""
    f = lambda u: u - 2.0 * kb * expit(u) - log_rho
    lo, hi = log_rho, log_rho + 2.0 * kb
    # padded ends keep the outer signs strict when expit(hi) rounds to 1
    knots = [lo - 1.0]
    if kb > 2.0:
        # f'(u) = 0 where x(1 - x) = 1 / (2 kb)
        half = 0.5 * math.sqrt(1.0 - 2.0 / kb)
        for x in (0.5 - half, 0.5 + half):
            u = math.log(x / (1.0 - x))
            if lo < u < hi:
                knots.append(u)
    knots.append(hi + 1.0)
    roots = []
    for left, right in zip(knots[:-1], knots[1:]):
        fl, fr = f(left), f(right)
        if fl == 0.0:
            r = left
        elif fr == 0.0:
            r = right
        elif fl * fr < 0:
            r = brentq(f, left, right, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        else:
            continue
        if not roots or abs(r - roots[-1]) > 1e-12 * max(1.0, abs(r)):
            roots.append(r)
    if not roots:
        raise RuntimeError(f"no stationary point found: log(rho)={log_rho}, k*beta={kb}")
    return roots


def _lambda_from_logit(u: float, kb: float) -> float:
    # -k beta x^2 - log(1 - x), with -log(1 - x) = log(1 + e^u)
    x = expit(u)
    return float(-kb * x * x + np.logaddexp(0.0, u))


def solve_mean_field(rho: float, beta: float, k: float, a: float | None = None,
                     model: InitCondition | None = None) -> PhasePoint:
    """Maximiser x_star and lambda_vdW = -k beta x_star^2 - log(1 - x_star)."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not beta >= 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    log_rho = math.log(rho)
    kb = k * beta
    roots = _stationary_roots(log_rho, kb)

    if beta <= 2.0 / k:
        u = roots[0] if len(roots) == 1 else max(roots, key=lambda r: _lambda_from_logit(r, kb))
        return PhasePoint(rho, beta, k, float(expit(u)), _lambda_from_logit(u, kb), Phase.UNIQUE, a=a, model=model,
                          logit_star=float(u))

    u1, u2 = roots[0], roots[-1]
    x1, x2 = float(expit(u1)), float(expit(u2))
    lam1, lam2 = _lambda_from_logit(u1, kb), _lambda_from_logit(u2, kb)
    gap = log_rho + kb
    if abs(gap) < COEXISTENCE_TOL:
        phase, u, lam = Phase.COEXISTENCE, u1, max(lam1, lam2)
    elif gap < 0:
        phase, u, lam = Phase.GAS, u1, lam1
    else:
        phase, u, lam = Phase.LIQUID, u2, lam2
    x_star = float(expit(u))
    # the sign rule must pick the global maximiser
    if lam < max(lam1, lam2) - 1e-9 * max(1.0, abs(lam)):
        raise RuntimeError(
            f"maximiser mismatch at rho={rho}, beta={beta}, k={k}: "
            f"phase={phase.value}, lambda(x1)={lam1}, lambda(x2)={lam2}")
    return PhasePoint(rho, beta, k, x_star, lam, phase, x1=x1, x2=x2, a=a, model=model, logit_star=float(u))


@dataclass(frozen=True)
class LyapunovBounds:
    lower: float
    upper: float
    lower_point: PhasePoint
    upper_point: PhasePoint


def lyapunov_bounds(rho: float, beta: float, a: float, model: InitCondition | str = InitCondition.STATIONARY) -> LyapunovBounds:
    """Mean-field lower (coupling k) and upper (coupling lambda0) bounds on the growth rate."""
    model = InitCondition.parse(model)
    lo = solve_mean_field(rho, beta, coupling(a, model), a=a, model=model)
    hi = solve_mean_field(rho, beta, upper_coupling(a, model), a=a, model=model)
    return LyapunovBounds(lo.lambda_vdw, hi.lambda_vdw, lo, hi)


def weak_bounds(rho: float, beta: float, a: float, model: InitCondition | str = InitCondition.STATIONARY) -> tuple[float, float]:
    """(k beta + log rho, k beta + log(1 + rho)) with k the lower-bound coupling."""
    kk = coupling(a, InitCondition.parse(model))
    return kk * beta + math.log(rho), kk * beta + math.log1p(rho)


def transition_beta(rho: float, k: float) -> float:
    """beta on the coexistence line log(rho) + k beta = 0."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    if rho > RHO_CRITICAL * (1.0 + 1e-12):
        raise ValueError(f"no transition: above critical point (rho={rho} > e^-2)")
    return -math.log(rho) / k


def coexistence_gap(beta: float, k: float) -> float:
    """Largest nonnegative solution of Delta = tanh(k beta Delta / 2)."""
    c = 0.5 * k * beta
    if c <= 1.0:
        return 0.0
    f = lambda d: d - math.tanh(c * d)
    return brentq(f, 1e-300, 1.0, xtol=1e-16, rtol=4 * np.finfo(float).eps)


def sigma_threshold(beta_cr: float, n: int, tau: float) -> float:
    """Volatility sqrt(2 beta_cr / (n^2 tau)) matching a given beta."""
    if beta_cr < 0 or n <= 0 or tau <= 0:
        raise ValueError("need beta_cr >= 0, n > 0, tau > 0")
    return math.sqrt(2.0 * beta_cr / (n * n * tau))


def transition_curve(rho, k: float) -> np.ndarray:
    """Coexistence temperature T = 1/beta_cr = k / (-log rho) on a rho grid below e^-2."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0) or np.any(rho > RHO_CRITICAL * (1.0 + 1e-12)):
        raise ValueError("rho grid must lie in (0, e^-2]")
    return -k / np.log(rho)
