"""Exact E[x_n] as the grand partition function of an n-site lattice gas.

Expanding prod_i (1 + mu_i) over occupied sites S gives

    M_n = sum_S rho^|S| exp(sum_{a<b in S} cov(Z_a, Z_b)),

a lattice gas with pair energies -cov(Z_a, Z_b) at fugacity rho.  Sums are
kept in log space throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .ou import InitCondition, ScaledParams, covariance_matrix

MAX_SITES = 24
NAIVE_MAX_SITES = 16


@dataclass(frozen=True)
class PartitionResult:
    """log M_n together with the canonical coefficients log Z_k(n), k = 0..n."""

    log_m_n: float
    canonical: np.ndarray
    n: int
    log_rho: float

    @property
    def m_n(self) -> float:
        with np.errstate(over="ignore"):
            return float(np.exp(self.log_m_n))

    def occupation_weights(self) -> np.ndarray:
        """Probability of k occupied sites, k = 0..n."""
        w = self.canonical + self.log_rho * np.arange(self.n + 1)
        return np.exp(w - logsumexp(w))


def _check_size(n: int, cap: int) -> None:
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap of {cap} sites")


def pair_energies(cov: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Interaction energy and occupation number of every subset of sites.

    Entry ``s`` refers to the subset whose bit j is set iff site j is occupied.
    Built site by site: adding site m to S shifts the energy by the single
    row sum sum_{j in S} cov[m, j], which is carried along for the sites not
    yet added.  Cost O(n 2^n).
    """
    n = cov.shape[0]
    energy = np.zeros(1)
    count = np.zeros(1, dtype=np.int8)
    # field[t - m] holds sum_{j in S} cov[t, j] for the sites t >= m still to come
    field = np.zeros((n, 1))
    for m in range(n):
        h = field[0]
        energy = np.concatenate([energy, energy + h])
        count = np.concatenate([count, count + 1])
        rest = field[1:]
        field = np.concatenate([rest, rest + cov[m + 1:, m][:, None]], axis=1)
    return energy, count


def _result(energy, count, n, rho) -> PartitionResult:
    canonical = np.array([logsumexp(energy[count == k]) for k in range(n + 1)])
    log_rho = math.log(rho)
    log_m = float(logsumexp(canonical + log_rho * np.arange(n + 1)))
    return PartitionResult(log_m, canonical, n, log_rho)


def exact_expectation(params: ScaledParams, init: InitCondition | str, max_sites: int = MAX_SITES) -> PartitionResult:
    """Exact M_n = E[prod_{i<n} (1 + mu_i)] by enumerating all 2^n configurations."""
    init = InitCondition.parse(init)
    _check_size(params.n, max_sites)
    energy, count = pair_energies(covariance_matrix(params, init))
    return _result(energy, count, params.n, params.rho)


def exact_expectation_naive(params: ScaledParams, init: InitCondition | str) -> PartitionResult:
    """Same quantity from explicit occupation vectors: E(b) = (b'Cb - b'diag C) / 2."""
    init = InitCondition.parse(init)
    _check_size(params.n, NAIVE_MAX_SITES)
    n = params.n
    cov = covariance_matrix(params, init)
    masks = np.arange(2**n)
    occ = ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
    energy = 0.5 * (np.einsum("si,ij,sj->s", occ, cov, occ) - occ @ np.diag(cov))
    return _result(energy, occ.sum(axis=1).astype(int), n, params.rho)


def density(params: ScaledParams, init: InitCondition | str, result: PartitionResult | None = None) -> float:
    """Mean site occupation rho d(log M_n)/d(rho) / n, from the canonical coefficients."""
    res = exact_expectation(params, init) if result is None else result
    return float(np.dot(np.arange(res.n + 1), res.occupation_weights()) / res.n)


def _log_m_at_beta(params: ScaledParams, init: InitCondition, beta: float) -> float:
    # cov scales linearly with beta at fixed (a, n, tau)
    sigma = math.sqrt(2.0 * beta / (params.tau * params.n**2))
    return exact_expectation(params.with_(sigma=sigma), init).log_m_n


def entropy_per_site(params: ScaledParams, init: InitCondition | str, rel_step: float = 1e-3) -> float:
    """Entropy per site s = (1/n) d(T log M_n)/dT at fixed rho, minus d log rho.

    With T = 1/beta, d(T log M)/dT = log M - beta d(log M)/d(beta); the beta
    derivative is a centred difference at steps h and h/2 combined by
    Richardson extrapolation.
    """
    init = InitCondition.parse(init)
    res = exact_expectation(params, init)
    beta = params.beta
    slope_term = 0.0
    if beta > 0:
        h = min(rel_step * max(beta, 1.0), 0.5 * beta)

        def central(step):
            return (_log_m_at_beta(params, init, beta + step) - _log_m_at_beta(params, init, beta - step)) / (2 * step)

        d1, d2 = central(h), central(h / 2)
        slope_term = beta * (4.0 * d2 - d1) / 3.0
    d = density(params, init, res)
    return (res.log_m_n - slope_term) / params.n - d * math.log(params.rho)
