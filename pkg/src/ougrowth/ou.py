"""Ornstein-Uhlenbeck driver: parameters, exact covariances and path sampling.

The process dZ = -gamma Z dt + sigma dW is observed on the grid t_i = i * tau,
i = 0, ..., n-1.  Indexing is 0-based throughout the package: the growth
product runs over the same n grid points, prod_{i=0}^{n-1} (1 + mu_i).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np


class InitCondition(enum.Enum):
    """Initial law of the OU driver."""

    STATIONARY = "stationary"  # Z_0 ~ N(0, sigma^2 / (2 gamma))
    ZERO_START = "zero"  # Z_0 = 0

    @classmethod
    def parse(cls, value: "InitCondition | str") -> "InitCondition":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"stationary": cls.STATIONARY, "1": cls.STATIONARY, "model1": cls.STATIONARY,
                   "zero": cls.ZERO_START, "zerostart": cls.ZERO_START, "zero_start": cls.ZERO_START,
                   "2": cls.ZERO_START, "model2": cls.ZERO_START}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown initial condition {value!r}; use 'stationary' or 'zero'") from None


@dataclass(frozen=True)
class ScaledParams:
    """Model parameters.

    Parameters
    ----------
    rho : float
        Mean growth multiplier, E[mu_i] = rho.
    sigma : float
        OU volatility (time^-1/2).
    gamma : float
        Mean-reversion rate (time^-1).
    tau : float
        Grid spacing.
    n : int
        Number of grid points, which is also the number of growth factors.
    """

    rho: float
    sigma: float
    gamma: float
    tau: float
    n: int

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def beta(self) -> float:
        """Inverse temperature 0.5 * sigma^2 * tau * n^2."""
        return 0.5 * self.sigma**2 * self.tau * self.n**2

    @property
    def a(self) -> float:
        """Interaction range parameter gamma * tau * n."""
        return self.gamma * self.tau * self.n

    @property
    def z(self) -> float:
        """One-step autoregression coefficient exp(-gamma * tau)."""
        return float(np.exp(-self.gamma * self.tau))

    @property
    def stationary_variance(self) -> float:
        return self.sigma**2 / (2.0 * self.gamma)

    def with_(self, **changes) -> "ScaledParams":
        return replace(self, **changes)

    @classmethod
    def from_scaled(cls, rho: float, beta: float, a: float, n: int, tau: float = 1.0) -> "ScaledParams":
        """Build parameters that realise given (beta, a) at lattice size n."""
        if beta < 0 or a <= 0:
            raise ValueError("need beta >= 0 and a > 0")
        sigma = np.sqrt(2.0 * beta / (tau * n**2))
        return cls(rho=rho, sigma=float(sigma), gamma=a / (tau * n), tau=tau, n=n)


@dataclass(frozen=True)
class OUPath:
    values: np.ndarray
    params: ScaledParams
    init: InitCondition

    def __post_init__(self):
        if len(self.values) != self.params.n:
            raise ValueError("path length must equal params.n")

    def __len__(self):
        return len(self.values)


def _check_index(params: ScaledParams, *idx: int) -> None:
    for i in idx:
        if not 0 <= i < params.n:
            raise IndexError(f"step index {i} outside [0, {params.n})")


def variance_at(params: ScaledParams, init: InitCondition | str, i: int) -> float:
    """var(Z_{t_i}) with t_i = i * tau."""
    init = InitCondition.parse(init)
    _check_index(params, i)
    v = params.stationary_variance
    if init is InitCondition.STATIONARY:
        return v
    return float(-v * np.expm1(-2.0 * params.gamma * params.tau * i))


def covariance(params: ScaledParams, init: InitCondition | str, i: int, j: int) -> float:
    """cov(Z_{t_i}, Z_{t_j})."""
    init = InitCondition.parse(init)
    _check_index(params, i, j)
    return float(covariance_matrix(params, init, indices=np.array([i, j]))[0, 1])


def variances(params: ScaledParams, init: InitCondition | str) -> np.ndarray:
    """Vector of var(Z_{t_i}) for i = 0..n-1."""
    init = InitCondition.parse(init)
    i = np.arange(params.n)
    v = params.stationary_variance
    if init is InitCondition.STATIONARY:
        return np.full(params.n, v)
    return -v * np.expm1(-2.0 * params.gamma * params.tau * i)


def covariance_matrix(params: ScaledParams, init: InitCondition | str, indices=None) -> np.ndarray:
    """Full covariance matrix of (Z_{t_i}) over the grid (or a subset of indices)."""
    init = InitCondition.parse(init)
    i = np.arange(params.n) if indices is None else np.asarray(indices)
    gt = params.gamma * params.tau
    v = params.stationary_variance
    lag = np.abs(i[:, None] - i[None, :])
    if init is InitCondition.STATIONARY:
        return v * np.exp(-gt * lag)
    # e^{-gt|i-j|} - e^{-gt(i+j)} = e^{-gt|i-j|} (1 - e^{-2 gt min(i,j)})
    lo = np.minimum(i[:, None], i[None, :])
    return -v * np.exp(-gt * lag) * np.expm1(-2.0 * gt * lo)


def sample_paths(params: ScaledParams, init: InitCondition | str, normals: np.ndarray) -> np.ndarray:
    """Map standard normals of shape (..., n) to exact OU paths of the same shape.

    Column 0 seeds Z_0 (ignored for a zero start); column i >= 1 drives the
    innovation from Z_{i-1} to Z_i.
    """
    init = InitCondition.parse(init)
    normals = np.asarray(normals, dtype=float)
    if normals.shape[-1] != params.n:
        raise ValueError("last axis of normals must have length params.n")
    v = params.stationary_variance
    z = params.z
    step_sd = np.sqrt(-v * np.expm1(-2.0 * params.gamma * params.tau))
    out = np.empty_like(normals)
    if init is InitCondition.STATIONARY:
        out[..., 0] = np.sqrt(v) * normals[..., 0]
    else:
        out[..., 0] = 0.0
    for i in range(1, params.n):
        out[..., i] = z * out[..., i - 1] + step_sd * normals[..., i]
    return out


def sample_path(params: ScaledParams, init: InitCondition | str, rng: np.random.Generator) -> OUPath:
    """Draw one path exactly in distribution (no time-discretisation error)."""
    init = InitCondition.parse(init)
    eps = rng.standard_normal(params.n)
    return OUPath(values=sample_paths(params, init, eps), params=params, init=init)
