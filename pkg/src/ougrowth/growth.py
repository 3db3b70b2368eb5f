"""Monte Carlo simulation of the growth process x_{i+1} = (1 + mu_i) x_i.

Paths are generated in fixed-size blocks.  Block b draws its normals from
``SeedSequence(base_seed, spawn_key=(b,))`` so path k depends only on
(base_seed, k); the worker count changes scheduling, never results.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ou import InitCondition, ScaledParams, sample_paths, variances

PATH_BLOCK = 4096
THREADS_ENV = "OUGROWTH_THREADS"


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    variance: float
    stderr: float
    n_paths: int
    base_seed: int

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.mean) and np.isfinite(self.variance))

    @classmethod
    def from_moments(cls, mean, variance, n_paths, base_seed) -> "MCEstimate":
        if np.isfinite(variance):
            variance = max(float(variance), 0.0)
            stderr = math.sqrt(variance / n_paths)
        else:
            stderr = math.inf
        return cls(float(mean), float(variance), stderr, int(n_paths), int(base_seed))


@dataclass(frozen=True)
class ExplosionScanResult:
    sigma_grid: np.ndarray
    means: np.ndarray
    threshold: float
    sigma_exp: float | None
    method: str
    estimates: list = field(default_factory=list)

    def grid_step_at(self, sigma: float) -> float:
        """Spacing of the grid cell ending at ``sigma`` (one grid step)."""
        g = self.sigma_grid
        i = int(np.searchsorted(g, sigma))
        i = min(max(i, 1), len(g) - 1)
        return float(g[i] - g[i - 1])


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def unit_start_params(params: ScaledParams) -> ScaledParams:
    """Parameters whose product matches B_n of the recursion started at B_1 = 1.

    That recursion multiplies n - 1 factors, so the deterministic value is
    (1 + rho)^(n-1).  Published E[B_n] values quoted with that convention need this
    shift.
    """
    if params.n < 2:
        raise ValueError("B_n with B_1 = 1 needs n >= 2")
    return params.with_(n=params.n - 1)


def log_growth_increments(params: ScaledParams, init: InitCondition, paths: np.ndarray) -> np.ndarray:
    """log(1 + rho exp(Z_i - var(Z_i)/2)) evaluated without overflow."""
    var = variances(params, init)
    return np.logaddexp(0.0, math.log(params.rho) + paths - 0.5 * var)


def simulate_terminal(params: ScaledParams, init: InitCondition | str, rng: np.random.Generator) -> float:
    """Terminal value prod_{i<n} (1 + mu_i) for one path; +inf on overflow."""
    init = InitCondition.parse(init)
    eps = rng.standard_normal(params.n)
    logb = log_growth_increments(params, init, sample_paths(params, init, eps)).sum()
    with np.errstate(over="ignore"):
        return float(np.exp(logb))


def _block_rng(base_seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(block,)))


def terminal_values(params: ScaledParams, init: InitCondition | str, start: int, stop: int,
                    base_seed: int) -> np.ndarray:
    """Terminal values of paths start..stop-1 (path k is a pure function of (base_seed, k))."""
    init = InitCondition.parse(init)
    out = []
    for block in range(start // PATH_BLOCK, (stop - 1) // PATH_BLOCK + 1):
        eps = _block_rng(base_seed, block).standard_normal((PATH_BLOCK, params.n))
        lo = max(start - block * PATH_BLOCK, 0)
        hi = min(stop - block * PATH_BLOCK, PATH_BLOCK)
        logb = log_growth_increments(params, init, sample_paths(params, init, eps[lo:hi])).sum(axis=1)
        with np.errstate(over="ignore"):
            out.append(np.exp(logb))
    return np.concatenate(out) if out else np.empty(0)


def _block_stats(params, init, base_seed, n_paths, block):
    start = block * PATH_BLOCK
    values = terminal_values(params, init, start, min(start + PATH_BLOCK, n_paths), base_seed)
    count = len(values)
    if not np.all(np.isfinite(values)):
        return count, math.inf, math.inf
    mean = float(np.mean(values))
    with np.errstate(over="ignore"):
        m2 = float(np.sum((values - mean) ** 2))
    return count, mean, m2


def mc_moments(params: ScaledParams, init: InitCondition | str, n_paths: int, base_seed: int = 0,
               workers: int | None = None) -> MCEstimate:
    """Sample mean and unbiased variance of the terminal value over ``n_paths`` paths."""
    init = InitCondition.parse(init)
    if n_paths < 2:
        raise ValueError("n_paths must be at least 2")
    workers = default_workers() if workers is None else max(1, int(workers))
    blocks = range((n_paths + PATH_BLOCK - 1) // PATH_BLOCK)
    if workers == 1:
        stats = [_block_stats(params, init, base_seed, n_paths, b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda b: _block_stats(params, init, base_seed, n_paths, b), blocks))

    if any(not np.isfinite(mu) for _, mu, _ in stats):
        return MCEstimate(math.inf, math.inf, math.inf, n_paths, base_seed)
    # Chan et al. pairwise combination in fixed block order.
    count, mean, m2 = 0, 0.0, 0.0
    for c, mu, s in stats:
        total = count + c
        delta = mu - mean
        mean = mean + delta * c / total
        with np.errstate(over="ignore"):
            m2 = m2 + s + delta * delta * count * c / total
        count = total
    return MCEstimate.from_moments(mean, m2 / (count - 1), count, base_seed)


def lyapunov_estimate(est: MCEstimate, n: int) -> float:
    """Finite-n growth rate (1/n) log(mean)."""
    if not np.isfinite(est.mean) or est.mean <= 0:
        raise ValueError(f"growth rate undefined for mean={est.mean}")
    return math.log(est.mean) / n


def explosion_scan(params: ScaledParams, init: InitCondition | str, sigma_grid, n_paths: int = 10_000,
                   base_seed: int = 0, threshold_factor: float = 2.0, method: str = "exact",
                   workers: int | None = None) -> ExplosionScanResult:
    """Smallest grid sigma where E[x_n] exceeds threshold_factor * (1 + rho)^n.

    ``method="exact"`` uses lattice enumeration (n up to the enumeration cap);
    ``method="mc"`` uses ``mc_moments``.  Monte Carlo means are biased low in the
    heavy-tailed regime right past the threshold, so the exact route is the
    reliable detector whenever n is small enough.
    """
    from .lattice import exact_expectation

    init = InitCondition.parse(init)
    grid = np.asarray(sigma_grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("sigma_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(grid) <= 0) and len(grid) > 1:
        raise ValueError("sigma_grid must be strictly increasing")
    if not threshold_factor > 1:
        raise ValueError("threshold_factor must exceed 1")
    if method not in ("exact", "mc"):
        raise ValueError(f"unknown method {method!r}")

    threshold = threshold_factor * (1.0 + params.rho) ** params.n
    means, estimates = [], []
    for s in grid:
        p = params.with_(sigma=float(s))
        if method == "exact":
            with np.errstate(over="ignore"):
                means.append(float(np.exp(exact_expectation(p, init).log_m_n)))
        else:
            est = mc_moments(p, init, n_paths, base_seed, workers=workers)
            estimates.append(est)
            means.append(est.mean)
    means = np.asarray(means)
    above = np.nonzero(means > threshold)[0]
    sigma_exp = float(grid[above[0]]) if len(above) else None
    return ExplosionScanResult(grid, means, threshold, sigma_exp, method, estimates)
