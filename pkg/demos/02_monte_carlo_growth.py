# Monte Carlo moments of the growth process over a volatility sweep.
# The product starts at B_1 = 1, so with n = 100 grid points there are 99 factors
# and the deterministic value is 1.025^99.
import math

from ougrowth import ScaledParams, lyapunov_estimate, mc_moments, unit_start_params

N_PATHS = 10_000

print(f"deterministic value: {1.025 ** 99:.4f}")
print(f"{'gamma':>6} {'sigma':>6} {'mean':>12} {'stderr':>10} {'variance':>12} {'lambda_n':>9}")
for gamma in (0.1, 0.25, 0.5):
    for sigma in (0.01, 0.05, 0.10, 0.15, 0.20, 0.30):
        p = unit_start_params(ScaledParams(0.025, sigma, gamma, 0.01, 100))
        est = mc_moments(p, "stationary", N_PATHS, base_seed=0)
        lam = lyapunov_estimate(est, 100) if est.finite else math.inf
        print(f"{gamma:6.2f} {sigma:6.2f} {est.mean:12.4f} {est.stderr:10.4f} {est.variance:12.4g} {lam:9.5f}")

# past sigma ~ 0.2 (gamma = 0.1) the variance runs away first, then the mean
# heavy tails make the last rows unstable from seed to seed
for seed in range(3):
    p = unit_start_params(ScaledParams(0.025, 0.30, 0.1, 0.01, 100))
    print("sigma=0.30 gamma=0.1 seed", seed, "mean", round(mc_moments(p, "stationary", N_PATHS, seed).mean, 1))
