# E[x_n] as a lattice-gas partition function: exact values, density and
# entropy per site, and a Monte Carlo cross-check.
from ougrowth import ScaledParams, density, entropy_per_site, exact_expectation, mc_moments

p2 = ScaledParams(0.025, 0.2, 0.5, 1.0, 2)
print("two sites, stationary:", exact_expectation(p2, "stationary").m_n)
print("two sites, zero start:", exact_expectation(p2, "zero").m_n)

# fixed (beta, a) while n grows: (1/n) log M_n settles towards its limit
for n in (6, 10, 14, 18, 22):
    p = ScaledParams.from_scaled(0.025, beta=5.0, a=1.0, n=n)
    r = exact_expectation(p, "stationary")
    print(f"n={n:2d}  (1/n) log M_n = {r.log_m_n / n:.6f}  d = {density(p, 'stationary', r):.5f}"
          f"  s = {entropy_per_site(p, 'stationary'):.5f}")

# the exact value against 1e5 simulated paths
p = ScaledParams(0.025, 0.4, 0.2, 1.0, 12)
exact = exact_expectation(p, "stationary").m_n
est = mc_moments(p, "stationary", 100_000, base_seed=1)
print(f"\nn=12: exact {exact:.6f}  MC {est.mean:.6f} +- {est.stderr:.6f}")

# canonical weights: probability of k occupied sites
r = exact_expectation(ScaledParams.from_scaled(0.025, 12.0, 1.0, 16), "stationary")
print("occupation law at beta=12 (two humps, gas and liquid):")
print(" ".join(f"{w:.3f}" for w in r.occupation_weights()))
