# The van der Waals picture: two competing densities and a jump in slope of the
# growth rate where log(rho) + k beta = 0.
import numpy as np

from ougrowth import (coexistence_gap, k_coupling, lyapunov_bounds, solve_mean_field, transition_beta,
                      transition_curve, upper_coupling)

rho, a = 0.025, 1.0
k = k_coupling(a)
beta_cr = transition_beta(rho, k)
print(f"beta_cr (lower coupling) = {beta_cr:.4f}, (upper) = {transition_beta(rho, upper_coupling(a, 'stationary')):.4f}")

for beta in (9.0, 9.9, 10.0, beta_cr, 10.03, 10.1, 10.2, 11.0):
    p = solve_mean_field(rho, beta, k)
    print(f"beta={beta:8.4f}  x1={p.x1:.3f}  x2={p.x2:.3f}  lambda={p.lambda_vdw:.4f}  {p.phase.value}")

# on the curve the two densities are (1 -+ Delta)/2
d = coexistence_gap(beta_cr, k)
print(f"\nDelta = {d:.6f}: densities {(1 - d) / 2:.6f}, {(1 + d) / 2:.6f}")

# bounds on the growth rate across the transition
for beta in np.linspace(2, 14, 7):
    b = lyapunov_bounds(rho, beta, a, "stationary")
    print(f"beta={beta:5.1f}  lower={b.lower:.5f}  upper={b.upper:.5f}")

# transition temperature T = 1/beta_cr against rho, for three ranges
rhos = np.geomspace(1e-4, np.exp(-2), 6)
for a in (0.5, 1.0, 2.0):
    print(f"a={a}: T =", np.round(transition_curve(rhos, k_coupling(a)), 4))
