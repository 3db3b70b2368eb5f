# Couplings k(a), k2(a) and the top kernel eigenvalues that set the two bounds.
import numpy as np

from ougrowth import asymptotic_check, eigenfunction, k2_coupling, k_coupling, solve_eigen

print(f"{'a':>5} {'y0':>10} {'lambda0':>10} {'k':>10} {'y0_2':>10} {'lambda0_2':>10} {'k2':>10}")
for a in (0.1, 0.5, 1.0, 2.0, 3.0):
    s1, s2 = solve_eigen(a, "stationary"), solve_eigen(a, "zero")
    print(f"{a:5.1f} {s1.y0:10.6g} {s1.lambda0:10.6g} {k_coupling(a):10.6g} "
          f"{s2.y0:10.6g} {s2.lambda0:10.6g} {k2_coupling(a):10.6g}")

# how far apart are the two stationary couplings?
grid = np.geomspace(0.01, 100, 400)
gap = np.array([(solve_eigen(a).lambda0 - k_coupling(a)) / solve_eigen(a).lambda0 for a in grid])
print(f"\nmax relative gap {gap.max():.4f} at a = {grid[gap.argmax()]:.2f}")

# large a: both scale like 1/a^2
for a in (10.0, 100.0, 1000.0):
    ap = asymptotic_check(a)
    print(f"a={a:6.0f}  a^2 lambda0 = {a * a * solve_eigen(a).lambda0:.6f}  expansion {a * a * ap.lambda0_approx:.6f}")

sol = solve_eigen(1.0)
u = np.linspace(0, 1.0, 5)
print("\neigenfunction at a=1:", np.round(eigenfunction(sol, u), 5))
