# Where does E[B_n] blow up? Exact enumeration on a fine sigma grid against the
# mean-field transition volatilities (n = 10, tau = 1, rho = 0.025).
from ougrowth import ScaledParams, explosion_scan, unit_start_params
from ougrowth.cli import cmd_thresholds, threshold_sigma_grid

table = cmd_thresholds(0.025, 1.0, 10, [0.01, 0.05, 0.1, 0.2, 0.5, 1.0], with_mc=True)
print(table.to_csv())

# the detector compares E[B_n] to twice its deterministic value; here is the curve
params = unit_start_params(ScaledParams(0.025, 0.0, 0.1, 1.0, 10))
scan = explosion_scan(params, "stationary", threshold_sigma_grid(0.447, ratio=1.1))
for s, m in zip(scan.sigma_grid, scan.means):
    flag = " <- first above threshold" if s == scan.sigma_exp else ""
    print(f"sigma={s:.4f}  E[B_n]={m:12.5g}{flag}")
