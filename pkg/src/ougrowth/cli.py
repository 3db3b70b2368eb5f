"""Command-line access to every computational route.

Each subcommand writes one table (CSV by default, JSON with ``--format json``)
to stdout or ``--out``.  Exit status is 0 when every row is finite/converged,
2 when some rows failed (see the ``status`` column).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from importlib.metadata import PackageNotFoundError, version

import numpy as np

from . import growth, lattice, meanfield, spectral, variational
from .ou import InitCondition, ScaledParams

SIG_DIGITS = 9


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if not math.isfinite(v):
            return format_value(v)
        return float(format_value(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


class Table:
    def __init__(self, columns: list[str]):
        self.columns = list(columns)
        self.rows: list[dict] = []

    def add(self, **row):
        self.rows.append(row)

    @property
    def ok(self) -> bool:
        return all(r.get("status", "ok") == "ok" for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([format_value(r.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self, metadata: dict) -> str:
        rows = [{c: _json_value(r.get(c)) for c in self.columns} for r in self.rows]
        return json.dumps({"metadata": metadata, "rows": rows}, indent=2, sort_keys=False) + "\n"


def parse_csv(text: str) -> list[dict]:
    """Read a table written by this CLI back into typed values."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = {}
        for k, v in row.items():
            if v == "":
                parsed[k] = None
            elif v in ("true", "false"):
                parsed[k] = v == "true"
            else:
                try:
                    parsed[k] = float(v)
                except ValueError:
                    parsed[k] = v
        out.append(parsed)
    return out


# -- commands ---------------------------------------------------------------

def cmd_table_couplings(a_list) -> Table:
    t = Table(["a", "y0", "lambda0", "k", "y0_2", "lambda0_2", "k2", "status"])
    for a in a_list:
        s1 = spectral.solve_eigen(a, InitCondition.STATIONARY)
        s2 = spectral.solve_eigen(a, InitCondition.ZERO_START)
        t.add(a=a, y0=s1.y0, lambda0=s1.lambda0, k=spectral.k_coupling(a),
              y0_2=s2.y0, lambda0_2=s2.lambda0, k2=spectral.k2_coupling(a), status="ok")
    return t


def _coupling_value(a, model, choice):
    return spectral.coupling(a, model) if choice == "k" else spectral.upper_coupling(a, model)


def cmd_meanfield(rho, a, beta_list, model, coupling_choice="k", include_transition=True) -> Table:
    model = InitCondition.parse(model)
    kk = _coupling_value(a, model, coupling_choice)
    betas = [float(b) for b in beta_list]
    if include_transition and rho <= meanfield.RHO_CRITICAL:
        betas.append(meanfield.transition_beta(rho, kk))
        betas.sort()
    t = Table(["beta", "x1", "x2", "x_star", "lambda_vdw", "phase", "coexistence", "status"])
    for b in betas:
        p = meanfield.solve_mean_field(rho, b, kk, a=a, model=model)
        t.add(beta=b, x1=p.x1, x2=p.x2, x_star=p.x_star, lambda_vdw=p.lambda_vdw, phase=p.phase.value,
              coexistence=p.phase is meanfield.Phase.COEXISTENCE, status="ok")
    return t


def threshold_sigma_grid(sigma_hint: float, ratio: float = 1.05, lo_factor: float = 0.5, hi_factor: float = 2.5) -> np.ndarray:
    """Geometric volatility grid around a mean-field threshold estimate."""
    count = int(math.ceil(math.log(hi_factor / lo_factor) / math.log(ratio))) + 1
    return sigma_hint * lo_factor * ratio ** np.arange(count)


def cmd_thresholds(rho, tau, n, gamma_list, with_mc=False, model=InitCondition.STATIONARY,
                   method="exact", n_paths=10_000, base_seed=0, threshold_factor=2.0, grid_ratio=1.05) -> Table:
    """Transition temperatures/volatilities per mean-reversion rate.

    With ``with_mc`` the explosion threshold of E[B_n] (B_1 = 1, so n - 1
    growth factors) is scanned on a geometric grid of ratio ``grid_ratio``.
    """
    model = InitCondition.parse(model)
    cols = ["gamma", "a", "T_cr_low", "T_cr_hi", "sigma_cr_low", "sigma_cr_hi"]
    if with_mc:
        cols += ["sigma_exp", "grid_step"]
    t = Table(cols + ["status"])
    for g in gamma_list:
        a = g * tau * n
        b_lo = meanfield.transition_beta(rho, spectral.coupling(a, model))
        b_hi = meanfield.transition_beta(rho, spectral.upper_coupling(a, model))
        row = dict(gamma=g, a=a, T_cr_low=1.0 / b_lo, T_cr_hi=1.0 / b_hi,
                   sigma_cr_low=meanfield.sigma_threshold(b_lo, n, tau),
                   sigma_cr_hi=meanfield.sigma_threshold(b_hi, n, tau), status="ok")
        if with_mc:
            params = growth.unit_start_params(ScaledParams(rho, 0.0, g, tau, n))
            grid = threshold_sigma_grid(row["sigma_cr_hi"], ratio=grid_ratio)
            scan = growth.explosion_scan(params, model, grid, n_paths=n_paths, base_seed=base_seed,
                                         threshold_factor=threshold_factor, method=method)
            row["sigma_exp"] = scan.sigma_exp
            row["grid_step"] = scan.grid_step_at(scan.sigma_exp) if scan.sigma_exp is not None else None
            if scan.sigma_exp is None:
                row["status"] = "no-explosion"
        t.add(**row)
    return t


def cmd_mc(rho, gamma, tau, n, sigma_list, model, n_paths, base_seed, unit_start=False, workers=None) -> Table:
    """Moments of the terminal value over a volatility sweep.

    ``unit_start`` treats n as the index of B_n with B_1 = 1 (n - 1 factors)."""
    model = InitCondition.parse(model)
    t = Table(["sigma", "mean", "variance", "stderr", "lambda_n", "n_paths", "seed", "status"])
    for s in sigma_list:
        params = ScaledParams(rho, s, gamma, tau, n)
        if unit_start:
            params = growth.unit_start_params(params)
        est = growth.mc_moments(params, model, n_paths, base_seed, workers=workers)
        lam = growth.lyapunov_estimate(est, n) if est.finite and est.mean > 0 else math.inf
        t.add(sigma=s, mean=est.mean, variance=est.variance, stderr=est.stderr, lambda_n=lam,
              n_paths=est.n_paths, seed=base_seed, status="ok" if est.finite else "non-finite")
    return t


def cmd_exact(rho, sigma_list, gamma, tau, n_list, model) -> Table:
    model = InitCondition.parse(model)
    t = Table(["n", "sigma", "beta", "a", "M_n", "log_M_n", "lambda_n", "density", "entropy", "status"])
    for n in n_list:
        for s in sigma_list:
            params = ScaledParams(rho, s, gamma, tau, int(n))
            res = lattice.exact_expectation(params, model)
            t.add(n=int(n), sigma=s, beta=params.beta, a=params.a, M_n=res.m_n, log_M_n=res.log_m_n,
                  lambda_n=res.log_m_n / n, density=lattice.density(params, model, res),
                  entropy=lattice.entropy_per_site(params, model),
                  status="ok" if math.isfinite(res.m_n) else "non-finite")
    return t


def cmd_variational(rho, a, beta_list, model, grid_m=512, damping=0.5, max_iter=20_000):
    """Returns the summary table and the optimal profiles keyed by beta."""
    model = InitCondition.parse(model)
    t = Table(["beta", "lambda_star", "lower", "upper", "density", "start", "iterations", "residual",
               "eps_q", "converged", "near_coexistence", "status"])
    profiles = {}
    for b in beta_list:
        r = variational.solve_variational(rho, b, a, model, grid_m=grid_m, damping=damping,
                                          max_iter=max_iter, estimate_error=True)
        bounds = meanfield.lyapunov_bounds(rho, b, a, model)
        profiles[b] = r.profile
        t.add(beta=b, lambda_star=r.lambda_value, lower=bounds.lower, upper=bounds.upper,
              density=r.profile.total, start=r.start, iterations=r.iterations, residual=r.residual,
              eps_q=r.quadrature_error, converged=r.converged, near_coexistence=r.near_coexistence,
              status="ok" if r.converged else "not-converged")
    return t, profiles


def cmd_phase_curve(a_list, rho_grid, model) -> Table:
    model = InitCondition.parse(model)
    t = Table(["a", "coupling", "rho", "T", "status"])
    for a in a_list:
        for name in ("k", "lambda0"):
            kk = _coupling_value(a, model, name)
            for r, temp in zip(rho_grid, meanfield.transition_curve(rho_grid, kk)):
                t.add(a=a, coupling=name, rho=r, T=temp, status="ok")
    return t


# -- argument parsing -------------------------------------------------------

def _positive(v):
    x = float(v)
    if not x > 0 or not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {v!r}")
    return x


def _nonneg(v):
    x = float(v)
    if not x >= 0 or not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {v!r}")
    return x


def _posint(v):
    x = int(v)
    if x < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v!r}")
    return x


def _model(v):
    try:
        return InitCondition.parse(v)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (stdout when omitted)")
    common.add_argument("--model", type=_model, default=InitCondition.STATIONARY,
                        help="stationary | zero")

    p = argparse.ArgumentParser(prog="ougrowth", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=_version())
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("couplings", parents=[common], help="couplings, roots and eigenvalues per a")
    s.add_argument("--a", type=_positive, nargs="*", default=[0.1, 0.5, 1.0, 2.0, 3.0])

    s = sub.add_parser("meanfield", parents=[common], help="mean-field densities and growth rate over beta")
    s.add_argument("--rho", type=_positive, default=0.025)
    s.add_argument("--a", type=_positive, default=1.0)
    s.add_argument("--beta", type=_nonneg, nargs="*", default=[9.0, 9.9, 10.0, 10.03, 10.1, 10.2, 11.0])
    s.add_argument("--coupling", choices=("k", "lambda0"), default="k")
    s.add_argument("--no-transition-row", action="store_true")

    s = sub.add_parser("thresholds", parents=[common], help="transition temperatures and volatilities")
    s.add_argument("--rho", type=_positive, default=0.025)
    s.add_argument("--tau", type=_positive, default=1.0)
    s.add_argument("--n", type=_posint, default=10)
    s.add_argument("--gamma", type=_positive, nargs="*", default=[0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 1.0])
    s.add_argument("--with-mc", action="store_true", help="also scan for the explosion volatility")
    s.add_argument("--method", choices=("exact", "mc"), default="exact")
    s.add_argument("--paths", type=_posint, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--factor", type=float, default=2.0)

    s = sub.add_parser("mc", parents=[common], help="Monte Carlo moments over a sigma sweep")
    s.add_argument("--rho", type=_positive, default=0.025)
    s.add_argument("--gamma", type=_positive, default=0.25)
    s.add_argument("--tau", type=_positive, default=0.01)
    s.add_argument("--n", type=_posint, default=100)
    s.add_argument("--sigma", type=_nonneg, nargs="*", default=[0.01, 0.05, 0.1])
    s.add_argument("--paths", type=_posint, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--unit-start", action="store_true", help="n indexes B_n with B_1 = 1 (n - 1 factors)")
    s.add_argument("--workers", type=_posint, default=None)

    s = sub.add_parser("exact", parents=[common], help="exact lattice-gas expectation, density, entropy")
    s.add_argument("--rho", type=_positive, default=0.025)
    s.add_argument("--sigma", type=_nonneg, nargs="*", default=[0.2])
    s.add_argument("--gamma", type=_positive, default=0.5)
    s.add_argument("--tau", type=_positive, default=1.0)
    s.add_argument("--n", type=_posint, nargs="*", default=[2])

    s = sub.add_parser("variational", parents=[common], help="optimal density profile and bounds")
    s.add_argument("--rho", type=_positive, default=0.025)
    s.add_argument("--a", type=_positive, default=1.0)
    s.add_argument("--beta", type=_nonneg, nargs="*", default=[5.0])
    s.add_argument("--grid-m", type=int, default=512)
    s.add_argument("--damping", type=float, default=0.5)
    s.add_argument("--profile-out", default=None, help="write the optimal profiles (long CSV) here")

    s = sub.add_parser("phase-curve", parents=[common], help="coexistence curves T(rho) per a")
    s.add_argument("--a", type=_positive, nargs="*", default=[0.5, 1.0, 2.0])
    s.add_argument("--rho-points", type=_posint, default=50)
    s.add_argument("--rho-min", type=_positive, default=1e-4)
    return p


def _emit(table: Table, args, metadata: dict) -> None:
    text = table.to_json(metadata) if args.format == "json" else table.to_csv()
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    params = {k: (v.value if isinstance(v, InitCondition) else v) for k, v in vars(args).items()
              if k not in ("out", "format")}
    metadata = {"version": _version(), "command": args.command, "parameters": params,
                "seed": getattr(args, "seed", None)}
    try:
        if args.command == "couplings":
            table = cmd_table_couplings(args.a)
        elif args.command == "meanfield":
            table = cmd_meanfield(args.rho, args.a, args.beta, args.model, args.coupling,
                                  include_transition=not args.no_transition_row)
        elif args.command == "thresholds":
            table = cmd_thresholds(args.rho, args.tau, args.n, args.gamma, with_mc=args.with_mc,
                                   model=args.model, method=args.method, n_paths=args.paths,
                                   base_seed=args.seed, threshold_factor=args.factor)
        elif args.command == "mc":
            table = cmd_mc(args.rho, args.gamma, args.tau, args.n, args.sigma, args.model, args.paths,
                           args.seed, unit_start=args.unit_start, workers=args.workers)
        elif args.command == "exact":
            table = cmd_exact(args.rho, args.sigma, args.gamma, args.tau, args.n, args.model)
        elif args.command == "variational":
            if args.grid_m < 64:
                parser.error("--grid-m must be at least 64")
            if not 0 < args.damping <= 1:
                parser.error("--damping must lie in (0, 1]")
            table, profiles = cmd_variational(args.rho, args.a, args.beta, args.model, args.grid_m, args.damping)
            if args.profile_out:
                prof = Table(["beta", "x", "f"])
                for b, pr in profiles.items():
                    for x, f in zip(pr.grid, pr.values):
                        prof.add(beta=b, x=x, f=f)
                with open(args.profile_out, "w", newline="") as fh:
                    fh.write(prof.to_csv())
            if args.format == "json":
                metadata["profiles"] = {format_value(b): _json_value(pr.values) for b, pr in profiles.items()}
        elif args.command == "phase-curve":
            rho_grid = np.geomspace(args.rho_min, meanfield.RHO_CRITICAL, args.rho_points)
            table = cmd_phase_curve(args.a, rho_grid, args.model)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command}")
    except (ValueError, RuntimeError) as exc:
        print(f"ougrowth {args.command}: error: {exc}", file=sys.stderr)
        return 1
    _emit(table, args, metadata)
    return 0 if table.ok else 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
