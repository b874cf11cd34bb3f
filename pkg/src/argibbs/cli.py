"""Command line interface: simulate, fit, experiment, bounds."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import bounds as bnd
from .gibbs import ChainConfig, effective_dim, learning_rate, run_chain
from .harness import ExperimentConfig, emit_csv, emit_plot, run_experiment
from .risk import empirical_risk
from .stable_domain import OrderPriorKind, PriorSpec
from .timeseries import ArParams, Path, simulate_stationary

USAGE_ERROR, RUNTIME_ERROR = 1, 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> _Parser:
    parser = _Parser(prog="argibbs", description="AR forecasting by Gibbs aggregation")
    sub = parser.add_subparsers(dest="command")

    p_sim = sub.add_parser("simulate", help="simulate a stationary AR path to CSV")
    p_sim.add_argument("--T", type=int, required=True)
    p_sim.add_argument("--theta", type=str, required=True,
                       help="comma-separated AR coefficients")
    p_sim.add_argument("--sigma", type=float, default=1.0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", type=str, required=True)

    p_fit = sub.add_parser("fit", help="run one chain on a stored path")
    p_fit.add_argument("--path", type=str, required=True, help="CSV produced by simulate")
    p_fit.add_argument("--nstar", type=int, default=1000)
    p_fit.add_argument("--gamma", type=float, default=1.0)
    p_fit.add_argument("--prior", type=str, default="inverse_square",
                       choices=[k.value for k in OrderPriorKind])
    p_fit.add_argument("--seed", type=int, default=0)

    p_exp = sub.add_parser("experiment", help="full quantile-risk experiment")
    p_exp.add_argument("--config", type=str, default=None, help="TOML config file")
    p_exp.add_argument("--out", type=str, default=None, help="output directory")
    p_exp.add_argument("--seed", type=int, default=None, help="override master seed")

    p_bnd = sub.add_parser("bounds", help="print the theoretical quantities")
    p_bnd.add_argument("--T", type=int, required=True)
    p_bnd.add_argument("--epsilon", type=float, default=0.1)
    p_bnd.add_argument("--gamma", type=float, default=1.0)
    p_bnd.add_argument("--sigma", type=float, default=1.0)
    p_bnd.add_argument("--kbar", type=float, default=1.0)
    p_bnd.add_argument("--delta1", type=float, default=0.5)
    p_bnd.add_argument("--K", type=float, default=1.0)
    p_bnd.add_argument("--D-lip", type=float, default=1.0)
    p_bnd.add_argument("--C1", type=float, default=0.0)
    p_bnd.add_argument("--C2", type=float, default=1.0)
    p_bnd.add_argument("--C3", type=float, default=1.0)
    p_bnd.add_argument("--A-eta", type=float, default=1.0,
                       help="value of the approximation constant in the budget M")
    return parser


def _parse_theta(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.split(",")], dtype=float)


def _cmd_simulate(args) -> int:
    params = ArParams(_parse_theta(args.theta), args.sigma)
    path = simulate_stationary(params, args.T, np.random.default_rng(args.seed))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("t,value\n")
        for t, v in enumerate(path.values, start=1):
            fh.write(f"{t},{format(v, '.17g')}\n")
    print(f"wrote {path.T} observations to {args.out}")
    return 0


def _read_path(filename: str) -> Path:
    values = []
    with open(filename, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if header.strip() != "t,value":
            raise ValueError(f"unexpected path CSV header in {filename}")
        for line in fh:
            if line.strip():
                values.append(float(line.split(",")[1]))
    return Path(np.asarray(values))


def _cmd_fit(args) -> int:
    path = _read_path(args.path)
    kind = OrderPriorKind(args.prior)
    prior = PriorSpec.for_sample_size(path.T, args.gamma, kind)
    config = ChainConfig(eta=learning_rate(path.T), n_star=args.nstar,
                         prior=prior, seed=args.seed)
    summary = run_chain(path, config, validate=True)
    theta = ", ".join(format(v, ".6g") for v in summary.theta_bar)
    print(f"T = {path.T}, d_T = {prior.d_T}, eta = {config.eta:.6g}")
    print(f"theta_bar = [{theta}]")
    print(f"empirical risk = {empirical_risk(summary.theta_bar, path):.6g}")
    print(f"acceptance rate = {summary.acceptance_count / max(args.nstar - 1, 1):.4f}")
    return 0


def _load_config(filename: str | None, out_dir: str | None, seed: int | None) -> ExperimentConfig:
    fields = {}
    if filename is not None:
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(filename, "rb") as fh:
            raw = tomllib.load(fh)
        known = set(ExperimentConfig.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        fields = dict(raw)
        if "T_grid" in fields:
            fields["T_grid"] = tuple(int(v) for v in fields["T_grid"])
        if "n_star_grid" in fields:
            fields["n_star_grid"] = tuple(int(v) for v in fields["n_star_grid"])
        if "priors" in fields:
            fields["priors"] = tuple(OrderPriorKind(v) for v in fields["priors"])
        if "theta_true" in fields:
            fields["theta_true"] = tuple(float(v) for v in fields["theta_true"])
    if out_dir is not None:
        fields["output_dir"] = out_dir
    if seed is not None:
        fields["master_seed"] = seed
    return ExperimentConfig(**fields)


def _cmd_experiment(args) -> int:
    config = _load_config(args.config, args.out, args.seed)
    os.makedirs(config.output_dir, exist_ok=True)
    rows = run_experiment(config)
    csv_path = os.path.join(config.output_dir, "results.csv")
    svg_path = os.path.join(config.output_dir, "figure.svg")
    emit_csv(rows, csv_path)
    emit_plot(rows, config.quantile_q, svg_path)
    print(f"wrote {len(rows)} rows to {csv_path}")
    print(f"wrote quantile plot to {svg_path}")
    return 0


def _cmd_bounds(args) -> int:
    eta = learning_rate(args.T)
    d_T = effective_dim(args.T, args.gamma)
    gamma0 = bnd.gamma0_upper_bound(args.sigma, args.kbar, args.delta1)
    a_star = args.sigma * args.kbar / (1.0 - args.delta1)
    a_tilde = args.sigma * args.kbar * args.delta1 / (1.0 - args.delta1) ** 2
    constants = bnd.BoundConstants(
        K=args.K, A_star=a_star, A_tilde=a_tilde,
        phi_A=bnd.gaussian_abs_exp_moment(a_star),
        D_lip=args.D_lip, C1=args.C1, C2=args.C2, C3=args.C3,
        gamma0=gamma0, epsilon=args.epsilon,
    )
    E = bnd.oracle_constant_E(constants)
    print(f"eta_T          = {eta:.10g}")
    print(f"d_T            = {d_T}")
    print(f"gamma0 bound   = {gamma0:.10g}")
    print(f"constant E     = {E:.10g}")
    print(f"oracle bound   = {bnd.oracle_risk_bound(args.T, args.epsilon, E, 0.0):.10g}  (inf risk taken as 0)")
    print(f"M(T, eps)      = {bnd.mcmc_budget_M(args.T, args.epsilon, args.A_eta):.10g}")
    print(f"M*(T, eps)     = {bnd.ar_budget_M_star(args.T, args.epsilon, gamma0):.10g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return USAGE_ERROR
    handlers = {
        "simulate": _cmd_simulate,
        "fit": _cmd_fit,
        "experiment": _cmd_experiment,
        "bounds": _cmd_bounds,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, FloatingPointError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RUNTIME_ERROR


def entry_point() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
