"""Experiment orchestration: replicated chains over a T grid, CSV and SVG output."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .gibbs import ChainConfig, effective_dim, learning_rate, run_chain
from .risk import RiskOracle, exact_risk, excess_risk
from .stable_domain import OrderPriorKind, PriorSpec, sample_true_theta
from .timeseries import ArParams, Path, simulate_stationary

CSV_HEADER = "prior,T,nstar,replicate,seed,risk,excess_risk,acceptance_rate,theta_bar"

DEFAULT_T_GRID = tuple(2**j for j in range(6, 13))
DEFAULT_PRIORS = (OrderPriorKind.INVERSE_SQUARE, OrderPriorKind.EXPONENTIAL)


@dataclass(frozen=True)
class ExperimentConfig:
    d: int = 8
    delta: float = 0.75
    sigma: float = 1.0
    T_grid: tuple[int, ...] = DEFAULT_T_GRID
    n_star_grid: tuple[int, ...] = (100, 1000)
    replicates: int = 100
    priors: tuple[OrderPriorKind, ...] = DEFAULT_PRIORS
    gamma: float = 1.0
    quantile_q: float = 0.9
    master_seed: int = 20160331
    output_dir: str = "."
    independent_paths: bool = False
    theta_true: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if any(T < 4 for T in self.T_grid) or not self.T_grid:
            raise ValueError("every T in T_grid must be at least 4")
        if not 0 < self.quantile_q < 1:
            raise ValueError("quantile_q must lie in (0, 1)")
        if self.replicates < 1:
            raise ValueError("replicates must be positive")
        if self.d < 1 or not 0 < self.delta < 1 or self.sigma <= 0:
            raise ValueError("invalid true-model parameters")


@dataclass(frozen=True)
class ResultRow:
    prior: str
    T: int
    n_star: int
    replicate: int
    seed: int
    theta_bar: tuple[float, ...] = field(repr=False)
    risk: float
    excess_risk: float
    acceptance_rate: float

    def sort_key(self):
        return (self.prior, self.T, self.n_star, self.replicate)


def _stream_seed(master_seed: int, *tags) -> int:
    """64-bit seed hashed from the master seed and a label tuple.

    Streams are independent of replicate enumeration order: removing one
    replicate never shifts the randomness of the others.
    """
    label = ":".join(str(t) for t in (master_seed,) + tags)
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")


def draw_true_model(config: ExperimentConfig) -> ArParams:
    """The single true model shared by every replicate of the experiment."""
    if config.theta_true is not None:
        return ArParams(np.asarray(config.theta_true, dtype=float), config.sigma)
    rng = np.random.default_rng(_stream_seed(config.master_seed, "true-theta"))
    return ArParams(sample_true_theta(config.d, config.delta, rng), config.sigma)


def run_experiment(config: ExperimentConfig, validate_chains: bool = True) -> list[ResultRow]:
    """Replicated quantile-risk experiment; deterministic given the master seed.

    One true theta per experiment; one path per replicate whose prefixes are
    reused across the T grid (or independent paths per T when configured).
    """
    params = draw_true_model(config)
    dims = {T: effective_dim(T, config.gamma) for T in config.T_grid}
    oracle = RiskOracle.build(params, max(params.d, max(dims.values())))
    T_max = max(config.T_grid)

    rows = []
    for rep in range(config.replicates):
        if config.independent_paths:
            paths = {
                T: simulate_stationary(
                    params, T, np.random.default_rng(_stream_seed(config.master_seed, "path", rep, T))
                )
                for T in config.T_grid
            }
        else:
            full = simulate_stationary(
                params, T_max, np.random.default_rng(_stream_seed(config.master_seed, "path", rep))
            )
            paths = {T: Path(full.values[:T]) for T in config.T_grid}
        for kind in config.priors:
            for T in config.T_grid:
                prior = PriorSpec.for_sample_size(T, config.gamma, kind)
                eta = learning_rate(T)
                for n_star in config.n_star_grid:
                    seed = _stream_seed(config.master_seed, "chain", kind.value, rep, T, n_star)
                    summary = run_chain(
                        paths[T],
                        ChainConfig(eta=eta, n_star=n_star, prior=prior, seed=seed),
                        validate=validate_chains,
                    )
                    if np.sum(np.abs(summary.theta_bar)) > prior.radius + 1e-9:
                        raise AssertionError("averaged estimate violates the l1 radius")
                    r = exact_risk(summary.theta_bar, oracle)
                    rows.append(
                        ResultRow(
                            prior=kind.value,
                            T=T,
                            n_star=n_star,
                            replicate=rep,
                            seed=seed,
                            theta_bar=tuple(float(v) for v in summary.theta_bar),
                            risk=r,
                            excess_risk=excess_risk(r, config.sigma),
                            acceptance_rate=summary.acceptance_count / max(n_star - 1, 1),
                        )
                    )
    rows.sort(key=ResultRow.sort_key)
    return rows


def quantile(values: Sequence[float], q: float) -> float:
    """Type-1 empirical quantile: the ceil(q*N)-th ascending order statistic."""
    if len(values) == 0:
        raise ValueError("values must be non-empty")
    if not 0 < q < 1:
        raise ValueError("q must lie in (0, 1)")
    s = sorted(values)
    idx = math.ceil(q * len(s) - 1e-12)
    return s[max(idx, 1) - 1]


def _g17(v: float) -> str:
    return format(v, ".17g")


def emit_csv(rows: Sequence[ResultRow], path) -> None:
    """UTF-8 CSV, 17-significant-digit decimals, rows sorted by (prior, T, nstar, replicate)."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in sorted(rows, key=ResultRow.sort_key):
                theta = ";".join(_g17(v) for v in row.theta_bar)
                fh.write(
                    f"{row.prior},{row.T},{row.n_star},{row.replicate},{row.seed},"
                    f"{_g17(row.risk)},{_g17(row.excess_risk)},{_g17(row.acceptance_rate)},{theta}\n"
                )
    except OSError as exc:
        raise OSError(f"failed to write CSV to {path}: {exc}") from exc


def parse_csv(path) -> list[ResultRow]:
    """Inverse of emit_csv; 17-digit decimals reparse to the original doubles."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header!r}")
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            prior, T, n_star, rep, seed, risk, exc_risk, acc, theta = line.split(",")
            rows.append(
                ResultRow(
                    prior=prior,
                    T=int(T),
                    n_star=int(n_star),
                    replicate=int(rep),
                    seed=int(seed),
                    theta_bar=tuple(float(v) for v in theta.split(";")) if theta else (),
                    risk=float(risk),
                    excess_risk=float(exc_risk),
                    acceptance_rate=float(acc),
                )
            )
    return rows


def quantile_curves(rows: Sequence[ResultRow], q: float) -> dict:
    """Per-(prior, n_star) map T -> q-quantile of the excess risks."""
    grouped: dict = {}
    for row in rows:
        grouped.setdefault((row.prior, row.n_star), {}).setdefault(row.T, []).append(row.excess_risk)
    return {
        key: {T: quantile(vals, q) for T, vals in sorted(by_T.items())}
        for key, by_T in sorted(grouped.items())
    }


def emit_plot(rows: Sequence[ResultRow], q: float, path) -> None:
    """Log-log quantile-vs-T curves plus a dotted ln^3(T)/sqrt(T) reference.

    Solid curves carry the smaller n_star, dashed ones the larger; the
    reference is scaled to pass through the first plotted point.
    """
    if not rows:
        raise ValueError("rows must be non-empty")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    curves = quantile_curves(rows, q)
    n_stars = sorted({key[1] for key in curves})
    styles = {n: ("-" if i == 0 else "--") for i, n in enumerate(n_stars)}

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    first_key = next(iter(curves))
    T0 = next(iter(curves[first_key]))
    anchor = curves[first_key][T0]
    for (prior, n_star), by_T in curves.items():
        Ts = np.array(list(by_T), dtype=float)
        vals = np.array(list(by_T.values()))
        ax.plot(Ts, vals, styles[n_star], marker="o", ms=3,
                label=f"{prior}, n*={n_star}")
    T_ref = np.array(sorted({row.T for row in rows}), dtype=float)
    ref = np.log(T_ref) ** 3 / np.sqrt(T_ref)
    ref *= anchor / (math.log(T0) ** 3 / math.sqrt(T0))
    ax.plot(T_ref, ref, ":", color="black", label=r"$\propto \ln^3 T/\sqrt{T}$")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("T")
    ax.set_ylabel(f"{q}-quantile of excess risk")
    ax.legend(fontsize=8)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    except OSError as exc:
        raise OSError(f"failed to write plot to {path}: {exc}") from exc
    finally:
        plt.close(fig)
