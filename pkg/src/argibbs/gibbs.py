"""Independent Hastings sampler for the Gibbs measure exp(-eta * empirical risk).

Proposals are i.i.d. from the prior; since proposals do not depend on the
chain state, they (and their risks) are generated in vectorized batches up
front and the accept/reject pass is a cheap sequential scan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .risk import lag_matrix
from .stable_domain import PriorSpec, in_parameter_set, sample_prior_batch
from .timeseries import Path


def learning_rate(T: float) -> float:
    """Temperature schedule sqrt(T) / (4 ln T)."""
    if T < 4:
        raise ValueError("T must be at least 4")
    return math.sqrt(T) / (4.0 * math.log(T))


def effective_dim(T: int, gamma: float) -> int:
    """Largest candidate order floor((ln T)^gamma), capped at T/2."""
    if T < 4:
        raise ValueError("T must be at least 4")
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    return min(int(math.log(T) ** gamma), T // 2)


def acceptance_ratio(eta: float, r_current: float, r_candidate: float) -> float:
    """exp(eta * (r_current - r_candidate)); values above 1 mean certain acceptance."""
    if not (math.isfinite(r_current) and math.isfinite(r_candidate)):
        raise ValueError("risks must be finite")
    return math.exp(eta * (r_current - r_candidate))


@dataclass(frozen=True)
class ChainConfig:
    eta: float
    n_star: int
    prior: PriorSpec
    seed: int

    def __post_init__(self):
        if self.eta < 0:
            raise ValueError("eta must be non-negative")
        if self.n_star < 1:
            raise ValueError("n_star must be positive")


@dataclass(frozen=True)
class ChainSummary:
    theta_bar: np.ndarray
    acceptance_count: int
    n_star: int
    final_state: np.ndarray
    states: Optional[np.ndarray] = None  # (n_star, d_T) when recorded


def _zero_state_risk(x: np.ndarray) -> float:
    # d(0) = 1 by convention: predict 0 from t = 2 on.
    return float(np.mean(np.abs(x[1:])))


def candidate_risks(x: np.ndarray, thetas: np.ndarray, orders: np.ndarray) -> np.ndarray:
    """Empirical risks of a batch of candidates, grouped by effective order."""
    risks = np.empty(thetas.shape[0])
    for k in np.unique(orders):
        idx = np.nonzero(orders == k)[0]
        L = lag_matrix(x, int(k))
        resid = x[int(k) :, None] - L @ thetas[idx, : int(k)].T
        risks[idx] = np.mean(np.abs(resid), axis=0)
    return risks


def run_chain(path: Path, config: ChainConfig, validate: bool = False,
              keep_states: bool = False) -> ChainSummary:
    """Run the independent Hastings sampler and average its states.

    The chain starts at zero, takes n_star - 1 proposal steps and returns the
    arithmetic mean over all n_star states (the initial one included).
    Deterministic given the config seed.
    """
    if path.T < 4:
        raise ValueError("path must have at least 4 observations")
    x = path.values
    prior = config.prior
    n = config.n_star
    rng = np.random.default_rng(config.seed)
    zero = np.zeros(prior.d_T)
    if n == 1:
        states = zero[None, :] if keep_states else None
        return ChainSummary(zero, 0, 1, zero, states)

    cands, orders = sample_prior_batch(prior, n - 1, rng)
    if validate:
        _validate_candidates(cands, prior)
    risks = candidate_risks(x, cands, orders)
    # U <= exp(eta * (r_cur - r_cand)) compared in log space; equivalent since
    # the ratio is positive and U > 0 almost surely.
    log_u = np.log(rng.uniform(size=n - 1))

    eta = config.eta
    counts = np.zeros(n - 1, dtype=np.int64)
    zero_count = 1
    cur = -1
    cur_risk = _zero_state_risk(x)
    accepted = 0
    seq = np.empty(n - 1, dtype=np.int64) if keep_states else None
    for i in range(n - 1):
        if log_u[i] <= eta * (cur_risk - risks[i]):
            cur = i
            cur_risk = risks[i]
            accepted += 1
        if cur < 0:
            zero_count += 1
        else:
            counts[cur] += 1
        if seq is not None:
            seq[i] = cur

    theta_bar = counts @ cands / n
    final = zero if cur < 0 else cands[cur]
    states = None
    if keep_states:
        states = np.vstack([zero, np.where(seq[:, None] < 0, 0.0, cands[seq])])
    return ChainSummary(theta_bar, accepted, n, final, states)


def _validate_candidates(cands: np.ndarray, prior: PriorSpec) -> None:
    l1 = np.sum(np.abs(cands), axis=1)
    if np.any(l1 > prior.radius + 1e-9):
        raise AssertionError("chain candidate violates the l1 radius")
    # Batched stability check via stacked companion matrices.
    n, d_T = cands.shape
    comp = np.zeros((n, d_T, d_T))
    comp[:, 0, :] = cands
    comp[:, np.arange(1, d_T), np.arange(d_T - 1)] = 1.0
    rho = np.abs(np.linalg.eigvals(comp)).max(axis=1)
    if np.any(rho >= 1.0):
        raise AssertionError("chain candidate is not stable")


def gibbs_mean_oracle(
    path: Path,
    prior: PriorSpec,
    eta: float,
    n_draws: int,
    rng: np.random.Generator,
    return_details: bool = False,
):
    """Self-normalized importance-sampling estimate of the Gibbs-posterior mean.

    Proposal = prior, weights exp(-eta * empirical risk), log-weights
    re-centered by their maximum before exponentiation. Test oracle only.
    """
    if n_draws < 1:
        raise ValueError("n_draws must be positive")
    thetas, orders = sample_prior_batch(prior, n_draws, rng)
    risks = candidate_risks(path.values, thetas, orders)
    log_w = -eta * risks
    w = np.exp(log_w - log_w.max())
    total = w.sum()
    if not total > 0:
        raise FloatingPointError("all importance weights underflowed")
    mean = w @ thetas / total
    if return_details:
        return mean, thetas, w
    return mean
