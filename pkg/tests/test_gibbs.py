import math

import numpy as np
import pytest

from argibbs.gibbs import (
    ChainConfig,
    acceptance_ratio,
    effective_dim,
    gibbs_mean_oracle,
    learning_rate,
    run_chain,
)
from argibbs.stable_domain import (
    OrderPriorKind,
    PriorSpec,
    in_parameter_set,
    sample_prior_batch,
)
from argibbs.timeseries import ArParams, Path, simulate_stationary


def _spec(T, kind=OrderPriorKind.INVERSE_SQUARE):
    return PriorSpec.for_sample_size(T, 1.0, kind)


def test_learning_rate_values():
    assert learning_rate(math.e**2) == pytest.approx(math.e / 8)
    assert learning_rate(4096) == pytest.approx(64 / (4 * math.log(4096)), abs=1e-15)
    grid = [2**j for j in range(3, 16)]
    assert all(learning_rate(2 * T) > learning_rate(T) for T in grid)
    with pytest.raises(ValueError):
        learning_rate(3)


def test_effective_dim_values():
    assert effective_dim(4096, 1.0) == 8
    assert effective_dim(64, 1.0) == 4
    assert effective_dim(4, 1.0) == 1
    assert effective_dim(16, 2.0) == 7  # (ln 16)^2 ~ 7.69
    assert effective_dim(4, 3.0) == 2  # capped at T/2


def test_acceptance_ratio():
    assert acceptance_ratio(2.0, 0.7, 0.7) == 1.0
    assert acceptance_ratio(2.0, 0.5, 0.25) == pytest.approx(math.exp(0.5))
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b = rng.uniform(0, 2, size=2)
        assert acceptance_ratio(1.3, a, b) * acceptance_ratio(1.3, b, a) == pytest.approx(1.0)


def test_chain_n_star_one_returns_zero():
    path = Path(np.arange(1.0, 9.0))
    s = run_chain(path, ChainConfig(eta=1.0, n_star=1, prior=_spec(8), seed=0))
    assert np.all(s.theta_bar == 0.0)
    assert s.acceptance_count == 0


def test_chain_all_rejections_returns_zero():
    # A spike at t=1 followed by zeros: the zero predictor has risk ~ 0 while
    # any proposal pays |theta_1 * spike|, so at huge eta nothing is accepted.
    x = np.zeros(64)
    x[0] = 1e3
    x[1:] = 1e-6 * np.sin(np.arange(1, 64))
    s = run_chain(Path(x), ChainConfig(eta=1e8, n_star=500, prior=_spec(64), seed=1))
    assert s.acceptance_count == 0
    assert np.all(s.theta_bar == 0.0)
    assert np.all(s.final_state == 0.0)


def test_chain_eta_zero_samples_the_prior():
    params = ArParams([0.5], 1.0)
    path = simulate_stationary(params, 64, np.random.default_rng(2))
    spec = _spec(64)
    n = 20000
    s = run_chain(path, ChainConfig(eta=0.0, n_star=n, prior=spec, seed=3))
    assert s.acceptance_count == n - 1  # ratio is exp(0) = 1, U < 1 a.s.
    draws, _ = sample_prior_batch(spec, 10**5, np.random.default_rng(4))
    se = np.sqrt(draws.var(axis=0) / n + draws.var(axis=0) / draws.shape[0])
    assert np.all(np.abs(s.theta_bar - draws.mean(axis=0)) < 3 * se + 1e-12)


def test_chain_average_matches_recorded_states():
    path = simulate_stationary(ArParams([0.3, 0.2], 1.0), 128, np.random.default_rng(5))
    s = run_chain(
        path,
        ChainConfig(eta=learning_rate(128), n_star=5000, prior=_spec(128), seed=6),
        keep_states=True,
    )
    assert s.states.shape == (5000, _spec(128).d_T)
    assert np.abs(s.states.mean(axis=0) - s.theta_bar).max() < 1e-12
    assert np.array_equal(s.states[-1], s.final_state)


def test_chain_states_stay_in_parameter_set():
    path = simulate_stationary(ArParams([0.3, 0.2], 1.0), 64, np.random.default_rng(7))
    spec = _spec(64)
    s = run_chain(
        path,
        ChainConfig(eta=learning_rate(64), n_star=2000, prior=spec, seed=8),
        validate=True,
        keep_states=True,
    )
    for state in s.states[:: 50]:
        assert in_parameter_set(state, spec)
    assert np.abs(s.theta_bar).sum() <= spec.radius + 1e-9


def test_chain_deterministic_given_seed():
    path = simulate_stationary(ArParams([0.4], 1.0), 256, np.random.default_rng(9))
    cfg = ChainConfig(eta=learning_rate(256), n_star=3000, prior=_spec(256), seed=10)
    a, b = run_chain(path, cfg), run_chain(path, cfg)
    assert np.array_equal(a.theta_bar, b.theta_bar)
    assert a.acceptance_count == b.acceptance_count
    assert np.array_equal(a.final_state, b.final_state)


def test_two_point_detailed_balance():
    # Same acceptance rule on a discretized two-point space: the empirical
    # occupancies must match the exp(-eta r) weights.
    eta, risks = 1.7, np.array([0.4, 1.1])
    rng = np.random.default_rng(11)
    n = 10**5
    proposals = rng.integers(0, 2, size=n)
    us = rng.uniform(size=n)
    cur, visits = 0, np.zeros(2)
    for prop, u in zip(proposals, us):
        if u <= math.exp(eta * (risks[cur] - risks[prop])):
            cur = prop
        visits[cur] += 1
    target = np.exp(-eta * risks)
    target /= target.sum()
    se = math.sqrt(target[0] * (1 - target[0]) / n)
    # states are autocorrelated; allow a generous multiple of the iid error
    assert abs(visits[0] / n - target[0]) < 10 * se


def test_oracle_eta_zero_is_prior_mean():
    path = simulate_stationary(ArParams([0.5], 1.0), 64, np.random.default_rng(12))
    spec = _spec(64)
    mean = gibbs_mean_oracle(path, spec, 0.0, 5000, np.random.default_rng(13))
    draws, _ = sample_prior_batch(spec, 5000, np.random.default_rng(13))
    assert np.allclose(mean, draws.mean(axis=0))


def test_oracle_weights_shift_invariant():
    # Re-centered weights make the estimate invariant to a constant risk shift,
    # so a large eta on an easy path must still produce finite output.
    path = simulate_stationary(ArParams([0.5], 1.0), 64, np.random.default_rng(14))
    mean = gibbs_mean_oracle(path, _spec(64), 500.0, 2000, np.random.default_rng(15))
    assert np.all(np.isfinite(mean))


def test_chain_agrees_with_oracle_small_case():
    params = ArParams([0.5, -0.3], 1.0)
    path = simulate_stationary(params, 32, np.random.default_rng(16))
    spec = _spec(32)
    eta = learning_rate(32)
    s = run_chain(path, ChainConfig(eta=eta, n_star=50000, prior=spec, seed=17))
    mean = gibbs_mean_oracle(path, spec, eta, 50000, np.random.default_rng(18))
    assert np.abs(s.theta_bar - mean).max() < 0.02
