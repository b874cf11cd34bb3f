import numpy as np
import pytest

from argibbs.timeseries import (
    ArParams,
    UnstableModelError,
    autocovariances,
    companion_matrix,
    covariance_matrix,
    is_stable,
    simulate_stationary,
    spectral_radius,
)


def test_companion_matrix_forms():
    assert np.array_equal(companion_matrix([0.5]), [[0.5]])
    a, b = 0.3, -0.2
    assert np.array_equal(companion_matrix([a, b]), [[a, b], [1.0, 0.0]])
    assert np.allclose(np.linalg.eigvals(companion_matrix([0.5])), [0.5])
    with pytest.raises(ValueError):
        companion_matrix([])


def test_is_stable_examples():
    assert is_stable([0.5], 1.0)
    assert not is_stable([1.0], 1.0)
    # roots of 1 - 0.2 z - 0.9 z^2: one has modulus < 1
    assert not is_stable([0.2, 0.9], 1.0)
    with pytest.raises(ValueError):
        is_stable([np.nan])
    with pytest.raises(ValueError):
        is_stable([0.5], margin=0.0)


def test_stable_models_have_subunit_spectral_radius():
    rng = np.random.default_rng(0)
    for _ in range(50):
        theta = rng.uniform(-0.5, 0.5, size=rng.integers(1, 6)) / 3
        if is_stable(theta, 1.0):
            assert spectral_radius(theta) < 1.0


def test_autocovariances_ar1_closed_form():
    acov = autocovariances(ArParams([0.5], 1.0), 3)
    assert acov.gammas[0] == pytest.approx(4.0 / 3.0, abs=1e-12)
    assert acov.gammas[1] == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert acov.gammas[2] == pytest.approx(1.0 / 3.0, abs=1e-12)


def test_autocovariances_white_noise():
    acov = autocovariances(ArParams([0.0], 2.0), 4)
    assert acov.gammas[0] == pytest.approx(4.0)
    assert np.allclose(acov.gammas[1:], 0.0)


def test_autocovariances_unstable_rejected():
    with pytest.raises(UnstableModelError):
        ArParams([1.2], 1.0)


def test_yule_walker_residual_identity():
    rng = np.random.default_rng(1)
    from argibbs.stable_domain import sample_uniform_stable

    for _ in range(100):
        d = int(rng.integers(1, 9))
        theta = sample_uniform_stable(d, rng) * 0.9 ** np.arange(1, d + 1)
        params = ArParams(theta, float(rng.uniform(0.5, 2.0)))
        g = autocovariances(params, d).gammas
        resid = g[0] - theta @ g[1 : d + 1]
        assert resid == pytest.approx(params.sigma**2, rel=1e-10)


def test_autocovariances_ar2_vs_monte_carlo():
    params = ArParams([0.4, -0.3], 1.0)
    g = autocovariances(params, 3).gammas
    path = simulate_stationary(params, 10**6, np.random.default_rng(5))
    x = path.values
    gg = autocovariances(params, 80).gammas
    for h in range(4):
        sample = np.mean(x[: x.size - h] * x[h:])
        # Bartlett large-sample variance: sum_k (g_k^2 + g_{k+h} g_{k-h}) / n
        ks = np.arange(-60, 61)
        var = np.sum(gg[np.abs(ks)] ** 2 + gg[np.abs(ks + h)] * gg[np.abs(ks - h)])
        se = np.sqrt(var / x.size)
        assert abs(sample - g[h]) < 4 * se


def test_covariance_matrix_values_and_spd():
    cov = covariance_matrix(ArParams([0.5], 1.0), 2)
    assert np.allclose(cov, [[4 / 3, 2 / 3], [2 / 3, 4 / 3]])
    assert np.allclose(covariance_matrix(ArParams([0.0], 1.0), 3), np.eye(3))
    rng = np.random.default_rng(2)
    from argibbs.stable_domain import sample_true_theta

    for _ in range(20):
        d = int(rng.integers(1, 7))
        params = ArParams(sample_true_theta(d, 0.9, rng), 1.0)
        cov = covariance_matrix(params, d + 3)
        assert np.array_equal(cov, cov.T)
        np.linalg.cholesky(cov)  # raises if not positive definite


def test_simulate_white_noise_is_iid_normal():
    path = simulate_stationary(ArParams([0.0], 1.0), 10**5, np.random.default_rng(3))
    x = path.values
    assert abs(x.mean()) < 4 / np.sqrt(x.size)
    assert abs(x.var() - 1.0) < 4 * np.sqrt(2.0 / x.size)
    lag1 = np.mean(x[:-1] * x[1:])
    assert abs(lag1) < 4 / np.sqrt(x.size)


def test_simulate_variance_matches_yule_walker():
    path = simulate_stationary(ArParams([0.5], 1.0), 10**6, np.random.default_rng(4))
    se = np.sqrt(2.0) * (4.0 / 3.0) / np.sqrt(path.T)  # crude iid-based scale
    assert abs(path.values.var() - 4.0 / 3.0) < 3 * 2 * se


def test_simulate_deterministic_given_seed():
    params = ArParams([0.3, 0.1], 0.7)
    a = simulate_stationary(params, 500, np.random.default_rng(42))
    b = simulate_stationary(params, 500, np.random.default_rng(42))
    assert np.array_equal(a.values, b.values)


def test_simulate_short_sample():
    params = ArParams([0.3, 0.1, 0.05], 1.0)
    assert simulate_stationary(params, 2, np.random.default_rng(0)).T == 2
