"""Absolute loss, empirical prediction risk, and the exact Gaussian risk oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .timeseries import ArParams, Path, covariance_matrix


def absolute_loss(y: float, z: float) -> float:
    if not (math.isfinite(y) and math.isfinite(z)):
        raise ValueError("loss arguments must be finite")
    return abs(y - z)


def effective_order(theta: np.ndarray) -> int:
    """Index of the last nonzero coefficient; the zero predictor counts as order 1."""
    nz = np.nonzero(np.asarray(theta))[0]
    return int(nz[-1]) + 1 if nz.size else 1


def lag_matrix(x: np.ndarray, k: int) -> np.ndarray:
    """Rows t = k..T-1 (0-based targets), columns x_{t-1}, ..., x_{t-k}."""
    return sliding_window_view(x, k)[:-1, ::-1]


def empirical_risk(theta: np.ndarray, path: Path) -> float:
    """Mean absolute one-step prediction error over t = d(theta)+1 .. T."""
    theta = np.asarray(theta, dtype=float)
    x = path.values
    d = effective_order(theta)
    if d >= path.T:
        raise ValueError("effective order must be smaller than the sample length")
    pred = lag_matrix(x, d) @ theta[:d]
    return float(np.mean(np.abs(x[d:] - pred)))


@dataclass(frozen=True)
class RiskOracle:
    """Closed-form risk of linear predictors of a Gaussian AR process.

    Holds the Toeplitz autocovariance matrix of the true process and the true
    coefficient vector zero-padded to the matrix dimension.
    """

    true_params: ArParams
    gamma_matrix: np.ndarray
    padded_theta: np.ndarray

    def __post_init__(self):
        g = np.array(self.gamma_matrix, dtype=float)
        p = np.array(self.padded_theta, dtype=float)
        g.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "gamma_matrix", g)
        object.__setattr__(self, "padded_theta", p)
        if g.shape != (p.size, p.size):
            raise ValueError("gamma_matrix and padded_theta dimensions disagree")
        d = self.true_params.d
        if p.size < d or not np.array_equal(p[:d], self.true_params.theta) or np.any(p[d:]):
            raise ValueError("padded_theta must be the true theta padded with zeros")

    @classmethod
    def build(cls, true_params: ArParams, dim: int) -> "RiskOracle":
        if dim < true_params.d:
            raise ValueError("oracle dimension must cover the true order")
        padded = np.zeros(dim)
        padded[: true_params.d] = true_params.theta
        return cls(true_params, covariance_matrix(true_params, dim), padded)

    @property
    def dim(self) -> int:
        return self.padded_theta.size


def exact_risk(theta_hat: np.ndarray, oracle: RiskOracle) -> float:
    """Exact absolute-loss risk: sqrt(2 (th-theta)' Gamma (th-theta) + 2 sigma^2) / sqrt(pi).

    theta_hat shorter than the oracle dimension is zero-padded; a longer one
    is a dimension mismatch.
    """
    theta_hat = np.asarray(theta_hat, dtype=float)
    if theta_hat.size > oracle.dim:
        raise ValueError("theta_hat dimension exceeds the oracle dimension")
    diff = -oracle.padded_theta.copy()
    diff[: theta_hat.size] += theta_hat
    q = float(diff @ oracle.gamma_matrix @ diff)
    return math.sqrt(2.0 * q + 2.0 * oracle.true_params.sigma**2) / math.sqrt(math.pi)


def excess_risk(risk: float, sigma: float) -> float:
    """Risk minus the sqrt(2/pi)*sigma^2 baseline (the minimal risk when sigma=1)."""
    if risk < 0:
        raise ValueError("risk must be non-negative")
    return risk - math.sqrt(2.0 / math.pi) * sigma**2
