"""Stationary AR(d) processes: stability tests, autocovariances, exact simulation.

The model is X_t = sum_j theta_j X_{t-j} + sigma * xi_t with i.i.d. standard
Gaussian innovations. Stability is checked through the companion matrix, whose
eigenvalues are the inverse roots of the autoregressive polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import lfilter, lfiltic

# Interior margin used by every stability test; points within this distance of
# the boundary are treated as unstable.
TOL_STABILITY = 1e-9


class UnstableModelError(ValueError):
    """Coefficient vector outside the (interior of the) stability domain."""


def companion_matrix(theta: np.ndarray) -> np.ndarray:
    """Companion matrix of an AR coefficient vector: first row theta, unit subdiagonal."""
    theta = np.asarray(theta, dtype=float)
    if theta.ndim != 1 or theta.size == 0:
        raise ValueError("theta must be a non-empty 1-d vector")
    d = theta.size
    A = np.zeros((d, d))
    A[0, :] = theta
    if d > 1:
        A[np.arange(1, d), np.arange(d - 1)] = 1.0
    return A


def spectral_radius(theta: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(companion_matrix(theta)))))


def is_stable(theta: np.ndarray, margin: float = 1.0) -> bool:
    """True iff all companion eigenvalues have modulus <= margin - TOL_STABILITY."""
    theta = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(theta)):
        raise ValueError("theta must be finite")
    if not 0.0 < margin <= 1.0:
        raise ValueError("margin must lie in (0, 1]")
    return spectral_radius(theta) <= margin - TOL_STABILITY


@dataclass(frozen=True)
class ArParams:
    """A stable AR(d) model: coefficients, innovation scale."""

    theta: np.ndarray
    sigma: float

    def __post_init__(self):
        theta = np.array(self.theta, dtype=float)
        theta.setflags(write=False)
        object.__setattr__(self, "theta", theta)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not is_stable(theta, 1.0):
            raise UnstableModelError(f"theta={theta} is not a stable AR model")

    @property
    def d(self) -> int:
        return self.theta.size


@dataclass(frozen=True)
class Path:
    """An observed sample X_{1:T}."""

    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-d vector")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def T(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class AutocovSequence:
    """Autocovariances gamma_0..gamma_L of a stationary process."""

    gammas: np.ndarray = field(repr=False)

    def __post_init__(self):
        gammas = np.array(self.gammas, dtype=float)
        gammas.setflags(write=False)
        object.__setattr__(self, "gammas", gammas)
        if gammas[0] <= 0:
            raise ValueError("gamma_0 must be positive")

    @property
    def L(self) -> int:
        return self.gammas.size - 1

    def toeplitz(self, dim: int) -> np.ndarray:
        if dim > self.gammas.size:
            raise ValueError("not enough lags computed for requested dimension")
        return toeplitz(self.gammas[:dim])


def autocovariances(params: ArParams, max_lag: int) -> AutocovSequence:
    """Autocovariances of the stationary AR process via the Yule-Walker system.

    gamma_0..gamma_d solve the linear system obtained from
    gamma_h = sum_j theta_j gamma_{|h-j|} + sigma^2 * 1{h=0}; higher lags
    follow the plain recursion gamma_h = sum_j theta_j gamma_{h-j}.
    """
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    theta, d = params.theta, params.d
    n = d + 1
    A = np.zeros((n, n))
    for h in range(n):
        A[h, h] += 1.0
        for j in range(1, d + 1):
            A[h, abs(h - j)] -= theta[j - 1]
    b = np.zeros(n)
    b[0] = params.sigma**2
    g = np.linalg.solve(A, b)
    gam = np.empty(max(max_lag, d) + 1)
    gam[: d + 1] = g
    for h in range(d + 1, gam.size):
        gam[h] = theta @ gam[h - d : h][::-1]
    return AutocovSequence(gam[: max_lag + 1])


def covariance_matrix(params: ArParams, dim: int) -> np.ndarray:
    """Toeplitz covariance matrix Gamma with entries gamma_{|i-j|}, i,j < dim."""
    if dim < 1:
        raise ValueError("dim must be positive")
    return autocovariances(params, dim - 1).toeplitz(dim)


def simulate_stationary(params: ArParams, T: int, rng: np.random.Generator) -> Path:
    """Draw X_{1:T} exactly from the stationary Gaussian law.

    The first d points come from the Cholesky factor of the stationary
    covariance; the rest follow the AR recursion driven by fresh innovations.
    """
    if T < 1:
        raise ValueError("T must be positive")
    d = params.d
    k = min(d, T)
    L = np.linalg.cholesky(covariance_matrix(params, k))
    head = L @ rng.standard_normal(k)
    if T <= d:
        return Path(head)
    eps = params.sigma * rng.standard_normal(T - d)
    # Filter 1/(1 - theta_1 B - ... - theta_d B^d) applied to the innovations,
    # with initial conditions matching the stationary head.
    a = np.concatenate(([1.0], -params.theta))
    zi = lfiltic([1.0], a, head[::-1])
    tail, _ = lfilter([1.0], a, eps, zi=zi)
    return Path(np.concatenate([head, tail]))
