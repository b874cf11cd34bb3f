"""Geometry and sampling of the AR stability domain.

The Levinson step-up recursion maps reflection-coefficient vectors in
(-1,1)^k bijectively onto the interior of the order-k stability domain.
The stage-m Jacobian determinant is
(1-r_m^2)^floor((m-1)/2) * (1-r_m)^((m-1) mod 2), so drawing
r_m = 2*B - 1 with B ~ Beta(floor((m-1)/2)+1, floor(m/2)+1) independently
pushes forward to the uniform distribution on the stability domain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .timeseries import TOL_STABILITY, UnstableModelError, is_stable

_R_CLIP = 1.0 - 1e-12


class OrderPriorKind(enum.Enum):
    """Model-order prior families: k^-2 favours sparsity, e^-k strongly so."""

    INVERSE_SQUARE = "inverse_square"
    EXPONENTIAL = "exponential"


def _beta_params(m: int) -> tuple[int, int]:
    # 1-based reflection index m; exponents calibrated from the step-up Jacobian.
    return (m - 1) // 2 + 1, m // 2 + 1


def step_up(r: np.ndarray) -> np.ndarray:
    """Levinson step-up: reflection coefficients in (-1,1)^k -> stable theta."""
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ValueError("r must be a non-empty 1-d vector")
    if np.any(np.abs(r) >= 1.0):
        raise UnstableModelError("reflection coefficients must lie in (-1, 1)")
    return _step_up_batch(r[None, :])[0]


def _step_up_batch(r: np.ndarray) -> np.ndarray:
    # r shape (n, k); vectorized over the first axis.
    n, k = r.shape
    a = np.zeros((n, k))
    a[:, 0] = r[:, 0]
    for m in range(2, k + 1):
        prev = a[:, : m - 1].copy()
        a[:, : m - 1] = prev - r[:, m - 1, None] * prev[:, ::-1]
        a[:, m - 1] = r[:, m - 1]
    return a


def step_down(theta: np.ndarray) -> np.ndarray:
    """Inverse of step_up; raises if theta is not strictly stable."""
    theta = np.asarray(theta, dtype=float)
    if not is_stable(theta, 1.0):
        raise UnstableModelError(f"theta={theta} is not stable")
    k = theta.size
    r = np.empty(k)
    a = theta.copy()
    for m in range(k, 0, -1):
        r[m - 1] = a[m - 1]
        if m > 1:
            rm = a[m - 1]
            a = (a[: m - 1] + rm * a[: m - 1][::-1]) / (1.0 - rm * rm)
    return r


def sample_uniform_stable(k: int, rng: np.random.Generator) -> np.ndarray:
    """One draw from the uniform (Lebesgue) distribution on the stability domain."""
    if k < 1:
        raise ValueError("k must be positive")
    while True:
        theta = _sample_uniform_stable_batch(k, 1, rng)[0]
        # Resample the measure-zero event of landing on the numerical boundary.
        if is_stable(theta, 1.0):
            return theta


def _sample_uniform_stable_batch(k: int, n: int, rng: np.random.Generator) -> np.ndarray:
    r = np.empty((n, k))
    for m in range(1, k + 1):
        a, b = _beta_params(m)
        r[:, m - 1] = 2.0 * rng.beta(a, b, size=n) - 1.0
    np.clip(r, -_R_CLIP, _R_CLIP, out=r)
    return _step_up_batch(r)


def rescale_F(theta: np.ndarray, T: float, d_T: int) -> np.ndarray:
    """Shrink theta into the l1 ball of radius ln(T)-1 and pad to length d_T.

    Applies theta_j -> lambda^j theta_j with lambda = min(1, (ln T - 1)/||theta||_1),
    which scales the polynomial roots by 1/lambda and so preserves stability.
    """
    if T < 4:
        raise ValueError("T must be at least 4")
    theta = np.asarray(theta, dtype=float)
    k = theta.size
    if k > d_T:
        raise ValueError("theta longer than the effective dimension")
    return _rescale_batch(theta[None, :], math.log(T) - 1.0, d_T)[0]


def _rescale_batch(thetas: np.ndarray, radius: float, d_T: int) -> np.ndarray:
    n, k = thetas.shape
    norms = np.sum(np.abs(thetas), axis=1)
    lam = np.ones(n)
    over = norms > radius
    lam[over] = radius / norms[over]
    out = np.zeros((n, d_T))
    out[:, :k] = thetas * lam[:, None] ** np.arange(1, k + 1)
    return out


def order_prior(kind: OrderPriorKind, d_T: int) -> np.ndarray:
    """Normalized order weights c_{k,T} over k = 1..d_T."""
    if d_T < 1:
        raise ValueError("d_T must be positive")
    k = np.arange(1, d_T + 1, dtype=float)
    if kind is OrderPriorKind.INVERSE_SQUARE:
        c = k**-2
    elif kind is OrderPriorKind.EXPONENTIAL:
        c = np.exp(-k)
    else:
        raise ValueError(f"unknown order prior kind: {kind!r}")
    return c / c.sum()


@dataclass(frozen=True)
class PriorSpec:
    """Prior over the parameter set: order weights plus per-order uniform draws."""

    gamma: float
    d_T: int
    radius: float
    order_weights: np.ndarray = field(repr=False)
    kind: OrderPriorKind

    def __post_init__(self):
        w = np.array(self.order_weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "order_weights", w)
        if self.gamma < 1:
            raise ValueError("gamma must be at least 1")
        if self.d_T < 1 or w.size != self.d_T:
            raise ValueError("order_weights must have length d_T >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be positive (requires T >= 4)")
        if np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("order_weights must be positive and sum to 1")

    @classmethod
    def for_sample_size(
        cls, T: int, gamma: float = 1.0, kind: OrderPriorKind = OrderPriorKind.INVERSE_SQUARE
    ) -> "PriorSpec":
        from .gibbs import effective_dim  # avoids a module cycle

        d_T = effective_dim(T, gamma)
        return cls(
            gamma=gamma,
            d_T=d_T,
            radius=math.log(T) - 1.0,
            order_weights=order_prior(kind, d_T),
            kind=kind,
        )


def sample_prior(spec: PriorSpec, rng: np.random.Generator) -> np.ndarray:
    """One draw from the prior: order k from the weights, then uniform-stable rescaled."""
    theta, _ = sample_prior_batch(spec, 1, rng)
    return theta[0]


def sample_prior_batch(
    spec: PriorSpec, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """n i.i.d. prior draws, returned as (thetas (n, d_T), orders (n,)).

    Draws are grouped by order so the uniform-stable sampling vectorizes;
    the stream consumption order is deterministic given the generator state.
    """
    if n < 1:
        raise ValueError("n must be positive")
    ks = rng.choice(np.arange(1, spec.d_T + 1), size=n, p=spec.order_weights)
    out = np.zeros((n, spec.d_T))
    for k in np.unique(ks):
        idx = np.nonzero(ks == k)[0]
        raw = _sample_uniform_stable_batch(int(k), idx.size, rng)
        out[idx] = _rescale_batch(raw, spec.radius, spec.d_T)
    return out, ks


def sample_true_theta(d: int, delta: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform draw on the order-d stability domain, contracted into s_d(delta).

    The coefficient scaling theta_j -> delta^j theta_j moves every polynomial
    root modulus up by 1/delta, hence the output spectral radius is < delta.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if not 0.0 < delta <= 1.0:
        raise ValueError("delta must lie in (0, 1]")
    while True:
        theta = sample_uniform_stable(d, rng) * delta ** np.arange(1, d + 1)
        if delta == 1.0 or is_stable(theta, delta):
            return theta


def in_parameter_set(theta: np.ndarray, spec: PriorSpec, tol: float = 1e-9) -> bool:
    """Membership test used by the chain invariants: stable, l1 bound, support."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != spec.d_T:
        return False
    if np.sum(np.abs(theta)) > spec.radius + tol:
        return False
    nz = np.nonzero(theta)[0]
    k = int(nz[-1]) + 1 if nz.size else 1
    return is_stable(theta[:k], 1.0) if np.any(theta) else True
