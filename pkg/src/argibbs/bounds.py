"""Calculators for the theoretical risk bound and MCMC iteration budgets.

These are reporting tools: they quantify the gap between the iteration count a
practitioner can afford and the budget the theory asks for. They never drive
the experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class BoundConstants:
    """Ingredients of the oracle-bound constant.

    K: loss Lipschitz constant; A_star, A_tilde: sum and first moment of the
    shift's Lipschitz coefficients; phi_A: exponential moment E[e^{A_star|xi|}];
    D_lip: predictor-set Lipschitz constant; C1..C3: prior mass constants;
    gamma0: process variance; epsilon: confidence level.
    """

    K: float
    A_star: float
    A_tilde: float
    phi_A: float
    D_lip: float
    C1: float
    C2: float
    C3: float
    gamma0: float
    epsilon: float

    def __post_init__(self):
        if min(self.K, self.A_star, self.A_tilde, self.phi_A, self.D_lip, self.gamma0) <= 0:
            raise ValueError("K, A_star, A_tilde, phi_A, D_lip, gamma0 must be positive")
        if self.C1 < 0:
            raise ValueError("C1 must be non-negative")
        if not (0 < self.C2 <= 1 and 0 < self.C3 <= 1):
            raise ValueError("C2 and C3 must lie in (0, 1]")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")


def gaussian_abs_exp_moment(a: float) -> float:
    """E[exp(a |xi|)] for a standard Gaussian xi: 2 e^{a^2/2} Phi(a)."""
    if a < 0:
        raise ValueError("a must be non-negative")
    return math.exp(a * a / 2.0) * math.erfc(-a / math.sqrt(2.0))


def oracle_constant_E(c: BoundConstants) -> float:
    """The eight-term constant multiplying ln^3(T)/sqrt(T) in the oracle bound."""
    return (
        c.C1
        + 8.0
        + 2.0 / _LN2
        - 2.0 * math.log(c.C2) / _LN2**2
        - 4.0 * math.log(c.C3) / _LN2
        + 8.0 * c.K**2 * (c.A_star + c.A_tilde) ** 2 / c.A_tilde**2
        + c.K * c.D_lip * c.C3 / (8.0 * _LN2**3)
        + 4.0 * c.K * c.phi_A / _LN2
        + 2.0 * c.K**2 * c.phi_A / _LN2**2
    )


def oracle_risk_bound(T: int, epsilon: float, E: float, inf_risk: float) -> float:
    """Oracle bound: inf risk + E ln^3(T)/sqrt(T) + (8 ln T / sqrt(T)) ln(1/eps)."""
    if T < 4:
        raise ValueError("T must be at least 4")
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    lt = math.log(T)
    rt = math.sqrt(T)
    return inf_risk + E * lt**3 / rt + 8.0 * lt / rt * math.log(1.0 / epsilon)


def mcmc_budget_M(T: int, epsilon: float, A_eta_T: float) -> float:
    """Iteration budget A^2 T / (eps^2 ln^6 T) for the approximation guarantee."""
    if T < 4:
        raise ValueError("T must be at least 4")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if A_eta_T < 0:
        raise ValueError("A_eta_T must be non-negative")
    return A_eta_T**2 * T / (epsilon**2 * math.log(T) ** 6)


def ar_budget_M_star(T: int, epsilon: float, gamma0: float) -> float:
    """AR specialization 9 g0^3 T^2 exp(g0 T / 16) / (2 pi eps^2 ln^3 T).

    Overflows to +inf for moderate T; that explosion is the point being
    reported, not an error.
    """
    if T < 4:
        raise ValueError("T must be at least 4")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    if gamma0 < 0:
        raise ValueError("gamma0 must be non-negative")
    try:
        grow = math.exp(gamma0 * T / 16.0)
    except OverflowError:
        return math.inf
    value = 9.0 * gamma0**3 * T**2 * grow / (2.0 * math.pi * epsilon**2 * math.log(T) ** 3)
    return value if math.isfinite(value) else math.inf


def gamma0_upper_bound(sigma: float, K_bar: float, delta1: float) -> float:
    """Variance bound K_bar^2 sigma^2 / (1 - delta1^2) for a stable AR process."""
    if not 0 <= delta1 < 1:
        raise ValueError("delta1 must lie in [0, 1)")
    return K_bar**2 * sigma**2 / (1.0 - delta1**2)
