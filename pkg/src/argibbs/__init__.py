"""Forecasting stable AR processes by Gibbs aggregation with an independent
Hastings sampler, plus exact-risk evaluation, theoretical bound calculators and
a reproducible quantile-risk experiment harness."""

from .bounds import (
    BoundConstants,
    ar_budget_M_star,
    gamma0_upper_bound,
    gaussian_abs_exp_moment,
    mcmc_budget_M,
    oracle_constant_E,
    oracle_risk_bound,
)
from .gibbs import (
    ChainConfig,
    ChainSummary,
    acceptance_ratio,
    effective_dim,
    gibbs_mean_oracle,
    learning_rate,
    run_chain,
)
from .harness import (
    ExperimentConfig,
    ResultRow,
    emit_csv,
    emit_plot,
    parse_csv,
    quantile,
    quantile_curves,
    run_experiment,
)
from .risk import RiskOracle, absolute_loss, empirical_risk, exact_risk, excess_risk
from .stable_domain import (
    OrderPriorKind,
    PriorSpec,
    order_prior,
    rescale_F,
    sample_prior,
    sample_true_theta,
    sample_uniform_stable,
    step_down,
    step_up,
)
from .timeseries import (
    ArParams,
    AutocovSequence,
    Path,
    UnstableModelError,
    autocovariances,
    companion_matrix,
    covariance_matrix,
    is_stable,
    simulate_stationary,
)

__version__ = "0.1.0"
