"""Present-value multiplier of future consumer goods.

Closed-form and series multipliers under exponential and hyperbolic
discounting, the equilibrium and comparative-statics identities, a family
of capital-market dynamics ODE models, sensitivity decomposition and
automated prediction checks, all behind a scriptable CLI.
"""

from .core import (
    Allocation,
    ChoiceProblem,
    DiscountSpec,
    DivergentRegionError,
    EconomyParams,
    MultiplierResult,
    MultiplierStatus,
    ShareOptimum,
    ShareRegime,
    consumer_choice,
    equilibrium_gap,
    future_multiplier,
    optimal_share,
    present_multiplier,
    series_oracle,
    series_value,
    share_derivative,
)
from .dynamics import (
    CobbDouglas,
    DynamicsModel,
    GrowthScenario,
    IntegrationControls,
    Law,
    Trajectory,
    marginal_productivity,
    multiplier_blowup_check,
    simulate,
    steady_state_capital,
    time_of_capital,
)
from .hyperbolic import (
    HyperbolicSpec,
    continuous_time_adjudicator,
    hyperbolic_multiplier,
    hyperbolic_share_optimum,
    hyperbolic_term,
)
from .sensitivity import (
    InvestmentSign,
    SensitivityReport,
    consumer_investment_sign,
    delta_Mr,
    equilibrium_channel_constraint,
    extended_delta_Mr,
    partials,
)
from .specfun import LerchArgs, exp_integral_ei, lerch_phi

__version__ = "0.1.0"
