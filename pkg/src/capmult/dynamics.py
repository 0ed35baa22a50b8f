"""Capital-market dynamics: Cobb-Douglas productivity, the ODE law family,
separable time map, productivity-growth scenario and multiplier blow-up.

All laws revolve around the same equilibrium p = R + n (equivalently a
present-value multiplier of one): capital, the discount rate or
productivity adjust until the gap closes.  Integration uses an adaptive
embedded Runge-Kutta 4(5) pair via scipy's solve_ivp.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .core import EconomyParams, present_multiplier

__all__ = [
    "CobbDouglas",
    "Law",
    "DynamicsModel",
    "IntegrationControls",
    "TrajectorySample",
    "Trajectory",
    "GrowthScenario",
    "BlowupResult",
    "marginal_productivity",
    "steady_state_capital",
    "net_capital_flow",
    "gross_capital_flow",
    "simulate",
    "time_of_capital",
    "growth_scenario_rate",
    "beta_for_initial_rate",
    "multiplier_blowup_check",
]


@dataclass(frozen=True)
class CobbDouglas:
    """Production function Y = A * L**alpha_L * K**b with b < 1 so that
    the marginal productivity of capital decreases in K."""

    A: float
    L: float
    alpha_L: float
    b: float

    def __post_init__(self):
        if self.A <= 0.0 or self.L <= 0.0:
            raise ValueError("A and L must be > 0")
        if not 0.0 < self.alpha_L < 1.0:
            raise ValueError(f"labor exponent must lie in (0, 1), got {self.alpha_L}")
        if not 0.0 < self.b < 1.0:
            raise ValueError(f"capital exponent must lie in (0, 1), got {self.b}")

    @property
    def scale(self) -> float:
        """A * b * L**alpha_L, the K-independent factor of dY/dK."""
        return self.A * self.b * self.L**self.alpha_L


class Law(enum.Enum):
    NET_CAPITAL = "net_capital"                    # dK/dt = p(K) - R - n
    GROSS_INVESTMENT = "gross_investment"          # dK/dt = p(K) - R
    RATE_ADJUST = "rate_adjust"                    # dR/dt = p - R - n
    JOINT_ADJUST = "joint_adjust"                  # dR/dt = p-R-n, dp/dt = R+n-p
    MULTIPLIER_INVESTMENT = "multiplier_investment"  # dK/dt = C*(M_r - 1)
    SYSTEM35 = "system35"  # dK = M_r - 1, dR = p(K) - R - n
    SYSTEM36 = "system36"  # dK = M_r - 1, dR = K - K*(R)
    SYSTEM37 = "system37"  # dK = M_r - 1, dp = R + n - p
    SYSTEM38 = "system38"  # dK = M_r - 1, R = f(K) affine

    @property
    def needs_multiplier(self) -> bool:
        return self in (
            Law.MULTIPLIER_INVESTMENT,
            Law.SYSTEM35,
            Law.SYSTEM36,
            Law.SYSTEM37,
            Law.SYSTEM38,
        )

    @property
    def needs_cobb_douglas(self) -> bool:
        return self in (
            Law.NET_CAPITAL,
            Law.GROSS_INVESTMENT,
            Law.MULTIPLIER_INVESTMENT,
            Law.SYSTEM35,
            Law.SYSTEM36,
            Law.SYSTEM38,
        )


@dataclass(frozen=True)
class DynamicsModel:
    """A dynamics law plus its free coefficients.

    investment_gain is the C of the multiplier-investment law (kept at 1
    for the system-35..38 family unless overridden); rate_response holds
    the affine coefficients (f0, f1) of R = f0 + f1*K for system38.
    """

    law: Law
    investment_gain: float = 1.0
    rate_response: tuple[float, float] | None = None

    def __post_init__(self):
        if self.investment_gain <= 0.0:
            raise ValueError("investment_gain must be > 0")
        if self.law is Law.SYSTEM38 and self.rate_response is None:
            raise ValueError("system38 requires rate_response coefficients (f0, f1)")


@dataclass(frozen=True)
class IntegrationControls:
    rtol: float = 1e-9
    atol: float = 1e-12
    dt_out: float | None = None  # output cadence; horizon/200 if None
    mark_levels: tuple[float, ...] = ()  # capital levels whose crossing times are recorded


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    K: float
    p: float
    R: float
    c: float
    M_r: float | None


class Termination(enum.Enum):
    HORIZON_REACHED = "HorizonReached"
    DIVERGENCE_REGION_ENTERED = "DivergenceRegionEntered"
    STEP_FAILURE = "StepFailure"


@dataclass(frozen=True)
class Trajectory:
    samples: tuple[TrajectorySample, ...]
    terminated: Termination
    crossing_times: dict[float, float] = field(default_factory=dict)


@dataclass(frozen=True)
class GrowthScenario:
    """Exponentially growing marginal productivity p(t) = p0 * e**(gamma*t),
    with beta the free constant of the closed-form discount-rate path."""

    gamma: float
    beta: float

    def __post_init__(self):
        if self.gamma == -1.0:
            raise ValueError("gamma = -1 makes the closed form singular")


@dataclass(frozen=True)
class BlowupResult:
    kind: str  # "threshold_crossed" | "region_exit" | "horizon_exhausted"
    time: float | None


def marginal_productivity(cd: CobbDouglas, K: float) -> float:
    """dY/dK = A*b*L**alpha_L * K**(b-1), strictly decreasing in K."""
    if K <= 0.0:
        raise ValueError(f"capital must be > 0, got {K}")
    return cd.scale * K ** (cd.b - 1.0)


def steady_state_capital(cd: CobbDouglas, R: float, n: float) -> float:
    """Unique root K* of p(K) = R + n."""
    if R + n <= 0.0:
        raise ValueError("R + n must be > 0")
    return (cd.scale / (R + n)) ** (1.0 / (1.0 - cd.b))


def net_capital_flow(cd: CobbDouglas, params: EconomyParams, K: float) -> float:
    """Net capital change p(K) - R - n."""
    return marginal_productivity(cd, K) - params.R - params.n


def gross_capital_flow(cd: CobbDouglas, params: EconomyParams, K: float) -> float:
    """Gross investment expenditure p(K) - R (net flow plus depreciation)."""
    return marginal_productivity(cd, K) - params.R


def _mr_value(c: float, p: float, n: float, R: float) -> float | None:
    """Present-value multiplier as a plain float, None outside the
    convergence region.  Mirrors core.present_multiplier without the
    dataclass overhead (called inside ODE right-hand sides)."""
    a = 1.0 - n
    ratio = a + (1.0 - c) * p
    if c == 0.0 or p == 0.0:
        return 0.0
    if ratio >= 1.0 + R:
        return None
    return c * p / math.fsum([1.0, R, -a, -(1.0 - c) * p])


def _mp_safe(cd: CobbDouglas, K: float) -> float:
    """Marginal productivity for ODE right-hand sides: NaN instead of an
    exception when the state strays to K <= 0 (the step controller then
    backs off and the capital-floor event terminates the run)."""
    if K <= 0.0:
        return math.nan
    return cd.scale * K ** (cd.b - 1.0)


def _ss_capital_root(cd: CobbDouglas, R: float, n: float) -> float:
    """K*(R) by bracketed root-finding on p(K) - R - n (tol 1e-10)."""
    target = R + n
    if target <= 0.0:
        return math.nan
    lo, hi = 1e-12, 1.0
    while marginal_productivity(cd, hi) > target:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("failed to bracket steady-state capital")
    return brentq(
        lambda K: marginal_productivity(cd, K) - target, lo, hi, xtol=1e-10
    )


def _assemble_rhs(model, cd, params0):
    """Return (y0, rhs, unpack) for the selected law.

    unpack(t, y) -> (K, p, R) maps the state vector back to the recorded
    quantities; c is held constant during integration.
    """
    law = model.law
    c, n, R0, p0 = params0.c, params0.n, params0.R, params0.p
    gain = model.investment_gain

    if law in (Law.NET_CAPITAL, Law.GROSS_INVESTMENT):
        dep = n if law is Law.NET_CAPITAL else 0.0

        def rhs(t, y):
            return [_mp_safe(cd, y[0]) - R0 - dep]

        def unpack(t, y):
            return y[0], _mp_safe(cd, y[0]), R0

        return [None], rhs, unpack

    if law is Law.RATE_ADJUST:

        def rhs(t, y):
            return [p0 - y[0] - n]

        def unpack(t, y):
            return None, p0, y[0]

        return [R0], rhs, unpack

    if law is Law.JOINT_ADJUST:

        def rhs(t, y):
            p, R = y
            return [R + n - p, p - R - n]

        def unpack(t, y):
            return None, y[0], y[1]

        return [p0, R0], rhs, unpack

    if law in (Law.MULTIPLIER_INVESTMENT, Law.SYSTEM38):
        if law is Law.SYSTEM38:
            f0, f1 = model.rate_response

            def rate_of(K):
                return f0 + f1 * K

        else:

            def rate_of(K):
                return R0

        def rhs(t, y):
            K = y[0]
            mr = _mr_value(c, _mp_safe(cd, K), n, rate_of(K))
            return [gain * ((mr if mr is not None else np.nan) - 1.0)]

        def unpack(t, y):
            return y[0], _mp_safe(cd, y[0]), rate_of(y[0])

        return [None], rhs, unpack

    if law in (Law.SYSTEM35, Law.SYSTEM36):

        def drdt(K, R):
            if law is Law.SYSTEM35:
                return _mp_safe(cd, K) - R - n
            return K - _ss_capital_root(cd, R, n)

        def rhs(t, y):
            K, R = y
            mr = _mr_value(c, _mp_safe(cd, K), n, R)
            return [gain * ((mr if mr is not None else np.nan) - 1.0), drdt(K, R)]

        def unpack(t, y):
            return y[0], _mp_safe(cd, y[0]), y[1]

        return [None, R0], rhs, unpack

    if law is Law.SYSTEM37:

        def rhs(t, y):
            K, p = y
            mr = _mr_value(c, p, n, R0)
            return [gain * ((mr if mr is not None else np.nan) - 1.0), R0 + n - p]

        def unpack(t, y):
            return y[0], y[1], R0

        return [None, p0], rhs, unpack

    raise ValueError(f"unknown law {law}")


def simulate(
    model: DynamicsModel,
    cd: CobbDouglas | None,
    params0: EconomyParams,
    K0: float,
    horizon: float,
    controls: IntegrationControls = IntegrationControls(),
) -> Trajectory:
    """Integrate the selected law and sample (t, K, p, R, c, M_r).

    Laws that do not evolve capital carry K0 along unchanged.  Integration
    stops early with DivergenceRegionEntered when a law that consumes the
    multiplier leaves its convergence region, and with StepFailure when
    the step controller gives up.
    """
    if K0 <= 0.0:
        raise ValueError("K0 must be > 0")
    if horizon <= 0.0:
        raise ValueError("horizon must be > 0")
    if model.law.needs_cobb_douglas and cd is None:
        raise ValueError(f"law {model.law.value} requires a Cobb-Douglas spec")

    y0_template, rhs, unpack = _assemble_rhs(model, cd, params0)
    evolves_capital = y0_template[0] is None
    y0 = [K0 if v is None else v for v in y0_template]

    events = []
    if model.law.needs_multiplier:

        def convergence_margin(t, y):
            K, p, R = unpack(t, y)
            return (1.0 + R) - ((1.0 - params0.n) + (1.0 - params0.c) * p)

        convergence_margin.terminal = True
        convergence_margin.direction = -1
        if convergence_margin(0.0, y0) <= 0.0:
            # already outside the convergence region: nothing to integrate
            K, p, R = unpack(0.0, y0)
            sample = TrajectorySample(0.0, K0 if K is None else K, p, R,
                                      params0.c, None)
            return Trajectory((sample,), Termination.DIVERGENCE_REGION_ENTERED)
        events.append(convergence_margin)

    if evolves_capital:

        def capital_floor(t, y):
            return y[0] - 1e-9

        capital_floor.terminal = True
        capital_floor.direction = -1
        events.append(capital_floor)

    mark_offset = len(events)
    for level in controls.mark_levels:

        def crossing(t, y, _level=level):
            K, _, _ = unpack(t, y)
            return (K if K is not None else K0) - _level

        events.append(crossing)

    dt_out = controls.dt_out if controls.dt_out is not None else horizon / 200.0
    t_eval = np.arange(0.0, horizon + 0.5 * dt_out, dt_out)
    t_eval = t_eval[t_eval <= horizon]

    sol = solve_ivp(
        rhs,
        (0.0, horizon),
        y0,
        method="RK45",
        rtol=controls.rtol,
        atol=controls.atol,
        t_eval=t_eval,
        events=events or None,
        dense_output=False,
    )

    if sol.status == -1:
        terminated = Termination.STEP_FAILURE
    elif sol.status == 1 and model.law.needs_multiplier and len(sol.t_events[0]) > 0:
        terminated = Termination.DIVERGENCE_REGION_ENTERED
    elif sol.status == 1:
        terminated = Termination.STEP_FAILURE  # capital hit the floor
    else:
        terminated = Termination.HORIZON_REACHED

    samples = []
    for t, y in zip(sol.t, sol.y.T):
        K, p, R = unpack(t, y)
        K = K0 if K is None else K
        mr = _mr_value(params0.c, p, params0.n, R)
        samples.append(TrajectorySample(float(t), float(K), float(p), float(R),
                                        params0.c, mr))

    crossings = {}
    if controls.mark_levels:
        for level, times in zip(controls.mark_levels, sol.t_events[mark_offset:]):
            if len(times) > 0:
                crossings[level] = float(times[0])

    return Trajectory(tuple(samples), terminated, crossings)


def time_of_capital(
    cd: CobbDouglas, R: float, n: float, K_from: float, K_to: float
) -> float:
    """Travel time of the net-capital law between two capital levels,
    as the separable-ODE integral of dK/(p(K) - R - n).

    Both endpoints must sit on the same side of K* (the integrand is
    singular there); reversing the limits negates the result.
    """
    if K_from <= 0.0 or K_to <= 0.0:
        raise ValueError("capital levels must be > 0")
    if K_from == K_to:
        return 0.0
    k_star = steady_state_capital(cd, R, n)
    lo, hi = min(K_from, K_to), max(K_from, K_to)
    if lo < k_star < hi or math.isclose(lo, k_star) or math.isclose(hi, k_star):
        raise ValueError(
            f"interval [{lo}, {hi}] touches the steady state K* = {k_star}"
        )

    def integrand(K):
        return 1.0 / (marginal_productivity(cd, K) - R - n)

    value, _ = quad(integrand, K_from, K_to, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value


def growth_scenario_rate(
    scn: GrowthScenario, p0: float, n: float, t: float
) -> float:
    """Closed-form solution of dR/dt = p0*e**(gamma*t) - R - n:
    R(t) = beta*e**(-t) - n + p0*e**(gamma*t)/(1 + gamma)."""
    return scn.beta * math.exp(-t) - n + p0 * math.exp(scn.gamma * t) / (1.0 + scn.gamma)


def beta_for_initial_rate(
    R0: float, p0: float, n: float, gamma: float
) -> float:
    """The beta that pins the closed-form rate path at R(0) = R0."""
    return R0 + n - p0 / (1.0 + gamma)


def multiplier_blowup_check(
    scn: GrowthScenario,
    params: EconomyParams,
    threshold: float,
    horizon: float = 500.0,
    controls: IntegrationControls = IntegrationControls(),
) -> BlowupResult:
    """Integrate dR/dt = p0*e**(gamma*t) - R - n with p growing at rate
    gamma and report the first time the present-value multiplier crosses
    the threshold, or leaves the convergent region (reported distinctly;
    both evidence blow-up)."""
    if scn.gamma < 0.0:
        raise ValueError("blow-up check requires gamma >= 0")
    if threshold <= 1.0:
        raise ValueError("threshold must be > 1")
    c, n, p0 = params.c, params.n, params.p

    def p_of(t):
        return p0 * math.exp(scn.gamma * t)

    def rhs(t, y):
        return [p_of(t) - y[0] - n]

    def region_margin(t, y):
        return (1.0 + y[0]) - ((1.0 - n) + (1.0 - c) * p_of(t))

    region_margin.terminal = True
    region_margin.direction = -1

    def threshold_margin(t, y):
        mr = _mr_value(c, p_of(t), n, y[0])
        return (mr if mr is not None else threshold + 1.0) - threshold

    threshold_margin.terminal = True
    threshold_margin.direction = 1

    sol = solve_ivp(
        rhs,
        (0.0, horizon),
        [params.R],
        method="RK45",
        rtol=controls.rtol,
        atol=controls.atol,
        events=[threshold_margin, region_margin],
    )
    crossed = sol.t_events[0]
    exited = sol.t_events[1]
    t_cross = float(crossed[0]) if len(crossed) else math.inf
    t_exit = float(exited[0]) if len(exited) else math.inf
    if t_cross <= t_exit and math.isfinite(t_cross):
        return BlowupResult("threshold_crossed", t_cross)
    if math.isfinite(t_exit):
        return BlowupResult("region_exit", t_exit)
    return BlowupResult("horizon_exhausted", None)
