"""Discrete-time multiplier of future consumer goods.

One unit of capital is split between consumer-goods production (share ``c``)
and production of means of production (share ``i = 1 - c``). Each period the
capital stock retains a fraction ``a = 1 - n`` and the producer-goods share
compounds through marginal productivity ``p``, so the per-period consumer
output lines form a geometric sequence with ratio ``a + i*p``. This module
holds the parameter model, the undiscounted and present-value closed forms,
the brute-force series oracle, the optimal-share classifier, the equilibrium
identity and the corner-solution consumer choice.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "EconomyParams",
    "DiscountSpec",
    "MultiplierStatus",
    "MultiplierResult",
    "ShareRegime",
    "ShareOptimum",
    "ChoiceProblem",
    "Allocation",
    "DivergentRegionError",
    "future_multiplier",
    "present_multiplier",
    "series_oracle",
    "series_value",
    "share_derivative",
    "optimal_share",
    "equilibrium_gap",
    "consumer_choice",
]

#: absolute tolerance for equality-type conditions (p = R + n, M_r = 1)
DEFAULT_EQ_TOL = 1e-9

#: hard cap on oracle summation length
MAX_ORACLE_TERMS = 10**7


class DivergentRegionError(ValueError):
    """Raised when an operation requires a convergent multiplier but the
    parameters sit outside the convergence region."""


@dataclass(frozen=True)
class EconomyParams:
    """Economy parameter tuple (c, p, n, R) with derived factors.

    c : share of investment into consumer-goods production, in [0, 1]
    p : marginal productivity of capital, per period, > 0 (0 allowed for
        the degenerate no-production case)
    n : depreciation rate, per period, in (0, 1)
    R : discount rate, per period, > 0
    """

    c: float
    p: float
    n: float
    R: float

    def __post_init__(self):
        if not 0.0 <= self.c <= 1.0:
            raise ValueError(f"consumer-goods share c must lie in [0, 1], got {self.c}")
        if self.p < 0.0:
            raise ValueError(f"marginal productivity p must be >= 0, got {self.p}")
        if not 0.0 < self.n < 1.0:
            raise ValueError(f"depreciation rate n must lie in (0, 1), got {self.n}")
        if self.R <= 0.0:
            raise ValueError(f"discount rate R must be > 0, got {self.R}")

    @property
    def a(self) -> float:
        """Retention factor 1 - n."""
        return 1.0 - self.n

    @property
    def i(self) -> float:
        """Producer-goods share 1 - c."""
        return 1.0 - self.c

    @property
    def r(self) -> float:
        """One-period discount factor 1/(1 + R)."""
        return 1.0 / (1.0 + self.R)

    @property
    def line_ratio(self) -> float:
        """Geometric ratio a + i*p of the undiscounted output lines."""
        return self.a + self.i * self.p

    def replace(self, **kwargs) -> "EconomyParams":
        vals = {"c": self.c, "p": self.p, "n": self.n, "R": self.R}
        vals.update(kwargs)
        return EconomyParams(**vals)


@dataclass(frozen=True)
class DiscountSpec:
    """Selector between exponential discounting (weight r**t, rate taken
    from the economy's R) and hyperbolic discounting (weight 1/(1 + k*t))."""

    kind: str  # "exponential" | "hyperbolic"
    k: float | None = None

    def __post_init__(self):
        if self.kind not in ("exponential", "hyperbolic"):
            raise ValueError(f"unknown discounting kind {self.kind!r}")
        if self.kind == "hyperbolic":
            if self.k is None or self.k <= 0.0:
                raise ValueError("hyperbolic discounting requires coefficient k > 0")

    @classmethod
    def exponential(cls) -> "DiscountSpec":
        return cls("exponential")

    @classmethod
    def hyperbolic(cls, k: float) -> "DiscountSpec":
        return cls("hyperbolic", k)


class MultiplierStatus(enum.Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"


@dataclass(frozen=True)
class MultiplierResult:
    """Multiplier value or an explicit divergence marker.

    Divergence is a modeling boundary, not a fault: it is reported as a
    first-class result, never as an exception or a non-finite number.
    """

    status: MultiplierStatus
    growth_ratio: float
    value: float | None = None

    @property
    def convergent(self) -> bool:
        return self.status is MultiplierStatus.CONVERGENT


class ShareRegime(enum.Enum):
    CORNER_ZERO = "CornerZero"
    INTERIOR = "Interior"
    CORNER_ONE = "CornerOne"


@dataclass(frozen=True)
class ShareOptimum:
    regime: ShareRegime
    discriminant: float  # 1 - r*a - r*p


@dataclass(frozen=True)
class ChoiceProblem:
    """Allocate today's wealth W between consumption and investment given
    the present-value multiplier M_r."""

    W: float
    M_r: float

    def __post_init__(self):
        if self.W < 0.0:
            raise ValueError(f"wealth must be >= 0, got {self.W}")


@dataclass(frozen=True)
class Allocation:
    """Corner-solution allocation.  When the agent is indifferent
    (M_r = 1 within tolerance) ``k_range`` carries the full interval
    [0, W] and the point values are None."""

    consumption: float | None
    invested: float | None
    indifferent: bool = False
    k_range: tuple[float, float] | None = None


def _denominator(params: EconomyParams) -> float:
    """Present-value denominator scaled by (1 + R).

    cpr/(1 - r(a+ip)) == cp/((1+R) - (a+ip)); the scaled form avoids
    the cancellation in 1 - r(a+ip) near equilibrium.  fsum keeps the
    four-term sum correctly rounded.
    """
    return math.fsum([1.0, params.R, -params.a, -(params.i * params.p)])


def future_multiplier(params: EconomyParams) -> MultiplierResult:
    """Undiscounted multiplier M = cp/(1 - a - i*p).

    A zero numerator (c = 0 or p = 0) sums to zero regardless of the line
    ratio, so it is reported convergent even at ratio >= 1.
    """
    ratio = params.line_ratio
    if params.c == 0.0 or params.p == 0.0:
        return MultiplierResult(MultiplierStatus.CONVERGENT, ratio, 0.0)
    if ratio >= 1.0:
        return MultiplierResult(MultiplierStatus.DIVERGENT, ratio)
    value = params.c * params.p / (1.0 - ratio)
    return MultiplierResult(MultiplierStatus.CONVERGENT, ratio, value)


def present_multiplier(params: EconomyParams) -> MultiplierResult:
    """Present-value multiplier M_r = cpr/(1 - r(a + i*p)).

    Equals 1 exactly at capital-market equilibrium p = R + n, for any c.
    """
    ratio = params.r * params.line_ratio
    if params.c == 0.0 or params.p == 0.0:
        return MultiplierResult(MultiplierStatus.CONVERGENT, ratio, 0.0)
    if params.line_ratio >= 1.0 + params.R:
        return MultiplierResult(MultiplierStatus.DIVERGENT, ratio)
    value = params.c * params.p / _denominator(params)
    return MultiplierResult(MultiplierStatus.CONVERGENT, ratio, value)


def series_oracle(
    params: EconomyParams, discount: DiscountSpec, num_terms: int
) -> np.ndarray:
    """Partial sums of the discounted consumer-goods series.

    The period-t undiscounted line is c*p*(a + i*p)**(t-1); exponential
    discounting weights it by r**t, hyperbolic by 1/(1 + k*t).  This is the
    brute-force oracle for the closed-form multipliers and is kept free of
    any closed-form shortcut.
    """
    if num_terms < 1:
        raise ValueError("num_terms must be >= 1")
    if num_terms > MAX_ORACLE_TERMS:
        raise ValueError(f"num_terms capped at {MAX_ORACLE_TERMS}")
    t = np.arange(1, num_terms + 1, dtype=float)
    x = params.line_ratio
    lines = params.c * params.p * np.power(x, t - 1.0)
    if discount.kind == "exponential":
        weights = np.power(params.r, t)
    else:
        weights = 1.0 / (1.0 + discount.k * t)
    return np.cumsum(lines * weights)


def series_value(
    params: EconomyParams, discount: DiscountSpec, epsilon: float = 1e-12
) -> float:
    """Sum the discounted series until the analytic tail bound drops
    below ``epsilon`` (hard cap 1e7 terms).

    For both discountings the term at period t is bounded by the geometric
    envelope term_t <= first * rho**(t-1) with rho = r*(a+ip) respectively
    a+ip, so the tail after N terms is <= term_N * rho/(1 - rho).
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be > 0")
    x = params.line_ratio
    if discount.kind == "exponential":
        rho = params.r * x
        first = params.c * params.p * params.r
    else:
        rho = x
        first = params.c * params.p / (1.0 + discount.k)
    if first == 0.0:
        return 0.0
    if rho >= 1.0:
        raise DivergentRegionError(f"series does not converge (ratio {rho})")
    # geometric envelope: N with first*rho^N/(1-rho) <= epsilon
    n_terms = 1
    if rho > 0.0:
        bound = epsilon * (1.0 - rho) / first
        if bound < 1.0:
            n_terms = min(int(math.log(bound) / math.log(rho)) + 2, MAX_ORACLE_TERMS)
    return float(series_oracle(params, discount, n_terms)[-1])


def share_derivative(params: EconomyParams) -> float:
    """Analytic dM_r/dc = p*r*(1 - r*a - r*p)/D**2 with
    D = 1 - r*a - r*p + r*p*c.

    Vanishes exactly at p = R + n, where M_r is constant in c; its sign
    equals sign(R + n - p) elsewhere.  The factor 1 - r*a - r*p is
    evaluated as r*(R + n - p) (identical in exact arithmetic) so the
    sign identity holds without cancellation noise.
    """
    result = present_multiplier(params)
    if not result.convergent:
        raise DivergentRegionError(
            "share derivative requires the convergent region "
            f"(growth ratio {result.growth_ratio})"
        )
    r = params.r
    d = 1.0 - r * params.a - r * params.p + r * params.p * params.c
    gap = math.fsum([params.R, params.n, -params.p])
    return params.p * r * r * gap / (d * d)


def optimal_share(params: EconomyParams, tol: float = DEFAULT_EQ_TOL) -> ShareOptimum:
    """Classify the optimal consumer-goods share by the sign of
    1 - r*a - r*p (equivalently of R + n - p)."""
    disc = 1.0 - params.r * params.a - params.r * params.p
    if abs(equilibrium_gap(params)) <= tol:
        regime = ShareRegime.INTERIOR
    elif disc < 0.0:
        regime = ShareRegime.CORNER_ZERO
    else:
        regime = ShareRegime.CORNER_ONE
    return ShareOptimum(regime, disc)


def equilibrium_gap(params: EconomyParams) -> float:
    """p - R - n; zero means capital-market equilibrium."""
    return params.p - params.R - params.n


def consumer_choice(problem: ChoiceProblem, tol: float = DEFAULT_EQ_TOL) -> Allocation:
    """Corner solution of max C + M_r*K subject to C + K = W."""
    if abs(problem.M_r - 1.0) <= tol:
        return Allocation(None, None, indifferent=True, k_range=(0.0, problem.W))
    if problem.M_r > 1.0:
        return Allocation(0.0, problem.W)
    return Allocation(problem.W, 0.0)
