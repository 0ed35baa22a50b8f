"""Hyperbolic-discounting multiplier.

Under hyperbolic discounting the period-m consumer-goods line is weighted
by 1/(1 + k*m) instead of r**m, and the sum collapses to a Lerch form
(cp/k) * Phi(a + i*p, 1, 1 + 1/k).  The continuous-time analogue has an
antiderivative in terms of the exponential integral; its limit behaviour
is emitted as data for adjudication rather than asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .core import (
    DiscountSpec,
    DivergentRegionError,
    EconomyParams,
    MultiplierResult,
    MultiplierStatus,
)
from .specfun import LerchArgs, exp_integral_ei, lerch_phi

__all__ = [
    "HyperbolicSpec",
    "AdjudicationReport",
    "hyperbolic_term",
    "hyperbolic_multiplier",
    "hyperbolic_share_optimum",
    "continuous_time_adjudicator",
]


@dataclass(frozen=True)
class HyperbolicSpec:
    """Hyperbolic discount coefficient k > 0 (weight 1/(1 + k*t))."""

    k: float

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValueError(f"hyperbolic coefficient k must be > 0, got {self.k}")


@dataclass(frozen=True)
class AdjudicationReport:
    """Partial integrals of the continuous-time value over growing
    horizons, next to the Ei-based candidate limit.  The caller compares
    growth vs plateau; no convergence claim is made here."""

    horizons: tuple[float, ...]
    partial_integrals: tuple[float, ...]
    candidate_limit: float


def hyperbolic_term(
    params: EconomyParams, spec: HyperbolicSpec, period: int
) -> float:
    """Period-n discounted consumer-goods line c*p*(a+i*p)**(n-1)/(1+k*n)."""
    if period < 1:
        raise ValueError("period must be >= 1")
    x = params.line_ratio
    return params.c * params.p * x ** (period - 1) / (1.0 + spec.k * period)


def hyperbolic_multiplier(
    params: EconomyParams, spec: HyperbolicSpec
) -> MultiplierResult:
    """Closed-form sum (cp/k) * Phi(a + i*p, 1, 1 + 1/k).

    Divergent at line ratio >= 1 (harmonic-like tail); a zero numerator
    sums to zero regardless of the ratio.
    """
    x = params.line_ratio
    if params.c == 0.0 or params.p == 0.0:
        return MultiplierResult(MultiplierStatus.CONVERGENT, x, 0.0)
    if x >= 1.0:
        return MultiplierResult(MultiplierStatus.DIVERGENT, x)
    phi = lerch_phi(LerchArgs(x, 1.0 + 1.0 / spec.k))
    value = params.c * params.p / spec.k * phi
    return MultiplierResult(MultiplierStatus.CONVERGENT, x, value)


def _multiplier_in_c(params: EconomyParams, spec: HyperbolicSpec, c: float) -> float:
    result = hyperbolic_multiplier(params.replace(c=c), spec)
    if not result.convergent:
        raise DivergentRegionError(
            f"share {c} leaves the convergent region (line ratio {result.growth_ratio})"
        )
    return result.value


def hyperbolic_share_optimum(
    params: EconomyParams,
    spec: HyperbolicSpec,
    grid_points: int = 201,
    fd_step: float = 1e-6,
    tol: float = 1e-10,
) -> list[float]:
    """Interior optima of the hyperbolic multiplier as a function of c.

    Scans a c-grid on [0, 1] for sign changes of the central-difference
    derivative and refines each bracket by bisection.  Empty list when the
    derivative keeps one sign.  Raises if any c in [0, 1] exits the
    convergence domain (the ratio is maximal at c = 0, where it equals
    a + p).
    """
    if params.a + params.p >= 1.0:
        raise DivergentRegionError(
            "c-range [0, 1] exits the convergent region (a + p = "
            f"{params.a + params.p})"
        )

    lo, hi = fd_step, 1.0 - fd_step

    def deriv(c: float) -> float:
        return (
            _multiplier_in_c(params, spec, c + fd_step)
            - _multiplier_in_c(params, spec, c - fd_step)
        ) / (2.0 * fd_step)

    grid = [lo + (hi - lo) * j / (grid_points - 1) for j in range(grid_points)]
    values = [deriv(c) for c in grid]
    roots = []
    for (c0, d0), (c1, d1) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if d0 == 0.0:
            roots.append(c0)
            continue
        if d0 * d1 < 0.0:
            a, b, da = c0, c1, d0
            while b - a > tol:
                mid = 0.5 * (a + b)
                dm = deriv(mid)
                if dm == 0.0:
                    a = b = mid
                    break
                if da * dm < 0.0:
                    b = mid
                else:
                    a, da = mid, dm
            roots.append(0.5 * (a + b))
    return roots


def continuous_time_adjudicator(
    params: EconomyParams,
    spec: HyperbolicSpec,
    horizons: list[float],
    quad_tol: float = 1e-10,
) -> AdjudicationReport:
    """Partial integrals int_0^T c*p*x**(n-1)/(1 + k*n) dn for each
    horizon, plus the Ei-based candidate limit -(cp/k) * x**(-(k+1)/k)
    * Ei(ln x / k), with x = a + i*p in (0, 1).

    Emits the data; deliberately makes no divergence assertion.
    """
    x = params.line_ratio
    if not 0.0 < x < 1.0:
        raise ValueError(f"line ratio must lie in (0, 1), got {x}")
    c, p, k = params.c, params.p, spec.k

    def integrand(n: float) -> float:
        return c * p * x ** (n - 1.0) / (1.0 + k * n)

    partials = []
    for horizon in sorted(horizons):
        if horizon <= 0.0:
            raise ValueError("horizons must be > 0")
        value, _ = quad(integrand, 0.0, horizon, epsabs=quad_tol, limit=500)
        partials.append(value)

    limit = -(c * p / k) * x ** (-(k + 1.0) / k) * exp_integral_ei(math.log(x) / k)
    return AdjudicationReport(
        horizons=tuple(sorted(horizons)),
        partial_integrals=tuple(partials),
        candidate_limit=limit,
    )


def hyperbolic_series_check(
    params: EconomyParams, spec: HyperbolicSpec, epsilon: float = 1e-12
) -> float:
    """Direct summation of the period terms (tail-bounded); the oracle
    counterpart of hyperbolic_multiplier."""
    from .core import series_value

    return series_value(params, DiscountSpec.hyperbolic(spec.k), epsilon)
