"""First-order sensitivity of the present-value multiplier.

Analytic partials in p, R and c (derived directly from the closed form,
validated against finite differences in the tests), the two-channel
first-order change decomposition, the equilibrium co-movement constraint
and the consumer-goods investment sign classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import DivergentRegionError, EconomyParams, present_multiplier

__all__ = [
    "SensitivityReport",
    "InvestmentSign",
    "partials",
    "delta_Mr",
    "equilibrium_channel_constraint",
    "extended_delta_Mr",
    "consumer_investment_sign",
]


@dataclass(frozen=True)
class SensitivityReport:
    dMr_dp: float
    dMr_dR: float
    dMr_dc: float
    delta_Mr_first_order: float | None = None


class InvestmentSign(enum.Enum):
    NON_NEGATIVE = "NonNegative"
    NEGATIVE = "Negative"
    BOUNDARY = "Boundary"


def partials(params: EconomyParams) -> SensitivityReport:
    """Analytic partials of M_r = cpr/D, D = 1 - r*a - r*p + r*p*c:

        dMr/dp = c*r*(1 - r*a) / D**2
        dMr/dR = -c*p / ((1+R)**2 * D**2)
        dMr/dc = p*r*(1 - r*a - r*p) / D**2

    The factor 1 - r*a - r*p in dMr/dc is evaluated as r*(R + n - p)
    (identical in exact arithmetic) so the partial vanishes cleanly at
    p = R + n.
    """
    result = present_multiplier(params)
    if not result.convergent:
        raise DivergentRegionError(
            f"partials require the convergent region (growth ratio {result.growth_ratio})"
        )
    r, a, p, c = params.r, params.a, params.p, params.c
    d = 1.0 - r * a - r * p + r * p * c
    d2 = d * d
    one_plus_r = 1.0 + params.R
    gap = math.fsum([params.R, params.n, -p])
    return SensitivityReport(
        dMr_dp=c * r * (1.0 - r * a) / d2,
        dMr_dR=-c * p / (one_plus_r * one_plus_r * d2),
        dMr_dc=p * r * r * gap / d2,
    )


def delta_Mr(
    params: EconomyParams, rates: tuple[float, float], dt: float
) -> float:
    """Two-channel first-order change
    dMr/dp * dp_dt * dt + dMr/dR * dR_dt * dt."""
    dp_dt, dR_dt = rates
    report = partials(params)
    return (report.dMr_dp * dp_dt + report.dMr_dR * dR_dt) * dt


def equilibrium_channel_constraint(
    params: EconomyParams, rates: tuple[float, float]
) -> float:
    """Residual dMr/dp * dp_dt + dMr/dR * dR_dt.  Zero characterizes
    equilibrium-preserving co-movement of p and R."""
    dp_dt, dR_dt = rates
    report = partials(params)
    return report.dMr_dp * dp_dt + report.dMr_dR * dR_dt


def extended_delta_Mr(
    params: EconomyParams,
    rates: tuple[float, float],
    c_channel: tuple[float, float],
    dt: float,
) -> float:
    """delta_Mr plus the share channel
    dMr/dc * (dc_dp * dp_dt + dc_dR * dR_dt) * dt.

    At p = R + n the added term is exactly zero for any channel rates
    because dMr/dc vanishes there.
    """
    dp_dt, dR_dt = rates
    dc_dp, dc_dR = c_channel
    report = partials(params)
    base = (report.dMr_dp * dp_dt + report.dMr_dR * dR_dt) * dt
    return base + report.dMr_dc * (dc_dp * dp_dt + dc_dR * dR_dt) * dt


def consumer_investment_sign(
    params: EconomyParams,
    dc_dR: float,
    dK_dR: float,
    tol: float = 1e-12,
) -> InvestmentSign:
    """Sign of the change in consumer-goods investment when R moves:
    non-negative iff the share adjusts faster than capital
    (dc_dR > -dK_dR).  Requires the model's stated signs dc_dR > 0 and
    dK_dR < 0."""
    if dc_dR <= 0.0:
        raise ValueError(f"dc_dR must be > 0, got {dc_dR}")
    if dK_dR >= 0.0:
        raise ValueError(f"dK_dR must be < 0, got {dK_dR}")
    diff = dc_dR + dK_dR
    if abs(diff) <= tol:
        return InvestmentSign.BOUNDARY
    return InvestmentSign.NON_NEGATIVE if diff > 0.0 else InvestmentSign.NEGATIVE
