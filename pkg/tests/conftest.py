import numpy as np
import pytest

from capmult.core import EconomyParams


def sample_convergent(
    rng: np.random.Generator,
    count: int,
    max_ratio: float = 0.99,
    min_eq_gap: float = 0.0,
) -> list[EconomyParams]:
    """Random tuples inside the convergence region r*(a+ip) <= max_ratio,
    optionally kept away from the equilibrium p = R + n."""
    out = []
    while len(out) < count:
        c = rng.uniform(0.05, 0.95)
        n = rng.uniform(0.01, 0.3)
        R = rng.uniform(0.01, 0.3)
        p = rng.uniform(0.01, 0.6)
        params = EconomyParams(c, p, n, R)
        if params.r * params.line_ratio > max_ratio:
            continue
        if min_eq_gap and abs(p - R - n) < min_eq_gap:
            continue
        out.append(params)
    return out


def sample_equilibrium(rng: np.random.Generator, count: int) -> list[EconomyParams]:
    """Random tuples pinned at p = R + n."""
    out = []
    for _ in range(count):
        c = rng.uniform(0.05, 0.95)
        n = rng.uniform(0.01, 0.3)
        R = rng.uniform(0.001, 0.3)
        out.append(EconomyParams(c, R + n, n, R))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
