"""Renyi and Shannon entropies of densities and the conjugate-pair lower bound.

Orders are plain floats; ``math.inf`` selects the min-entropy limit and 1.0
the Shannon limit.  Both limits are explicit branches rather than numerical
limits of the generic formula, and the test suite guards branch continuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qrevival.errors import ContractError, NumericError
from qrevival.numerics import _trapezoid
from qrevival.state import Density

__all__ = ["ConjugatePair", "conjugate_order", "renyi", "renyi_bound", "entropy_sum"]

_PAIR_TOL = 1e-12


def conjugate_order(alpha: float) -> float:
    """The beta satisfying 1/alpha + 1/beta = 2 (with 1/inf = 0)."""
    if math.isinf(alpha):
        return 0.5
    if not alpha > 0:
        raise ContractError(f"Renyi order must be positive, got {alpha}")
    if alpha <= 0.5:
        if alpha == 0.5:
            return math.inf
        raise ContractError(f"order {alpha} < 1/2 has no positive conjugate")
    return alpha / (2.0 * alpha - 1.0)


@dataclass(frozen=True)
class ConjugatePair:
    """Orders (alpha, beta) with 1/alpha + 1/beta = 2."""

    alpha: float
    beta: float

    def __post_init__(self):
        for value in (self.alpha, self.beta):
            if not (value > 0):  # rejects NaN as well
                raise ContractError(f"Renyi order must be positive, got {value}")
        inv = (0.0 if math.isinf(self.alpha) else 1.0 / self.alpha) + (
            0.0 if math.isinf(self.beta) else 1.0 / self.beta
        )
        if abs(inv - 2.0) > _PAIR_TOL:
            raise ContractError(
                f"({self.alpha}, {self.beta}) is not a conjugate pair: 1/a + 1/b = {inv}"
            )


def renyi(d: Density, alpha: float) -> float:
    """Renyi entropy (1/(1-alpha)) ln Int f^alpha of a density.

    alpha = 1 returns the Shannon entropy -Int f ln f (0*ln 0 treated as 0);
    alpha = inf returns -ln(max f) over the grid.

    Raises
    ------
    NumericError
        If Int f^alpha underflows to zero (domain too small or alpha too large).
    """
    if not alpha > 0:
        raise ContractError(f"Renyi order must be positive, got {alpha}")
    values = d.values
    if math.isinf(alpha):
        peak = float(values.max())
        if peak <= 0.0:
            raise NumericError("density is identically zero on the grid")
        return -math.log(peak)
    if alpha == 1.0:
        positive = values > 0.0
        integrand = np.zeros_like(values)
        integrand[positive] = values[positive] * np.log(values[positive])
        return float(-_trapezoid(integrand, d.grid.step))
    with np.errstate(under="ignore"):
        moment = float(_trapezoid(values**alpha, d.grid.step))
    if moment <= 0.0 or not math.isfinite(moment):
        raise NumericError(
            f"Int f^alpha = {moment} unusable at alpha = {alpha}; widen the domain"
        )
    return math.log(moment) / (1.0 - alpha)


def _bound_half(order: float) -> float:
    # One term of the bound: -(1/(2(1-a))) ln(a/pi); -> 0 as a -> inf.
    if math.isinf(order):
        return 0.0
    return -math.log(order / math.pi) / (2.0 * (1.0 - order))


def renyi_bound(pair: ConjugatePair) -> float:
    """Lower bound on R_rho^(alpha) + R_gamma^(beta) for a conjugate pair.

    At (1, 1) this is the Shannon bound 1 + ln(pi); at (1/2, inf) it reduces
    to ln(2*pi).  Gaussian pure states saturate it.
    """
    if pair.alpha == 1.0 or pair.beta == 1.0:
        # constraint forces alpha = beta = 1; joint limit of the two terms
        return 1.0 + math.log(math.pi)
    return _bound_half(pair.alpha) + _bound_half(pair.beta)


def entropy_sum(rho: Density, gamma: Density, pair: ConjugatePair) -> float:
    """R_rho^(alpha) + R_gamma^(beta) for position and momentum densities."""
    return renyi(rho, pair.alpha) + renyi(gamma, pair.beta)
