"""Wave functions, densities, moments, autocorrelation, and the uncertainty product."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from qrevival.errors import ContractError, DimensionError, NumericError
from qrevival.numerics import UniformGrid, _trapezoid

__all__ = [
    "WaveFunction",
    "Density",
    "density",
    "moments",
    "autocorrelation",
    "uncertainty_product",
]

Representation = Literal["position", "momentum"]

# Quadrature round-off this far below zero is clamped; anything worse means
# the grid does not cover the state and must surface as an error.
_VARIANCE_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes sampled on a uniform grid in one representation.

    Instances are immutable; evolved states are normalized so that the
    trapezoid integral of |amplitudes|^2 over the grid is 1 within 1e-6.
    """

    grid: UniformGrid
    amplitudes: np.ndarray
    representation: Representation

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.shape[0] != self.grid.count:
            raise DimensionError(
                f"amplitudes shape {amps.shape} does not match grid count {self.grid.count}"
            )
        if self.representation not in ("position", "momentum"):
            raise ContractError(f"unknown representation {self.representation!r}")
        object.__setattr__(self, "amplitudes", amps)
        amps.flags.writeable = False

    def norm(self) -> float:
        """Trapezoid integral of |psi|^2 over the grid."""
        return float(_trapezoid(np.abs(self.amplitudes) ** 2, self.grid.step).real)

    def normalized(self) -> "WaveFunction":
        n = self.norm()
        if n <= 0:
            raise NumericError("cannot normalize a zero wave function")
        return WaveFunction(
            grid=self.grid,
            amplitudes=self.amplitudes / np.sqrt(n),
            representation=self.representation,
        )


@dataclass(frozen=True, eq=False)
class Density:
    """Nonnegative probability density sampled on a uniform grid."""

    grid: UniformGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.shape[0] != self.grid.count:
            raise DimensionError(
                f"values shape {vals.shape} does not match grid count {self.grid.count}"
            )
        if np.any(vals < 0):
            raise NumericError("density values must be nonnegative")
        object.__setattr__(self, "values", vals)
        vals.flags.writeable = False


def density(wf: WaveFunction) -> Density:
    """Pointwise |psi|^2; integrates to the wave function's norm."""
    n = wf.norm()
    if abs(n - 1.0) > 1e-6:
        raise ContractError(f"wave function not normalized: norm deviates by {n - 1.0:.3e}")
    return Density(grid=wf.grid, values=np.abs(wf.amplitudes) ** 2)


def moments(d: Density) -> tuple[float, float]:
    """Mean and variance of a density by trapezoid quadrature.

    A variance within round-off below zero is clamped to 0; a larger negative
    value signals that the grid truncates the distribution and raises.
    """
    x = d.grid.points()
    norm = _trapezoid(d.values, d.grid.step)
    mean = _trapezoid(x * d.values, d.grid.step) / norm
    second = _trapezoid(x * x * d.values, d.grid.step) / norm
    variance = second - mean * mean
    if variance < 0.0:
        if variance < -_VARIANCE_CLAMP:
            raise NumericError(
                f"variance {variance:.3e} below tolerance; domain truncated"
            )
        variance = 0.0
    return float(mean), float(variance)


def autocorrelation(wf_t: WaveFunction, wf_0: WaveFunction) -> complex:
    """Overlap Int psi_t^*(x) psi_0(x) dx of two states on the same grid.

    Works identically in either representation; |result| <= 1 + 1e-8 for
    normalized inputs.
    """
    if wf_t.grid != wf_0.grid or wf_t.representation != wf_0.representation:
        raise DimensionError("autocorrelation requires matching grids and representations")
    value = _trapezoid(np.conj(wf_t.amplitudes) * wf_0.amplitudes, wf_t.grid.step)
    return complex(value)


def uncertainty_product(rho: Density, gamma: Density) -> float:
    """Heisenberg product: sqrt(Var_rho) * sqrt(Var_gamma).

    ``rho`` is the position density, ``gamma`` the momentum density of the
    same state; the result is >= hbar/2 (up to quadrature round-off) for any
    physical state.
    """
    _, var_x = moments(rho)
    _, var_p = moments(gamma)
    return float(np.sqrt(var_x) * np.sqrt(var_p))
