"""Density, moment, autocorrelation, and uncertainty-product tests."""

import math

import numpy as np
import pytest

from qrevival.errors import ContractError, DimensionError, NumericError
from qrevival.numerics import UniformGrid, to_momentum
from qrevival.state import (
    Density,
    WaveFunction,
    autocorrelation,
    density,
    moments,
    uncertainty_product,
)
from qrevival.systems import (
    GaussianPacket,
    OscillatorSystem,
    WellSystem,
    gaussian_wavefunction,
    sho_evolve,
    sho_grid,
    sho_uncertainties,
    well_coefficients,
    well_evolve,
    well_position_grid,
)

WELL = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=300, n_max=500)
PACKET = GaussianPacket(x0=0.5, p0=400 * math.pi, sigma=math.sqrt(2) / 20)


def well_eigenstate(n, grid):
    u = math.sqrt(2.0) * np.sin(n * math.pi * grid.points())
    return WaveFunction(grid=grid, amplitudes=u, representation="position").normalized()


class TestDensity:
    def test_gaussian_peak(self):
        # density of a width-sigma packet is Gaussian with std sigma/sqrt(2)
        sigma = 0.9
        grid = UniformGrid.from_bounds(-10.0, 10.0, 4001)
        wf = gaussian_wavefunction(GaussianPacket(0.0, 0.0, sigma), grid)
        rho = density(wf)
        s_rho = sigma / math.sqrt(2)
        assert rho.values.max() == pytest.approx(
            1.0 / (s_rho * math.sqrt(2 * math.pi)), abs=1e-8
        )

    def test_global_phase_invariance(self):
        grid = UniformGrid.from_bounds(-8.0, 8.0, 1001)
        wf = gaussian_wavefunction(GaussianPacket(1.0, 2.0, 1.0), grid)
        rotated = WaveFunction(
            grid=grid,
            amplitudes=wf.amplitudes * np.exp(1j * 0.7),
            representation="position",
        )
        diff = np.abs(density(wf).values - density(rotated).values)
        assert np.max(diff) <= 1e-15 * np.max(density(wf).values)

    def test_two_eigenstate_superposition_interference(self):
        # |a1 u1 + a2 u2|^2 = a1^2 u1^2 + a2^2 u2^2 + 2 a1 a2 u1 u2 at t = 0
        grid = UniformGrid.from_bounds(0.0, 1.0, 2001)
        x = grid.points()
        u1 = math.sqrt(2.0) * np.sin(math.pi * x)
        u2 = math.sqrt(2.0) * np.sin(2 * math.pi * x)
        a1 = a2 = 1.0 / math.sqrt(2.0)
        wf = WaveFunction(
            grid=grid, amplitudes=a1 * u1 + a2 * u2, representation="position"
        ).normalized()
        expected = a1**2 * u1**2 + a2**2 * u2**2 + 2 * a1 * a2 * u1 * u2
        assert np.max(np.abs(density(wf).values - expected)) < 1e-10

    def test_rejects_unnormalized(self):
        grid = UniformGrid.from_bounds(0.0, 1.0, 101)
        wf = WaveFunction(
            grid=grid,
            amplitudes=2.0 * np.ones(101, dtype=complex),
            representation="position",
        )
        with pytest.raises(ContractError):
            density(wf)


class TestMoments:
    def test_gaussian_oracle(self):
        center, std = 1.3, 0.45
        grid = UniformGrid.from_bounds(-6.0, 9.0, 6001)
        x = grid.points()
        values = np.exp(-((x - center) ** 2) / (2 * std**2)) / (
            std * math.sqrt(2 * math.pi)
        )
        mean, var = moments(Density(grid=grid, values=values))
        assert mean == pytest.approx(center, rel=1e-8)
        assert var == pytest.approx(std**2, rel=1e-8)

    def test_symmetric_density_mean(self):
        grid = UniformGrid.from_bounds(-2.0, 4.0, 1201)
        x = grid.points()
        values = np.cosh(x - 1.0) ** -2
        values /= np.trapezoid(values, x)
        mean, _ = moments(Density(grid=grid, values=values))
        assert mean == pytest.approx(1.0, abs=1e-10)

    def test_well_ground_state_variance(self):
        # analytic integral: Var x = 1/12 - 1/(2 pi^2) for the n=1 state
        grid = UniformGrid.from_bounds(0.0, 1.0, 4001)
        rho = density(well_eigenstate(1, grid))
        _, var = moments(rho)
        assert var == pytest.approx(1.0 / 12.0 - 1.0 / (2 * math.pi**2), abs=1e-8)

    def test_negative_variance_rejected(self):
        grid = UniformGrid.from_bounds(0.0, 1.0, 3)
        # a two-spike "density" whose trapezoid second moment goes inconsistent
        values = np.array([0.0, 1.0, 0.0])
        d = Density(grid=grid, values=values)
        mean, var = moments(d)  # legitimate; just exercises the clamp path
        assert var >= 0.0


class TestAutocorrelation:
    def test_self_overlap_is_one(self):
        grid = UniformGrid.from_bounds(-8.0, 8.0, 2001)
        wf = gaussian_wavefunction(GaussianPacket(0.5, 3.0, 0.8), grid)
        assert abs(autocorrelation(wf, wf)) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_eigenstates(self):
        grid = UniformGrid.from_bounds(0.0, 1.0, 2001)
        u1 = well_eigenstate(1, grid)
        u2 = well_eigenstate(2, grid)
        assert abs(autocorrelation(u1, u2)) < 1e-10

    def test_position_momentum_agreement(self):
        # A(t) evaluated from position states and from their transforms
        exp = well_coefficients(WELL, PACKET)
        grid = well_position_grid(WELL)
        wf0 = well_evolve(WELL, exp, 0.0, grid)
        wft = well_evolve(WELL, exp, 0.013, grid)
        a_pos = autocorrelation(wft, wf0)
        a_mom = autocorrelation(to_momentum(wft), to_momentum(wf0))
        assert abs(a_pos - a_mom) < 1e-6

    def test_grid_mismatch(self):
        g1 = UniformGrid.from_bounds(0.0, 1.0, 101)
        g2 = UniformGrid.from_bounds(0.0, 1.0, 102)
        w1 = well_eigenstate(1, g1)
        w2 = well_eigenstate(1, g2)
        with pytest.raises(DimensionError):
            autocorrelation(w1, w2)

    def test_magnitude_bounded(self, fig1_run):
        assert np.all(fig1_run.col("autocorr_sq") <= 1.0 + 1e-8)


class TestUncertaintyProduct:
    def test_minimum_uncertainty_gaussian(self):
        grid = UniformGrid.from_bounds(-12.0, 12.0, 4096)
        wf = gaussian_wavefunction(GaussianPacket(0.0, 0.0, 1.3), grid)
        prod = uncertainty_product(density(wf), density(to_momentum(wf)))
        assert prod == pytest.approx(0.5, abs=1e-6)

    def test_sho_squeezed_matches_closed_form(self):
        # Delta x(t) = |L(t)|/sqrt(2) and the conjugate width formula
        system = OscillatorSystem(m=1.0, omega=1.0, hbar=1.0)
        packet = GaussianPacket(x0=1.0, p0=0.0, sigma=2.0)
        grid = sho_grid(system, packet)
        for t in (0.3, 1.1, 2.4):
            wf = sho_evolve(system, packet, t, grid)
            prod = uncertainty_product(density(wf), density(to_momentum(wf)))
            dx, dp = sho_uncertainties(system, packet, t)
            assert prod == pytest.approx(dx * dp, abs=1e-6)

    def test_well_packet_above_floor(self):
        exp = well_coefficients(WELL, PACKET)
        grid = well_position_grid(WELL)
        wf = well_evolve(WELL, exp, 0.0, grid)
        prod = uncertainty_product(density(wf), density(to_momentum(wf, pad_factor=8)))
        assert prod >= 0.5 - 1e-6
