"""Closed-form oscillator evolution against numeric oracles."""

import math

import numpy as np
import pytest

from qrevival.entropy import renyi
from qrevival.errors import ContractError, GridError
from qrevival.numerics import UniformGrid, to_momentum
from qrevival.state import density, moments
from qrevival.systems import (
    GaussianPacket,
    OscillatorSystem,
    gaussian_wavefunction,
    sho_evolve,
    sho_grid,
    sho_renyi_analytic,
    sho_uncertainties,
    timescales,
)

SYSTEM = OscillatorSystem(m=1.0, omega=1.0, hbar=1.0)
T_CL = 2 * math.pi


class TestShoEvolve:
    def test_initial_time_reproduces_packet(self):
        packet = GaussianPacket(x0=1.0, p0=2.0, sigma=1.4)
        grid = sho_grid(SYSTEM, packet)
        evolved = sho_evolve(SYSTEM, packet, 0.0, grid)
        initial = gaussian_wavefunction(packet, grid, hbar=SYSTEM.hbar)
        assert np.max(np.abs(evolved.amplitudes - initial.amplitudes)) < 1e-10

    def test_coherent_shape_invariance_at_third_period(self):
        # sigma^2 = hbar/(m omega): the density only translates, so at any t
        # it is the initial Gaussian profile centered on the classical orbit
        packet = GaussianPacket(x0=1.5, p0=0.0, sigma=1.0)
        grid = sho_grid(SYSTEM, packet)
        t = T_CL / 3
        rho_t = density(sho_evolve(SYSTEM, packet, t, grid))
        _, var0 = moments(density(sho_evolve(SYSTEM, packet, 0.0, grid)))
        mean_t, var_t = moments(rho_t)
        assert var_t == pytest.approx(var0, rel=1e-9)
        x = grid.points()
        center = packet.x0 * math.cos(t)
        expected = np.exp(-((x - center) ** 2) / packet.sigma**2) / (
            packet.sigma * math.sqrt(math.pi)
        )
        assert mean_t == pytest.approx(center, abs=1e-9)
        assert np.max(np.abs(rho_t.values - expected)) < 1e-8

    def test_half_period_reflects_through_origin(self):
        packet = GaussianPacket(x0=1.2, p0=0.0, sigma=0.9)
        grid = sho_grid(SYSTEM, packet, count=4097)  # odd count: grid symmetric
        rho0 = density(sho_evolve(SYSTEM, packet, 0.0, grid))
        rho_half = density(sho_evolve(SYSTEM, packet, T_CL / 2, grid))
        assert np.max(np.abs(rho_half.values - rho0.values[::-1])) < 1e-10

    def test_insufficient_grid_raises(self):
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=1.0)
        grid = UniformGrid.from_bounds(-1.0, 1.0, 64)
        with pytest.raises(GridError):
            sho_evolve(SYSTEM, packet, 0.0, grid)


class TestShoUncertainties:
    def test_coherent_state_constant(self):
        packet = GaussianPacket(x0=1.0, p0=1.0, sigma=1.0)
        for t in np.linspace(0.0, 2 * T_CL, 17):
            dx, dp = sho_uncertainties(SYSTEM, packet, t)
            assert dx == pytest.approx(packet.sigma / math.sqrt(2), rel=1e-12)
            assert dp == pytest.approx(1.0 / (math.sqrt(2) * packet.sigma), rel=1e-12)
            assert dx * dp == pytest.approx(0.5, rel=1e-12)

    def test_time_zero_any_width(self):
        packet = GaussianPacket(x0=0.3, p0=-1.0, sigma=2.2)
        dx, dp = sho_uncertainties(SYSTEM, packet, 0.0)
        assert dx == pytest.approx(packet.sigma / math.sqrt(2), rel=1e-12)
        assert dp == pytest.approx(1.0 / (math.sqrt(2) * packet.sigma), rel=1e-12)

    def test_squeezed_quarter_period_against_numeric_moments(self):
        sigma_coh = 1.0
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=2 * sigma_coh)
        grid = sho_grid(SYSTEM, packet)
        t = T_CL / 4
        dx_cf, dp_cf = sho_uncertainties(SYSTEM, packet, t)
        assert dx_cf == pytest.approx(1.0 / (math.sqrt(2) * 2 * sigma_coh), rel=1e-12)
        wf = sho_evolve(SYSTEM, packet, t, grid)
        _, var_x = moments(density(wf))
        _, var_p = moments(density(to_momentum(wf)))
        assert math.sqrt(var_x) == pytest.approx(dx_cf, abs=1e-6)
        assert math.sqrt(var_p) == pytest.approx(dp_cf, abs=1e-6)

    def test_half_period_oscillation(self):
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=1.7)
        for t in (0.1, 1.0, 2.9):
            dx1, dp1 = sho_uncertainties(SYSTEM, packet, t)
            dx2, dp2 = sho_uncertainties(SYSTEM, packet, t + T_CL / 2)
            assert dx1 == pytest.approx(dx2, rel=1e-12)
            assert dp1 == pytest.approx(dp2, rel=1e-12)

    def test_moments_match_closed_form_along_trajectory(self):
        packet = GaussianPacket(x0=0.8, p0=1.5, sigma=1.6)
        grid = sho_grid(SYSTEM, packet)
        for t in np.linspace(0.0, T_CL, 9):
            wf = sho_evolve(SYSTEM, packet, float(t), grid)
            mean, var = moments(density(wf))
            expected_mean = packet.x0 * math.cos(t) + packet.p0 * math.sin(t)
            dx_cf, _ = sho_uncertainties(SYSTEM, packet, float(t))
            assert mean == pytest.approx(expected_mean, abs=1e-8)
            assert math.sqrt(var) == pytest.approx(dx_cf, abs=1e-6)


class TestShoRenyiAnalytic:
    def test_coherent_position_value(self):
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=1.0)
        value = sho_renyi_analytic(SYSTEM, packet, 2.0, 0.37, "position")
        expected = math.log(math.sqrt(math.pi) * 1.0) + math.log(math.sqrt(2.0))
        assert value == pytest.approx(expected, rel=1e-12)

    def test_position_branch_matches_numeric_all_times(self):
        packet = GaussianPacket(x0=0.5, p0=1.0, sigma=1.8)
        grid = sho_grid(SYSTEM, packet)
        for t in np.linspace(0.0, T_CL, 13):
            numeric = renyi(density(sho_evolve(SYSTEM, packet, float(t), grid)), 2 / 3)
            analytic = sho_renyi_analytic(SYSTEM, packet, 2 / 3, float(t), "position")
            assert numeric == pytest.approx(analytic, abs=1e-6)

    def test_momentum_branch_matches_numeric_at_half_periods_only(self):
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=2.0)
        grid = sho_grid(SYSTEM, packet)
        for k in range(3):
            t = k * T_CL / 2
            wf = sho_evolve(SYSTEM, packet, t, grid)
            numeric = renyi(density(to_momentum(wf)), 2.0)
            analytic = sho_renyi_analytic(SYSTEM, packet, 2.0, t, "momentum")
            assert numeric == pytest.approx(analytic, abs=1e-6)
        # off the half-period lattice the squeezed state is chirped and the
        # analytic momentum form does not describe the actual width
        t = T_CL / 8
        wf = sho_evolve(SYSTEM, packet, t, grid)
        numeric = renyi(density(to_momentum(wf)), 2.0)
        analytic = sho_renyi_analytic(SYSTEM, packet, 2.0, t, "momentum")
        assert abs(numeric - analytic) > 1e-3

    def test_rejects_limit_orders(self):
        packet = GaussianPacket(x0=0.0, p0=0.0, sigma=1.0)
        with pytest.raises(ContractError):
            sho_renyi_analytic(SYSTEM, packet, 1.0, 0.0, "position")
        with pytest.raises(ContractError):
            sho_renyi_analytic(SYSTEM, packet, math.inf, 0.0, "momentum")


def test_timescales():
    scales = timescales(SYSTEM, GaussianPacket(0.0, 0.0, 1.0))
    assert scales.t_cl == pytest.approx(2 * math.pi, rel=1e-12)
    assert scales.t_rev is None
    assert scales.t_coll is None
