"""Infinite-well eigenbasis: coefficients, evolution, revivals, momentum forms.

Oracles: direct quadrature overlaps on a fine grid for the coefficients, and
the package's own Fourier transform (normed, tested independently) for the
momentum eigenfunction comparison.
"""

import math

import numpy as np
import pytest

from qrevival.errors import ContractError, GridError, TruncationError
from qrevival.numerics import UniformGrid, to_momentum
from qrevival.state import WaveFunction, autocorrelation, density
from qrevival.systems import (
    GaussianPacket,
    WellSystem,
    gaussian_wavefunction,
    timescales,
    well_coefficients,
    well_evolve,
    well_momentum_grid,
    well_position_grid,
)

SYSTEM = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=300, n_max=500)
PACKET = GaussianPacket(x0=0.5, p0=400 * math.pi, sigma=math.sqrt(2) / 20)
T_REV = 2.0 / math.pi


@pytest.fixture(scope="module")
def expansion():
    return well_coefficients(SYSTEM, PACKET)


def overlap_oracle(n_values, packet, points=200001):
    # brute-force quadrature of Int u_n(x) psi(x,0) dx on a fine grid
    x = np.linspace(0.0, 1.0, points)
    psi = (packet.sigma * math.sqrt(math.pi)) ** -0.5 * np.exp(
        1j * packet.p0 * x - (x - packet.x0) ** 2 / (2 * packet.sigma**2)
    )
    return np.array(
        [
            np.trapezoid(math.sqrt(2.0) * np.sin(n * math.pi * x) * psi, x)
            for n in n_values
        ]
    )


class TestWellCoefficients:
    def test_peak_and_completeness(self, expansion):
        weights = np.abs(expansion.coefficients) ** 2
        assert expansion.indices[np.argmax(weights)] == 400
        assert np.sum(weights) == pytest.approx(1.0, abs=1e-8)

    def test_even_coefficients_vanish_at_rest(self):
        packet = GaussianPacket(x0=0.5, p0=0.0, sigma=math.sqrt(2) / 20)
        system = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=1, n_max=60)
        exp = well_coefficients(system, packet)
        even = exp.coefficients[exp.indices % 2 == 0]
        assert np.max(np.abs(even)) < 1e-12

    def test_against_quadrature_overlap_oracle(self, expansion):
        n_sel = np.array([360, 380, 400, 420, 440])
        oracle = overlap_oracle(n_sel, PACKET)
        idx = np.searchsorted(expansion.indices, n_sel)
        mine = expansion.coefficients[idx]
        assert np.max(np.abs(np.abs(mine) - np.abs(oracle))) < 1e-8

    def test_truncation_error_carries_achieved_sum(self):
        system = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=395, n_max=405)
        with pytest.raises(TruncationError) as info:
            well_coefficients(system, PACKET)
        assert 0.0 < info.value.achieved < 1.0

    def test_support_validation(self):
        packet = GaussianPacket(x0=0.1, p0=400 * math.pi, sigma=0.05)
        with pytest.raises(ContractError):
            well_coefficients(SYSTEM, packet)

    def test_wide_packet_needs_relaxed_gate(self):
        wide = GaussianPacket(x0=0.5, p0=400 * math.pi, sigma=math.sqrt(2) / 10)
        with pytest.raises(ContractError):
            well_coefficients(SYSTEM, wide)  # 5 sigma support fails
        exp = well_coefficients(SYSTEM, wide, completeness_tol=1e-3)
        assert np.sum(np.abs(exp.coefficients) ** 2) == pytest.approx(1.0, abs=1e-12)


class TestWellEvolve:
    def test_exact_revival(self, expansion):
        grid = well_position_grid(SYSTEM)
        wf0 = well_evolve(SYSTEM, expansion, 0.0, grid)
        wf_rev = well_evolve(SYSTEM, expansion, T_REV, grid)
        assert abs(autocorrelation(wf_rev, wf0)) == pytest.approx(1.0, abs=1e-4)

    def test_mirror_revival_at_half_period(self, expansion):
        grid = well_position_grid(SYSTEM)
        wf0 = well_evolve(SYSTEM, expansion, 0.0, grid)
        wf_half = well_evolve(SYSTEM, expansion, T_REV / 2, grid)
        mirrored = WaveFunction(
            grid=grid,
            amplitudes=wf_half.amplitudes[::-1],
            representation="position",
        )
        fidelity = abs(autocorrelation(mirrored, wf0))
        assert fidelity == pytest.approx(1.0, abs=1e-4)

    def test_mirror_identity_pointwise(self, expansion):
        # psi(L - x, t + T_rev/2) = -psi(x, t)
        grid = well_position_grid(SYSTEM)
        for t in (0.0, 0.01, 0.2):
            a = well_evolve(SYSTEM, expansion, t, grid).amplitudes
            b = well_evolve(SYSTEM, expansion, t + T_REV / 2, grid).amplitudes
            # global phase of each normalized state is fixed by construction,
            # so compare directly
            assert np.max(np.abs(b[::-1] + a)) < 1e-4

    def test_momentum_representation_matches_transform(self, expansion):
        # Eq.-level check: analytic momentum state vs FFT of the position one
        pos = well_evolve(SYSTEM, expansion, 0.0, well_position_grid(SYSTEM))
        fft = to_momentum(pos)
        from qrevival.systems import _well_momentum_basis

        basis = _well_momentum_basis(SYSTEM, fft.grid, expansion.indices)
        analytic = basis @ expansion.coefficients
        assert np.max(np.abs(analytic - fft.amplitudes)) < 1e-5

    def test_momentum_eigenfunction_against_transform(self):
        # one eigenstate through both routes, max-norm 1e-5
        system = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=7, n_max=7)
        grid = UniformGrid.from_bounds(0.0, 1.0, 8 * 64 + 1)
        x = grid.points()
        u7 = WaveFunction(
            grid=grid,
            amplitudes=math.sqrt(2.0) * np.sin(7 * math.pi * x),
            representation="position",
        ).normalized()
        fft = to_momentum(u7)
        from qrevival.systems import _well_momentum_basis

        basis = _well_momentum_basis(system, fft.grid, np.array([7]))
        assert np.max(np.abs(basis[:, 0] - fft.amplitudes)) < 1e-5

    def test_singularity_window_series_value(self):
        # phi_n at p = +-p_n equals -+(i/2) sqrt(L/(pi hbar))
        from qrevival.systems import _well_momentum_basis

        system = WellSystem(m=0.5, L=1.0, hbar=1.0, n_min=4, n_max=4)
        p4 = 4 * math.pi
        grid = UniformGrid(start=-p4, step=p4, count=3)  # hits -p4, 0, +p4
        basis = _well_momentum_basis(system, grid, np.array([4]))
        limit = 0.5 * math.sqrt(1.0 / math.pi)
        assert basis[2, 0] == pytest.approx(-1j * limit, abs=1e-12)
        assert basis[0, 0] == pytest.approx(+1j * limit, abs=1e-12)

    def test_norm_conserved_at_many_times(self, expansion):
        grid = well_position_grid(SYSTEM)
        for t in np.linspace(0.0, T_REV / 2, 7):
            wf = well_evolve(SYSTEM, expansion, float(t), grid)
            assert wf.norm() == pytest.approx(1.0, abs=1e-5)

    def test_revival_periodicity_of_state(self, expansion):
        # e^(-i E_n T_rev / hbar) = 1 exactly, so states at t and t + T_rev
        # coincide and every diagnostic built from them agrees
        grid = well_position_grid(SYSTEM)
        for t in (0.02, 0.17):
            a = well_evolve(SYSTEM, expansion, t, grid).amplitudes
            b = well_evolve(SYSTEM, expansion, t + T_REV, grid).amplitudes
            assert np.max(np.abs(a - b)) < 1e-4

    def test_coarse_grid_rejected(self, expansion):
        grid = UniformGrid.from_bounds(0.0, 1.0, 1001)  # dx > L/(8*500)
        with pytest.raises(GridError):
            well_evolve(SYSTEM, expansion, 0.0, grid)

    def test_momentum_grid_coverage_enforced(self, expansion):
        grid = UniformGrid.from_bounds(-100.0, 100.0, 2001)
        with pytest.raises(GridError):
            well_evolve(SYSTEM, expansion, 0.0, grid, representation="momentum")

    def test_momentum_superposition_normalized(self, expansion):
        grid = well_momentum_grid(SYSTEM)
        wf = well_evolve(SYSTEM, expansion, 0.05, grid, representation="momentum")
        assert wf.norm() == pytest.approx(1.0, abs=1e-6)


class TestWellTimescales:
    def test_paper_parameter_values(self):
        scales = timescales(SYSTEM, PACKET)
        assert scales.t_cl == pytest.approx(1.0 / (400 * math.pi), rel=1e-12)
        assert scales.t_rev == pytest.approx(2.0 / math.pi, rel=1e-12)
        assert scales.t_coll == pytest.approx(0.014433756729740645, rel=1e-12)
        assert scales.t_coll == pytest.approx(0.01443, abs=1e-5)

    def test_rest_packet_has_no_classical_period(self):
        with pytest.raises(ContractError):
            timescales(SYSTEM, GaussianPacket(x0=0.5, p0=0.0, sigma=0.05))


def test_initial_state_matches_sampled_gaussian(expansion):
    grid = well_position_grid(SYSTEM)
    wf = well_evolve(SYSTEM, expansion, 0.0, grid)
    ref = gaussian_wavefunction(PACKET, grid)
    overlap = abs(autocorrelation(wf, ref))
    assert overlap == pytest.approx(1.0, abs=1e-8)
