"""The three model systems and their time evolution.

* simple harmonic oscillator: closed-form Gaussian evolution,
* infinite square well: sine eigenbasis with analytic Gaussian coefficients
  and analytic momentum eigenfunctions,
* quantum bouncer: Airy eigenbasis in gravitational units (lengths in
  l_g = (hbar^2/(2 g m^2))^(1/3), energies in m*g*l_g, hbar = 1).

Evolution at distinct times is pure and independent; the per-grid basis
matrices are cached so a time loop costs one matrix-vector product per
sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qrevival.errors import ContractError, GridError, TruncationError
from qrevival.numerics import AiryTable, UniformGrid, airy_ai, airy_zeros, to_momentum
from qrevival.state import WaveFunction

__all__ = [
    "GaussianPacket",
    "OscillatorSystem",
    "WellSystem",
    "BouncerSystem",
    "EigenExpansion",
    "Timescales",
    "gaussian_wavefunction",
    "sho_evolve",
    "sho_uncertainties",
    "sho_renyi_analytic",
    "sho_grid",
    "well_coefficients",
    "well_evolve",
    "well_position_grid",
    "well_momentum_grid",
    "bouncer_coefficients",
    "bouncer_evolve",
    "bouncer_grid",
    "timescales",
]

# Raw grid norm may drift this far from 1 before renormalization; beyond it
# the grid is judged to miss the state.
_NORM_DRIFT_LIMIT = 1e-3


@dataclass(frozen=True)
class GaussianPacket:
    """Initial Gaussian: psi(x,0) = (sigma sqrt(pi))^(-1/2) e^(i p0 x/hbar) e^(-(x-x0)^2/(2 sigma^2)).

    ``x0`` is the initial center (height z0 for the bouncer), ``p0`` the mean
    momentum, ``sigma`` the width parameter.
    """

    x0: float
    p0: float
    sigma: float

    def __post_init__(self):
        if not (self.sigma > 0):
            raise ContractError(f"sigma must be positive, got {self.sigma}")


def gaussian_wavefunction(
    packet: GaussianPacket, grid: UniformGrid, hbar: float = 1.0
) -> WaveFunction:
    """Sample the initial Gaussian on a grid and renormalize."""
    x = grid.points()
    psi = (
        (packet.sigma * math.sqrt(math.pi)) ** -0.5
        * np.exp(1j * packet.p0 * x / hbar)
        * np.exp(-((x - packet.x0) ** 2) / (2.0 * packet.sigma**2))
    )
    wf = WaveFunction(grid=grid, amplitudes=psi, representation="position")
    return wf.normalized()


@dataclass(frozen=True)
class Timescales:
    """Classical period, revival time, and collapse time (None if absent)."""

    t_cl: float
    t_rev: float | None
    t_coll: float | None


# ---------------------------------------------------------------------------
# Simple harmonic oscillator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OscillatorSystem:
    """V(x) = (1/2) m omega^2 x^2."""

    m: float
    omega: float
    hbar: float = 1.0

    def __post_init__(self):
        if min(self.m, self.omega, self.hbar) <= 0:
            raise ContractError("oscillator parameters must be positive")


def _sho_width(sys: OscillatorSystem, packet: GaussianPacket, t: float) -> complex:
    # L(t) = sigma cos(wt) + i hbar/(m w sigma) sin(wt)
    c, s = math.cos(sys.omega * t), math.sin(sys.omega * t)
    return packet.sigma * c + 1j * sys.hbar / (sys.m * sys.omega * packet.sigma) * s


def sho_evolve(
    sys: OscillatorSystem, packet: GaussianPacket, t: float, grid: UniformGrid
) -> WaveFunction:
    """Closed-form evolved Gaussian, renormalized on the grid.

    The grid must cover at least 8 standard deviations of the evolved
    density (including the classical center excursion); a renormalization
    factor off by more than 1e-3 raises GridError.
    """
    m, w, h = sys.m, sys.omega, sys.hbar
    x0, p0, sig = packet.x0, packet.p0, packet.sigma
    c, s = math.cos(w * t), math.sin(w * t)
    big_l = _sho_width(sys, packet, t)
    x = grid.points()
    quad = (
        -(x0**2) * c
        - 2.0 * x0 * p0 * s / (m * w)
        - 1j * sig**2 * p0**2 * s / (m * w * h)
        + 2.0 * (x0 + 1j * sig**2 * p0 / h) * x
        - (c + 1j * m * w * sig**2 * s / h) * x**2
    )
    psi = np.exp(quad / (2.0 * sig * big_l)) / math.sqrt(abs(big_l) * math.sqrt(math.pi))
    wf = WaveFunction(grid=grid, amplitudes=psi, representation="position")
    norm = wf.norm()
    if abs(norm - 1.0) > _NORM_DRIFT_LIMIT:
        raise GridError(
            f"grid does not cover the evolved state at t={t!r}: norm = {norm:.6f}"
        )
    return wf.normalized()


def sho_uncertainties(
    sys: OscillatorSystem, packet: GaussianPacket, t: float
) -> tuple[float, float]:
    """Closed-form (dx, dp): dx = |L(t)|/sqrt(2), dp from the conjugate widths.

    Both oscillate with period T_cl/2 unless sigma^2 = hbar/(m omega), in
    which case they are constant and the product is hbar/2 at all times.
    """
    m, w, h = sys.m, sys.omega, sys.hbar
    c, s = math.cos(w * t), math.sin(w * t)
    dx = abs(_sho_width(sys, packet, t)) / math.sqrt(2.0)
    dp = math.sqrt(
        ((h / packet.sigma) ** 2 * c**2 + (m * w * packet.sigma) ** 2 * s**2) / 2.0
    )
    return dx, dp


def sho_renyi_analytic(
    sys: OscillatorSystem,
    packet: GaussianPacket,
    alpha: float,
    t: float,
    space: str,
) -> float:
    """Analytic oscillator Renyi entropy: ln(sqrt(pi)|L|) - ln(sqrt(alpha))/(1-alpha).

    The momentum branch replaces |L| by 1/|L|.  It is exact only when the
    state is momentum-Gaussian with width hbar/(sqrt(2)|L|), i.e. for
    coherent packets or at t = k*T_cl/2; the numeric route is authoritative
    elsewhere.  The alpha = 1 and alpha = inf limits belong to the entropy
    module, not here.
    """
    if alpha == 1.0 or math.isinf(alpha):
        raise ContractError("analytic form excludes the alpha = 1 and alpha = inf limits")
    if space not in ("position", "momentum"):
        raise ContractError(f"unknown space {space!r}")
    mag = abs(_sho_width(sys, packet, t))
    scale = mag if space == "position" else 1.0 / mag
    return math.log(math.sqrt(math.pi) * scale) - math.log(math.sqrt(alpha)) / (1.0 - alpha)


def sho_grid(
    sys: OscillatorSystem,
    packet: GaussianPacket,
    count: int = 4096,
    width_factor: float = 12.0,
) -> UniformGrid:
    """Symmetric grid covering the classical excursion plus widest packet."""
    m, w, h = sys.m, sys.omega, sys.hbar
    swing = math.hypot(packet.x0, packet.p0 / (m * w))
    widest = max(packet.sigma, h / (m * w * packet.sigma))
    half = swing + width_factor * widest
    return UniformGrid.from_bounds(-half, half, count)


# ---------------------------------------------------------------------------
# Eigenbasis expansions (well and bouncer)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenExpansion:
    """Expansion psi(x,t) = sum_n a_n u_n(x) e^(-i E_n t / hbar).

    Coefficients are renormalized to sum |a_n|^2 = 1 after the completeness
    check, so truncation never leaks into downstream normalization.
    """

    coefficients: np.ndarray
    energies: np.ndarray
    basis: str  # "well" | "bouncer"
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coefficients", np.asarray(self.coefficients, dtype=complex))
        object.__setattr__(self, "energies", np.asarray(self.energies, dtype=float))
        object.__setattr__(self, "indices", np.asarray(self.indices, dtype=int))
        for arr in (self.coefficients, self.energies, self.indices):
            arr.flags.writeable = False


_BASIS_CACHE: dict = {}
_BASIS_CACHE_CAP = 8


def _cached_basis(key, build):
    if key not in _BASIS_CACHE:
        if len(_BASIS_CACHE) >= _BASIS_CACHE_CAP:
            _BASIS_CACHE.pop(next(iter(_BASIS_CACHE)))
        _BASIS_CACHE[key] = build()
    return _BASIS_CACHE[key]


def _superpose(basis_matrix: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    # (points x states) @ (states,); keep float BLAS path for real bases
    if basis_matrix.dtype == np.float64:
        return basis_matrix @ coeffs.real + 1j * (basis_matrix @ coeffs.imag)
    return basis_matrix @ coeffs


# ---------------------------------------------------------------------------
# Infinite square well
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WellSystem:
    """V = 0 on (0, L), infinite outside; u_n = sqrt(2/L) sin(n pi x / L)."""

    m: float
    L: float
    hbar: float = 1.0
    n_min: int = 1
    n_max: int = 1

    def __post_init__(self):
        if min(self.m, self.L, self.hbar) <= 0:
            raise ContractError("well parameters must be positive")
        if not (1 <= self.n_min <= self.n_max):
            raise ContractError(
                f"need 1 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]"
            )

    def energies(self, n: np.ndarray) -> np.ndarray:
        return n**2 * self.hbar**2 * math.pi**2 / (2.0 * self.m * self.L**2)


def well_coefficients(
    sys: WellSystem, packet: GaussianPacket, completeness_tol: float = 1e-6
) -> EigenExpansion:
    """Analytic Gaussian expansion coefficients over [n_min, n_max].

    Valid when the packet is supported well inside the well; the default
    tolerance requires x0 +- 5 sigma inside (0, L).  Looser tolerances relax
    the support requirement to 3 sigma (wall truncation then costs up to
    ~1e-4 of probability, which the completeness gate must admit).

    Raises
    ------
    TruncationError
        If sum |a_n|^2 misses 1 by more than ``completeness_tol``; the
        achieved sum is attached, and a wider n_range is the usual fix.
    """
    support = 5.0 if completeness_tol <= 1e-6 else 3.0
    lo = packet.x0 - support * packet.sigma
    hi = packet.x0 + support * packet.sigma
    if not (0.0 < lo and hi < sys.L):
        raise ContractError(
            f"packet support [{lo:.4f}, {hi:.4f}] not inside (0, {sys.L})"
        )
    n = np.arange(sys.n_min, sys.n_max + 1)
    h, big_l = sys.hbar, sys.L
    sig, x0, p0 = packet.sigma, packet.x0, packet.p0
    kn = n * math.pi / big_l
    prefactor = math.sqrt(4.0 * sig * math.pi / (big_l * math.sqrt(math.pi)))
    with np.errstate(under="ignore"):
        coeffs = (
            prefactor
            * np.exp(-1j * p0 * x0 / h)
            / 2j
            * (
                np.exp(1j * kn * x0) * np.exp(-(sig**2) * (p0 + kn * h) ** 2 / (2 * h**2))
                - np.exp(-1j * kn * x0) * np.exp(-(sig**2) * (p0 - kn * h) ** 2 / (2 * h**2))
            )
        )
    total = float(np.sum(np.abs(coeffs) ** 2))
    if abs(total - 1.0) > completeness_tol:
        raise TruncationError(
            f"sum |a_n|^2 = {total:.8f} misses 1 by more than {completeness_tol}; "
            f"widen n_range [{sys.n_min}, {sys.n_max}]",
            achieved=total,
        )
    coeffs = coeffs / math.sqrt(total)
    return EigenExpansion(
        coefficients=coeffs, energies=sys.energies(n), basis="well", indices=n
    )


def well_position_grid(sys: WellSystem) -> UniformGrid:
    """[0, L] sampled at dx = L/(8 n_max), resolving the fastest eigenfunction."""
    return UniformGrid.from_bounds(0.0, sys.L, 8 * sys.n_max + 1)


def well_momentum_grid(sys: WellSystem) -> UniformGrid:
    """Symmetric grid covering [-(n_max+20) pi hbar/L, +...] at dp = pi hbar/(6L)."""
    p_max = (sys.n_max + 20) * math.pi * sys.hbar / sys.L
    return UniformGrid.from_bounds(-p_max, p_max, 12 * (sys.n_max + 20) + 1)


def _well_position_basis(sys: WellSystem, grid: UniformGrid, n: np.ndarray) -> np.ndarray:
    x = grid.points()
    return math.sqrt(2.0 / sys.L) * np.sin(np.outer(x, n) * math.pi / sys.L)


def _well_momentum_basis(sys: WellSystem, grid: UniformGrid, n: np.ndarray) -> np.ndarray:
    """Analytic momentum eigenfunctions phi_n(p) on the grid.

    phi_n(p) = sqrt(hbar/(pi L)) * p_n/(p^2 - p_n^2) * [(-1)^n e^(-i p L/hbar) - 1]
    in the e^(-ipx/hbar) transform convention, with the removable singularity
    at p = +-p_n patched by a first-order series inside |p -+ p_n| < 1e-6 p_n.
    """
    h, big_l = sys.hbar, sys.L
    p = grid.points()
    p_n = n * math.pi * h / big_l
    window = 1e-6 * p_n
    gaps = np.diff(p_n)
    if np.any(gaps <= window[:-1] + window[1:]):
        raise GridError("singularity windows of adjacent p_n overlap; shrink n_range")

    parity = np.where(n % 2 == 0, 1.0, -1.0)
    wall_phase = np.exp(-1j * p * big_l / h)
    bracket = parity[None, :] * wall_phase[:, None] - 1.0
    denom = p[:, None] ** 2 - p_n[None, :] ** 2
    scale = math.sqrt(h / (math.pi * big_l))
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = scale * p_n[None, :] * bracket / denom

    # First-order replacement near each singular point p = s*p_n:
    # phi ~ C*(-s i L/(2h) + delta*(-s L^2/(4h^2) + i L/(4 h p_n)))
    for sign in (1.0, -1.0):
        delta = p[:, None] - sign * p_n[None, :]
        mask = np.abs(delta) < window[None, :]
        if mask.any():
            rows, cols = np.nonzero(mask)
            d = delta[rows, cols]
            pn = p_n[cols]
            series = scale * (
                -sign * 1j * big_l / (2.0 * h)
                + d * (-sign * big_l**2 / (4.0 * h**2) + 1j * big_l / (4.0 * h * pn))
            )
            phi[rows, cols] = series
    return phi


def well_evolve(
    sys: WellSystem,
    exp: EigenExpansion,
    t: float,
    grid: UniformGrid,
    representation: str = "position",
) -> WaveFunction:
    """Superpose the expansion at time t in either representation.

    Position grids must resolve the fastest retained mode (dx <= L/(8 n_max));
    momentum grids must cover [-(n_max+20) pi hbar/L, +...].  The momentum
    superposition loses ~1e-4 of its norm to the truncated 1/p^2 tails of
    phi_n, so the returned state is renormalized on its grid (drift beyond
    1e-3 raises GridError).
    """
    if exp.basis != "well":
        raise ContractError(f"expected a well expansion, got {exp.basis!r}")
    n = exp.indices
    n_top = int(n.max())
    if representation == "position":
        if grid.step > sys.L / (8 * n_top) * (1 + 1e-12):
            raise GridError(
                f"dx = {grid.step:.3e} too coarse for n_max = {n_top}; "
                f"need dx <= {sys.L / (8 * n_top):.3e}"
            )
        key = ("well-pos", sys, grid, int(n[0]), n_top)
        basis = _cached_basis(key, lambda: _well_position_basis(sys, grid, n))
    elif representation == "momentum":
        p_need = (n_top + 20) * math.pi * sys.hbar / sys.L
        if grid.start > -p_need * (1 - 1e-12) or grid.stop < p_need * (1 - 1e-12):
            raise GridError(
                f"momentum grid [{grid.start:.1f}, {grid.stop:.1f}] does not cover "
                f"+-{p_need:.1f}"
            )
        key = ("well-mom", sys, grid, int(n[0]), n_top)
        basis = _cached_basis(key, lambda: _well_momentum_basis(sys, grid, n))
    else:
        raise ContractError(f"unknown representation {representation!r}")

    phases = np.exp(-1j * exp.energies * t / sys.hbar)
    amps = _superpose(basis, exp.coefficients * phases)
    wf = WaveFunction(grid=grid, amplitudes=amps, representation=representation)
    norm = wf.norm()
    # The bounded momentum grid truncates the 1/p^2 tails of phi_n; when the
    # expansion phases align (early times, revivals) that costs up to a few
    # 1e-3 of mass, which renormalization absorbs.  Position grids hold the
    # whole state, so they get the tight gate.
    limit = _NORM_DRIFT_LIMIT if representation == "position" else 1e-2
    if abs(norm - 1.0) > limit:
        raise GridError(f"norm drift {norm - 1.0:.2e} at t={t!r}; grid inadequate")
    return wf.normalized()


# ---------------------------------------------------------------------------
# Quantum bouncer
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BouncerSystem:
    """Bouncer in gravitational units: E_n = z_n, u_n(z) = N_n Ai(z - z_n).

    N_n = |Ai'(-z_n)|^(-1).  All quantities are dimensionless (lengths in
    l_g, energies in m g l_g, hbar = 1).
    """

    n_max: int
    airy: AiryTable

    def __post_init__(self):
        if self.n_max < 1:
            raise ContractError("n_max must be >= 1")
        if len(self.airy) < self.n_max:
            raise ContractError(
                f"Airy table holds {len(self.airy)} zeros, need {self.n_max}"
            )

    @classmethod
    def build(cls, n_max: int) -> "BouncerSystem":
        return cls(n_max=n_max, airy=airy_zeros(n_max))


def bouncer_coefficients(
    sys: BouncerSystem, packet: GaussianPacket, completeness_tol: float = 1e-3
) -> EigenExpansion:
    """Analytic expansion coefficients of a resting Gaussian at height z0.

    a_n = N_n (4 pi sigma^2)^(1/4) Ai(z0 - z_n + sigma^4/4)
          * exp((sigma^2/2)(z0 - z_n) + sigma^6/12)

    which is the Gaussian-smoothing identity for Ai applied to the overlap
    integral extended over the whole axis (exact up to floor-truncation
    terms of order e^(-z0^2/sigma^2)).  Requires p0 = 0 and z0 >= 5 sigma.
    """
    if packet.p0 != 0.0:
        raise ContractError("bouncer packets must start at rest (p0 = 0)")
    z0, sig = packet.x0, packet.sigma
    if not (z0 > 0 and z0 >= 5.0 * sig):
        raise ContractError(f"packet must sit above the floor: z0 = {z0}, sigma = {sig}")
    z_n = sys.airy.zeros[: sys.n_max]
    norms = 1.0 / np.abs(sys.airy.derivative_at_zeros[: sys.n_max])
    shift = z0 - z_n
    with np.errstate(under="ignore"):
        coeffs = (
            norms
            * (4.0 * math.pi * sig**2) ** 0.25
            * airy_ai(shift + sig**4 / 4.0)
            * np.exp((sig**2 / 2.0) * shift + sig**6 / 12.0)
        )
    total = float(np.sum(coeffs**2))
    if abs(total - 1.0) > completeness_tol:
        raise TruncationError(
            f"sum |a_n|^2 = {total:.6f}; completeness below 1 - {completeness_tol}",
            achieved=total,
        )
    coeffs = coeffs / math.sqrt(total)
    n = np.arange(1, sys.n_max + 1)
    return EigenExpansion(coefficients=coeffs, energies=z_n, basis="bouncer", indices=n)


def bouncer_grid(sys: BouncerSystem, packet: GaussianPacket, step: float = 0.05) -> UniformGrid:
    """[0, z_max] with z_max >= z0 + 8 max(sigma, z_nmax - z0) at the given step."""
    z0, sig = packet.x0, packet.sigma
    z_top = float(sys.airy.zeros[sys.n_max - 1])
    z_hi = z0 + 8.0 * max(sig, z_top - z0)
    count = int(math.ceil(z_hi / step)) + 1
    return UniformGrid(start=0.0, step=step, count=count)


def _bouncer_basis(sys: BouncerSystem, grid: UniformGrid) -> np.ndarray:
    z = grid.points()
    z_n = sys.airy.zeros[: sys.n_max]
    norms = 1.0 / np.abs(sys.airy.derivative_at_zeros[: sys.n_max])
    return norms[None, :] * airy_ai(z[:, None] - z_n[None, :])


def bouncer_evolve(
    sys: BouncerSystem,
    exp: EigenExpansion,
    t: float,
    grid: UniformGrid,
    representation: str = "position",
    pad_factor: int = 4,
) -> WaveFunction:
    """Airy-basis superposition at time t (position), or its padded transform.

    The position grid must resolve the Ai oscillations (dz <= 0.05 in scaled
    units).  The momentum representation transforms the zero-padded position
    state so dp is fine enough for the entropy extrema.
    """
    if exp.basis != "bouncer":
        raise ContractError(f"expected a bouncer expansion, got {exp.basis!r}")
    if grid.step > 0.05 * (1 + 1e-12):
        raise GridError(f"dz = {grid.step} too coarse; need dz <= 0.05")
    if abs(grid.start) > 1e-12:
        raise GridError("bouncer grid must start at the floor z = 0")
    key = ("bouncer", sys, grid)
    basis = _cached_basis(key, lambda: _bouncer_basis(sys, grid))
    phases = np.exp(-1j * exp.energies * t)
    amps = _superpose(basis, exp.coefficients * phases)
    wf = WaveFunction(grid=grid, amplitudes=amps, representation="position")
    norm = wf.norm()
    if abs(norm - 1.0) > _NORM_DRIFT_LIMIT:
        raise GridError(f"norm drift {norm - 1.0:.2e} at t={t!r}; grid inadequate")
    wf = wf.normalized()
    if representation == "position":
        return wf
    if representation == "momentum":
        return to_momentum(wf, hbar=1.0, pad_factor=pad_factor)
    raise ContractError(f"unknown representation {representation!r}")


# ---------------------------------------------------------------------------
# Characteristic time scales
# ---------------------------------------------------------------------------

def timescales(system, packet: GaussianPacket) -> Timescales:
    """T_cl, T_rev, T_coll for a packet in the given system.

    Oscillator: T_cl = 2 pi/omega, no revival/collapse scale (motion is
    exactly periodic).  Well: n0 = round(p0 L/(pi hbar)), T_cl = 2mL^2/(hbar
    pi n0), T_rev = 4mL^2/(hbar pi), T_coll = (1/sqrt(6)) m L sigma/hbar.
    Bouncer: T_cl = 2 sqrt(z0), T_rev = 4 z0^2/pi, T_coll = T_cl^3/(4 sqrt(2)
    sigma).
    """
    if isinstance(system, OscillatorSystem):
        return Timescales(t_cl=2.0 * math.pi / system.omega, t_rev=None, t_coll=None)
    if isinstance(system, WellSystem):
        n0 = round(packet.p0 * system.L / (math.pi * system.hbar))
        if n0 < 1:
            raise ContractError(
                f"well packet momentum p0 = {packet.p0} gives n0 = {n0} < 1"
            )
        m, big_l, h = system.m, system.L, system.hbar
        return Timescales(
            t_cl=2.0 * m * big_l**2 / (h * math.pi * n0),
            t_rev=4.0 * m * big_l**2 / (h * math.pi),
            t_coll=m * big_l * packet.sigma / (h * math.sqrt(6.0)),
        )
    if isinstance(system, BouncerSystem):
        z0 = packet.x0
        if z0 <= 0:
            raise ContractError(f"bouncer height must be positive, got {z0}")
        t_cl = 2.0 * math.sqrt(z0)
        return Timescales(
            t_cl=t_cl,
            t_rev=4.0 * z0**2 / math.pi,
            t_coll=t_cl**3 / (4.0 * math.sqrt(2.0) * packet.sigma),
        )
    raise ContractError(f"unknown system type {type(system).__name__}")
