"""Wave-packet revival diagnostics for bound 1-D quantum systems.

Evolves Gaussian packets in the harmonic oscillator, the infinite square
well, and the quantum bouncer, and quantifies revivals and fractional
revivals through the autocorrelation function, the Heisenberg uncertainty
product, and Renyi entropy sums in conjugate spaces.
"""

__version__ = "0.1.0"

from qrevival.entropy import ConjugatePair, conjugate_order, entropy_sum, renyi, renyi_bound
from qrevival.errors import (
    ConfigError,
    ContractError,
    ConvergenceError,
    DimensionError,
    DomainError,
    GridError,
    NumericError,
    QRevivalError,
    SchemaError,
    TruncationError,
)
from qrevival.numerics import (
    AiryTable,
    UniformGrid,
    airy_ai,
    airy_ai_prime,
    airy_zero_seed,
    airy_zeros,
    integrate,
    to_momentum,
    to_position,
)
from qrevival.revivals import (
    DiagnosticSeries,
    classify_fractions,
    collapse_estimate,
    detect_extrema,
    run_diagnostics,
)
from qrevival.state import (
    Density,
    WaveFunction,
    autocorrelation,
    density,
    moments,
    uncertainty_product,
)
from qrevival.systems import (
    BouncerSystem,
    EigenExpansion,
    GaussianPacket,
    OscillatorSystem,
    Timescales,
    WellSystem,
    bouncer_coefficients,
    bouncer_evolve,
    bouncer_grid,
    gaussian_wavefunction,
    sho_evolve,
    sho_grid,
    sho_renyi_analytic,
    sho_uncertainties,
    timescales,
    well_coefficients,
    well_evolve,
    well_momentum_grid,
    well_position_grid,
)
