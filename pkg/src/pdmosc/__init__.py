"""Position-dependent mass oscillators.

Point transformations between x-space systems with a mass function m(x)
and constant-mass problems in y = s(x), with WKB and Numerov spectra,
ladder factorizations and coherent states.
"""
from .coherent import (
    CoherentState,
    coherent_amplitudes,
    coherent_state,
    coherent_wavefunction,
    displace,
    energy_moments,
    poisson_prob,
    uncertainty_from_samples,
    uncertainty_product,
)
from .errors import ConvergenceError, DomainError, NonBijectiveError, PDMError
from .kernels import BACKEND
from .ladder import (
    FactorizationPair,
    MissingState,
    apply_factorization,
    apply_ladder,
    beta_oscillator,
    commutator_value,
    missing_state,
    oscillator_pair,
    partner_potential,
    potential_from_beta,
    riccati_residual,
)
from .mass_models import (
    CoordinateMap,
    MassFamily,
    MassKind,
    OrderingParameter,
    allowed_ordering,
    coordinate_map,
    mass_at,
    mdnt_residual,
)
from .oscillators import (
    FirstKindOscillator,
    SecondKindOscillator,
    build_second_kind,
    first_kind,
    first_kind_eigenfunction,
    squeezed_eigenfunction,
    squeezed_potential,
)
from .schrodinger import EigenSolution, SolverConfig, solve_halfline, solve_levels
from .special_fns import gamma_fn, hermite, hermite_function, kummer_poly, laguerre
from .spectra import (
    WkbLevel,
    action,
    crossing_index,
    jn_constant,
    powerlaw_energy,
    powerlaw_levels,
    sinh2_wkb_spectrum,
    turning_points,
    wkb_quantize,
)
from .transform import (
    PotentialKind,
    PotentialSpec,
    WaveSample,
    effective_potential,
    pullback_wavefunction,
    pushforward_potential,
    pushforward_wavefunction,
)

__version__ = "0.1.0"
