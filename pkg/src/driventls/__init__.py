"""Floquet states, quasienergies and spectra of a driven two-level system.

The package solves the periodically driven two-level problem two ways: a
closed-form first-order treatment valid for small detuning-to-drive-
frequency ratio at arbitrary drive strength, and an exact numerical
propagator; the two cross-validate each other.  On top of both sit the
transition spectra: selection rules, line positions and line intensities
between the Floquet-mode manifolds.
"""

from .analytic import (
    AuxiliaryFunctions,
    alpha,
    analytic_evolution,
    analytic_floquet_state,
    analytic_modes,
    analytic_quasienergies,
    auxiliary_functions,
    beta_over_i,
    eta,
    phi,
    xi_a,
    xi_s,
)
from .bessel import BesselSeries, bessel_j, bessel_row, j0_zero, series_cutoff
from .core import (
    IDENTITY,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    AccuracyError,
    ClassificationError,
    DomainError,
    DrivenTLSError,
    ParameterError,
    SystemParams,
    hamiltonian_at,
    pauli_combination,
    su2_exponential,
    tau_grid,
    unitarity_defect,
)
from .floquet import (
    PARITY,
    FloquetMode,
    ModeMatch,
    QuasienergyPair,
    build_modes,
    classify_parity,
    exact_quasienergies,
    extract_floquet,
    floquet_mode_at,
    fold_quasienergy,
    match_modes,
    mode_parity_sign,
    quasienergy_distance,
    symmetry_classify,
)
from .propagator import (
    DEFAULT_CONFIG,
    PropagationConfig,
    one_period_propagator,
    propagate,
    propagate_grid,
    propagation_diagnostics,
)
from .spectroscopy import (
    TransitionLine,
    dipole_matrix_element,
    extended_inner,
    is_forbidden,
    line_class,
    line_intensity_analytic,
    line_intensity_numeric,
    spectrum,
    transition_frequency,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "AuxiliaryFunctions",
    "BesselSeries",
    "ClassificationError",
    "DEFAULT_CONFIG",
    "DomainError",
    "DrivenTLSError",
    "FloquetMode",
    "IDENTITY",
    "ModeMatch",
    "PARITY",
    "ParameterError",
    "PropagationConfig",
    "QuasienergyPair",
    "SIGMA_MINUS",
    "SIGMA_PLUS",
    "SIGMA_X",
    "SIGMA_Z",
    "SystemParams",
    "TransitionLine",
    "alpha",
    "analytic_evolution",
    "analytic_floquet_state",
    "analytic_modes",
    "analytic_quasienergies",
    "auxiliary_functions",
    "bessel_j",
    "bessel_row",
    "beta_over_i",
    "build_modes",
    "classify_parity",
    "dipole_matrix_element",
    "eta",
    "exact_quasienergies",
    "extended_inner",
    "extract_floquet",
    "floquet_mode_at",
    "fold_quasienergy",
    "hamiltonian_at",
    "is_forbidden",
    "j0_zero",
    "line_class",
    "line_intensity_analytic",
    "line_intensity_numeric",
    "match_modes",
    "mode_parity_sign",
    "one_period_propagator",
    "pauli_combination",
    "phi",
    "propagate",
    "propagate_grid",
    "propagation_diagnostics",
    "quasienergy_distance",
    "series_cutoff",
    "spectrum",
    "su2_exponential",
    "symmetry_classify",
    "tau_grid",
    "transition_frequency",
    "unitarity_defect",
    "xi_a",
    "xi_s",
]
