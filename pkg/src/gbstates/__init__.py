"""Generalized binomial states of a single-mode field.

Closed-form spectrum and eigenstates of sqrt(1-eta)(mu J+ + nu J-) -
sqrt(eta) J0 on the truncated Fock space, the binomial states they extend,
their number/coherent/squeezed limits, and an independent dense eigensolver
that cross-checks every claim.
"""

__version__ = "0.1.0"

from .analysis import (
    KRule,
    LimitSchedule,
    PhotonStatistics,
    coherent_state,
    number_limit_scan,
    photon_statistics,
    squeezed_eigenstate,
    squeezed_limit_scan,
    su2_coherent_form,
    time_evolve,
)
from .binomial import BinomialParams, binomial_amplitudes, binomial_displacement_form, ladder_residual
from .displacement import (
    DisplacementParams,
    conjugated_generators,
    delta_to_zeta,
    disentangled_displacement,
    displacement,
)
from .fock import (
    annihilation_operator,
    apply,
    basis_state,
    commutator,
    creation_operator,
    fidelity,
    hp_generators,
    inner,
    is_normalized,
    is_unitary,
    matrix_exp,
    norm,
    normalize_state,
    number_operator,
)
from .oracle import NonConvergenceError, SpectrumReport, compare, dense_spectrum, null_eigenvector
from .solver import (
    CoefficientTriple,
    GBSParams,
    GBSSolution,
    SolutionKind,
    binomial_phase_parameters,
    build_operator,
    coefficient_triple,
    constraint_roots,
    degenerate_eigenstates,
    eigenstate_exponential,
    eigenstate_sum,
    solve,
    spectrum,
)

__all__ = [
    "BinomialParams",
    "CoefficientTriple",
    "DisplacementParams",
    "GBSParams",
    "GBSSolution",
    "KRule",
    "LimitSchedule",
    "NonConvergenceError",
    "PhotonStatistics",
    "SolutionKind",
    "SpectrumReport",
    "annihilation_operator",
    "apply",
    "basis_state",
    "binomial_amplitudes",
    "binomial_displacement_form",
    "binomial_phase_parameters",
    "build_operator",
    "coefficient_triple",
    "coherent_state",
    "commutator",
    "compare",
    "conjugated_generators",
    "constraint_roots",
    "creation_operator",
    "degenerate_eigenstates",
    "delta_to_zeta",
    "dense_spectrum",
    "disentangled_displacement",
    "displacement",
    "eigenstate_exponential",
    "eigenstate_sum",
    "fidelity",
    "hp_generators",
    "inner",
    "is_normalized",
    "is_unitary",
    "ladder_residual",
    "matrix_exp",
    "norm",
    "normalize_state",
    "null_eigenvector",
    "number_limit_scan",
    "number_operator",
    "photon_statistics",
    "solve",
    "spectrum",
    "squeezed_eigenstate",
    "squeezed_limit_scan",
    "su2_coherent_form",
    "time_evolve",
]
