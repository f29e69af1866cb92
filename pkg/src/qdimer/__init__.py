"""Spectra of quantum discrete-self-trapping dimers by Sturm bisection on
the characteristic three-term recurrence, with the supporting su(n) and
su_q(n) ladder-operator algebra, invariant checks, and a CSV command line.
"""

__version__ = "0.1.0"

from .dimer import (
    MODELS,
    SpinSector,
    TridiagonalHamiltonian,
    build_dimer,
    build_qal_dimer,
    build_qdnls_dimer,
)
from .fock_algebra import (
    MAX_SECTOR_DIM,
    ChevalleyGenerators,
    FockSectorBasis,
    ResidualReport,
    SectorOperator,
    al_hop_operator,
    al_oscillator_ops,
    build_sector_basis,
    cartan_matrix,
    casimir_matrix,
    hop_operator,
    number_operator,
    omega_matrix,
    q_hop_operator,
    su2_casimir,
    su_n_generators,
    suq2_casimir,
    suq_n_generators,
    verify_al_relations,
    verify_chevalley,
    verify_number_reconstruction,
    verify_serre,
)
from .invariants import (
    ConservationReport,
    build_qal_chain,
    build_qdnls_chain,
    check_commutes,
    conservation_suite,
)
from .qnumbers import (
    Q_ONE_THRESHOLD,
    DeformationParameter,
    basic_qnum,
    q_binomial,
    q_factorial,
    q_from_gamma,
    sym_qnum,
)
from .spectral import (
    ParityReport,
    Spectrum,
    SturmEvaluation,
    characteristic_coefficients,
    completeness_check,
    dense_oracle,
    df_orthonormality_check,
    eigenvalues_bisection,
    eigenvector_from_recurrence,
    epsilon_factors,
    gershgorin_bounds,
    parity_structure_check,
    solve_spectrum,
    sturm_eval,
)

__all__ = [
    "MODELS",
    "MAX_SECTOR_DIM",
    "Q_ONE_THRESHOLD",
    "ChevalleyGenerators",
    "ConservationReport",
    "DeformationParameter",
    "FockSectorBasis",
    "ParityReport",
    "ResidualReport",
    "SectorOperator",
    "SpinSector",
    "Spectrum",
    "SturmEvaluation",
    "TridiagonalHamiltonian",
    "al_hop_operator",
    "al_oscillator_ops",
    "basic_qnum",
    "build_dimer",
    "build_qal_chain",
    "build_qal_dimer",
    "build_qdnls_chain",
    "build_qdnls_dimer",
    "build_sector_basis",
    "cartan_matrix",
    "casimir_matrix",
    "characteristic_coefficients",
    "check_commutes",
    "completeness_check",
    "conservation_suite",
    "dense_oracle",
    "df_orthonormality_check",
    "eigenvalues_bisection",
    "eigenvector_from_recurrence",
    "epsilon_factors",
    "gershgorin_bounds",
    "hop_operator",
    "number_operator",
    "omega_matrix",
    "parity_structure_check",
    "q_binomial",
    "q_factorial",
    "q_from_gamma",
    "q_hop_operator",
    "solve_spectrum",
    "sturm_eval",
    "su2_casimir",
    "su_n_generators",
    "suq2_casimir",
    "suq_n_generators",
    "sym_qnum",
    "verify_al_relations",
    "verify_chevalley",
    "verify_number_reconstruction",
    "verify_serre",
]
