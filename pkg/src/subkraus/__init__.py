"""Subsystem Kraus extraction for finite-dimensional dynamical maps.

Given a completely positive, trace-preserving map on a composite system and
a product initial state, :func:`reduce_subsystem` produces an exact Kraus
representation of either factor's reduced dynamics. The surrounding modules
supply the linear-algebra primitives, Hermitian operator bases, Choi-based
complete-positivity diagnostics, the separable-ensemble branch analysis for
correlated preparations, and a fully worked damped two-qubit model.
"""

from .basis import OperatorBasis, build_hermitian_basis, expand, reconstruct
from .casestudy import (
    DampingRates,
    ModelInconsistencyError,
    ModelParams,
    bose_occupation,
    closed_form_b,
    closed_form_subsystem_map,
    composite_hamiltonian,
    composite_kraus,
    damping_rates,
    ohmic_spectral_density,
    qubit_state,
    to_schrodinger,
)
from .channels import (
    ChoiMatrix,
    CpVerdict,
    DensityMatrix,
    KrausMap,
    apply_map,
    apply_matrix,
    channel_distance,
    choi_matrix,
    completeness_defect,
    cp_verdict,
    dump_density_json,
    dump_map_json,
    load_density_json,
    load_map_json,
    maximally_mixed,
    pure_state,
)
from .linalg import (
    MODEL_TOL,
    STRUCTURAL_TOL,
    EigenDecomposition,
    evolution_unitary,
    hermitian_eig,
    partial_trace,
    tensor_product,
)
from .reduction import (
    Bipartition,
    BMatrix,
    CoefficientTensor,
    DomainVerdict,
    NonPositiveBMatrixError,
    OperatorFactorization,
    ReductionResult,
    SeparableEnsemble,
    b_matrix,
    c_coefficients,
    correlated_probe,
    factorization_check,
    reduce_separable_ensemble,
    reduce_subsystem,
    reduced_domain_verdict,
)

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "BMatrix",
    "ChoiMatrix",
    "CoefficientTensor",
    "CpVerdict",
    "DampingRates",
    "DensityMatrix",
    "DomainVerdict",
    "EigenDecomposition",
    "KrausMap",
    "ModelInconsistencyError",
    "ModelParams",
    "NonPositiveBMatrixError",
    "OperatorBasis",
    "OperatorFactorization",
    "ReductionResult",
    "SeparableEnsemble",
    "MODEL_TOL",
    "STRUCTURAL_TOL",
    "apply_map",
    "apply_matrix",
    "b_matrix",
    "bose_occupation",
    "build_hermitian_basis",
    "c_coefficients",
    "channel_distance",
    "choi_matrix",
    "closed_form_b",
    "closed_form_subsystem_map",
    "completeness_defect",
    "composite_hamiltonian",
    "composite_kraus",
    "correlated_probe",
    "cp_verdict",
    "damping_rates",
    "dump_density_json",
    "dump_map_json",
    "evolution_unitary",
    "expand",
    "factorization_check",
    "hermitian_eig",
    "load_density_json",
    "load_map_json",
    "maximally_mixed",
    "ohmic_spectral_density",
    "partial_trace",
    "pure_state",
    "qubit_state",
    "reconstruct",
    "reduce_separable_ensemble",
    "reduce_subsystem",
    "reduced_domain_verdict",
    "tensor_product",
    "to_schrodinger",
]
