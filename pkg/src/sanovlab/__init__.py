"""Numerics laboratory for joint spectrum-and-type measurements on tensor
powers, their exact outcome laws, and the associated divergences and error
exponents."""

from .divergences import (
    PhiCurve,
    d_hat,
    phi_curve,
    phi_petz,
    phi_sandwich,
    sandwiched_renyi,
)
from .errors import (
    DomainError,
    NumericalInstabilityError,
    ResourceBudgetError,
    SupportViolationError,
    ValidationError,
)
from .exponents import (
    ExponentCurve,
    b_e_hat,
    exponent_curve,
    legendre_dual_max,
    solve_s_of_r,
)
from .sanov import (
    BoundReport,
    ScanResult,
    classical_sanov_prob,
    enumerate_r_set,
    lemma1_check,
    pair_rate,
    rate_r,
    s_set_split,
    theorem1_check,
    theorem2_scan,
)
from .schur import (
    CycleType,
    JointOutcomeDistribution,
    TypeVector,
    YoungIndex,
    block_decompose,
    block_embed,
    enumerate_types,
    enumerate_young,
    in_r_set,
    joint_projector,
    majorizes,
    multiplicity_dim,
    outcome_distribution,
    pinch_types,
    sample_outcomes,
    sn_character,
    tensor_power,
    type_projector,
    unitary_dim,
    young_projector,
)
from .spectral import (
    DensityMatrix,
    HermitianOperator,
    ProbabilityVector,
    SpectralDecomposition,
    entropy,
    log_fidelity,
    matrix_function,
    relative_entropy,
    spectral_decompose,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CycleType",
    "DensityMatrix",
    "DomainError",
    "ExponentCurve",
    "HermitianOperator",
    "JointOutcomeDistribution",
    "NumericalInstabilityError",
    "PhiCurve",
    "ProbabilityVector",
    "ResourceBudgetError",
    "ScanResult",
    "SpectralDecomposition",
    "SupportViolationError",
    "TypeVector",
    "ValidationError",
    "YoungIndex",
    "b_e_hat",
    "block_decompose",
    "block_embed",
    "classical_sanov_prob",
    "d_hat",
    "entropy",
    "enumerate_r_set",
    "enumerate_types",
    "enumerate_young",
    "exponent_curve",
    "in_r_set",
    "joint_projector",
    "legendre_dual_max",
    "lemma1_check",
    "log_fidelity",
    "majorizes",
    "matrix_function",
    "multiplicity_dim",
    "outcome_distribution",
    "pair_rate",
    "phi_curve",
    "phi_petz",
    "phi_sandwich",
    "pinch_types",
    "rate_r",
    "relative_entropy",
    "s_set_split",
    "sample_outcomes",
    "sandwiched_renyi",
    "sn_character",
    "solve_s_of_r",
    "spectral_decompose",
    "tensor_power",
    "theorem1_check",
    "theorem2_scan",
    "type_projector",
    "unitary_dim",
    "young_projector",
]
