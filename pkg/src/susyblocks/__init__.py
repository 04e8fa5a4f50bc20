"""Block-diagonal many-body SUSY quantum mechanics on the line.

Separable superpotentials split the 2^n-dimensional superhamiltonian into
blocks labeled by relative fermion number and center-of-mass occupation;
the matrix coefficients of each block realize a hook irreducible
representation of the particle permutation group. This package builds the
blocks, proves the representation content numerically, and verifies the
supersymmetric pairing of the resulting spectra.
"""

from .errors import (
    ConvergenceError,
    InvalidModeError,
    InvalidPartitionError,
    InvalidSectorError,
    SingularArgumentError,
    SusyBlocksError,
    TableauMatchError,
)
from .fock import (
    FockBasis,
    FockState,
    SparseOperator,
    annihilation_matrix,
    creation_matrix,
    enumerate_basis,
    full_annihilation,
    full_basis,
    full_creation,
    full_permutation,
    permutation_operator,
)
from .jacobi import (
    JacobiMatrix,
    PhiBasis,
    build_phi_basis,
    build_R,
    phi_creation_matrix,
)
from .symrep import (
    IrreducibilityReport,
    RepMatrixSet,
    b_matrix,
    b_permutation,
    character,
    class_size,
    hook_dimension,
    identify_tableau,
    mn_character,
    partitions,
    rep_matrix_set,
    t_tilde,
    validate_partition,
    verify_irreducible,
)
from .superpotential import (
    PairModel,
    SeparabilityReport,
    Superpotential,
    check_separability,
    default_sample_points,
    example3,
    functional_eq_residual,
    get_superpotential,
    pair_model,
    pairwise_superpotential,
    potential_column_diagnostic,
)
from .hamiltonian import (
    BlockOperatorSpec,
    CGTensor,
    ResidualReport,
    SuperchargeSpec,
    build_block,
    build_pairwise_block,
    build_supercharge,
    cg_tensor,
    cm_anticommutator_residual,
    hs_form_consistency,
    intertwining_residual,
    nilpotency_max,
)
from .spectral import (
    DiscreteOperator,
    GridSpec,
    SpectrumReport,
    discretize_block,
    discretize_supercharge,
    eigen_lowest,
    eigen_near,
    example3_oscillator_check,
    map_eigenfunction,
    relative_block,
    susy_composed_hamiltonian,
    susy_composed_pair,
    verify_pairing,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "InvalidModeError",
    "InvalidPartitionError",
    "InvalidSectorError",
    "SingularArgumentError",
    "SusyBlocksError",
    "TableauMatchError",
    "FockBasis",
    "FockState",
    "SparseOperator",
    "annihilation_matrix",
    "creation_matrix",
    "enumerate_basis",
    "full_annihilation",
    "full_basis",
    "full_creation",
    "full_permutation",
    "permutation_operator",
    "JacobiMatrix",
    "PhiBasis",
    "build_phi_basis",
    "build_R",
    "phi_creation_matrix",
    "IrreducibilityReport",
    "RepMatrixSet",
    "b_matrix",
    "b_permutation",
    "character",
    "class_size",
    "hook_dimension",
    "identify_tableau",
    "mn_character",
    "partitions",
    "rep_matrix_set",
    "t_tilde",
    "validate_partition",
    "verify_irreducible",
    "PairModel",
    "SeparabilityReport",
    "Superpotential",
    "check_separability",
    "default_sample_points",
    "example3",
    "functional_eq_residual",
    "get_superpotential",
    "pair_model",
    "potential_column_diagnostic",
    "pairwise_superpotential",
    "BlockOperatorSpec",
    "CGTensor",
    "ResidualReport",
    "SuperchargeSpec",
    "build_block",
    "build_pairwise_block",
    "build_supercharge",
    "cg_tensor",
    "cm_anticommutator_residual",
    "hs_form_consistency",
    "intertwining_residual",
    "nilpotency_max",
    "DiscreteOperator",
    "GridSpec",
    "SpectrumReport",
    "discretize_block",
    "discretize_supercharge",
    "eigen_lowest",
    "eigen_near",
    "example3_oscillator_check",
    "map_eigenfunction",
    "relative_block",
    "susy_composed_hamiltonian",
    "susy_composed_pair",
    "verify_pairing",
    "__version__",
]
