"""Analysis toolbox for unital quantum channels in Kraus form.

Decomposes the space into irreducible invariant blocks (simultaneously
block-diagonalizing the Kraus operators), computes and classifies fixed
states, decides measurement-statistics preservation, and evaluates entropic
channel quantities together with their exact block-combination rules.
"""

from . import errors
from .capacity import (
    ChannelQuantity,
    coherent_information,
    coherent_information_value,
    ent_assisted_capacity,
    exchange_matrix,
    min_output_renyi,
    quantum_mutual_information,
    reduce_over_blocks,
    renyi_entropy,
)
from .channel import (
    KrausChannel,
    ValidationReport,
    dephasing_channel,
    depolarizing_channel,
    direct_sum,
    identity_channel,
    random_unital_channel,
    standard_channel,
    superoperator_distance,
    unitary_channel,
    unvec,
    validate_kraus,
    vec,
)
from .decomposition import (
    DecompositionMatching,
    InvarianceReport,
    IrisDecomposition,
    MatchingComponent,
    Subspace,
    iris_decompose,
    is_invariant_subspace,
    match_decompositions,
    offdiagonal_residual,
    restrict,
)
from .fixed_points import (
    BlockMixture,
    CommutantBasis,
    DegenerateFixedState,
    FixedPointReport,
    PureStateReport,
    classify_fixed_state,
    commutant_basis,
    fixed_pure_state_check,
    is_fixed,
)
from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    cluster_eigenvalues,
    haar_unitary,
    hermitian_eig,
    null_space,
    orthonormal_complement,
)
from .measurement import (
    CommutationReport,
    ElementReport,
    MeasurementReport,
    Povm,
    PreservationReport,
    ProjectiveMeasurement,
    StructuralDecomposition,
    StructuralFailure,
    StructuralTerm,
    channels_commute,
    measurement_preserved,
    povm_structural_decomposition,
    projection_intertwines,
    projective_channel,
    statistics_preserved,
    violation_witness,
)

__all__ = [
    "errors",
    "Tolerances",
    "DEFAULT_TOL",
    "hermitian_eig",
    "null_space",
    "orthonormal_complement",
    "cluster_eigenvalues",
    "haar_unitary",
    "KrausChannel",
    "ValidationReport",
    "validate_kraus",
    "vec",
    "unvec",
    "superoperator_distance",
    "direct_sum",
    "identity_channel",
    "depolarizing_channel",
    "dephasing_channel",
    "unitary_channel",
    "random_unital_channel",
    "standard_channel",
    "CommutantBasis",
    "commutant_basis",
    "FixedPointReport",
    "is_fixed",
    "PureStateReport",
    "fixed_pure_state_check",
    "BlockMixture",
    "DegenerateFixedState",
    "classify_fixed_state",
    "Subspace",
    "IrisDecomposition",
    "InvarianceReport",
    "is_invariant_subspace",
    "offdiagonal_residual",
    "iris_decompose",
    "restrict",
    "DecompositionMatching",
    "MatchingComponent",
    "match_decompositions",
    "Povm",
    "ProjectiveMeasurement",
    "projective_channel",
    "CommutationReport",
    "projection_intertwines",
    "channels_commute",
    "PreservationReport",
    "statistics_preserved",
    "StructuralTerm",
    "StructuralDecomposition",
    "StructuralFailure",
    "povm_structural_decomposition",
    "violation_witness",
    "ElementReport",
    "MeasurementReport",
    "measurement_preserved",
    "ChannelQuantity",
    "renyi_entropy",
    "exchange_matrix",
    "quantum_mutual_information",
    "coherent_information_value",
    "min_output_renyi",
    "ent_assisted_capacity",
    "coherent_information",
    "reduce_over_blocks",
]
