"""Unitary staircase decompositions of chain and cycle quiver representations.

The package computes, using unitary changes of basis only, the canonical
interval decomposition of a chain of linear maps and the regularizing
decomposition (walk summands plus a regular part) of a cycle of linear maps
over the complex numbers.  Rank decisions are SVD-based and auditable
through an explicit tolerance policy.
"""

from .errors import InconsistencyError, NumericError, QuiverError, ValidationError
from .linalg import (
    DEFAULT_TOL,
    TolerancePolicy,
    col_compress,
    f_block,
    g_block,
    jordan_block,
    numerical_rank,
    row_compress,
    staircase_reduce,
    svd,
    two_sided_reduce,
    unitarity_defect,
)
from .quiver import (
    CHAIN,
    CLOCKWISE,
    COUNTERCLOCKWISE,
    CYCLE,
    QuiverShape,
    Representation,
    apply_isomorphism,
    chain_shape,
    cycle_shape,
    direct_sum,
    g_label_dims,
    is_regular,
    iso_residual,
    make_G,
    make_L,
    representation_scale,
    transpose_rep,
    zero_representation,
)
from .chain import (
    ChainCanonicalForm,
    ChainTrace,
    assemble_canonical,
    canon_chain,
    chain_pattern_residual,
)
from .cycle import (
    RegularizingDecomposition,
    ShaveResult,
    monodromy,
    push_down,
    regularize,
    shave,
    shave_glue_residual,
)
from .oracle import (
    PlantSpec,
    VerificationReport,
    hausdorff_distance,
    plant,
    random_unitary,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "QuiverError",
    "ValidationError",
    "NumericError",
    "InconsistencyError",
    "TolerancePolicy",
    "DEFAULT_TOL",
    "svd",
    "numerical_rank",
    "row_compress",
    "col_compress",
    "two_sided_reduce",
    "staircase_reduce",
    "unitarity_defect",
    "f_block",
    "g_block",
    "jordan_block",
    "CHAIN",
    "CYCLE",
    "CLOCKWISE",
    "COUNTERCLOCKWISE",
    "QuiverShape",
    "chain_shape",
    "cycle_shape",
    "Representation",
    "zero_representation",
    "representation_scale",
    "direct_sum",
    "transpose_rep",
    "apply_isomorphism",
    "iso_residual",
    "make_L",
    "make_G",
    "g_label_dims",
    "is_regular",
    "ChainCanonicalForm",
    "ChainTrace",
    "canon_chain",
    "assemble_canonical",
    "chain_pattern_residual",
    "ShaveResult",
    "shave",
    "push_down",
    "shave_glue_residual",
    "monodromy",
    "RegularizingDecomposition",
    "regularize",
    "PlantSpec",
    "plant",
    "random_unitary",
    "verify",
    "VerificationReport",
    "hausdorff_distance",
]
