"""orthokit: certificates and refuters for orthogonality of complex matrices.

Pythagoras orthogonality (||A + lam B||^2 = ||A||^2 + |lam|^2 ||B||^2 for all
complex lam), column orthonormality of families, range orthogonality and
its metric characterizations, and the rank-one projection case.
"""

__version__ = "0.1.0"

from .column_orth import (
    ColumnFamily,
    ColumnReport,
    check_column_orthonormal,
    coefficient_identity_test,
    gram_at_state,
)
from .core_linalg import (
    DEFAULT_CFG,
    HermitianEig,
    ToleranceConfig,
    eigenspace,
    hermitian_eig,
    operator_norm,
    polar_unitary,
    positive_part,
    psd_sqrt,
    subspace_intersection,
)
from .errors import OrthokitError
from .generators import (
    canonical_pair,
    column_canonical,
    family_square3x3,
    family_rect3x2,
    family_rank1_partner,
    generate,
    partial_isometry_pair,
)
from .matrix_io import load_matrix, save_matrix
from .normal_pairs import ConePoint, JointSpectrum, check_normal_pair, cone_refuter, joint_spectrum
from .pythagoras import (
    DefectProfile,
    GridSpec,
    check_pythagoras,
    criterion_matrix,
    defect_profile,
    det_identity_test,
    find_common_kernel,
    norming_orthogonality_test,
    normalize_pair,
    reduce_to_positive,
    selfadjoint_obstruction,
)
from .range_orth import (
    check_isometry_identity,
    check_range_orthogonal,
    majorization_test,
    metric_inequality_test,
    pythagoras_via_state,
)
from .rank1 import (
    Rank1Decomposition,
    construct_partner,
    decompose_rank1,
    rank1_certify,
    rank1_conditions,
)
from .verdict import OrthoVerdict, Reason, Status
