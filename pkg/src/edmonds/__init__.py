"""Commutative and non-commutative rank of matrix spaces over exact fields."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegreeCapExceeded,
    DimensionMismatchError,
    EdmondsError,
    FieldTooSmallError,
    InstanceTooLargeError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidWitnessError,
    UnsupportedCharacteristicError,
    UnsupportedOperationError,
)
from .exactfield import QQ, PrimeField, RationalField, make_field, make_unity_ring, sample_set  # noqa: E402
from .linalg import Subspace, function_field_rank, kernel, preimage, rank, rref  # noqa: E402
from .mspace import (  # noqa: E402
    BlowUp,
    MatrixSpace,
    ShrunkWitness,
    commutative_rank_estimate,
    is_blowup,
    verify_shrunk,
)
from .ncrank import FullCert, NcrkResult, degree_bounds, ncrk_main, nullcone_test_randomized  # noqa: E402
from .roundup import round_up_rank  # noqa: E402
from .wong import second_wong  # noqa: E402

__all__ = [
    "BlowUp", "DegreeCapExceeded", "DimensionMismatchError", "EdmondsError", "FieldTooSmallError",
    "FullCert", "InstanceTooLargeError", "InternalConsistencyError", "InvalidInputError",
    "InvalidWitnessError", "MatrixSpace", "NcrkResult", "PrimeField", "QQ", "RationalField",
    "ShrunkWitness", "Subspace", "UnsupportedCharacteristicError", "UnsupportedOperationError",
    "commutative_rank_estimate", "degree_bounds", "function_field_rank", "is_blowup", "kernel",
    "make_field", "make_unity_ring", "ncrk_main", "nullcone_test_randomized", "preimage", "rank",
    "round_up_rank", "rref", "sample_set", "second_wong", "verify_shrunk",
]
