"""Exact scalar, polynomial, rational-function and matrix arithmetic."""

from .linalg import (
    RREF,
    FittingSplit,
    NotNilpotent,
    coordinates,
    fitting_split,
    image,
    in_span,
    independent_subset,
    kernel,
    nilpotent_jordan,
    partition_from_ranks,
    rank,
    rank_sequence,
    rref,
)
from .matrix import EpsMatrix, IdenticallySingular, Mat, SingularMatrix, direct_sum, jordan_eps
from .poly import EPS, EpsPoly, EpsRatFun, NoLimit, limit_at_zero, limit_quotient, poly_gcd, ratfun
from .scalar import ONE, ZERO, Q, fmt
from .sturm import count_roots, sturm_sequence


def mat_inverse_eps(u: EpsMatrix) -> EpsMatrix:
    """Inverse over the rational-function field; raises IdenticallySingular."""
    return u.inverse()


__all__ = [
    "EPS", "ONE", "ZERO", "Q", "RREF", "EpsMatrix", "EpsPoly", "EpsRatFun", "FittingSplit",
    "IdenticallySingular", "Mat", "NoLimit", "NotNilpotent", "SingularMatrix", "coordinates",
    "count_roots", "direct_sum", "fitting_split", "fmt", "image", "in_span", "independent_subset",
    "jordan_eps", "kernel", "limit_at_zero", "limit_quotient", "mat_inverse_eps",
    "nilpotent_jordan", "partition_from_ranks", "poly_gcd", "rank", "rank_sequence", "ratfun",
    "rref", "sturm_sequence",
]
