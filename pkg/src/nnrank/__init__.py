"""Exact constructions and checks for nonnegative rank gadgets."""
from .errors import NNRankError
from .matrix import ExactMatrix, NNFactorization, RankOneTerm, rank_exact, validate_factorization
from .scalar import Domain, QuadScalar, SQRT2, quad_sign, scalar_format, scalar_parse

__all__ = [
    "NNRankError", "ExactMatrix", "NNFactorization", "RankOneTerm", "rank_exact",
    "validate_factorization", "Domain", "QuadScalar", "SQRT2", "quad_sign", "scalar_format",
    "scalar_parse",
]
