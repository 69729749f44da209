"""Rational polytopes, cones, face lattices and mixed volumes."""
from .cone import Cone
from .core import (
    Face,
    Polytope,
    complex_rank,
    face_summands,
    minkowski_sum,
    mixed_volume,
    rank,
    support_function,
    volume,
)

__all__ = [
    "Cone",
    "Face",
    "Polytope",
    "complex_rank",
    "face_summands",
    "minkowski_sum",
    "mixed_volume",
    "rank",
    "support_function",
    "volume",
]
