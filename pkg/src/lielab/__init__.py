"""Exact computations with Jordan elements, gradings and involutive direct systems."""

from .algcore import AlgebraElement, AlgebraPresentation, Subspace, load_algebra, save_algebra
from .errors import LieLabError
from .exactcore import GF, QQ, ExactMatrix, FieldSpec

__all__ = [
    "AlgebraElement",
    "AlgebraPresentation",
    "ExactMatrix",
    "FieldSpec",
    "GF",
    "LieLabError",
    "QQ",
    "Subspace",
    "load_algebra",
    "save_algebra",
]
__version__ = "0.1.0"
