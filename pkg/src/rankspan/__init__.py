"""Exact rank-stratified matrix subspaces over small prime fields."""

__version__ = "0.1.0"

from .ffmat import Fq, FqMat
from .subspace import MatSubspace
from .affine import AffineMatSubspace
from .verdict import BudgetExceeded, NoZeroRowIndex, Status, TriangularizationNotFound, Verdict

__all__ = [
    "Fq",
    "FqMat",
    "MatSubspace",
    "AffineMatSubspace",
    "Verdict",
    "Status",
    "BudgetExceeded",
    "NoZeroRowIndex",
    "TriangularizationNotFound",
]
