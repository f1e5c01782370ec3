"""Exact computations with finite-dimensional Zinbiel algebras."""
from .algebra import (
    StructureAlgebra,
    basis,
    change_basis,
    is_zinbiel,
    left_operator,
    multiply,
    zinbiel_defect,
)
from .errors import (
    DegenerateError,
    DimensionMismatch,
    FormatError,
    NotNilpotent,
    ParameterDomainError,
    RangeError,
    SingularMatrix,
    ZinbielError,
)
from .linalg import Matrix, Subspace, rref, solve_linear, subspace_from_spanning

__version__ = "0.1.0"
