"""Exact computation of the Hochschild cohomology of linear quotient orbifolds [V/G]."""

from .arith import Cyclotomic, SqrtPosReal, format_scalar, parse_scalar
from .builtins import STANDARD_BUILTINS, InputSpec, builtin
from .detalg import DetAlgebra
from .fiberalg import FiberAlgebra, FiberElement
from .fixedloci import FixedLoci
from .group import FiniteMatrixGroup, close_generators
from .linalg import Mat, Subspace
from .symplectic import SymplecticData, SymplecticStructure

__version__ = "0.1.0"

__all__ = [
    "Cyclotomic",
    "DetAlgebra",
    "FiberAlgebra",
    "FiberElement",
    "FiniteMatrixGroup",
    "FixedLoci",
    "InputSpec",
    "Mat",
    "STANDARD_BUILTINS",
    "SqrtPosReal",
    "Subspace",
    "SymplecticData",
    "SymplecticStructure",
    "builtin",
    "close_generators",
    "format_scalar",
    "parse_scalar",
]
