"""mxforge: entangled structured matrices.

Construction and verification of unitary, paraunitary, Hadamard
(Butson, symmetric, skew), and full-diversity constellation matrices
from two building blocks: complete orthogonal symmetric idempotent
(COSI) sets and matrix tangle products.
"""

from . import builders, cli, constellation, cosi, hadamard, io, tangle
from .core import (
    DEFAULT_TOL,
    ComplexMatrix,
    LaurentMatrix,
    ToleranceConfig,
    adjoint,
    cmatrix,
    determinant,
    direct_sum,
    identity,
    is_paraunitary,
    is_unitary,
    laurent_eval,
    laurent_mul,
    matmul,
    para_adjoint,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "builders",
    "cli",
    "constellation",
    "cosi",
    "hadamard",
    "io",
    "tangle",
    "DEFAULT_TOL",
    "ComplexMatrix",
    "LaurentMatrix",
    "ToleranceConfig",
    "adjoint",
    "cmatrix",
    "determinant",
    "direct_sum",
    "identity",
    "is_paraunitary",
    "is_unitary",
    "laurent_eval",
    "laurent_mul",
    "matmul",
    "para_adjoint",
    "tensor",
    "__version__",
]
