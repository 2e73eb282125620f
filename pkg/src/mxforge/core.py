"""Dense complex matrices and multivariate Laurent-polynomial matrices.

Plain ``numpy`` arrays (complex128, 2-D) carry ordinary matrices;
:class:`LaurentMatrix` carries matrices whose entries are finite Laurent
polynomials in ``nvars`` commuting variables, stored sparsely as a map
from exponent vectors to coefficient matrices.

All values are treated as immutable and every operation is a pure
function, so values may move freely between threads.  Verification
predicates (:func:`is_unitary`, :func:`is_paraunitary`) are tolerance
based and controlled by :class:`ToleranceConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "ComplexMatrix",
    "LaurentMatrix",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "MatrixError",
    "DimensionMismatch",
    "NonSquare",
    "VariableCountMismatch",
    "ArityMismatch",
    "NotUnitary",
    "cmatrix",
    "identity",
    "roots_of_unity",
    "max_abs",
    "max_abs_diff",
    "adjoint",
    "matmul",
    "determinant",
    "tensor",
    "direct_sum",
    "is_unitary",
    "laurent",
    "laurent_from_const",
    "laurent_identity",
    "laurent_monomial",
    "with_nvars",
    "laurent_add",
    "laurent_sub",
    "laurent_scalar_mul",
    "laurent_mul",
    "para_adjoint",
    "laurent_eval",
    "laurent_residual",
    "is_paraunitary",
]

#: Alias for the matrix carrier: a 2-D complex128 numpy array.
ComplexMatrix = np.ndarray


class MatrixError(ValueError):
    """Structural error in a matrix operation."""


class DimensionMismatch(MatrixError):
    pass


class NonSquare(MatrixError):
    pass


class VariableCountMismatch(MatrixError):
    pass


class ArityMismatch(MatrixError):
    pass


class NotUnitary(MatrixError):
    pass


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical tolerances: ``verify_tol`` for predicates, ``prune_tol``
    for dropping negligible Laurent coefficients."""

    verify_tol: float = 1e-9
    prune_tol: float = 1e-12

    def __post_init__(self):
        if not (0.0 < self.prune_tol < self.verify_tol < 1.0):
            raise ValueError(
                f"need 0 < prune_tol < verify_tol < 1, got "
                f"prune_tol={self.prune_tol}, verify_tol={self.verify_tol}"
            )


DEFAULT_TOL = ToleranceConfig()


def cmatrix(data) -> ComplexMatrix:
    """Convert ``data`` to the complex128 2-D carrier, checking finiteness."""
    m = np.array(data, dtype=complex)
    if m.ndim != 2 or m.size == 0:
        raise MatrixError(f"expected a non-empty 2-D grid, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise MatrixError("matrix entries must be finite")
    return m


def identity(n: int) -> ComplexMatrix:
    return np.eye(n, dtype=complex)


@lru_cache(maxsize=None)
def roots_of_unity(n: int) -> np.ndarray:
    """All n-th roots of unity (w^0, ..., w^{n-1}) with w = exp(2 pi i / n)."""
    if n < 1:
        raise ValueError("n must be positive")
    w = np.exp(2j * np.pi * np.arange(n) / n)
    w.flags.writeable = False
    return w


def max_abs(m) -> float:
    a = np.asarray(m)
    return float(np.max(np.abs(a))) if a.size else 0.0


def max_abs_diff(a, b) -> float:
    return max_abs(np.asarray(a) - np.asarray(b))


def adjoint(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return np.asarray(m, dtype=complex).conj().T


def matmul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def determinant(m: ComplexMatrix) -> complex:
    """Determinant via LU with partial pivoting (LAPACK)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"determinant needs a square matrix, got {m.shape}")
    return complex(np.linalg.det(m))


def tensor(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Tensor (Kronecker) product: block (i, j) is a[i, j] * b."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def direct_sum(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=complex)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0] :, a.shape[1] :] = b
    return out


def is_unitary(m: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``m @ m*`` equals the identity within ``cfg.verify_tol``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    gram = m @ m.conj().T
    return max_abs_diff(gram, np.eye(m.shape[0])) <= cfg.verify_tol


# ---------------------------------------------------------------------------
# Laurent-polynomial matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LaurentMatrix:
    """Matrix whose entries are finite Laurent polynomials.

    ``terms`` maps an exponent vector (length ``nvars``, negative entries
    allowed) to the complex coefficient matrix of that monomial.  Entries
    below the prune tolerance are zeroed at construction and all-zero
    terms are never stored; use :func:`laurent` to build instances.
    """

    rows: int
    cols: int
    nvars: int
    terms: dict

    @property
    def shape(self):
        return (self.rows, self.cols)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_constant(self) -> bool:
        zero = (0,) * self.nvars
        return all(e == zero for e in self.terms)

    def constant_term(self) -> ComplexMatrix:
        zero = (0,) * self.nvars
        c = self.terms.get(zero)
        return np.array(c) if c is not None else np.zeros(self.shape, dtype=complex)

    def __repr__(self):
        return (
            f"LaurentMatrix({self.rows}x{self.cols}, nvars={self.nvars}, "
            f"{len(self.terms)} terms)"
        )


def laurent(
    rows: int,
    cols: int,
    nvars: int,
    terms: Mapping[tuple, np.ndarray],
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> LaurentMatrix:
    """Build a :class:`LaurentMatrix`, pruning coefficients below
    ``cfg.prune_tol`` and dropping empty terms."""
    if rows < 1 or cols < 1:
        raise MatrixError("rows and cols must be positive")
    if nvars < 0:
        raise MatrixError("nvars must be non-negative")
    clean: dict[tuple, np.ndarray] = {}
    for exps, coef in terms.items():
        exps = tuple(int(e) for e in exps)
        if len(exps) != nvars:
            raise VariableCountMismatch(
                f"exponent vector {exps} does not have length nvars={nvars}"
            )
        coef = np.asarray(coef, dtype=complex)
        if coef.shape != (rows, cols):
            raise DimensionMismatch(
                f"coefficient of z^{exps} has shape {coef.shape}, want {(rows, cols)}"
            )
        coef = np.where(np.abs(coef) < cfg.prune_tol, 0.0, coef)
        if np.any(coef != 0):
            clean[exps] = coef
    return LaurentMatrix(rows, cols, nvars, clean)


def laurent_from_const(m: ComplexMatrix, nvars: int = 0) -> LaurentMatrix:
    """Embed a complex matrix as a constant Laurent matrix."""
    m = np.asarray(m, dtype=complex)
    return laurent(m.shape[0], m.shape[1], nvars, {(0,) * nvars: m})


def laurent_identity(n: int, nvars: int = 0) -> LaurentMatrix:
    return laurent_from_const(identity(n), nvars)


def laurent_monomial(m: ComplexMatrix, exps: Sequence[int], coef: complex = 1.0) -> LaurentMatrix:
    """Single-term Laurent matrix ``coef * m * z^exps``."""
    m = np.asarray(m, dtype=complex)
    exps = tuple(int(e) for e in exps)
    return laurent(m.shape[0], m.shape[1], len(exps), {exps: coef * m})


def with_nvars(p: LaurentMatrix, nvars: int) -> LaurentMatrix:
    """View ``p`` in a larger variable space by zero-padding exponents."""
    if nvars == p.nvars:
        return p
    if nvars < p.nvars:
        raise VariableCountMismatch(f"cannot shrink nvars {p.nvars} -> {nvars}")
    pad = (0,) * (nvars - p.nvars)
    return LaurentMatrix(p.rows, p.cols, nvars, {e + pad: c for e, c in p.terms.items()})


def _common_nvars(p: LaurentMatrix, q: LaurentMatrix):
    nv = max(p.nvars, q.nvars)
    return with_nvars(p, nv), with_nvars(q, nv), nv


def laurent_add(p: LaurentMatrix, q: LaurentMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    if p.shape != q.shape:
        raise DimensionMismatch(f"cannot add {p.shape} and {q.shape}")
    p, q, nv = _common_nvars(p, q)
    acc = {e: np.array(c) for e, c in p.terms.items()}
    for e, c in q.terms.items():
        if e in acc:
            acc[e] = acc[e] + c
        else:
            acc[e] = np.array(c)
    return laurent(p.rows, p.cols, nv, acc, cfg)


def laurent_sub(p: LaurentMatrix, q: LaurentMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    return laurent_add(p, laurent_scalar_mul(-1.0, q), cfg)


def laurent_scalar_mul(scalar: complex, p: LaurentMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    return laurent(p.rows, p.cols, p.nvars, {e: scalar * c for e, c in p.terms.items()}, cfg)


def laurent_mul(p: LaurentMatrix, q: LaurentMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    """Matrix product; exponent vectors add, coefficient matrices multiply."""
    if p.cols != q.rows:
        raise DimensionMismatch(f"cannot multiply {p.shape} by {q.shape}")
    if p.nvars != q.nvars:
        raise VariableCountMismatch(f"nvars mismatch: {p.nvars} vs {q.nvars}")
    acc: dict[tuple, np.ndarray] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            prod = c1 @ c2
            if e in acc:
                acc[e] = acc[e] + prod
            else:
                acc[e] = prod
    return laurent(p.rows, q.cols, p.nvars, acc, cfg)


def para_adjoint(p: LaurentMatrix) -> LaurentMatrix:
    """Transpose, conjugate every coefficient, and send z to z^{-1}.

    This is an involution; on constant matrices it reduces to the
    ordinary adjoint.
    """
    return LaurentMatrix(
        p.cols,
        p.rows,
        p.nvars,
        {tuple(-x for x in e): c.conj().T for e, c in p.terms.items()},
    )


def laurent_eval(p: LaurentMatrix, point: Sequence[complex]) -> ComplexMatrix:
    """Substitute scalars for the variables and sum the terms.

    Evaluation is a ring homomorphism; negative exponents require the
    corresponding point entries to be nonzero (unit-modulus points are
    the intended use).
    """
    point = tuple(complex(x) for x in point)
    if len(point) != p.nvars:
        raise ArityMismatch(f"point has {len(point)} entries, matrix has nvars={p.nvars}")
    out = np.zeros(p.shape, dtype=complex)
    for exps, coef in p.terms.items():
        factor = 1.0 + 0.0j
        for x, e in zip(point, exps):
            if e:
                factor *= x**e
        out += factor * coef
    return out


def laurent_residual(p: LaurentMatrix, q: LaurentMatrix) -> float:
    """Largest coefficient modulus of p - q (0.0 for identical matrices)."""
    if p.shape != q.shape:
        raise DimensionMismatch(f"cannot compare {p.shape} and {q.shape}")
    p, q, _ = _common_nvars(p, q)
    res = 0.0
    for e in set(p.terms) | set(q.terms):
        a = p.terms.get(e)
        b = q.terms.get(e)
        if a is None:
            res = max(res, max_abs(b))
        elif b is None:
            res = max(res, max_abs(a))
        else:
            res = max(res, max_abs_diff(a, b))
    return res


def is_paraunitary(p: LaurentMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff ``p`` times its para-adjoint is the identity, as an exact
    coefficient identity within ``cfg.verify_tol``."""
    if not p.is_square():
        return False
    gram = laurent_mul(p, para_adjoint(p), cfg)
    return laurent_residual(gram, laurent_identity(p.rows, p.nvars)) <= cfg.verify_tol
