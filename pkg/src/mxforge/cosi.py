"""Complete orthogonal symmetric idempotent (COSI) sets.

A COSI set is a list of n x n matrices {E_1, ..., E_k} satisfying

    E_i* = E_i,    E_i^2 = E_i,    E_i E_j = 0  (i != j),    sum_i E_i = I_n.

Such sets are the raw material for the block constructions in
:mod:`mxforge.builders`: any block arrangement in which each E_i occurs
once per block row and once per block column is unitary, and attaching
unit-modulus scalars or monomials yields unitary and paraunitary
matrices.  This module constructs, validates, and transforms COSI sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    ComplexMatrix,
    NotUnitary,
    ToleranceConfig,
    adjoint,
    cmatrix,
    identity,
    is_unitary,
    max_abs,
    max_abs_diff,
    roots_of_unity,
)

__all__ = [
    "CosiSet",
    "CosiError",
    "NotIdempotent",
    "NotSelfAdjoint",
    "NotOrthogonal",
    "NotComplete",
    "NotFourier",
    "BadPartition",
    "validate",
    "ensure_projector",
    "projector_rank",
    "from_unitary_columns",
    "fourier_cosi",
    "merge",
    "conjugate_partition",
    "merge_conjugates",
    "complete",
    "rank1_split",
    "rotation_cosi",
]


class CosiError(ValueError):
    """A COSI axiom failed; carries the offending residual."""

    axiom = "cosi"

    def __init__(self, residual: float, detail: str = ""):
        self.residual = float(residual)
        msg = f"{self.axiom} axiom violated (residual {self.residual:.3e})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotIdempotent(CosiError):
    axiom = "idempotent"


class NotSelfAdjoint(CosiError):
    axiom = "self-adjoint"


class NotOrthogonal(CosiError):
    axiom = "orthogonal"


class NotComplete(CosiError):
    axiom = "complete"


class NotFourier(ValueError):
    """Input is not the COSI set of a normalised Fourier matrix."""


class BadPartition(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CosiSet:
    """Validated COSI set: ``projectors`` are ``size`` matrices of
    dimension ``dim`` x ``dim``."""

    dim: int
    projectors: tuple

    @property
    def size(self) -> int:
        return len(self.projectors)

    def __len__(self):
        return len(self.projectors)

    def __iter__(self):
        return iter(self.projectors)

    def __getitem__(self, i):
        return self.projectors[i]

    def __repr__(self):
        return f"CosiSet(dim={self.dim}, size={self.size})"


def ensure_projector(e: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> ComplexMatrix:
    """Check that ``e`` is a self-adjoint idempotent within tolerance."""
    e = cmatrix(e)
    if e.shape[0] != e.shape[1]:
        raise NotIdempotent(float("inf"), f"non-square shape {e.shape}")
    r_idem = max_abs_diff(e @ e, e)
    if r_idem > cfg.verify_tol:
        raise NotIdempotent(r_idem)
    r_adj = max_abs_diff(adjoint(e), e)
    if r_adj > cfg.verify_tol:
        raise NotSelfAdjoint(r_adj)
    return e


def projector_rank(e: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> int:
    """Numerical rank of a self-adjoint idempotent: eigenvalues above 1/2.

    Idempotent spectra are {0, 1}, so the 1/2 cut gives maximal
    separation.
    """
    vals = np.linalg.eigvalsh(np.asarray(e, dtype=complex))
    return int(np.count_nonzero(vals > 0.5))


def validate(candidate, cfg: ToleranceConfig = DEFAULT_TOL) -> CosiSet:
    """Validate a list of matrices as a COSI set.

    Axioms are checked in the order idempotent, self-adjoint, orthogonal,
    complete; the first violation raises the matching error with its
    residual norm.
    """
    mats = [cmatrix(e) for e in candidate]
    if not mats:
        raise CosiError(float("inf"), "empty candidate set")
    n = mats[0].shape[0]
    for e in mats:
        if e.shape != (n, n):
            raise CosiError(float("inf"), f"mixed shapes {e.shape} vs {(n, n)}")
    for idx, e in enumerate(mats):
        r = max_abs_diff(e @ e, e)
        if r > cfg.verify_tol:
            raise NotIdempotent(r, f"element {idx}")
    for idx, e in enumerate(mats):
        r = max_abs_diff(adjoint(e), e)
        if r > cfg.verify_tol:
            raise NotSelfAdjoint(r, f"element {idx}")
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            r = max(max_abs(mats[i] @ mats[j]), max_abs(mats[j] @ mats[i]))
            if r > cfg.verify_tol:
                raise NotOrthogonal(r, f"elements {i}, {j}")
    r = max_abs_diff(sum(mats), identity(n))
    if r > cfg.verify_tol:
        raise NotComplete(r)
    return CosiSet(n, tuple(mats))


def from_unitary_columns(u: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> CosiSet:
    """Rank-1 COSI set E_i = u_i u_i* from the columns of a unitary matrix."""
    u = cmatrix(u)
    if not is_unitary(u, cfg):
        raise NotUnitary(f"matrix of shape {u.shape} is not unitary at tol {cfg.verify_tol}")
    n = u.shape[0]
    projs = tuple(np.outer(u[:, i], u[:, i].conj()) for i in range(n))
    return CosiSet(n, projs)


def fourier_cosi(n: int) -> CosiSet:
    """COSI set of the n circulant rank-1 projectors u_i u_i* built from
    the columns of the normalised n x n Fourier matrix.

    E_i[j, k] = w^{(j-k) i} / n with w = exp(2 pi i / n); equivalently
    E_i = (1/n) circ(1, w^{(n-1)i}, ..., w^{i}).
    """
    if n < 1:
        raise ValueError("n must be positive")
    w = roots_of_unity(n)
    diff = np.subtract.outer(np.arange(n), np.arange(n))
    projs = tuple(w[(diff * i) % n] / n for i in range(n))
    return CosiSet(n, projs)


def merge(s: CosiSet, partition, cfg: ToleranceConfig = DEFAULT_TOL) -> CosiSet:
    """Sum the projectors inside each index group of ``partition``.

    Orthogonal idempotents sum to idempotents, so any disjoint cover of
    the index set yields a smaller COSI set of the same dimension.
    """
    groups = [tuple(int(i) for i in g) for g in partition]
    flat = [i for g in groups for i in g]
    if sorted(flat) != list(range(s.size)):
        raise BadPartition(
            f"partition {groups} is not a disjoint cover of 0..{s.size - 1}"
        )
    merged = [sum(s[i] for i in g) for g in groups]
    return validate(merged, cfg)


def conjugate_partition(n: int):
    """Index groups pairing j with n - j: [0], [1, n-1], ..., middle."""
    groups = [(0,)]
    for j in range(1, n // 2 + 1):
        if j == n - j:
            groups.append((j,))
        else:
            groups.append((j, n - j))
    return groups


def merge_conjugates(s: CosiSet, cfg: ToleranceConfig = DEFAULT_TOL) -> CosiSet:
    """Merge the Fourier COSI projector pairs {E_j, E_{n-j}}.

    Conjugate roots pair off into real circulants (w^k + w^{-k} is
    2 cos(2 pi k / n)), so the output has real entries; imaginary parts
    below the prune tolerance are zeroed to enforce this.
    """
    n = s.dim
    ref = fourier_cosi(n)
    if s.size != n or any(
        max_abs_diff(s[i], ref[i]) > cfg.verify_tol for i in range(n)
    ):
        raise NotFourier(
            f"expected the Fourier COSI set of order {n} (projectors in column order)"
        )
    merged = merge(s, conjugate_partition(n), cfg)
    realified = []
    for e in merged:
        e = np.array(e)
        e.imag[np.abs(e.imag) < cfg.prune_tol] = 0.0
        realified.append(e)
    return validate(realified, cfg)


def complete(partial, cfg: ToleranceConfig = DEFAULT_TOL) -> CosiSet:
    """Append I - sum(E_i) to an orthogonal self-adjoint idempotent list
    whenever that remainder is nonzero, then validate."""
    mats = [ensure_projector(e, cfg) for e in partial]
    if not mats:
        raise CosiError(float("inf"), "empty candidate set")
    n = mats[0].shape[0]
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            r = max(max_abs(mats[i] @ mats[j]), max_abs(mats[j] @ mats[i]))
            if r > cfg.verify_tol:
                raise NotOrthogonal(r, f"elements {i}, {j}")
    remainder = identity(n) - sum(mats)
    if max_abs(remainder) > cfg.verify_tol:
        mats.append(remainder)
    return validate(mats, cfg)


def rank1_split(e: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL):
    """Split a self-adjoint idempotent into rank(E) orthogonal rank-1
    projectors via its eigendecomposition (eigenvalue-1 eigenvectors)."""
    e = ensure_projector(e, cfg)
    vals, vecs = np.linalg.eigh(e)
    pieces = []
    for i in range(len(vals)):
        if vals[i] > 0.5:
            v = vecs[:, i]
            pieces.append(np.outer(v, v.conj()))
    return pieces


def rotation_cosi(theta: float) -> CosiSet:
    """Two 2 x 2 projectors from a plane rotation angle.

    E_1 projects onto (cos t, -sin t); E_2 = I - E_1 is its orthogonal
    complement, so E_1 + E_2 = I holds exactly.
    """
    c, s = np.cos(theta), np.sin(theta)
    e1 = cmatrix([[c * c, -c * s], [-s * c, s * s]])
    e2 = identity(2) - e1
    return CosiSet(2, (e1, e2))
