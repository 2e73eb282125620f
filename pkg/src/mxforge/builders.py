"""Unitary, paraunitary, and symmetric-unitary matrices from COSI sets.

A Latin arrangement of the projectors of a COSI set (each projector once
per block row and once per block column) gives a unitary block matrix.
Attaching unit-modulus phases keeps it unitary; attaching monomials turns
it into a paraunitary Laurent matrix.  Single-block-row variants
(sums E_j z^{t_j}) give paraunitary matrices of the same size as the
projectors, which cascade into filter banks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    ArityMismatch,
    ComplexMatrix,
    LaurentMatrix,
    MatrixError,
    ToleranceConfig,
    adjoint,
    identity,
    laurent,
    laurent_from_const,
    laurent_mul,
    max_abs,
    max_abs_diff,
    para_adjoint,
    laurent_residual,
)
from .cosi import CosiSet, ensure_projector, rotation_cosi, validate

__all__ = [
    "OrderMismatch",
    "NonUnitPhase",
    "LatinSquare",
    "PhaseGrid",
    "MonomialGrid",
    "circulant_square",
    "reverse_circulant_square",
    "block_latin_unitary",
    "block_latin_laurent",
    "reverse_symmetric_check",
    "SignedSingleVar",
    "MultiVar",
    "Phased",
    "cosi_poly",
    "symmetric_unitary_from_idempotent",
    "nott_series",
    "filterbank_cascade",
]


class OrderMismatch(MatrixError):
    pass


class NonUnitPhase(MatrixError):
    pass


@dataclass(frozen=True)
class LatinSquare:
    """k x k grid of indices 0..k-1, each appearing once per row and column."""

    grid: tuple

    def __post_init__(self):
        grid = tuple(tuple(int(x) for x in row) for row in self.grid)
        object.__setattr__(self, "grid", grid)
        k = len(grid)
        want = set(range(k))
        for r, row in enumerate(grid):
            if len(row) != k or set(row) != want:
                raise ValueError(f"row {r} of {grid} is not a permutation of 0..{k - 1}")
        for c in range(k):
            if {row[c] for row in grid} != want:
                raise ValueError(f"column {c} of {grid} is not a permutation of 0..{k - 1}")

    @property
    def order(self) -> int:
        return len(self.grid)

    @classmethod
    def parse(cls, text: str) -> "LatinSquare":
        """Parse the CLI text form, e.g. ``"0 1;1 0"``."""
        rows = [tuple(int(x) for x in part.split()) for part in text.split(";")]
        return cls(tuple(rows))

    def __str__(self):
        return ";".join(" ".join(str(x) for x in row) for row in self.grid)


def circulant_square(k: int) -> LatinSquare:
    """Block-circulant arrangement: row i is the cycle shifted right i times."""
    if k < 1:
        raise ValueError("k must be positive")
    return LatinSquare(tuple(tuple((j - i) % k for j in range(k)) for i in range(k)))


def reverse_circulant_square(k: int) -> LatinSquare:
    """Reverse-circulant arrangement grid[i][j] = (i + j) mod k; symmetric."""
    if k < 1:
        raise ValueError("k must be positive")
    return LatinSquare(tuple(tuple((i + j) % k for j in range(k)) for i in range(k)))


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """k x k grid of scalars attached to the blocks; unit modulus for
    unitary builds."""

    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=complex)
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise OrderMismatch(f"phase grid must be square, got {p.shape}")
        object.__setattr__(self, "phases", p)

    @property
    def order(self) -> int:
        return self.phases.shape[0]

    @classmethod
    def ones(cls, k: int) -> "PhaseGrid":
        return cls(np.ones((k, k), dtype=complex))

    @classmethod
    def constant(cls, k: int, value: complex) -> "PhaseGrid":
        return cls(np.full((k, k), value, dtype=complex))


@dataclass(frozen=True, eq=False)
class MonomialGrid:
    """k x k grid of monomials (exponent vector, unit coefficient)."""

    nvars: int
    exps: tuple
    coefs: np.ndarray

    def __post_init__(self):
        exps = tuple(tuple(tuple(int(x) for x in e) for e in row) for row in self.exps)
        object.__setattr__(self, "exps", exps)
        c = np.asarray(self.coefs, dtype=complex)
        k = len(exps)
        if c.shape != (k, k) or any(len(row) != k for row in exps):
            raise OrderMismatch(f"monomial grid must be square, got {c.shape}")
        for row in exps:
            for e in row:
                if len(e) != self.nvars:
                    raise ArityMismatch(f"exponent {e} does not have length {self.nvars}")
        object.__setattr__(self, "coefs", c)

    @property
    def order(self) -> int:
        return len(self.exps)

    @classmethod
    def constant(cls, k: int) -> "MonomialGrid":
        """All monomials equal to 1 (no variables)."""
        return cls(0, tuple(tuple(() for _ in range(k)) for _ in range(k)), np.ones((k, k)))

    @classmethod
    def distinct_vars(cls, k: int) -> "MonomialGrid":
        """One fresh variable per grid position (k^2 variables in all)."""
        nv = k * k
        exps = tuple(
            tuple(
                tuple(1 if t == i * k + j else 0 for t in range(nv)) for j in range(k)
            )
            for i in range(k)
        )
        return cls(nv, exps, np.ones((k, k)))

    @classmethod
    def single_var(cls, exps, coefs=None) -> "MonomialGrid":
        """Monomials z^{e_{ij}} in one shared variable."""
        grid = tuple(tuple((int(e),) for e in row) for row in exps)
        k = len(grid)
        if coefs is None:
            coefs = np.ones((k, k))
        return cls(1, grid, coefs)


def _check_unit_moduli(values: np.ndarray, cfg: ToleranceConfig):
    worst = float(np.max(np.abs(np.abs(values) - 1.0)))
    if worst > cfg.verify_tol:
        raise NonUnitPhase(f"attached scalar moduli deviate from 1 by {worst:.3e}")


def block_latin_unitary(
    cosi_set: CosiSet,
    square: LatinSquare,
    phases: PhaseGrid | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> ComplexMatrix:
    """Unitary block matrix with block (i, j) = E_{square[i][j]} * phases[i][j].

    Orthogonality of the projectors kills every cross-row block inner
    product and idempotency makes each row sum to the identity, so the
    result is unitary for any Latin arrangement and unit-modulus phases.
    """
    k = square.order
    if k != cosi_set.size:
        raise OrderMismatch(f"square order {k} != COSI size {cosi_set.size}")
    if phases is None:
        phases = PhaseGrid.ones(k)
    if phases.order != k:
        raise OrderMismatch(f"phase grid order {phases.order} != square order {k}")
    _check_unit_moduli(phases.phases, cfg)
    blocks = [
        [cosi_set[square.grid[i][j]] * phases.phases[i, j] for j in range(k)]
        for i in range(k)
    ]
    return np.block(blocks)


def block_latin_laurent(
    cosi_set: CosiSet,
    square: LatinSquare,
    monomials: MonomialGrid,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> LaurentMatrix:
    """Paraunitary block matrix with monomials attached to the blocks."""
    k = square.order
    if k != cosi_set.size:
        raise OrderMismatch(f"square order {k} != COSI size {cosi_set.size}")
    if monomials.order != k:
        raise OrderMismatch(f"monomial grid order {monomials.order} != square order {k}")
    _check_unit_moduli(monomials.coefs, cfg)
    n = cosi_set.dim
    big = n * k
    acc: dict[tuple, np.ndarray] = {}
    for i in range(k):
        for j in range(k):
            e = monomials.exps[i][j]
            buf = acc.get(e)
            if buf is None:
                buf = np.zeros((big, big), dtype=complex)
                acc[e] = buf
            buf[i * n : (i + 1) * n, j * n : (j + 1) * n] += (
                monomials.coefs[i, j] * cosi_set[square.grid[i][j]]
            )
    return laurent(big, big, monomials.nvars, acc, cfg)


def reverse_symmetric_check(
    g,
    square: LatinSquare | None = None,
    monomials: MonomialGrid | None = None,
    cfg: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """True iff ``g`` equals its (para-)adjoint within tolerance.

    Reverse-circulant arrangements of self-adjoint blocks with
    alpha_ij = alpha_ji^* are self-adjoint; this checks the property
    directly on the assembled matrix.  ``square`` and ``monomials`` are
    accepted for context and only sanity-checked against the shape.
    """
    if isinstance(g, LaurentMatrix):
        if square is not None and g.rows % square.order != 0:
            raise OrderMismatch(f"matrix of shape {g.shape} does not block by {square.order}")
        return laurent_residual(para_adjoint(g), g) <= cfg.verify_tol
    g = np.asarray(g, dtype=complex)
    if square is not None and g.shape[0] % square.order != 0:
        raise OrderMismatch(f"matrix of shape {g.shape} does not block by {square.order}")
    return max_abs_diff(adjoint(g), g) <= cfg.verify_tol


@dataclass(frozen=True)
class SignedSingleVar:
    """Mode for sum_j s_j E_j z^{t_j} with signs s_j in {+1, -1}."""

    signs: tuple
    exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        object.__setattr__(self, "exps", tuple(int(t) for t in self.exps))
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"signs must be +1 or -1, got {self.signs}")


@dataclass(frozen=True)
class MultiVar:
    """Mode for sum_j E_j z_j, one fresh variable per projector."""


@dataclass(frozen=True)
class Phased:
    """Mode for sum_j exp(i theta_j) E_j z^{t_j}."""

    thetas: tuple
    exps: tuple

    def __post_init__(self):
        object.__setattr__(self, "thetas", tuple(float(t) for t in self.thetas))
        object.__setattr__(self, "exps", tuple(int(t) for t in self.exps))


def cosi_poly(cosi_set: CosiSet, mode, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    """Paraunitary polynomial matrix of the same size as the projectors.

    The cross terms E_j E_l vanish by orthogonality and the squares sum
    to the identity, so every mode satisfies U(z) U*(z^{-1}) = I
    regardless of the chosen exponents.
    """
    k = cosi_set.size
    n = cosi_set.dim
    acc: dict[tuple, np.ndarray] = {}

    def add(exps, coef_matrix):
        buf = acc.get(exps)
        if buf is None:
            acc[exps] = np.array(coef_matrix)
        else:
            acc[exps] = buf + coef_matrix

    if isinstance(mode, SignedSingleVar):
        if len(mode.signs) != k or len(mode.exps) != k:
            raise ArityMismatch(f"need {k} signs and exponents, got {len(mode.signs)}, {len(mode.exps)}")
        for j in range(k):
            add((mode.exps[j],), mode.signs[j] * cosi_set[j])
        nvars = 1
    elif isinstance(mode, MultiVar):
        for j in range(k):
            add(tuple(1 if t == j else 0 for t in range(k)), cosi_set[j])
        nvars = k
    elif isinstance(mode, Phased):
        if len(mode.thetas) != k or len(mode.exps) != k:
            raise ArityMismatch(f"need {k} thetas and exponents, got {len(mode.thetas)}, {len(mode.exps)}")
        for j in range(k):
            add((mode.exps[j],), np.exp(1j * mode.thetas[j]) * cosi_set[j])
        nvars = 1
    else:
        raise TypeError(f"unknown mode {mode!r}")
    return laurent(n, n, nvars, acc, cfg)


def symmetric_unitary_from_idempotent(e: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> ComplexMatrix:
    """I - 2E: self-adjoint unitary with eigenvalue -1 of multiplicity rank(E).

    Every self-adjoint unitary matrix arises this way from a self-adjoint
    idempotent.
    """
    e = ensure_projector(e, cfg)
    return identity(e.shape[0]) - 2.0 * e


def nott_series(e1: ComplexMatrix, e2: ComplexMatrix, depth: int, cfg: ToleranceConfig = DEFAULT_TOL):
    """Doubling series of self-adjoint unitary matrices from a COSI pair.

    Level 0 is U = [[E1, E2], [E2, E1]]; level m+1 uses the COSI pair
    {(I - U_m)/2, (I + U_m)/2}.  Returns ``depth`` matrices of doubling
    size, each self-adjoint with U^2 = I.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    pair = validate([e1, e2], cfg)
    a, b = pair[0], pair[1]
    out = []
    for _ in range(depth):
        u = np.block([[a, b], [b, a]])
        out.append(u)
        eye = identity(u.shape[0])
        a, b = 0.5 * (eye - u), 0.5 * (eye + u)
    return out


def filterbank_cascade(stages: Sequence, cfg: ToleranceConfig = DEFAULT_TOL) -> LaurentMatrix:
    """Product of rotation-COSI degree-1 factors E_1 z^{t_0} + E_2 z^{t_1}.

    Each stage is a pair (theta, (t_0, t_1)).  Real angles give real
    coefficient matrices, and paraunitarity survives the product, so the
    cascade is the polyphase matrix of an orthogonal 2-channel filter
    bank.
    """
    stages = list(stages)
    if not stages:
        raise ValueError("at least one stage required")
    product = None
    for theta, exp_pair in stages:
        t0, t1 = (int(exp_pair[0]), int(exp_pair[1]))
        factor = cosi_poly(rotation_cosi(float(theta)), SignedSingleVar((1, 1), (t0, t1)), cfg)
        product = factor if product is None else laurent_mul(product, factor, cfg)
    return product
