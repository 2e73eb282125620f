"""Hadamard matrix verification and constructions.

An n x n matrix H with unimodular entries and H H* = n I is Hadamard; it
has Butson type H(n, p) when every entry is a p-th root of unity, is
symmetric when self-adjoint, and skew when H + H* = 2I.  This module
verifies those properties and builds new Hadamard matrices: squaring via
a reverse-circulant COSI arrangement, symmetric and skew doubling via
tangle products, a three-parameter 4 x 4 complex skew family, and
Sylvester-style series.  It also checks mutually unbiased bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import builders, cosi
from .core import (
    DEFAULT_TOL,
    ComplexMatrix,
    DimensionMismatch,
    MatrixError,
    NotUnitary,
    ToleranceConfig,
    adjoint,
    is_unitary,
    max_abs,
    max_abs_diff,
)
from .tangle import left_tangle, right_tangle

__all__ = [
    "NotHadamard",
    "ModeViolation",
    "HadamardReport",
    "verify_hadamard",
    "butson_type",
    "is_skew",
    "symmetric_hadamard_square",
    "tangle_double",
    "skew4_family",
    "sylvester_tangle_series",
    "mub_check",
]


class NotHadamard(MatrixError):
    pass


class ModeViolation(MatrixError):
    pass


@dataclass(frozen=True)
class HadamardReport:
    """Verification record for a candidate Hadamard matrix.

    ``scale`` is the positive factor making the first entry unimodular;
    all flags and residuals refer to the rescaled matrix.
    """

    order: int
    scale: float
    is_hadamard: bool
    butson_p: int | None
    symmetric: bool
    skew: bool
    unimodular_residual: float
    gram_residual: float


def _butson_of(h: np.ndarray, pmax: int, cfg: ToleranceConfig) -> int | None:
    # Snap entries to the nearest p-th root with a generous angular
    # tolerance; smallest p wins.
    angles = np.angle(h)
    atol = 10.0 * cfg.verify_tol
    for p in range(1, pmax + 1):
        turns = angles * (p / (2.0 * np.pi))
        if float(np.max(np.abs(turns - np.round(turns)))) * (2.0 * np.pi / p) <= atol:
            return p
    return None


def verify_hadamard(m: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL, pmax: int = 64) -> HadamardReport:
    """Verify the Hadamard property, returning a full report.

    Never raises for verification failures; the report carries them.  The
    scale is detected from the first entry, then unimodularity of every
    entry and the Gram identity H H* = n I are checked, and the
    symmetric/skew flags and Butson type are filled in.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return HadamardReport(m.shape[0] if m.ndim == 2 else 0, 1.0, False, None,
                              False, False, float("inf"), float("inf"))
    n = m.shape[0]
    a00 = abs(m[0, 0])
    scale = 1.0 / a00 if a00 > cfg.prune_tol else 1.0
    h = scale * m
    uni = float(np.max(np.abs(np.abs(h) - 1.0)))
    gram = max_abs_diff(h @ h.conj().T, n * np.eye(n))
    ok = uni <= cfg.verify_tol and gram <= cfg.verify_tol
    symmetric = max_abs_diff(adjoint(h), h) <= cfg.verify_tol
    skew = max_abs_diff(h + adjoint(h), 2.0 * np.eye(n)) <= cfg.verify_tol
    p = _butson_of(h, pmax, cfg) if ok else None
    return HadamardReport(n, scale, ok, p, symmetric, skew, uni, gram)


def butson_type(m: ComplexMatrix, pmax: int = 64, cfg: ToleranceConfig = DEFAULT_TOL) -> int | None:
    """Smallest p <= pmax with every (rescaled) entry a p-th root of 1.

    Raises :class:`NotHadamard` when the matrix fails verification;
    returns None when no p <= pmax fits.
    """
    rep = verify_hadamard(m, cfg, pmax)
    if not rep.is_hadamard:
        raise NotHadamard(
            f"not Hadamard: unimodular residual {rep.unimodular_residual:.3e}, "
            f"gram residual {rep.gram_residual:.3e}"
        )
    return rep.butson_p


def is_skew(m: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff M - I is anti-self-adjoint, i.e. M + M* = 2I."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs_diff(m + adjoint(m), 2.0 * np.eye(m.shape[0])) <= cfg.verify_tol


def symmetric_hadamard_square(h: ComplexMatrix, cfg: ToleranceConfig = DEFAULT_TOL) -> ComplexMatrix:
    """Square an H(n, p) into a symmetric H(n^2, p).

    The columns of H / sqrt(n) give a rank-1 COSI set; arranging it in
    reverse-circulant form gives a symmetric unitary n^2 x n^2 matrix
    with entries (1/n) times p-th roots, and multiplying by n restores
    the Hadamard normalisation.
    """
    rep = verify_hadamard(h, cfg)
    if not rep.is_hadamard:
        raise NotHadamard(
            f"input is not Hadamard (residuals {rep.unimodular_residual:.3e}, "
            f"{rep.gram_residual:.3e})"
        )
    n = rep.order
    g = (rep.scale * np.asarray(h, dtype=complex)) / np.sqrt(n)
    cs = cosi.from_unitary_columns(g, cfg)
    k = builders.block_latin_unitary(cs, builders.reverse_circulant_square(n), cfg=cfg)
    return n * k


_DOUBLE_VARIANTS = {1: "left-a-at", 2: "left-at-a", 3: "right-a-at", 4: "right-at-a"}


def tangle_double(a: ComplexMatrix, u: ComplexMatrix, mode: str, variant: int = 1,
                  cfg: ToleranceConfig = DEFAULT_TOL) -> ComplexMatrix:
    """Double an n x n symmetric or skew Hadamard with a 2 x 2 one.

    Builds one of (U; A, A^T), (U; A^T, A), (A, A^T; U), (A^T, A; U)
    per ``variant``.  Inputs are rescaled to unimodular form first and
    must carry the ``mode`` structure ("symmetric" or "skew"); the output
    is a 2n x 2n Hadamard matrix with the same structure, of Butson type
    lcm(q, p) when the inputs are typed.
    """
    if mode not in ("symmetric", "skew"):
        raise ValueError(f"mode must be 'symmetric' or 'skew', got {mode!r}")
    if variant not in _DOUBLE_VARIANTS:
        raise ValueError(f"variant must be 1..4, got {variant!r}")
    arep = verify_hadamard(a, cfg)
    urep = verify_hadamard(u, cfg)
    if not arep.is_hadamard:
        raise ModeViolation("tangle input is not a Hadamard matrix")
    if not urep.is_hadamard or urep.order != 2:
        raise ModeViolation("shuffler must be a 2x2 Hadamard matrix")
    for rep, name in ((arep, "tangle"), (urep, "shuffler")):
        flag = rep.symmetric if mode == "symmetric" else rep.skew
        if not flag:
            raise ModeViolation(f"{name} is not {mode}")
    ah = arep.scale * np.asarray(a, dtype=complex)
    uh = urep.scale * np.asarray(u, dtype=complex)
    at = ah.T
    if variant == 1:
        return left_tangle(uh, [ah, at], cfg)
    if variant == 2:
        return left_tangle(uh, [at, ah], cfg)
    if variant == 3:
        return right_tangle([ah, at], uh, cfg)
    return right_tangle([at, ah], uh, cfg)


def skew4_family(a1: float, a2: float, a3: float) -> ComplexMatrix:
    """4 x 4 complex skew Hadamard from three free angles.

    The remaining angles are forced by orthogonality of the rows:
    a4 = a1 + a2, a5 = -a1 - a3, a6 = a2 - a3.  Every choice of
    (a1, a2, a3) gives a skew Hadamard matrix.
    """
    a4 = a1 + a2
    a5 = -a1 - a3
    a6 = a2 - a3

    def e(x):
        return np.exp(1j * x)

    return np.array(
        [
            [1, e(a1), -e(-a2), -e(-a3)],
            [-e(-a1), 1, -e(-a4), e(a5)],
            [e(a2), e(a4), 1, e(a6)],
            [e(a3), -e(-a5), -e(-a6), 1],
        ],
        dtype=complex,
    )


def _cycle(items, k):
    return [items[i % len(items)] for i in range(k)]


def sylvester_tangle_series(seed_a: ComplexMatrix, seed_b: ComplexMatrix, depth: int,
                            shuffler_policy: str = "seeds",
                            cfg: ToleranceConfig = DEFAULT_TOL):
    """Series of Hadamard matrices A_{l+1} = (A_l, B_l; S_a),
    B_{l+1} = (A_l, B_l; S_b).

    With equal seeds this is Sylvester's doubling (Walsh matrices); with
    distinct seeds the levels are entangled.  ``shuffler_policy`` picks
    the per-level shufflers: "seeds" reuses the two seeds, "self" uses
    the previous level pair (tangles repeat cyclically to fit).  Returns
    [A_0, B_0, A_1, B_1, ...]; depth 0 returns the seeds.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if shuffler_policy not in ("seeds", "self"):
        raise ValueError(f"unknown shuffler policy {shuffler_policy!r}")
    a = np.asarray(seed_a, dtype=complex)
    b = np.asarray(seed_b, dtype=complex)
    out = [a, b]
    cur_a, cur_b = a, b
    for _ in range(depth):
        if shuffler_policy == "seeds":
            sa, sb = a, b
        else:
            sa, sb = cur_a, cur_b
        ka = sa.shape[0]
        kb = sb.shape[0]
        nxt_a = right_tangle(_cycle([cur_a, cur_b], ka), sa, cfg)
        nxt_b = right_tangle(_cycle([cur_a, cur_b], kb), sb, cfg)
        out.extend([nxt_a, nxt_b])
        cur_a, cur_b = nxt_a, nxt_b
    return out


def mub_check(bases, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True iff the bases are pairwise mutually unbiased.

    All bases must be unitary matrices of one dimension n; the check is
    that every cross inner product between columns of two distinct bases
    has modulus 1/sqrt(n) within tolerance.
    """
    mats = [np.asarray(b, dtype=complex) for b in bases]
    if not mats:
        raise DimensionMismatch("no bases given")
    n = mats[0].shape[0]
    for b in mats:
        if b.shape != (n, n):
            raise DimensionMismatch(f"bases must share one square shape, got {b.shape}")
        if not is_unitary(b, cfg):
            raise NotUnitary(f"basis of shape {b.shape} is not unitary")
    target = 1.0 / np.sqrt(n)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            cross = adjoint(mats[i]) @ mats[j]
            if float(np.max(np.abs(np.abs(cross) - target))) > cfg.verify_tol:
                return False
    return True
