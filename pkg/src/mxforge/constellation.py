"""Constellations of unitary matrices for space-time transmission.

A constellation is a finite set of L unitary M x M matrices; its quality
is zeta = (1/2) min over distinct pairs of |det(V_l - V_m)|^(1/M), and it
has full diversity when every pairwise determinant is nonzero.  The rate
is R = log2(L) / M.  Constellations are built here from square COSI sets
with root-of-unity phases and lifted to larger sizes through tangle
products with derangement or shuffler indexing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import builders
from .core import (
    DEFAULT_TOL,
    ComplexMatrix,
    MatrixError,
    NotUnitary,
    ToleranceConfig,
    is_unitary,
    roots_of_unity,
)
from .cosi import CosiSet
from .tangle import CountMismatch, left_tangle

__all__ = [
    "SizeMismatch",
    "TooFew",
    "Constellation",
    "QualityReport",
    "quality",
    "chord",
    "predicted_quality",
    "rate",
    "build_diag_root_constellation",
    "derangements",
    "derangement_lift",
    "shuffler_lift",
]


class SizeMismatch(MatrixError):
    pass


class TooFew(MatrixError):
    pass


@dataclass(frozen=True, eq=False)
class Constellation:
    """A set of same-size unitary matrices.

    ``size`` is the matrix dimension M (the number of transmit
    antennas); L = len(members).
    """

    size: int
    members: tuple
    label: str = ""

    def __post_init__(self):
        members = tuple(np.asarray(m, dtype=complex) for m in self.members)
        object.__setattr__(self, "members", members)
        for m in members:
            if m.shape != (self.size, self.size):
                raise SizeMismatch(f"member of shape {m.shape}, expected {(self.size, self.size)}")

    def __len__(self):
        return len(self.members)

    def validate(self, cfg: ToleranceConfig = DEFAULT_TOL):
        """Check unitarity and pairwise distinctness of the members."""
        for idx, m in enumerate(self.members):
            if not is_unitary(m, cfg):
                raise NotUnitary(f"member {idx} is not unitary")
        for i in range(len(self.members)):
            for j in range(i + 1, len(self.members)):
                if float(np.max(np.abs(self.members[i] - self.members[j]))) <= cfg.verify_tol:
                    raise SizeMismatch(f"members {i} and {j} coincide")
        return self


@dataclass(frozen=True)
class QualityReport:
    zeta: float
    argmin: tuple
    full_diversity: bool
    rate: float
    min_abs_det: float


def rate(v: Constellation) -> float:
    """Transmission rate R with L = 2^(R M)."""
    if len(v.members) < 1:
        raise TooFew("rate needs at least one member")
    return float(np.log2(len(v.members)) / v.size)


def quality(v: Constellation, cfg: ToleranceConfig = DEFAULT_TOL) -> QualityReport:
    """Exhaustive pairwise determinant scan.

    Ties resolve to the lexicographically first pair, making the argmin
    deterministic.
    """
    L = len(v.members)
    if L < 2:
        raise TooFew(f"quality needs at least two members, got {L}")
    best = None
    arg = (0, 1)
    for l in range(L):
        for m_ in range(l + 1, L):
            d = abs(np.linalg.det(v.members[l] - v.members[m_]))
            if best is None or d < best:
                best = d
                arg = (l, m_)
    zeta = 0.5 * best ** (1.0 / v.size)
    return QualityReport(
        zeta=float(zeta),
        argmin=arg,
        full_diversity=bool(best > cfg.verify_tol),
        rate=rate(v),
        min_abs_det=float(best),
    )


def chord(theta):
    """|1 - e^{i theta}| as the closed form 2 |sin(theta / 2)|."""
    return 2.0 * np.abs(np.sin(np.asarray(theta) / 2.0)) if np.ndim(theta) else 2.0 * abs(np.sin(theta / 2.0))


def predicted_quality(n: int) -> float:
    """Quality of the diagonal n-th-root constellation: sin(pi / n)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    return float(np.sin(np.pi / n))


def build_diag_root_constellation(cosi_set: CosiSet, nroots: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Constellation:
    """Constellation of block-circulant members over n-th roots of unity.

    Needs a square COSI set (k projectors of dimension k).  Member t
    attaches the root w^t to every block column of the block-circulant
    arrangement, so |det| of every member is 1 and the measured quality
    is sin(pi / nroots).
    """
    k = cosi_set.size
    if cosi_set.dim != k:
        raise SizeMismatch(
            f"need a square COSI set (k projectors of dimension k), "
            f"got {cosi_set.size} projectors of dimension {cosi_set.dim}"
        )
    if nroots < 1:
        raise ValueError("nroots must be positive")
    square = builders.circulant_square(k)
    w = roots_of_unity(nroots)
    members = []
    for t in range(nroots):
        members.append(
            builders.block_latin_unitary(cosi_set, square, builders.PhaseGrid.constant(k, w[t]), cfg)
        )
    return Constellation(size=k * k, members=tuple(members), label=f"diag-root-{nroots}").validate(cfg)


def derangements(k: int):
    """All permutations of range(k) with no fixed point, in lexicographic order."""
    return [p for p in itertools.permutations(range(k)) if all(p[i] != i for i in range(k))]


def derangement_lift(tangles: Sequence[ComplexMatrix], shuffler: ComplexMatrix,
                     cfg: ToleranceConfig = DEFAULT_TOL) -> Constellation:
    """Lift base members {A_1..A_k} to {(U; A_{s(1)}, ..., A_{s(k)})}
    over all derangements s.

    The measured quality of the lift is reported by :func:`quality`
    rather than assumed equal to the base quality.
    """
    mats = [np.asarray(a, dtype=complex) for a in tangles]
    k = len(mats)
    if k < 2:
        raise TooFew("derangement lift needs at least two base members")
    m = mats[0].shape[0]
    for a in mats:
        if a.shape != (m, m):
            raise SizeMismatch(f"base members must share one square shape, got {a.shape}")
        if not is_unitary(a, cfg):
            raise NotUnitary("base members must be unitary")
    u = np.asarray(shuffler, dtype=complex)
    if u.shape != (k, k):
        raise SizeMismatch(f"shuffler must be {k}x{k}, got {u.shape}")
    if not is_unitary(u, cfg):
        raise NotUnitary("shuffler must be unitary")
    members = tuple(left_tangle(u, [mats[i] for i in d], cfg) for d in derangements(k))
    return Constellation(size=k * m, members=members, label=f"derangement-lift-k{k}")


def shuffler_lift(us: Constellation, tangles: Sequence[ComplexMatrix],
                  cfg: ToleranceConfig = DEFAULT_TOL) -> Constellation:
    """Lift a constellation of shufflers {U_i} to {(U_i; A_1, ..., A_k)}.

    Differences factor through the shuffler slot, so the determinant law
    gives |det(V_i - V_j)| = |det(U_i - U_j)|^t and the measured quality
    equals the base quality exactly.
    """
    k = us.size
    mats = [np.asarray(a, dtype=complex) for a in tangles]
    if len(mats) != k:
        raise CountMismatch(f"need {k} tangles for {k}x{k} shufflers, got {len(mats)}")
    t = mats[0].shape[0]
    for a in mats:
        if a.shape != (t, t):
            raise SizeMismatch(f"tangles must share one square shape, got {a.shape}")
        if not is_unitary(a, cfg):
            raise NotUnitary("tangles must be unitary")
    for u in us.members:
        if not is_unitary(u, cfg):
            raise NotUnitary("shuffler constellation members must be unitary")
    members = tuple(left_tangle(u, mats, cfg) for u in us.members)
    label = f"shuffler-lift({us.label})" if us.label else "shuffler-lift"
    return Constellation(size=k * t, members=members, label=label)
