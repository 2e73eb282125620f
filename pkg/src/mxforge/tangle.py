"""Matrix tangle products: block constructions (U; A_1, ..., A_k) and
(A_1, ..., A_k; U).

The left product places tangle A_j scaled by shuffler entry u_{ij} into
block (i, j); the right product places A_i there instead.  Tensor
products and direct sums are the special cases with equal tangles or an
identity shuffler, and anything else is entangled in general.  The
module also provides the determinant law, property-preservation checks,
a separability test, and series growth.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    DEFAULT_TOL,
    ComplexMatrix,
    DimensionMismatch,
    LaurentMatrix,
    MatrixError,
    NonSquare,
    ToleranceConfig,
    determinant,
    is_paraunitary,
    is_unitary,
    laurent,
    laurent_from_const,
    laurent_identity,
    laurent_mul,
    laurent_residual,
    max_abs,
    max_abs_diff,
    para_adjoint,
    with_nvars,
)

__all__ = [
    "CountMismatch",
    "ShapeMismatch",
    "BadBlocking",
    "ConstituentViolation",
    "PolicyExhausted",
    "Property",
    "TangleSpec",
    "left_tangle",
    "right_tangle",
    "LinearityReport",
    "linearity_check",
    "det_predict",
    "is_block_tensor",
    "PreservationReport",
    "preservation_suite",
    "grow_series",
]


class CountMismatch(MatrixError):
    pass


class ShapeMismatch(MatrixError):
    pass


class BadBlocking(MatrixError):
    pass


class ConstituentViolation(MatrixError):
    pass


class PolicyExhausted(MatrixError):
    pass


class Property(enum.Enum):
    UNITARY = "unitary"
    PARAUNITARY = "paraunitary"
    HADAMARD = "hadamard"


def _shape_of(m):
    if isinstance(m, LaurentMatrix):
        return m.shape
    m = np.asarray(m)
    if m.ndim != 2:
        raise MatrixError(f"expected a matrix, got ndim={m.ndim}")
    return m.shape


def _is_laurent(objs) -> bool:
    return any(isinstance(o, LaurentMatrix) for o in objs)


def _tangle_product(shuffler, tangles, side: str, cfg: ToleranceConfig) -> ComplexMatrix | LaurentMatrix:
    tangles = list(tangles)
    if not tangles:
        raise CountMismatch("at least one tangle required")
    shapes = {_shape_of(a) for a in tangles}
    if len(shapes) != 1:
        raise ShapeMismatch(f"tangles must share one shape, got {sorted(shapes)}")
    m, n = shapes.pop()
    srows, scols = _shape_of(shuffler)
    k = scols if side == "left" else srows
    if len(tangles) != k:
        raise CountMismatch(
            f"{side} tangle product needs {k} tangles for a {srows}x{scols} shuffler, "
            f"got {len(tangles)}"
        )

    if not _is_laurent([shuffler, *tangles]):
        u = np.asarray(shuffler, dtype=complex)
        pick = (lambda i, j: tangles[j]) if side == "left" else (lambda i, j: tangles[i])
        return np.block(
            [[np.asarray(pick(i, j), dtype=complex) * u[i, j] for j in range(scols)] for i in range(srows)]
        )

    # Laurent path: promote everything and merge the variable spaces
    # positionally (variable t of the shuffler is variable t of a tangle).
    objs = [o if isinstance(o, LaurentMatrix) else laurent_from_const(o) for o in [shuffler, *tangles]]
    nv = max(o.nvars for o in objs)
    objs = [with_nvars(o, nv) for o in objs]
    u, tangles = objs[0], objs[1:]
    out_rows, out_cols = srows * m, scols * n
    acc: dict[tuple, np.ndarray] = {}
    for eu, cu in u.terms.items():
        for i in range(srows):
            for j in range(scols):
                scalar = cu[i, j]
                if scalar == 0:
                    continue
                a = tangles[j] if side == "left" else tangles[i]
                for ea, ca in a.terms.items():
                    e = tuple(x + y for x, y in zip(eu, ea))
                    buf = acc.get(e)
                    if buf is None:
                        buf = np.zeros((out_rows, out_cols), dtype=complex)
                        acc[e] = buf
                    buf[i * m : (i + 1) * m, j * n : (j + 1) * n] += scalar * ca
    return laurent(out_rows, out_cols, nv, acc, cfg)


def left_tangle(shuffler, tangles, cfg: ToleranceConfig = DEFAULT_TOL):
    """(U; A_1, ..., A_k): block (i, j) is A_j * u_{ij}.

    For a t x k shuffler and m x n tangles the result is tm x kn.  Equal
    tangles give the tensor product U (x) A; an identity shuffler gives
    the direct sum.  Laurent shufflers or tangles are supported, with the
    variable spaces merged positionally.
    """
    return _tangle_product(shuffler, tangles, "left", cfg)


def right_tangle(tangles, shuffler, cfg: ToleranceConfig = DEFAULT_TOL):
    """(A_1, ..., A_k; U): block (i, j) is A_i * u_{ij}.

    For a k x t shuffler and m x n tangles the result is km x tn.  For
    square inputs it equals the transpose of the left product of the
    transposes.
    """
    return _tangle_product(shuffler, tangles, "right", cfg)


@dataclass(frozen=True, eq=False)
class TangleSpec:
    """A tangle product to be formed: side, shuffler, and tangle list."""

    side: str
    shuffler: object
    tangles: tuple

    def __post_init__(self):
        side = str(self.side).lower()
        if side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "tangles", tuple(self.tangles))
        srows, scols = _shape_of(self.shuffler)
        k = scols if side == "left" else srows
        if len(self.tangles) != k:
            raise CountMismatch(
                f"{side} spec needs {k} tangles for a {srows}x{scols} shuffler, "
                f"got {len(self.tangles)}"
            )
        shapes = {_shape_of(a) for a in self.tangles}
        if len(shapes) != 1:
            raise ShapeMismatch(f"tangles must share one shape, got {sorted(shapes)}")

    def product(self, cfg: ToleranceConfig = DEFAULT_TOL):
        if self.side == "left":
            return left_tangle(self.shuffler, self.tangles, cfg)
        return right_tangle(self.tangles, self.shuffler, cfg)


@dataclass(frozen=True)
class LinearityReport:
    """Residuals of the tangle-product linearity identities.

    ``single_slot_residual`` measures distributing a sum in one tangle
    slot only, which is NOT an identity; it is reported, never asserted.
    """

    ok: bool
    scale_residual: float
    shuffler_additivity_residual: float
    tanglewise_additivity_residual: float
    single_slot_residual: float

    def __bool__(self):
        return self.ok


def linearity_check(u, v, tangle_lists, tol: float = 1e-12, cfg: ToleranceConfig = DEFAULT_TOL) -> LinearityReport:
    """Verify the linearity identities of the left tangle product.

    Checks, on the given inputs: scaling moves freely between shuffler
    and tangles; the product is additive in the shuffler; adding two
    products with the same shuffler adds the tangles slot-wise.
    """
    lists = [list(ts) for ts in tangle_lists]
    if len(lists) != 2:
        raise ShapeMismatch("tangle_lists must contain exactly two tangle lists")
    a_list, b_list = lists
    alpha = 0.7 - 0.3j

    scaled_tangles = left_tangle(u, [alpha * a for a in a_list], cfg)
    scaled_shuffler = left_tangle(np.asarray(u) * alpha, a_list, cfg)
    scaled_outside = alpha * left_tangle(u, a_list, cfg)
    r_scale = max(
        max_abs_diff(scaled_tangles, scaled_shuffler),
        max_abs_diff(scaled_tangles, scaled_outside),
    )

    r_shuffler = max_abs_diff(
        left_tangle(np.asarray(u) + np.asarray(v), a_list, cfg),
        left_tangle(u, a_list, cfg) + left_tangle(v, a_list, cfg),
    )

    r_tanglewise = max_abs_diff(
        left_tangle(u, a_list, cfg) + left_tangle(u, b_list, cfg),
        left_tangle(u, [a + b for a, b in zip(a_list, b_list)], cfg),
    )

    one_slot = [a_list[0] + b_list[0], *a_list[1:]]
    r_single = max_abs_diff(
        left_tangle(u, one_slot, cfg),
        left_tangle(u, a_list, cfg) + left_tangle(u, [b_list[0], *a_list[1:]], cfg),
    )

    ok = max(r_scale, r_shuffler, r_tanglewise) <= tol
    return LinearityReport(ok, r_scale, r_shuffler, r_tanglewise, r_single)


def det_predict(u: ComplexMatrix, tangles: Sequence[ComplexMatrix]) -> complex:
    """Determinant of (U; A_1, ..., A_k) without assembling it:
    det(A_1) ... det(A_k) * det(U)^n for k x k U and n x n tangles."""
    u = np.asarray(u, dtype=complex)
    if u.shape[0] != u.shape[1]:
        raise NonSquare(f"shuffler must be square, got {u.shape}")
    tangles = [np.asarray(a, dtype=complex) for a in tangles]
    if len(tangles) != u.shape[0]:
        raise CountMismatch(f"need {u.shape[0]} tangles, got {len(tangles)}")
    n = tangles[0].shape[0]
    for a in tangles:
        if a.shape != (n, n):
            raise NonSquare(f"tangles must be square and equal-sized, got {a.shape}")
    pred = determinant(u) ** n
    for a in tangles:
        pred *= determinant(a)
    return complex(pred)


def is_block_tensor(m: ComplexMatrix, block_rows: int, block_cols: int, cfg: ToleranceConfig = DEFAULT_TOL):
    """Try to factor ``m`` as U (x) A over the given blocking.

    Returns (U, A) when all block_rows x block_cols blocks are
    proportional (within tolerance) to a common nonzero block, else
    None: the matrix is entangled for this blocking.  Proportionality is
    measured against the largest-modulus entry of the reference block.
    """
    m = np.asarray(m, dtype=complex)
    rows, cols = m.shape
    if block_rows < 1 or block_cols < 1 or rows % block_rows or cols % block_cols:
        raise BadBlocking(
            f"shape {m.shape} does not divide into {block_rows}x{block_cols} blocks"
        )
    grid_r, grid_c = rows // block_rows, cols // block_cols
    blocks = [
        [
            m[i * block_rows : (i + 1) * block_rows, j * block_cols : (j + 1) * block_cols]
            for j in range(grid_c)
        ]
        for i in range(grid_r)
    ]
    ref = max((blocks[i][j] for i in range(grid_r) for j in range(grid_c)), key=max_abs)
    if max_abs(ref) <= cfg.prune_tol:
        return None
    pivot = np.unravel_index(np.argmax(np.abs(ref)), ref.shape)
    scale = max(1.0, max_abs(m))
    u = np.zeros((grid_r, grid_c), dtype=complex)
    for i in range(grid_r):
        for j in range(grid_c):
            c = blocks[i][j][pivot] / ref[pivot]
            if max_abs(blocks[i][j] - c * ref) > cfg.verify_tol * scale:
                return None
            u[i, j] = c
    return u, ref.copy()


@dataclass(frozen=True, eq=False)
class PreservationReport:
    """Outcome of a property-preservation check on a tangle product."""

    prop: Property
    ok: bool
    residual: float
    product: object
    butson_inputs: tuple | None = None
    butson_product: int | None = None
    butson_lcm: int | None = None

    def __bool__(self):
        return self.ok


def _unitary_residual(m, cfg):
    m = np.asarray(m, dtype=complex)
    return max_abs_diff(m @ m.conj().T, np.eye(m.shape[0]))


def _paraunitary_residual(p, cfg):
    if not isinstance(p, LaurentMatrix):
        p = laurent_from_const(p)
    gram = laurent_mul(p, para_adjoint(p), cfg)
    return laurent_residual(gram, laurent_identity(p.rows, p.nvars))


def preservation_suite(prop: Property, spec: TangleSpec, cfg: ToleranceConfig = DEFAULT_TOL) -> PreservationReport:
    """Form the tangle product of a spec whose constituents all satisfy
    ``prop`` and verify the product satisfies it too.

    Raises :class:`ConstituentViolation` when an input fails the
    property.  For the Hadamard property, Butson types are detected when
    available and the product type is checked against the lcm rule.
    """
    constituents = [spec.shuffler, *spec.tangles]

    if prop is Property.UNITARY:
        for idx, c in enumerate(constituents):
            if not is_unitary(c, cfg):
                raise ConstituentViolation(f"constituent {idx} is not unitary")
        product = spec.product(cfg)
        residual = _unitary_residual(product, cfg)
        return PreservationReport(prop, residual <= cfg.verify_tol, residual, product)

    if prop is Property.PARAUNITARY:
        for idx, c in enumerate(constituents):
            p = c if isinstance(c, LaurentMatrix) else laurent_from_const(c)
            if not is_paraunitary(p, cfg):
                raise ConstituentViolation(f"constituent {idx} is not paraunitary")
        product = spec.product(cfg)
        if not isinstance(product, LaurentMatrix):
            product = laurent_from_const(product)
        residual = _paraunitary_residual(product, cfg)
        return PreservationReport(prop, residual <= cfg.verify_tol, residual, product)

    if prop is Property.HADAMARD:
        from . import hadamard  # local import; hadamard builds on this module

        types = []
        for idx, c in enumerate(constituents):
            rep = hadamard.verify_hadamard(c, cfg)
            if not rep.is_hadamard:
                raise ConstituentViolation(f"constituent {idx} is not Hadamard")
            types.append(rep.butson_p)
        product = spec.product(cfg)
        rep = hadamard.verify_hadamard(product, cfg)
        ok = rep.is_hadamard
        lcm = None
        if all(t is not None for t in types):
            lcm = int(np.lcm.reduce(np.asarray(types, dtype=np.int64)))
            ok = ok and rep.butson_p is not None and lcm % rep.butson_p == 0
        residual = max(rep.unimodular_residual, rep.gram_residual)
        return PreservationReport(
            prop, ok, residual, product,
            butson_inputs=tuple(types), butson_product=rep.butson_p, butson_lcm=lcm,
        )

    raise TypeError(f"unknown property {prop!r}")


def _check_property(m, prop: Property, cfg: ToleranceConfig) -> bool:
    if prop is Property.UNITARY:
        return is_unitary(m, cfg)
    if prop is Property.PARAUNITARY:
        p = m if isinstance(m, LaurentMatrix) else laurent_from_const(m)
        return is_paraunitary(p, cfg)
    if prop is Property.HADAMARD:
        from . import hadamard

        return hadamard.verify_hadamard(m, cfg).is_hadamard
    raise TypeError(f"unknown property {prop!r}")


def grow_series(
    seeds: Sequence,
    shuffler_policy="cycle-seeds",
    depth: int = 1,
    permutation_policy: str = "rotate",
    prop: Property = Property.UNITARY,
    side: str = "left",
    cfg: ToleranceConfig = DEFAULT_TOL,
    rng_seed: int = 0,
):
    """Grow a series of property-preserving tangle products.

    Starting from ``seeds`` (which must all satisfy ``prop``), each level
    forms one product per pool element: product i uses a shuffler chosen
    by ``shuffler_policy`` ("cycle-seeds" cycles the seeds, "random"
    draws from them, or pass an explicit sequence of shufflers to cycle)
    and the pool rotated by i as tangles ("rotate"), or a random cyclic
    derangement ("random").  Pool elements are repeated cyclically when
    the shuffler needs more tangles.  Returns the seeds followed by every
    emitted matrix, level by level; depth 0 returns the seeds unchanged.
    """
    seeds = list(seeds)
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if not seeds:
        raise PolicyExhausted("no seeds given")
    if depth and len(seeds) < 2:
        raise PolicyExhausted("growing needs at least two seeds to entangle")
    for idx, s in enumerate(seeds):
        if not _check_property(s, prop, cfg):
            raise ConstituentViolation(f"seed {idx} does not satisfy {prop.value}")

    if isinstance(shuffler_policy, str):
        if shuffler_policy not in ("cycle-seeds", "random"):
            raise PolicyExhausted(f"unknown shuffler policy {shuffler_policy!r}")
        shuffler_pool = seeds
        random_shuffler = shuffler_policy == "random"
    else:
        shuffler_pool = list(shuffler_policy)
        if not shuffler_pool:
            raise PolicyExhausted("empty shuffler pool")
        random_shuffler = False
    if permutation_policy not in ("rotate", "random"):
        raise PolicyExhausted(f"unknown permutation policy {permutation_policy!r}")

    rng = np.random.default_rng(rng_seed)
    out = list(seeds)
    pool = list(seeds)
    for _ in range(depth):
        new = []
        for i in range(len(pool)):
            if random_shuffler:
                shuf = shuffler_pool[rng.integers(len(shuffler_pool))]
            else:
                shuf = shuffler_pool[i % len(shuffler_pool)]
            if permutation_policy == "rotate":
                order = [(t + i) % len(pool) for t in range(len(pool))]
            else:
                start = int(rng.integers(len(pool)))
                order = [(t + start) % len(pool) for t in range(len(pool))]
            srows, scols = _shape_of(shuf)
            k = scols if side == "left" else srows
            tl = [pool[order[t % len(pool)]] for t in range(k)]
            if side == "left":
                prod = left_tangle(shuf, tl, cfg)
            else:
                prod = right_tangle(tl, shuf, cfg)
            if not _check_property(prod, prop, cfg):
                raise MatrixError(f"grown matrix lost the {prop.value} property")
            new.append(prod)
        out.extend(new)
        pool = new
    return out
