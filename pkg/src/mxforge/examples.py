"""Named end-to-end builds with verification, runnable from the CLI.

Each registry entry constructs a small, well-known instance (real and
complex 2 x 2 COSI pairs, Fourier COSI sets and their real merges, Pauli
tangles, unbiased bases, the 9 x 9 symmetric Butson square, the 4 x 4
skew family, Walsh series), verifies every claimed property, and returns
the artifacts together with a pass/fail check list.

A :class:`Corruptor` can perturb one input entry, which must flip the
verification outcome; the CLI exposes this as ``--corrupt``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import builders, cosi, hadamard, tangle
from .core import (
    DEFAULT_TOL,
    MatrixError,
    ToleranceConfig,
    adjoint,
    cmatrix,
    identity,
    is_paraunitary,
    is_unitary,
    laurent_eval,
    max_abs,
    max_abs_diff,
    roots_of_unity,
)
from .cosi import CosiError

__all__ = [
    "Check",
    "ExampleResult",
    "Corruptor",
    "NO_CORRUPTION",
    "UnknownExample",
    "example_names",
    "run_example",
]


class UnknownExample(ValueError):
    pass


@dataclass(frozen=True)
class Corruptor:
    """Optional single-entry perturbation of an example's input."""

    eps: float = 0.0
    entry: tuple = (0, 0)

    def apply(self, m):
        if not self.eps:
            return m
        out = np.array(m, dtype=complex)
        out[self.entry[0] % out.shape[0], self.entry[1] % out.shape[1]] += self.eps
        return out


NO_CORRUPTION = Corruptor()


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ExampleResult:
    name: str
    checks: list = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def lines(self):
        out = [f"example {self.name}: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.ok else "FAIL"
            detail = f"  ({c.detail})" if c.detail else ""
            out.append(f"  [{mark}] {c.name}{detail}")
        return out


def _close(name: str, actual, expected, tol: float = 1e-12) -> Check:
    r = max_abs_diff(actual, expected)
    return Check(name, r <= tol, f"residual {r:.2e}")


def _flag(name: str, ok: bool, detail: str = "") -> Check:
    return Check(name, bool(ok), detail)


def _circ(first_row) -> np.ndarray:
    """Circulant matrix with the given first row; each row shifts right."""
    a = np.asarray(first_row, dtype=complex)
    n = len(a)
    return cmatrix([[a[(j - i) % n] for j in range(n)] for i in range(n)])


_E0 = cmatrix([[0.5, 0.5], [0.5, 0.5]])
_E1 = cmatrix([[0.5, -0.5], [-0.5, 0.5]])
_Q0 = cmatrix([[0.5, 0.5j], [-0.5j, 0.5]])
_Q1 = cmatrix([[0.5, -0.5j], [0.5j, 0.5]])
_H2 = cmatrix([[1, 1], [1, -1]])
_SWAP = builders.LatinSquare(((0, 1), (1, 0)))


def _example_one(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("one")
    e0 = corrupt.apply(_E0)
    pair = cosi.validate([e0, _E1], cfg)
    w = builders.block_latin_laurent(pair, _SWAP, builders.MonomialGrid.distinct_vars(2), cfg)
    res.checks.append(_flag("W(x,y,z,t) paraunitary", is_paraunitary(w, cfg)))
    h = laurent_eval(w, (1, 1, 1, 1))
    expected = 0.5 * cmatrix(
        [[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]]
    )
    res.checks.append(_close("H matches the 4x4 entangled matrix", h, expected))
    res.checks.append(_flag("H unitary", is_unitary(h, cfg)))
    rep = hadamard.verify_hadamard(h, cfg)
    res.checks.append(
        _flag("2H is a real Hadamard matrix", rep.is_hadamard and rep.butson_p == 2,
              f"scale {rep.scale:.6g}")
    )
    res.checks.append(
        _flag("H entangled for 2x2 blocking", tangle.is_block_tensor(h, 2, 2, cfg) is None)
    )
    res.artifacts = {"E0": pair[0], "E1": pair[1], "W": w, "H": h, "cosi": pair}
    return res


def _example_two(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("two")
    q0 = corrupt.apply(_Q0)
    pair = cosi.validate([q0, _Q1], cfg)
    q = builders.block_latin_laurent(pair, _SWAP, builders.MonomialGrid.distinct_vars(2), cfg)
    res.checks.append(_flag("Q(x,y,z,t) paraunitary", is_paraunitary(q, cfg)))
    h = 2.0 * laurent_eval(q, (1, 1, 1, 1))
    expected = cmatrix(
        [[1, 1j, 1, -1j], [-1j, 1, 1j, 1], [1, -1j, 1, 1j], [1j, 1, -1j, 1]]
    )
    res.checks.append(_close("evaluation matches the complex Hadamard", h, expected))
    rep = hadamard.verify_hadamard(h, cfg)
    res.checks.append(_flag("H(4,4) Butson matrix", rep.is_hadamard and rep.butson_p == 4))
    res.artifacts = {"Q0": pair[0], "Q1": pair[1], "Q": q, "H": h}
    return res


def _example_three(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("three")
    s = 1.0 / np.sqrt(2.0)
    u = corrupt.apply(s * cmatrix([[1, -1], [1, 1]]))
    a = s * _H2
    b = s * cmatrix([[1, 1], [1j, -1j]])
    t = tangle.left_tangle(u, [a, b], cfg)
    expected = 0.5 * cmatrix(
        [[1, 1, -1, -1], [1, -1, -1j, 1j], [1, 1, 1, 1], [1, -1, 1j, -1j]]
    )
    res.checks.append(_close("(U;A,B) matches the printed matrix", t, expected))
    rep = hadamard.verify_hadamard(t, cfg)
    res.checks.append(_flag("2(U;A,B) is H(4,4)", rep.is_hadamard and rep.butson_p == 4))
    cols = cosi.from_unitary_columns(t, cfg)
    res.checks.append(_flag("columns give a 4-element COSI set", cols.size == 4))
    p = builders.block_latin_laurent(
        cols, builders.reverse_circulant_square(4), builders.MonomialGrid.distinct_vars(4), cfg
    )
    res.checks.append(_flag("16-variable block matrix paraunitary", is_paraunitary(p, cfg)))
    res.artifacts = {"T": t, "cosi": cols, "P": p}
    return res


def _example_fourier5(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("fourier5")
    w = roots_of_unity(5)
    projs = list(cosi.fourier_cosi(5))
    projs[0] = corrupt.apply(projs[0])
    for i in range(5):
        expected = _circ([1, w[(4 * i) % 5], w[(3 * i) % 5], w[(2 * i) % 5], w[i % 5]]) / 5.0
        res.checks.append(_close(f"E_{i} matches (1/5) circ(1, w^4i, w^3i, w^2i, w^i)", projs[i], expected))
    full = cosi.validate(projs, cfg)
    merged = cosi.merge_conjugates(full, cfg)
    theta = 2.0 * np.pi / 5.0
    cos = np.cos
    e1p = 0.4 * _circ([1, cos(theta), cos(2 * theta), cos(3 * theta), cos(4 * theta)])
    e2p = 0.4 * _circ([1, cos(2 * theta), cos(4 * theta), cos(theta), cos(3 * theta)])
    res.checks.append(_close("E_1' is the (2/5) cosine circulant", merged[1], e1p))
    res.checks.append(_close("E_2' is the (2/5) cosine circulant", merged[2], e2p))
    res.checks.append(_flag("merged set is real", max_abs(np.imag(np.stack(list(merged)))) <= 1e-12))
    g = builders.block_latin_unitary(merged, builders.reverse_circulant_square(3), cfg=cfg)
    res.checks.append(_flag("15x15 block arrangement unitary", is_unitary(g, cfg)))
    res.checks.append(_flag("block arrangement symmetric", max_abs_diff(adjoint(g), g) <= cfg.verify_tol))
    res.artifacts = {"cosi5": full, "merged": merged, "G": g}
    return res


def _example_fourier6(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("fourier6")
    projs = list(cosi.fourier_cosi(6))
    projs[0] = corrupt.apply(projs[0])
    full = cosi.validate(projs, cfg)
    merged = cosi.merge_conjugates(full, cfg)
    res.checks.append(_close("E_0 = (1/6) circ(1,1,1,1,1,1)", merged[0], _circ([1] * 6) / 6.0))
    res.checks.append(_close("E_1' = (1/6) circ(2,1,-1,-2,-1,1)", merged[1], _circ([2, 1, -1, -2, -1, 1]) / 6.0))
    res.checks.append(_close("E_2' = (1/6) circ(2,-1,-1,2,-1,-1)", merged[2], _circ([2, -1, -1, 2, -1, -1]) / 6.0))
    res.checks.append(_close("E_3 = (1/6) circ(1,-1,1,-1,1,-1)", merged[3], _circ([1, -1, 1, -1, 1, -1]) / 6.0))
    g = builders.block_latin_unitary(merged, builders.circulant_square(4), cfg=cfg)
    res.checks.append(_flag("24x24 block arrangement unitary", is_unitary(g, cfg)))
    res.checks.append(_flag("arrangement is real", max_abs(np.imag(g)) <= 1e-12))
    res.artifacts = {"merged": merged, "G": g}
    return res


def _example_nott(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("nott")
    e0 = corrupt.apply(_E0)
    series = builders.nott_series(e0, _E1, depth=3, cfg=cfg)
    for level, u in enumerate(series):
        n = u.shape[0]
        res.checks.append(_flag(f"level {level} ({n}x{n}) unitary", is_unitary(u, cfg)))
        res.checks.append(_close(f"level {level} self-adjoint", adjoint(u), u, cfg.verify_tol))
        res.checks.append(_close(f"level {level} squares to identity", u @ u, identity(n), cfg.verify_tol))
    complex_series = builders.nott_series(_Q0, _Q1, depth=2, cfg=cfg)
    res.checks.append(
        _flag("complex seed level 1 unitary self-adjoint",
              is_unitary(complex_series[1], cfg)
              and max_abs_diff(adjoint(complex_series[1]), complex_series[1]) <= cfg.verify_tol)
    )
    res.artifacts = {f"U{level}": u for level, u in enumerate(series)}
    return res


def _example_pauli(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("pauli")
    sx = corrupt.apply(cmatrix([[0, 1], [1, 0]]))
    sy = cmatrix([[0, 1j], [-1j, 0]])
    sz = cmatrix([[1, 0], [0, -1]])
    combos = [
        ("(sz;sx,sy)", sz, [sx, sy]),
        ("(sz;sy,sx)", sz, [sy, sx]),
        ("(sy;sx,sz)", sy, [sx, sz]),
        ("(sy;sz,sx)", sy, [sz, sx]),
        ("(sx;sz,sy)", sx, [sz, sy]),
        ("(sx;sy,sz)", sx, [sy, sz]),
    ]
    products = {}
    for name, shuf, tangles in combos:
        rep = tangle.preservation_suite(
            tangle.Property.UNITARY, tangle.TangleSpec("left", shuf, tuple(tangles)), cfg
        )
        res.checks.append(_flag(f"{name} unitary", rep.ok, f"residual {rep.residual:.2e}"))
        products[name] = rep.product
    eight = tangle.left_tangle(sx, [products["(sz;sx,sy)"], products["(sy;sx,sz)"]], cfg)
    res.checks.append(_flag("8x8 second-level product unitary", is_unitary(eight, cfg)))
    res.artifacts = dict(products)
    res.artifacts["eight"] = eight
    return res


def _example_unbiased2(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("unbiased2")
    s = 1.0 / np.sqrt(2.0)
    u = corrupt.apply(s * _H2)
    g = tangle.right_tangle([cmatrix([[1]]), cmatrix([[1j]])], u, cfg)
    res.checks.append(_close("(A,B;U) matches (1/sqrt 2)[[1,1],[i,-i]]", g, s * cmatrix([[1, 1], [1j, -1j]])))
    res.checks.append(_flag("triple mutually unbiased in dim 2", hadamard.mub_check([u, g, identity(2)], cfg)))
    res.artifacts = {"U": u, "G": g}
    return res


def _example_unbiased3(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("unbiased3")
    w = roots_of_unity(3)
    u = corrupt.apply(
        cmatrix([[1, 1, 1], [1, w[1], w[2]], [1, w[2], w[1]]]) / np.sqrt(3.0)
    )
    one = cmatrix([[1]])
    u1 = tangle.right_tangle([one, cmatrix([[w[1]]]), cmatrix([[w[1]]])], u, cfg)
    u2 = tangle.right_tangle([one, cmatrix([[w[2]]]), cmatrix([[w[2]]])], u, cfg)
    res.checks.append(
        _flag("quadruple mutually unbiased in dim 3", hadamard.mub_check([u, u1, u2, identity(3)], cfg))
    )
    res.artifacts = {"U": u, "U1": u1, "U2": u2}
    return res


def _example_hadsymm9(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("hadsymm9")
    w = roots_of_unity(3)
    h = corrupt.apply(cmatrix([[1, 1, 1], [1, w[1], w[2]], [1, w[2], w[1]]]))
    l = hadamard.symmetric_hadamard_square(h, cfg)
    rep = hadamard.verify_hadamard(l, cfg)
    res.checks.append(_flag("L is Hadamard of order 9", rep.is_hadamard and rep.order == 9))
    res.checks.append(_flag("L symmetric", rep.symmetric))
    res.checks.append(_flag("L of Butson type (9,3)", rep.butson_p == 3))
    cs = cosi.from_unitary_columns(h / np.sqrt(3.0), cfg)
    manual = 3.0 * np.block(
        [
            [cs[0], cs[1], cs[2]],
            [cs[1], cs[2], cs[0]],
            [cs[2], cs[0], cs[1]],
        ]
    )
    res.checks.append(_close("L equals 3x the reverse-circulant block form", l, manual, 1e-12))
    res.artifacts = {"H": h, "L": l}
    return res


def _example_skew46(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("skew46")
    h = hadamard.skew4_family(2 * np.pi / 3, 4 * np.pi / 3, 2 * np.pi)
    h = corrupt.apply(h)
    w = roots_of_unity(3)
    expected = cmatrix(
        [
            [1, w[1], -w[1], -1],
            [-w[2], 1, -1, w[2]],
            [w[2], 1, 1, w[2]],
            [1, -w[1], -w[1], 1],
        ]
    )
    res.checks.append(_close("matches the third-root specialisation", h, expected))
    rep = hadamard.verify_hadamard(h, cfg)
    res.checks.append(_flag("Hadamard", rep.is_hadamard))
    res.checks.append(_flag("skew", hadamard.is_skew(h, cfg)))
    res.checks.append(_flag("Butson type (4,6)", rep.butson_p == 6))
    res.artifacts = {"H": h}
    return res


def _example_walsh(cfg: ToleranceConfig, corrupt: Corruptor) -> ExampleResult:
    res = ExampleResult("walsh")
    seed = corrupt.apply(_H2)
    series = hadamard.sylvester_tangle_series(seed, seed, depth=2, cfg=cfg)
    walsh4, walsh8 = series[2], series[4]
    res.checks.append(_close("order 4 equals the tensor square", walsh4, np.kron(_H2, _H2)))
    res.checks.append(_close("order 8 equals the tensor cube", walsh8, np.kron(_H2, np.kron(_H2, _H2))))
    for m in (walsh4, walsh8):
        rep = hadamard.verify_hadamard(m, cfg)
        res.checks.append(
            _flag(f"order {m.shape[0]} real Hadamard", rep.is_hadamard and rep.butson_p == 2)
        )
    res.artifacts = {"walsh4": walsh4, "walsh8": walsh8}
    return res


_REGISTRY = {
    "one": _example_one,
    "two": _example_two,
    "three": _example_three,
    "fourier5": _example_fourier5,
    "fourier6": _example_fourier6,
    "nott": _example_nott,
    "pauli": _example_pauli,
    "unbiased2": _example_unbiased2,
    "unbiased3": _example_unbiased3,
    "hadsymm9": _example_hadsymm9,
    "skew46": _example_skew46,
    "walsh": _example_walsh,
}


def example_names():
    return list(_REGISTRY)


def run_example(name: str, cfg: ToleranceConfig = DEFAULT_TOL, corrupt: Corruptor = NO_CORRUPTION) -> ExampleResult:
    """Run one registry example; build/validation errors become a failed
    check rather than propagating."""
    fn = _REGISTRY.get(name)
    if fn is None:
        raise UnknownExample(f"unknown example {name!r}; choices: {', '.join(_REGISTRY)}")
    try:
        return fn(cfg, corrupt)
    except (CosiError, MatrixError) as exc:
        res = ExampleResult(name)
        res.checks.append(Check("build and validation", False, str(exc)))
        return res
