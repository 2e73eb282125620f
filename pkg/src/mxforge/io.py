"""JSON interchange for matrices, Laurent matrices, COSI sets, and tangle
specs.

Formats (complex scalars are [re, im] pairs):

* complex matrix: ``{"kind": "complex-matrix", "rows": R, "cols": C,
  "data": [[[re, im], ...], ...]}``
* Laurent matrix: ``{"kind": "laurent-matrix", "rows": R, "cols": C,
  "nvars": K, "data": [[[{"exps": [...], "coef": [re, im]}, ...], ...], ...]}``
  where ``data[i][j]`` lists the nonzero terms of entry (i, j)
* COSI set: ``{"kind": "cosi-set", "dim": N, "projectors": [matrix, ...]}``
* tangle spec: ``{"kind": "tangle-spec", "side": "left"|"right",
  "shuffler": matrix-or-laurent, "tangles": [...]}``

Floats are written with Python's shortest round-trip representation
(at most 17 significant digits), so loading reproduces stored values
exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import DEFAULT_TOL, ComplexMatrix, LaurentMatrix, cmatrix, laurent
from .cosi import CosiSet, validate
from .tangle import TangleSpec

__all__ = [
    "matrix_to_obj",
    "matrix_from_obj",
    "laurent_to_obj",
    "laurent_from_obj",
    "cosi_to_obj",
    "cosi_from_obj",
    "tangle_spec_to_obj",
    "tangle_spec_from_obj",
    "to_obj",
    "from_obj",
    "save",
    "load",
]


def _pair(z: complex):
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_obj(m: ComplexMatrix) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "kind": "complex-matrix",
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[_pair(z) for z in row] for row in m],
    }


def matrix_from_obj(obj: dict) -> ComplexMatrix:
    if obj.get("kind") != "complex-matrix":
        raise ValueError(f"expected complex-matrix, got kind {obj.get('kind')!r}")
    data = [[complex(re, im) for re, im in row] for row in obj["data"]]
    m = cmatrix(data)
    if m.shape != (obj["rows"], obj["cols"]):
        raise ValueError(f"declared shape {(obj['rows'], obj['cols'])} != data shape {m.shape}")
    return m


def laurent_to_obj(p: LaurentMatrix) -> dict:
    data = []
    for i in range(p.rows):
        row = []
        for j in range(p.cols):
            entry = []
            for exps, coef in sorted(p.terms.items()):
                z = coef[i, j]
                if z != 0:
                    entry.append({"exps": list(exps), "coef": _pair(z)})
            row.append(entry)
        data.append(row)
    return {
        "kind": "laurent-matrix",
        "rows": p.rows,
        "cols": p.cols,
        "nvars": p.nvars,
        "data": data,
    }


def laurent_from_obj(obj: dict) -> LaurentMatrix:
    if obj.get("kind") != "laurent-matrix":
        raise ValueError(f"expected laurent-matrix, got kind {obj.get('kind')!r}")
    rows, cols, nvars = int(obj["rows"]), int(obj["cols"]), int(obj["nvars"])
    terms: dict[tuple, np.ndarray] = {}
    for i, row in enumerate(obj["data"]):
        for j, entry in enumerate(row):
            for term in entry:
                exps = tuple(int(e) for e in term["exps"])
                re, im = term["coef"]
                buf = terms.get(exps)
                if buf is None:
                    buf = np.zeros((rows, cols), dtype=complex)
                    terms[exps] = buf
                buf[i, j] += complex(re, im)
    return laurent(rows, cols, nvars, terms, DEFAULT_TOL)


def cosi_to_obj(s: CosiSet) -> dict:
    return {
        "kind": "cosi-set",
        "dim": s.dim,
        "projectors": [matrix_to_obj(e) for e in s.projectors],
    }


def cosi_from_obj(obj: dict, cfg=DEFAULT_TOL) -> CosiSet:
    if obj.get("kind") != "cosi-set":
        raise ValueError(f"expected cosi-set, got kind {obj.get('kind')!r}")
    return validate([matrix_from_obj(e) for e in obj["projectors"]], cfg)


def tangle_spec_to_obj(spec: TangleSpec) -> dict:
    return {
        "kind": "tangle-spec",
        "side": spec.side,
        "shuffler": to_obj(spec.shuffler),
        "tangles": [to_obj(a) for a in spec.tangles],
    }


def tangle_spec_from_obj(obj: dict) -> TangleSpec:
    if obj.get("kind") != "tangle-spec":
        raise ValueError(f"expected tangle-spec, got kind {obj.get('kind')!r}")
    return TangleSpec(
        side=obj["side"],
        shuffler=from_obj(obj["shuffler"]),
        tangles=tuple(from_obj(a) for a in obj["tangles"]),
    )


def to_obj(value) -> dict:
    if isinstance(value, LaurentMatrix):
        return laurent_to_obj(value)
    if isinstance(value, CosiSet):
        return cosi_to_obj(value)
    if isinstance(value, TangleSpec):
        return tangle_spec_to_obj(value)
    return matrix_to_obj(value)


_LOADERS = {
    "complex-matrix": matrix_from_obj,
    "laurent-matrix": laurent_from_obj,
    "cosi-set": cosi_from_obj,
    "tangle-spec": tangle_spec_from_obj,
}


def from_obj(obj: dict):
    kind = obj.get("kind")
    loader = _LOADERS.get(kind)
    if loader is None:
        raise ValueError(f"unknown kind {kind!r}")
    return loader(obj)


def save(value, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_obj(value), indent=1) + "\n", encoding="utf-8")
    return path


def load(path):
    return from_obj(json.loads(Path(path).read_text(encoding="utf-8")))
