"""Shared test helpers: random generators and independent oracles.

The oracles here deliberately avoid the library's own code paths:
matrix products by triple loop, determinants by cofactor expansion,
Laurent products by entry-wise polynomial convolution.
"""

import numpy as np

from mxforge.core import LaurentMatrix


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(random_complex(rng, (n, n)))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unit_scalars(rng, shape):
    return np.exp(2j * np.pi * rng.random(shape))


def random_latin_square_grid(rng, k):
    """Random Latin square as nested tuples, from the cyclic square by a
    symbol relabeling plus row and column permutations."""
    relabel = rng.permutation(k)
    rows = rng.permutation(k)
    cols = rng.permutation(k)
    return tuple(
        tuple(int(relabel[(rows[i] + cols[j]) % k]) for j in range(k)) for i in range(k)
    )


def naive_matmul(a, b):
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=complex)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            acc = 0.0 + 0.0j
            for k in range(a.shape[1]):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc
    return out


def cofactor_det(m):
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 1:
        return m[0, 0]
    total = 0.0 + 0.0j
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += ((-1) ** j) * m[0, j] * cofactor_det(minor)
    return total


def entry_polys(p: LaurentMatrix):
    """Entry-wise view of a Laurent matrix: grid of {exps: coef} dicts."""
    out = [[{} for _ in range(p.cols)] for _ in range(p.rows)]
    for e, c in p.terms.items():
        for i in range(p.rows):
            for j in range(p.cols):
                if c[i, j] != 0:
                    out[i][j][e] = out[i][j].get(e, 0.0) + c[i, j]
    return out


def naive_laurent_mul(p: LaurentMatrix, q: LaurentMatrix):
    """Entry-wise polynomial convolution oracle for the Laurent product."""
    a, b = entry_polys(p), entry_polys(q)
    out = [[{} for _ in range(q.cols)] for _ in range(p.rows)]
    for i in range(p.rows):
        for j in range(q.cols):
            acc = {}
            for k in range(p.cols):
                for e1, c1 in a[i][k].items():
                    for e2, c2 in b[k][j].items():
                        e = tuple(x + y for x, y in zip(e1, e2))
                        acc[e] = acc.get(e, 0.0) + c1 * c2
            out[i][j] = acc
    return out


def poly_grid_residual(grid_a, grid_b):
    """Max coefficient difference between two entry-wise polynomial grids."""
    res = 0.0
    for row_a, row_b in zip(grid_a, grid_b):
        for pa, pb in zip(row_a, row_b):
            for e in set(pa) | set(pb):
                res = max(res, abs(pa.get(e, 0.0) - pb.get(e, 0.0)))
    return res


def random_laurent(rng, rows, cols, nvars, nterms=3, span=2):
    """Random Laurent matrix with dense random coefficient matrices."""
    from mxforge.core import laurent

    terms = {}
    for _ in range(nterms):
        exps = tuple(int(x) for x in rng.integers(-span, span + 1, size=nvars))
        terms[exps] = terms.get(exps, 0) + random_complex(rng, (rows, cols))
    return laurent(rows, cols, nvars, terms)


def unitary_residual(m):
    m = np.asarray(m, dtype=complex)
    return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))
