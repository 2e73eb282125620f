import numpy as np
import pytest

from mxforge.core import NotUnitary, cmatrix, identity, is_unitary, roots_of_unity
from mxforge.cosi import (
    BadPartition,
    NotComplete,
    NotFourier,
    NotIdempotent,
    NotOrthogonal,
    NotSelfAdjoint,
    complete,
    conjugate_partition,
    fourier_cosi,
    from_unitary_columns,
    merge,
    merge_conjugates,
    projector_rank,
    rank1_split,
    rotation_cosi,
    validate,
)
from mxforge.tangle import left_tangle

from util import random_unitary

E0 = cmatrix([[0.5, 0.5], [0.5, 0.5]])
E1 = cmatrix([[0.5, -0.5], [-0.5, 0.5]])
Q0 = cmatrix([[0.5, 0.5j], [-0.5j, 0.5]])
Q1 = cmatrix([[0.5, -0.5j], [0.5j, 0.5]])
ONES3 = cmatrix(np.full((3, 3), 1.0 / 3.0))


def circ(first_row):
    a = np.asarray(first_row, dtype=complex)
    n = len(a)
    return cmatrix([[a[(j - i) % n] for j in range(n)] for i in range(n)])


class TestValidate:
    def test_real_pair(self):
        s = validate([E0, E1])
        assert s.dim == 2 and s.size == 2

    def test_complex_pair(self):
        s = validate([Q0, Q1])
        assert s.dim == 2 and s.size == 2

    def test_duplicate_not_orthogonal(self):
        with pytest.raises(NotOrthogonal):
            validate([E0, E0])

    def test_not_idempotent(self):
        with pytest.raises(NotIdempotent):
            validate([2 * E0, E1])

    def test_not_self_adjoint(self):
        m = cmatrix([[1, 1], [0, 0]])  # idempotent but not self-adjoint
        with pytest.raises(NotSelfAdjoint):
            validate([m, identity(2) - m])

    def test_incomplete(self):
        with pytest.raises(NotComplete):
            validate([E0])

    def test_error_carries_residual(self):
        with pytest.raises(NotOrthogonal) as err:
            validate([E0, E0])
        assert err.value.residual == pytest.approx(1.0)

    def test_rank_additivity(self):
        s = validate([E0, E1])
        assert sum(projector_rank(e) for e in s) == s.dim
        f = fourier_cosi(6)
        assert sum(projector_rank(e) for e in f) == 6


class TestFromUnitaryColumns:
    def test_fourier3_projectors(self):
        w = roots_of_unity(3)
        f3 = cmatrix([[1, 1, 1], [1, w[1], w[2]], [1, w[2], w[1]]]) / np.sqrt(3)
        s = from_unitary_columns(f3)
        e2 = cmatrix([[1, w[2], w[1]], [w[1], 1, w[2]], [w[2], w[1], 1]]) / 3.0
        assert np.max(np.abs(s[1] - e2)) < 1e-12

    def test_identity_gives_unit_projectors(self):
        s = from_unitary_columns(identity(4))
        for i in range(4):
            expected = np.zeros((4, 4), dtype=complex)
            expected[i, i] = 1
            assert np.array_equal(s[i], expected)

    def test_tangle_product_columns(self):
        s2 = 1 / np.sqrt(2)
        u = s2 * cmatrix([[1, -1], [1, 1]])
        a = s2 * cmatrix([[1, 1], [1, -1]])
        b = s2 * cmatrix([[1, 1], [1j, -1j]])
        t = left_tangle(u, [a, b])
        s = from_unitary_columns(t)
        assert s.size == 4 and s.dim == 4

    def test_rejects_non_unitary(self):
        with pytest.raises(NotUnitary):
            from_unitary_columns(cmatrix([[1, 1], [1, -1]]))

    def test_projectors_sum_to_identity(self):
        rng = np.random.default_rng(20)
        s = from_unitary_columns(random_unitary(rng, 5))
        assert np.max(np.abs(sum(s) - identity(5))) < 1e-12


class TestFourierCosi:
    def test_n5_circulant_closed_form(self):
        w = roots_of_unity(5)
        s = fourier_cosi(5)
        for i in range(5):
            expected = circ([1, w[(4 * i) % 5], w[(3 * i) % 5], w[(2 * i) % 5], w[i]]) / 5.0
            assert np.max(np.abs(s[i] - expected)) < 1e-12

    def test_n1(self):
        s = fourier_cosi(1)
        assert s.size == 1
        assert np.array_equal(s[0], identity(1))

    def test_n6_all_ones_projector(self):
        s = fourier_cosi(6)
        assert np.max(np.abs(s[0] - circ([1] * 6) / 6.0)) < 1e-12

    def test_validates(self):
        for n in (2, 3, 7):
            validate(list(fourier_cosi(n)))


class TestMerge:
    def test_fourier5_conjugate_groups_real(self):
        s = fourier_cosi(5)
        m = merge(s, [(0,), (1, 4), (2, 3)])
        assert m.size == 3
        assert np.max(np.abs(np.imag(np.stack(list(m))))) < 1e-12

    def test_singleton_partition_identity(self):
        s = fourier_cosi(4)
        m = merge(s, [(0,), (1,), (2,), (3,)])
        for a, b in zip(s, m):
            assert np.array_equal(a, b)

    def test_fourier6_four_groups(self):
        m = merge(fourier_cosi(6), [(0,), (1, 5), (3,), (2, 4)])
        assert m.size == 4
        assert np.max(np.abs(np.imag(np.stack(list(m))))) < 1e-12

    def test_bad_partition_overlap(self):
        with pytest.raises(BadPartition):
            merge(fourier_cosi(4), [(0, 1), (1, 2, 3)])

    def test_bad_partition_missing(self):
        with pytest.raises(BadPartition):
            merge(fourier_cosi(4), [(0, 1), (2,)])

    def test_random_partitions_stay_cosi(self):
        rng = np.random.default_rng(21)
        for n in range(2, 9):
            s = fourier_cosi(n)
            perm = rng.permutation(n)
            cuts = sorted(rng.choice(range(1, n), size=min(2, n - 1), replace=False)) if n > 1 else []
            groups = [tuple(int(x) for x in part) for part in np.split(perm, cuts)]
            merged = merge(s, groups)
            assert merged.size == len(groups)


class TestMergeConjugates:
    def test_n5_cosine_circulants(self):
        theta = 2 * np.pi / 5
        m = merge_conjugates(fourier_cosi(5))
        e1p = 0.4 * circ([1, np.cos(theta), np.cos(2 * theta), np.cos(3 * theta), np.cos(4 * theta)])
        e2p = 0.4 * circ([1, np.cos(2 * theta), np.cos(4 * theta), np.cos(theta), np.cos(3 * theta)])
        assert np.max(np.abs(m[1] - e1p)) < 1e-12
        assert np.max(np.abs(m[2] - e2p)) < 1e-12

    def test_n6_integer_circulants(self):
        m = merge_conjugates(fourier_cosi(6))
        assert np.max(np.abs(m[1] - circ([2, 1, -1, -2, -1, 1]) / 6.0)) < 1e-12
        assert np.max(np.abs(m[2] - circ([2, -1, -1, 2, -1, -1]) / 6.0)) < 1e-12

    def test_n2_unchanged(self):
        s = fourier_cosi(2)
        m = merge_conjugates(s)
        assert m.size == 2
        for a, b in zip(s, m):
            assert np.max(np.abs(a - b)) < 1e-15

    def test_output_real(self):
        for n in (3, 4, 5, 6, 7, 8):
            m = merge_conjugates(fourier_cosi(n))
            assert np.max(np.abs(np.imag(np.stack(list(m))))) <= 1e-12

    def test_rejects_non_fourier(self):
        with pytest.raises(NotFourier):
            merge_conjugates(validate([E0, E1]))

    def test_partition_shape(self):
        assert conjugate_partition(5) == [(0,), (1, 4), (2, 3)]
        assert conjugate_partition(6) == [(0,), (1, 5), (2, 4), (3,)]


class TestComplete:
    def test_example_pair_from_half(self):
        s = complete([E0])
        assert s.size == 2
        assert np.max(np.abs(s[1] - E1)) < 1e-15

    def test_already_complete_unchanged(self):
        s = complete([E0, E1])
        assert s.size == 2

    def test_all_ones_rank2_complement(self):
        s = complete([ONES3])
        assert s.size == 2
        assert projector_rank(s[1]) == 2

    def test_rejects_non_idempotent(self):
        with pytest.raises(NotIdempotent):
            complete([cmatrix([[1, 1], [1, 1]])])


class TestRank1Split:
    def test_rank1_returns_itself(self):
        pieces = rank1_split(E0)
        assert len(pieces) == 1
        assert np.max(np.abs(pieces[0] - E0)) < 1e-12

    def test_identity_splits_in_two(self):
        pieces = rank1_split(identity(2))
        assert len(pieces) == 2
        assert np.max(np.abs(sum(pieces) - identity(2))) < 1e-12

    def test_rank2_complement_pieces(self):
        e = identity(3) - ONES3
        pieces = rank1_split(e)
        assert len(pieces) == 2
        assert np.max(np.abs(sum(pieces) - e)) < 1e-10
        assert np.max(np.abs(pieces[0] @ pieces[1])) < 1e-10
        for p in pieces:
            assert projector_rank(p) == 1

    def test_rejects_non_idempotent(self):
        with pytest.raises(NotIdempotent):
            rank1_split(cmatrix([[2, 0], [0, 0]]))


class TestRotationCosi:
    def test_quarter_turn_matches_pair(self):
        s = rotation_cosi(-np.pi / 4)
        assert np.max(np.abs(s[0] - E0)) < 1e-15
        assert np.max(np.abs(s[1] - E1)) < 1e-15

    def test_zero_angle_diagonal(self):
        s = rotation_cosi(0.0)
        assert np.array_equal(s[0], np.diag([1.0, 0.0]).astype(complex))

    def test_sum_exactly_identity(self):
        for theta in (-1.2, 0.3, 2.9):
            s = rotation_cosi(theta)
            assert np.array_equal(s[0] + s[1], identity(2))

    def test_validates(self):
        rng = np.random.default_rng(22)
        for theta in rng.uniform(-np.pi, np.pi, size=5):
            validate(list(rotation_cosi(theta)))


class TestConstructorsValidate:
    """Every constructor output satisfies all four axioms."""

    def test_fourier(self):
        for n in (2, 4, 5):
            validate(list(fourier_cosi(n)))

    def test_columns(self):
        rng = np.random.default_rng(23)
        validate(list(from_unitary_columns(random_unitary(rng, 4))))

    def test_merge_conjugates(self):
        validate(list(merge_conjugates(fourier_cosi(7))))
