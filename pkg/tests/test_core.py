import numpy as np
import pytest

from mxforge.core import (
    DEFAULT_TOL,
    ArityMismatch,
    DimensionMismatch,
    MatrixError,
    NonSquare,
    ToleranceConfig,
    VariableCountMismatch,
    adjoint,
    cmatrix,
    determinant,
    direct_sum,
    identity,
    is_paraunitary,
    is_unitary,
    laurent,
    laurent_eval,
    laurent_from_const,
    laurent_identity,
    laurent_monomial,
    laurent_mul,
    laurent_residual,
    matmul,
    para_adjoint,
    tensor,
)
from mxforge import builders, cosi
from mxforge.tangle import left_tangle

from util import (
    cofactor_det,
    entry_polys,
    naive_laurent_mul,
    naive_matmul,
    poly_grid_residual,
    random_complex,
    random_laurent,
    random_unitary,
)

E0 = cmatrix([[0.5, 0.5], [0.5, 0.5]])
E1 = cmatrix([[0.5, -0.5], [-0.5, 0.5]])
H4 = 0.5 * cmatrix([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1], [-1, 1, 1, 1]])


class TestToleranceConfig:
    def test_defaults(self):
        cfg = ToleranceConfig()
        assert cfg.verify_tol == 1e-9
        assert cfg.prune_tol == 1e-12

    @pytest.mark.parametrize("verify,prune", [(1e-9, 1e-9), (1e-9, 0.0), (2.0, 1e-12), (1e-13, 1e-12)])
    def test_invalid(self, verify, prune):
        with pytest.raises(ValueError):
            ToleranceConfig(verify_tol=verify, prune_tol=prune)


class TestCmatrix:
    def test_rejects_nan(self):
        with pytest.raises(MatrixError):
            cmatrix([[np.nan, 0], [0, 1]])

    def test_rejects_scalar(self):
        with pytest.raises(MatrixError):
            cmatrix(3.0)


class TestAdjoint:
    def test_identity(self):
        assert np.array_equal(adjoint(identity(3)), identity(3))

    def test_pauli_y_self_adjoint(self):
        sy = cmatrix([[0, 1j], [-1j, 0]])
        assert np.array_equal(adjoint(sy), sy)

    def test_rectangular(self):
        m = cmatrix([[1, 2j]])
        assert np.array_equal(adjoint(m), cmatrix([[1], [-2j]]))

    def test_involution(self):
        rng = np.random.default_rng(7)
        m = random_complex(rng, (3, 5))
        assert np.array_equal(adjoint(adjoint(m)), m)


class TestMatmul:
    def test_identity_neutral(self):
        rng = np.random.default_rng(0)
        x = random_complex(rng, (2, 4))
        assert np.allclose(matmul(identity(2), x), x)

    def test_cosi_pair_orthogonal(self):
        assert np.allclose(matmul(E0, E1), np.zeros((2, 2)))

    def test_against_triple_loop(self):
        rng = np.random.default_rng(1)
        a = random_complex(rng, (3, 3))
        b = random_complex(rng, (3, 3))
        assert np.max(np.abs(matmul(a, b) - naive_matmul(a, b))) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            matmul(identity(2), identity(3))

    def test_associativity(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            a, b, c = (random_complex(rng, (3, 3)) for _ in range(3))
            lhs = matmul(matmul(a, b), c)
            rhs = matmul(a, matmul(b, c))
            assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestDeterminant:
    def test_identity(self):
        assert determinant(identity(3)) == pytest.approx(1.0)

    def test_2x2_closed_form(self):
        assert determinant(cmatrix([[1, 1], [1, -1]])) == pytest.approx(-2.0)

    def test_against_cofactor(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            m = random_complex(rng, (4, 4))
            d = determinant(m)
            o = cofactor_det(m)
            assert abs(d - o) / abs(o) < 1e-10

    def test_triangular_exact(self):
        t = cmatrix([[2, 5, -1], [0, 3, 4], [0, 0, 0.5]])
        assert determinant(t) == pytest.approx(3.0, abs=1e-14)

    def test_non_square(self):
        with pytest.raises(NonSquare):
            determinant(cmatrix([[1, 2, 3], [4, 5, 6]]))

    def test_multiplicativity(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            a = random_complex(rng, (4, 4))
            b = random_complex(rng, (4, 4))
            lhs = determinant(matmul(a, b))
            rhs = determinant(a) * determinant(b)
            assert abs(lhs - rhs) / abs(rhs) < 1e-9


class TestTensorDirectSum:
    def test_tensor_identity_gives_copies(self):
        rng = np.random.default_rng(5)
        b = random_complex(rng, (2, 2))
        assert np.allclose(tensor(identity(2), b), direct_sum(b, b))

    def test_tensor_det_law(self):
        rng = np.random.default_rng(6)
        u = random_complex(rng, (2, 2))
        a = random_complex(rng, (3, 3))
        lhs = determinant(tensor(u, a))
        rhs = determinant(u) ** 3 * determinant(a) ** 2
        assert abs(lhs - rhs) / abs(rhs) < 1e-9

    def test_tensor_is_left_tangle_special_case(self):
        rng = np.random.default_rng(7)
        a = random_complex(rng, (2, 3))
        b = random_complex(rng, (2, 2))
        assert np.allclose(tensor(a, b), left_tangle(a, [b, b, b]))

    def test_direct_sum_1x1(self):
        assert np.array_equal(direct_sum(cmatrix([[2]]), cmatrix([[3j]])), np.diag([2, 3j]))

    def test_direct_sum_unitary(self):
        rng = np.random.default_rng(8)
        u, v = random_unitary(rng, 2), random_unitary(rng, 3)
        assert is_unitary(direct_sum(u, v))

    def test_direct_sum_is_left_tangle_special_case(self):
        rng = np.random.default_rng(9)
        a = random_complex(rng, (2, 2))
        b = random_complex(rng, (2, 2))
        assert np.allclose(direct_sum(a, b), left_tangle(identity(2), [a, b]))


class TestIsUnitary:
    def test_scaled_hadamard(self):
        assert is_unitary(cmatrix([[1, 1], [1, -1]]) / np.sqrt(2))

    def test_unscaled_hadamard(self):
        assert not is_unitary(cmatrix([[1, 1], [1, -1]]))

    def test_example_one_matrix(self):
        assert is_unitary(H4)

    def test_non_square(self):
        assert not is_unitary(cmatrix([[1, 0, 0], [0, 1, 0]]))


class TestParaAdjoint:
    def test_constant_reduces_to_adjoint(self):
        rng = np.random.default_rng(10)
        c = random_complex(rng, (3, 3))
        p = para_adjoint(laurent_from_const(c, nvars=2))
        assert np.array_equal(p.constant_term(), adjoint(c))

    def test_projector_monomial(self):
        p = para_adjoint(laurent_monomial(E0, (1,)))
        assert list(p.terms) == [(-1,)]
        assert np.allclose(p.terms[(-1,)], E0)

    def test_involution(self):
        rng = np.random.default_rng(11)
        p = random_laurent(rng, 3, 2, nvars=2)
        assert laurent_residual(para_adjoint(para_adjoint(p)), p) == 0.0


class TestLaurentMul:
    def test_identity_neutral(self):
        rng = np.random.default_rng(12)
        p = random_laurent(rng, 2, 2, nvars=1)
        assert laurent_residual(laurent_mul(p, laurent_identity(2, 1)), p) < 1e-15

    def test_cosi_shift_pair_gives_identity(self):
        u = laurent(2, 2, 1, {(1,): E0, (0,): E1})
        v = laurent(2, 2, 1, {(-1,): E0, (0,): E1})
        prod = laurent_mul(u, v)
        assert laurent_residual(prod, laurent_identity(2, 1)) < 1e-15

    def test_against_convolution_oracle(self):
        rng = np.random.default_rng(13)
        p = random_laurent(rng, 2, 2, nvars=1, nterms=4)
        q = random_laurent(rng, 2, 2, nvars=1, nterms=4)
        got = entry_polys(laurent_mul(p, q))
        want = naive_laurent_mul(p, q)
        assert poly_grid_residual(got, want) < 1e-12

    def test_shape_error(self):
        p = random_laurent(np.random.default_rng(0), 2, 3, nvars=1)
        q = random_laurent(np.random.default_rng(1), 2, 2, nvars=1)
        with pytest.raises(DimensionMismatch):
            laurent_mul(p, q)

    def test_nvars_error(self):
        p = random_laurent(np.random.default_rng(0), 2, 2, nvars=1)
        q = random_laurent(np.random.default_rng(1), 2, 2, nvars=2)
        with pytest.raises(VariableCountMismatch):
            laurent_mul(p, q)

    def test_pruning(self):
        tiny = laurent(1, 1, 1, {(0,): [[1e-15]]})
        assert tiny.terms == {}


class TestLaurentEval:
    def test_all_ones_point_sums_coefficients(self):
        rng = np.random.default_rng(14)
        p = random_laurent(rng, 2, 2, nvars=3)
        total = sum(p.terms.values())
        assert np.allclose(laurent_eval(p, (1, 1, 1)), total)

    def test_paraunitary_eval_is_unitary(self):
        u = laurent(2, 2, 1, {(2,): E0, (5,): E1})
        z = np.exp(0.7j)
        assert is_unitary(laurent_eval(u, (z,)))

    def test_homomorphism(self):
        rng = np.random.default_rng(15)
        p = random_laurent(rng, 2, 2, nvars=2)
        q = random_laurent(rng, 2, 2, nvars=2)
        x = np.exp(2j * np.pi * rng.random(2))
        lhs = laurent_eval(laurent_mul(p, q), x)
        rhs = matmul(laurent_eval(p, x), laurent_eval(q, x))
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_para_adjoint_evaluates_to_adjoint(self):
        # at unit-modulus points, z^{-1} is conj(z)
        rng = np.random.default_rng(16)
        p = random_laurent(rng, 3, 3, nvars=2)
        x = np.exp(2j * np.pi * rng.random(2))
        lhs = laurent_eval(para_adjoint(p), x)
        rhs = adjoint(laurent_eval(p, x))
        assert np.max(np.abs(lhs - rhs)) < 1e-12

    def test_arity_error(self):
        p = random_laurent(np.random.default_rng(0), 2, 2, nvars=2)
        with pytest.raises(ArityMismatch):
            laurent_eval(p, (1,))


class TestIsParaunitary:
    def test_shifted_cosi_pair(self):
        u = laurent(2, 2, 1, {(2,): E0, (5,): E1})
        assert is_paraunitary(u)

    def test_repeated_projector_fails(self):
        u = laurent(2, 2, 1, {(1,): E0, (3,): E0})
        assert not is_paraunitary(u)

    def test_fourier5_multivar(self):
        s = cosi.fourier_cosi(5)
        u = builders.cosi_poly(s, builders.MultiVar())
        assert is_paraunitary(u)

    def test_rectangular_is_false(self):
        p = random_laurent(np.random.default_rng(0), 2, 3, nvars=1)
        assert not is_paraunitary(p)
