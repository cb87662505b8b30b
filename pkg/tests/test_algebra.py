import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from cmrmatrix.algebra import (
    Root,
    basis_element,
    bracket_action,
    cybe_residual,
    expand_in_basis,
    gl_basis,
    swap_factors,
    tensor_product,
    to_matrix,
)
from oracles import dense_cybe, e, three_tensor_as_matrix


def int_tensor(n):
    return arrays(np.int64, (n,) * 4, elements=st.integers(-3, 3))


class TestBasis:
    def test_E_alpha_is_elementary(self):
        np.testing.assert_array_equal(basis_element("E", Root(0, 1), 2), [[0, 1], [0, 0]])

    def test_H_alpha(self):
        np.testing.assert_array_equal(basis_element("H_alpha", Root(0, 1), 2), np.diag([1, -1]))

    def test_K_alpha_symmetric_under_negation(self):
        K = basis_element("K_alpha", Root(1, 0), 3)
        np.testing.assert_array_equal(K, np.diag([1, 1, 0]))
        np.testing.assert_array_equal(K, basis_element("K_alpha", -Root(1, 0), 3))

    def test_H_k(self):
        np.testing.assert_array_equal(basis_element("H", 2, 3), np.diag([0, 0, 1]))

    def test_invalid_root(self):
        with pytest.raises(ValueError):
            Root(1, 1)
        with pytest.raises(IndexError):
            basis_element("E", Root(0, 3), 3)
        with pytest.raises(IndexError):
            basis_element("H", 5, 3)

    def test_root_negation_and_evaluation(self):
        a = Root(0, 2)
        assert -a == Root(2, 0)
        assert a(np.diag([3.0, 1.0, -4.0])) == 7.0

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_basis_reconstructs_random_matrix(self, n, rng):
        X = rng.normal(size=(n, n))
        coeffs = expand_in_basis(X)
        np.testing.assert_allclose(sum(c * b for c, b in zip(coeffs, gl_basis(n))), X, atol=1e-14)
        assert len(gl_basis(n)) == n * n


class TestTensorProduct:
    def test_identity(self):
        T = tensor_product(np.eye(2, dtype=int), np.eye(2, dtype=int))
        for i in range(2):
            for k in range(2):
                assert T[i, i, k, k] == 1
        assert T.sum() == 4

    def test_single_entry(self):
        T = tensor_product(e(2, 0, 0), e(2, 0, 1))
        assert T[0, 0, 0, 1] == 1 and T.sum() == 1

    def test_bilinear(self):
        T = tensor_product(2 * e(2, 0, 1), 3 * e(2, 1, 0))
        assert T[0, 1, 1, 0] == 6 and np.count_nonzero(T) == 1

    def test_matches_kron(self, rng):
        A, B = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
        np.testing.assert_allclose(to_matrix(tensor_product(A, B)), np.kron(A, B))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tensor_product(np.eye(2), np.eye(3))


class TestSwap:
    def test_swaps_decomposable(self, rng):
        A, B = rng.normal(size=(3, 3)), rng.normal(size=(3, 3))
        np.testing.assert_array_equal(swap_factors(tensor_product(A, B)), tensor_product(B, A))

    @given(int_tensor(3))
    def test_involution(self, T):
        np.testing.assert_array_equal(swap_factors(swap_factors(T)), T)

    def test_antisymmetric(self):
        T = tensor_product(e(2, 0, 0), e(2, 0, 1)) - tensor_product(e(2, 0, 1), e(2, 0, 0))
        np.testing.assert_array_equal(swap_factors(T), -T)


class TestBracketAction:
    def test_decomposable_slot1(self, rng):
        A, B, C = (rng.normal(size=(3, 3)) for _ in range(3))
        np.testing.assert_allclose(bracket_action(tensor_product(A, B), C, 1), tensor_product(A @ C - C @ A, B),
                                   atol=1e-13)

    def test_decomposable_slot2(self, rng):
        A, B, C = (rng.normal(size=(3, 3)) for _ in range(3))
        np.testing.assert_allclose(bracket_action(tensor_product(A, B), C, 2), tensor_product(A, B @ C - C @ B),
                                   atol=1e-13)

    def test_matches_dense_commutator(self, rng):
        n = 3
        T = rng.normal(size=(n,) * 4)
        A = rng.normal(size=(n, n))
        M = to_matrix(T)
        for slot, big in ((1, np.kron(A, np.eye(n))), (2, np.kron(np.eye(n), A))):
            np.testing.assert_allclose(to_matrix(bracket_action(T, A, slot)), M @ big - big @ M, atol=1e-12)

    def test_identity_is_central(self, rng):
        T = rng.normal(size=(3,) * 4)
        assert np.abs(bracket_action(T, np.eye(3), 1)).max() == 0

    def test_self_commutator_vanishes(self):
        T = tensor_product(e(2, 0, 0), e(2, 0, 1))
        assert not np.any(bracket_action(T, e(2, 0, 1), 2))

    @given(int_tensor(2), arrays(np.int64, (2, 2), elements=st.integers(-3, 3)),
           arrays(np.int64, (2, 2), elements=st.integers(-3, 3)), st.sampled_from([1, 2]))
    def test_linear_in_matrix(self, T, A, B, slot):
        np.testing.assert_array_equal(
            bracket_action(T, A, slot) + bracket_action(T, B, slot), bracket_action(T, A + B, slot)
        )

    def test_bad_slot(self):
        with pytest.raises(ValueError):
            bracket_action(np.zeros((2,) * 4), np.eye(2), 3)


class TestCYBE:
    def test_zero(self):
        _, r = cybe_residual(np.zeros((3,) * 4, dtype=np.int64))
        assert r == 0

    def test_constant_r_n2_exact(self):
        R = tensor_product(e(2, 0, 0), e(2, 0, 1)) - tensor_product(e(2, 0, 1), e(2, 0, 0))
        X, r = cybe_residual(R)
        assert X.dtype == np.int64
        assert r == 0

    def test_non_solution(self):
        R = tensor_product(e(2, 0, 1), e(2, 1, 0))
        X, r = cybe_residual(R)
        # dense Kronecker oracle gives max |entry| = 1 on two entries
        assert r == 1
        assert np.count_nonzero(X) == 2
        np.testing.assert_array_equal(three_tensor_as_matrix(X), dense_cybe(R))

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 3).flatmap(int_tensor))
    def test_matches_dense_oracle(self, R):
        X, _ = cybe_residual(R)
        np.testing.assert_array_equal(three_tensor_as_matrix(X), dense_cybe(R))

    def test_float_path_matches_integer_path(self, rng):
        R = rng.integers(-2, 3, size=(3,) * 4)
        Xi, _ = cybe_residual(R)
        Xf, _ = cybe_residual(R.astype(float))
        np.testing.assert_array_equal(Xi, Xf)
