"""Tensor-leg algebra: embeddings, permutations, traces, the T-basis."""

import numpy as np
import pytest

from aybelab import tensor
from aybelab.tensor import (
    TensorOp,
    belavin_Q,
    belavin_T,
    from_factors,
    identity_op,
    leg_embed,
    matrix_unit,
    partial_trace,
    permutation_P,
)


def rand_mat(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_shape_and_finiteness_checks():
    with pytest.raises(ValueError):
        TensorOp(2, 2, np.eye(3))
    with pytest.raises(ValueError):
        TensorOp(2, 1, np.array([[np.nan, 0], [0, 1]]))


def test_from_factors_and_permute():
    rng = np.random.default_rng(1)
    a, b, c = (rand_mat(rng, 2) for _ in range(3))
    abc = from_factors(a, b, c)
    bca = from_factors(b, c, a)
    # placing old leg 2 first, then 3, then 1
    assert (abc.permute_legs((2, 3, 1)) - bca).norm() < 1e-13


def test_swap_is_conjugation_by_P():
    rng = np.random.default_rng(2)
    n = 3
    op = TensorOp(n, 2, rand_mat(rng, n * n))
    p = permutation_P(n)
    assert (op.swap() - p @ op @ p).norm() < 1e-13


def test_permutation_P_action():
    n = 3
    p = permutation_P(n).mat
    rng = np.random.default_rng(3)
    v, w = rng.normal(size=n), rng.normal(size=n)
    assert np.allclose(p @ np.kron(v, w), np.kron(w, v))


def test_leg_embed_positions():
    rng = np.random.default_rng(4)
    a, b = rand_mat(rng, 2), rand_mat(rng, 2)
    ab = from_factors(a, b)
    e = np.eye(2)
    # [1,3] of 3 legs: a on leg 1, b on leg 3
    direct = from_factors(a, e, b)
    assert (leg_embed(ab, [1, 3], 3) - direct).norm() < 1e-13
    # reversed positions transpose the components
    direct = from_factors(b, e, a)
    assert (leg_embed(ab, [3, 1], 3) - direct).norm() < 1e-13


def test_leg_embed_multiplicativity():
    rng = np.random.default_rng(5)
    n = 2
    x = TensorOp(n, 2, rand_mat(rng, n * n))
    y = TensorOp(n, 2, rand_mat(rng, n * n))
    lhs = leg_embed(x @ y, [2, 3], 4)
    rhs = leg_embed(x, [2, 3], 4) @ leg_embed(y, [2, 3], 4)
    assert (lhs - rhs).norm() < 1e-12


def test_partial_trace():
    rng = np.random.default_rng(6)
    a, b = rand_mat(rng, 3), rand_mat(rng, 3)
    ab = from_factors(a, b)
    t2 = partial_trace(ab, [2])
    assert np.allclose(t2.mat, a * np.trace(b))
    t12 = partial_trace(ab, [1, 2])
    assert abs(t12 - np.trace(a) * np.trace(b)) < 1e-12
    # tr_2(P (x) 1 * A_2) = A placed on leg 1
    n = 3
    p = permutation_P(n)
    a1 = leg_embed(TensorOp(n, 1, a), [2], 2)
    assert (partial_trace(p @ a1, [2]) - TensorOp(n, 1, a)).norm() < 1e-13


def test_belavin_Q_exchange_relation():
    for n in (2, 3, 5):
        q1, q2 = belavin_Q(n)
        lhs = q2 @ q1
        rhs = np.exp(2j * np.pi / n) * q1 @ q2
        assert np.max(np.abs(lhs - rhs)) < 1e-13
        assert np.max(np.abs(np.linalg.matrix_power(q1, n) - np.eye(n))) < 1e-12
        assert np.max(np.abs(np.linalg.matrix_power(q2, n) - np.eye(n))) < 1e-12


def test_belavin_T_n2_is_pauli():
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    assert np.max(np.abs(belavin_T(2, 0, 0) - np.eye(2))) < 1e-14
    assert np.max(np.abs(belavin_T(2, 1, 0) + s3)) < 1e-14
    assert np.max(np.abs(belavin_T(2, 0, 1) - s1)) < 1e-14
    assert np.max(np.abs(belavin_T(2, 1, 1) - s2)) < 1e-14


def test_belavin_T_trace_pairing():
    for n in (2, 3):
        for a1 in range(n):
            for a2 in range(n):
                for b1 in range(n):
                    for b2 in range(n):
                        tr = np.trace(belavin_T(n, a1, a2) @ belavin_T(n, b1, b2))
                        if (a1 + b1) % n == 0 and (a2 + b2) % n == 0:
                            assert abs(abs(tr) - n) < 1e-12
                        else:
                            assert abs(tr) < 1e-12


def test_belavin_T_formal_negative():
    # T_{-a} built from signed indices inverts T_a up to the trace pairing
    for n in (2, 3, 4):
        for a1 in range(n):
            for a2 in range(n):
                prod = belavin_T(n, a1, a2) @ belavin_T(n, -a1, -a2)
                assert np.max(np.abs(prod - np.eye(n))) < 1e-12


def test_matrix_unit():
    e = matrix_unit(3, 0, 2)
    assert e[0, 2] == 1.0 and np.count_nonzero(e) == 1


def test_commutator_and_norm():
    rng = np.random.default_rng(8)
    x = TensorOp(2, 1, rand_mat(rng, 2))
    assert x.commutator(x).norm() < 1e-15
    assert identity_op(2).norm() == 1.0
