import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse_legendre.basis import IndexSet, eval_legendre_1d, make_window_set
from sparse_legendre.measurement import (SparseSignal, assemble, assemble_preconditioned, gen_sparse_signal, observe,
                                         preconditioner, read_matrix_csv, read_signal_csv, write_matrix_csv,
                                         write_signal_csv)
from sparse_legendre.sampling import SampleSet, draw_chebyshev, draw_uniform


def test_constant_column():
    Q = draw_uniform(9, 1, 1)
    A = assemble(IndexSet.from_list([0]), Q)
    np.testing.assert_allclose(A.matrix[:, 0], 1 / 3, rtol=1e-15)
    assert (A.rows, A.cols, A.preconditioned) == (9, 1, False)


def test_entries_match_definition():
    Q = SampleSet(np.array([0.25, -0.6]))
    A = assemble(make_window_set(1, 3), Q)
    for i, y in enumerate((0.25, -0.6)):
        for k, j in enumerate((1, 2, 3)):
            assert A.matrix[i, k] == pytest.approx(eval_legendre_1d(j, y) / math.sqrt(2), rel=1e-15)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        assemble(make_window_set(0, 3), draw_uniform(5, 2, 0))
    with pytest.raises(ValueError):
        assemble_preconditioned(make_window_set(0, 3), draw_uniform(5, 1, 0))


def test_column_norms_near_one():
    A = assemble(make_window_set(0, 20), draw_uniform(5000, 1, 4)).matrix
    n2 = (A * A).sum(axis=0)
    assert np.all((0.9 <= n2) & (n2 <= 1.1))
    P = assemble_preconditioned(make_window_set(0, 20), draw_chebyshev(5000, 1, 4)).matrix
    n2 = (P * P).sum(axis=0)
    assert np.all((0.9 <= n2) & (n2 <= 1.1))


def test_gram_close_to_identity():
    A = assemble(make_window_set(0, 10), draw_uniform(200_000, 1, 5)).matrix
    assert np.abs(A.T @ A - np.eye(11)).max() <= 0.05


def test_preconditioned_constant_column():
    Q = draw_chebyshev(7, 1, 3)
    A = assemble_preconditioned(IndexSet.from_list([0]), Q)
    expect = math.sqrt(math.pi / 2) * (1 - Q.points[:, 0] ** 2) ** 0.25 / math.sqrt(7)
    np.testing.assert_allclose(A.matrix[:, 0], expect, rtol=1e-14)
    assert A.preconditioned


def test_preconditioned_uniform_bound():
    Q = draw_chebyshev(4000, 1, 8)
    A = assemble_preconditioned(make_window_set(0, 2000), Q)
    top = np.abs(A.matrix).max() * math.sqrt(Q.m)
    # sqrt(pi/2) (1-y^2)^(1/4) |L_j(y)| <= sqrt(pi/2) * 2/sqrt(pi) = sqrt(2)
    assert top <= math.sqrt(2) + 1e-9
    assert top <= math.sqrt(3) + 1e-9


def test_preconditioner_multivariate():
    w = preconditioner(np.array([[0.0, 0.0], [0.6, 0.0]]))
    assert w[0] == pytest.approx(math.pi / 2)
    assert w[1] == pytest.approx(math.pi / 2 * 0.64**0.25)


def test_signal_generation():
    c = gen_sparse_signal(10, 10, 3)
    assert list(c.support) == list(range(10))
    a, b = gen_sparse_signal(360, 14, 1), gen_sparse_signal(360, 14, 2)
    assert not np.array_equal(a.support, b.support)
    np.testing.assert_array_equal(a.dense(), gen_sparse_signal(360, 14, 1).dense())
    assert np.count_nonzero(a.dense()) == 14
    with pytest.raises(ValueError):
        gen_sparse_signal(5, 6, 0)


def test_signal_value_moments():
    v = np.concatenate([gen_sparse_signal(50, 10, s).values for s in range(1000)])
    assert abs(v.mean()) <= 0.04
    assert abs(v.var() - 1) <= 0.06


def test_signal_validation():
    with pytest.raises(ValueError):
        SparseSignal(5, np.array([1, 1]), np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        SparseSignal(5, np.array([1]), np.array([0.0]))


def test_observe():
    A = assemble(make_window_set(0, 29), draw_uniform(12, 1, 0))
    c = gen_sparse_signal(30, 4, 5)
    g = observe(A, c).values
    np.testing.assert_array_equal(g, A.matrix @ c.dense())
    noisy = observe(A, c, eta=0.1, seed=3)
    assert np.linalg.norm(noisy.values - g) == pytest.approx(0.1, abs=1e-12)
    assert noisy.noise_level == 0.1
    assert not np.any(observe(A, np.zeros(30)).values)
    with pytest.raises(ValueError):
        observe(A, np.zeros(29))
    with pytest.raises(ValueError):
        observe(A, c, eta=-1.0)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_linearity(s1, s2):
    A = assemble(make_window_set(0, 39), draw_uniform(15, 1, 77))
    c1, c2 = gen_sparse_signal(40, 5, s1).dense(), gen_sparse_signal(40, 3, s2).dense()
    lhs = observe(A, c1 + c2).values
    rhs = observe(A, c1).values + observe(A, c2).values
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.abs(rhs).max())


def test_csv_round_trips(tmp_path):
    A = assemble_preconditioned(make_window_set(3, 9), draw_chebyshev(5, 1, 2))
    write_matrix_csv(A, tmp_path / "a.csv")
    B = read_matrix_csv(tmp_path / "a.csv")
    np.testing.assert_array_equal(A.matrix, B.matrix)
    assert B.preconditioned and B.sample_id == A.sample_id
    c = gen_sparse_signal(20, 3, 8)
    write_signal_csv(c, tmp_path / "c.csv")
    d = read_signal_csv(tmp_path / "c.csv")
    np.testing.assert_array_equal(c.dense(), d.dense())
