import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sparse_legendre.basis import (IndexSet, envelope, eval_expansion, eval_legendre_1d, eval_legendre_multi,
                                   legendre_matrix, legendre_table, make_total_degree_set, make_window_set)

# frozen with a 30-digit mpmath evaluation of the classical closed forms
L5_AT_03 = 1.14551659899788772113637243692
L2L3_AT = -1.26249142571345806348386785742
ENV_099 = 3.00428957115676039708705299918


def test_constant_polynomial():
    assert eval_legendre_1d(0, 0.37) == 1.0
    assert eval_legendre_1d(0, -1.0) == 1.0


def test_degree_one():
    assert eval_legendre_1d(1, 0.5) == pytest.approx(math.sqrt(3) * 0.5, rel=1e-15)


def test_value_at_one_is_uniform_bound():
    assert eval_legendre_1d(200, 1.0) == pytest.approx(math.sqrt(401), rel=1e-12)


def test_degree_five_closed_form():
    # exact rational coefficients of P_5, then the sqrt(11) normalization
    x = Fraction(3, 10)
    p5 = (63 * x**5 - 70 * x**3 + 15 * x) / 8
    assert float(p5) * math.sqrt(11) == pytest.approx(L5_AT_03, rel=1e-14)
    assert eval_legendre_1d(5, 0.3) == pytest.approx(L5_AT_03, rel=1e-13)


def test_domain_check_and_clamp():
    with pytest.raises(ValueError):
        eval_legendre_1d(3, 1.001)
    assert eval_legendre_1d(3, 1.0 + 1e-13) == pytest.approx(math.sqrt(7), rel=1e-12)
    with pytest.raises(ValueError):
        eval_legendre_1d(3, 1.0 + 1e-6, tol=1e-9)


def test_multi_examples():
    assert eval_legendre_multi((0, 0), (0.2, -0.7)) == 1.0
    a, b = 0.3, -0.8
    assert eval_legendre_multi((1, 1), (a, b)) == pytest.approx(3 * a * b, rel=1e-14)
    assert eval_legendre_multi((2, 3), (0.1, -0.4)) == pytest.approx(L2L3_AT, rel=1e-13)
    with pytest.raises(ValueError):
        eval_legendre_multi((1, 2), (0.1,))


@given(st.lists(st.integers(0, 40), min_size=1, max_size=4).flatmap(
    lambda j: st.tuples(st.just(j), st.lists(st.floats(-1, 1), min_size=len(j), max_size=len(j)))))
@settings(max_examples=60, deadline=None)
def test_tensor_consistency(jy):
    j, y = jy
    prod = 1.0
    for jk, yk in zip(j, y):
        prod *= eval_legendre_1d(jk, yk)
    assert eval_legendre_multi(j, y) == pytest.approx(prod, rel=1e-14, abs=1e-300)


def test_envelope_values():
    assert envelope(0.0) == pytest.approx(2 / math.sqrt(math.pi), rel=1e-15)
    assert envelope(np.array([[0.0, 0.0]]))[0] == pytest.approx(4 / math.pi, rel=1e-15)
    assert envelope(0.99) == pytest.approx(ENV_099, rel=1e-13)
    with pytest.raises(ValueError):
        envelope(1.0)
    with pytest.raises(ValueError):
        envelope(np.array([[0.2, -1.0]]))


def test_orthonormality_gauss_legendre():
    x, w = np.polynomial.legendre.leggauss(80)
    T = legendre_table(60, x)
    G = (T * (w / 2.0)) @ T.T
    assert np.abs(G - np.eye(61)).max() <= 1e-10


def test_uniform_bound_attained_at_one():
    y = np.linspace(-1, 1, 4001)
    T = legendre_table(300, y)
    j = np.arange(301)
    np.testing.assert_allclose(np.abs(T).max(axis=1), np.sqrt(2 * j + 1), rtol=1e-6)


def test_high_degree_is_finite_and_bounded():
    y = np.linspace(-1, 1, 1001)
    T = legendre_table(3000, y)
    assert np.all(np.isfinite(T))
    assert np.abs(T).max() <= math.sqrt(6001) * (1 + 1e-9)


def test_expansion():
    J = IndexSet.from_list([0])
    assert eval_expansion(np.array([1.0]), J, 0.3) == 1.0
    J = make_total_degree_set(2, 3)
    assert eval_expansion(np.zeros(J.size), J, (0.1, 0.2)) == 0.0
    rng = np.random.default_rng(1)
    z = rng.standard_normal(J.size)
    y = (0.31, -0.77)
    brute = sum(zk * eval_legendre_multi(j, y) for zk, j in zip(z, J))
    assert eval_expansion(z, J, y) == pytest.approx(brute, rel=1e-12)
    with pytest.raises(ValueError):
        eval_expansion(z[:-1], J, y)


def test_window_sets():
    J = make_window_set(1, 200)
    assert J.size == 200 and J.dim == 1
    assert list(J.indices[:, 0]) == list(range(1, 201))
    assert make_window_set(301, 500).size == 200
    assert list(make_window_set(5, 5)) == [(5,)]


def test_total_degree_sets():
    assert list(make_total_degree_set(2, 1)) == [(0, 0), (0, 1), (1, 0)]
    assert [j[0] for j in make_total_degree_set(1, 7)] == list(range(8))
    assert make_total_degree_set(3, 4).size == math.comb(7, 3) == 35
    with pytest.raises(ValueError):
        make_total_degree_set(6, 40, cap=1000)


def test_index_set_validation():
    with pytest.raises(ValueError):
        IndexSet.from_list([1, 1])
    with pytest.raises(ValueError):
        IndexSet.from_list([-1])


def test_matrix_column_order_follows_index_set():
    J = IndexSet.from_list([3, 0, 7])
    y = np.array([0.1, -0.5])
    V = legendre_matrix(J, y)
    for k, j in enumerate((3, 0, 7)):
        np.testing.assert_array_equal(V[:, k], [eval_legendre_1d(j, t) for t in y])
