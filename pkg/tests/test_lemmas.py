import math

import pytest

from sparse_legendre.lemmas import (LemmaConfig, all_passed, check_integral_multi, check_tail_1d,
                                    end_set_integral_1d, integral_1d, integral_1d_bound, lemma_validators)

# int exp(-beta sqrt(1-y^2)) (1-y^2)^(-tau) dy/2 over [-1, 1], 30-digit mpmath quadrature in y
INTEGRAL_1D = {
    (1, 0.0): 0.46845081220429197410968173383,
    (1, 0.25): 0.599132424754792130420541154658,
    (1, 0.5): 0.873084242650867538972045403262,
    (10, 0.0): 0.0103692657413801339669934335761,
    (10, 0.25): 0.0286420802424122085827706727157,
    (10, 0.5): 0.101126440701316654234030530216,
    (50, 0.0): 0.000400482921378802309566894609568,
    (50, 0.25): 0.00250851723700656688242707469896,
    (50, 0.5): 0.0200080290938372027443143470962,
}
END_SET_004 = 0.256376867395899724652988603322  # int of Omega^2 over [0.92, 1], uniform measure


@pytest.fixture(scope="module")
def report():
    return lemma_validators(LemmaConfig())


@pytest.mark.parametrize("key", sorted(INTEGRAL_1D))
def test_integral_1d_quadrature(key):
    beta, tau = key
    val, err = integral_1d(beta, tau)
    assert val == pytest.approx(INTEGRAL_1D[key], rel=1e-10)
    assert val <= integral_1d_bound(beta, tau)


def test_integral_1d_bound_closed_form():
    assert integral_1d_bound(50, 0.25) == pytest.approx(2 * math.gamma(1.5) * 50**-1.5, rel=1e-15)
    assert integral_1d_bound(50, 0.5) == pytest.approx(0.04, rel=1e-15)


def test_end_set_quadrature():
    val, _ = end_set_integral_1d(0.04)
    assert val == pytest.approx(END_SET_004, rel=1e-10)
    assert val <= 0.4
    assert end_set_integral_1d(1.0)[0] == pytest.approx(2.0, rel=1e-10)


def test_tail_1d_example():
    row = check_tail_1d(2.0, LemmaConfig())
    assert row.rhs == pytest.approx(0.10132118364233777144, rel=1e-14)
    assert row.passed


def test_budget_guard():
    with pytest.raises(ValueError):
        LemmaConfig(n_samples=99_999)


def test_every_bounded_lemma_passes(report):
    failed = [r for r in report if r.passed is False]
    assert not failed, failed
    assert all_passed(report)


def test_coverage(report):
    names = {r.lemma for r in report}
    assert {"tail_1d", "end_set_1d", "integral_1d", "good_set_1d", "tail_multi_lower", "tail_multi_upper",
            "end_set_multi", "v_d_lower", "v_d_upper", "integral_multi_constant", "integral_multi_stability",
            "good_set_multi"} <= names
    taus = {r.params.split("tau=")[1] for r in report if r.lemma == "integral_1d"}
    assert taus == {"0.0", "0.25", "0.5"}


def test_constant_rows_are_reports(report):
    consts = [r for r in report if r.lemma == "integral_multi_constant"]
    assert consts and all(r.passed is None for r in consts)
    assert all(r.lhs > 0 for r in consts)


def test_constant_stable_in_two_dimensions(report):
    rows = [r for r in report if r.lemma == "integral_multi_stability" and r.params.startswith("d=2")]
    assert len(rows) == 3
    assert all(r.passed and r.lhs <= 0.2 for r in rows)


def test_all_passed_ignores_reports():
    rows = check_integral_multi(3, 0.0, LemmaConfig())
    assert rows[-1].passed is None
    assert all_passed(rows)


def test_reproducible():
    cfg = LemmaConfig(seed=3)
    assert check_tail_1d(1.5, cfg) == check_tail_1d(1.5, cfg)
