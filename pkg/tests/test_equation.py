import math
from fractions import Fraction

import mpmath as mp
import pytest

from _examples import CAPUTO, RL, example1, example2
from quasibessel import (
    QuasiBesselEquation,
    Term,
    from_constant_coefficients,
    from_power_factors,
    nu_min_threshold,
    uniqueness_bound,
    validate,
)

# frozen from mpmath at 40 digits
THRESHOLD_EX1 = 0.84628437532163443042  # 1.5/sqrt(pi)
THRESHOLD_HALF = 0.56418958354775628695  # 1/sqrt(pi)
UNIQ_HALF = 1.3761263890318375246  # 1 + 1/(1.5 sqrt(pi))


def test_construction_normalises_term_order():
    eq = QuasiBesselEquation(
        terms=(Term(3.0, 0.5, "0.5"), Term(1.5, 1.5, "0"), Term(-1.2, 1.1, "0.8")),
        beta="2",
        nu_squared=4.0,
        kind=CAPUTO,
    )
    assert [t.alpha for t in eq.terms] == [1.5, 1.1, 0.5]
    assert eq.terms[0].is_pure_bessel
    assert eq.m1 == 1 and eq.m0 == 1
    assert eq.n_max == 2 and eq.n_m0 == 2


def test_construction_rejects_float_indices():
    with pytest.raises(TypeError):
        Term(1.0, 1.5, 0.8)
    with pytest.raises(TypeError):
        QuasiBesselEquation(terms=(Term(1.0, 1.0, "0"),), beta=2.0)


def test_validate_example1_is_clean():
    report = validate(example1(2.0))
    assert report.is_valid
    assert not report.issues


def test_validate_flags_shifted_leading_term():
    eq = QuasiBesselEquation(
        terms=(Term(1.5, 1.5, "0.8"), Term(-1.2, 1.1, "0"), Term(3.0, 0.5, "0.5")),
        beta="2",
        nu_squared=4.0,
        kind=CAPUTO,
    )
    report = validate(eq)
    assert not report.is_valid
    assert report.fatal_issues[0].code == "E_SHIFTED_LEADING_TERM"


def test_validate_example2_single_integer_term():
    assert validate(example2()).is_valid


def test_validate_warns_on_nonpositive_bessel_coefficient():
    eq = QuasiBesselEquation(
        terms=(Term(-1.0, 1.5, "0"),), beta="2", nu_squared=1.0, kind=CAPUTO
    )
    report = validate(eq)
    assert report.is_valid  # warning only
    assert report.warning_issues[0].code == "W_NONPOSITIVE_BESSEL_COEFFICIENT"


def test_nu_min_threshold_inapplicable_for_integer_orders():
    with pytest.raises(ValueError):
        nu_min_threshold(example2())  # no fractional pure Bessel term


def test_nu_min_threshold_single_half_order():
    eq = QuasiBesselEquation(
        terms=(Term(1.0, 0.5, "0"),), beta="1", nu_squared=0.0, kind=CAPUTO
    )
    assert nu_min_threshold(eq) == pytest.approx(THRESHOLD_HALF, rel=1e-12)


def test_nu_min_threshold_example1():
    threshold = nu_min_threshold(example1(2.0))
    assert threshold == pytest.approx(THRESHOLD_EX1, rel=1e-12)
    assert 4.0 >= threshold  # nu = 2 satisfies the guarantee


def test_nu_min_threshold_monotone_in_bessel_coefficient():
    def with_d(d):
        return QuasiBesselEquation(
            terms=(Term(d, 1.5, "0"), Term(1.0, 0.5, "0.5")),
            beta="2",
            nu_squared=4.0,
            kind=CAPUTO,
        )

    values = [nu_min_threshold(with_d(d)) for d in (0.5, 1.0, 1.5, 4.0)]
    assert all(b > a for a, b in zip(values, values[1:]))


def test_nu_min_threshold_gamma_pole_is_error():
    # integer alpha equal to n_max makes Gamma(n_max - alpha) a pole
    eq = QuasiBesselEquation(
        terms=(Term(1.0, 2.0, "0"), Term(1.0, 1.5, "0")),
        beta="2",
        nu_squared=1.0,
        kind=CAPUTO,
    )
    with pytest.raises(ValueError):
        nu_min_threshold(eq)


def test_uniqueness_bound_single_integer_term():
    eq = QuasiBesselEquation(
        terms=(Term(1.0, 1.0, "0"),), beta="0", nu_squared=0.0, kind=CAPUTO
    )
    assert uniqueness_bound(eq, 1.0) == pytest.approx(2.0, rel=1e-12)


def test_uniqueness_bound_single_half_order_term():
    eq = QuasiBesselEquation(
        terms=(Term(1.0, 0.5, "0"),), beta="0", nu_squared=0.0, kind=CAPUTO
    )
    assert uniqueness_bound(eq, 1.0) == pytest.approx(UNIQ_HALF, rel=1e-12)


def test_uniqueness_bound_example1_matches_direct_formula():
    # direct evaluation with the high-precision Gamma oracle
    mp.mp.dps = 30
    qs = []
    for alpha, n in ((1.5, 2), (1.1, 2), (0.5, 1)):
        gap = n - alpha
        qs.append(1.0 / float(mp.gamma(gap) * (gap + 1)))
    expected = 1.0 + qs[0] * 1.5 + qs[1] * 1.2 + qs[2] * 3.0
    assert uniqueness_bound(example1(2.0), 1.0) == pytest.approx(expected, rel=1e-12)


def test_from_constant_coefficients_worked_example():
    eq = from_constant_coefficients([(2.0, "2.1"), (0.5, "1.4"), (1.0, "0.7")], kind=RL)
    assert [t.p for t in eq.terms] == [Fraction(0), Fraction(7, 10), Fraction(14, 10)]
    assert eq.beta == Fraction(21, 10)
    assert eq.nu_squared == 0.0
    report = validate(eq)
    assert report.is_valid


def test_from_constant_coefficients_example2():
    eq = from_constant_coefficients([(1.0, "1")], kind=CAPUTO)
    assert eq.beta == Fraction(1)
    assert eq.terms[0].p == 0 and eq.terms[0].alpha == 1.0


def test_from_constant_coefficients_requires_strict_max():
    with pytest.raises(ValueError):
        from_constant_coefficients([(1.0, "2.1"), (1.0, "2.1")])


def test_from_power_factors_example4():
    eq = from_power_factors([(-2.0, "0", "0.5")], delta="0.7", kind=RL)
    assert eq.beta == Fraction(6, 5)
    assert eq.terms[0].p == 0
    assert eq.terms[0].alpha == 0.5


def test_from_power_factors_reduces_to_constant_coefficients():
    triples = [(2.0, "0", "2.1"), (0.5, "0", "1.4"), (1.0, "0", "0.7")]
    via_power = from_power_factors(triples, delta="0", kind=RL)
    via_const = from_constant_coefficients(
        [(2.0, "2.1"), (0.5, "1.4"), (1.0, "0.7")], kind=RL
    )
    assert via_power.beta == via_const.beta
    assert [t.p for t in via_power.terms] == [t.p for t in via_const.terms]


def test_from_power_factors_identity_case():
    eq = from_power_factors([(1.0, "1", "1")], delta="1", kind=RL)
    assert eq.beta == Fraction(1)
    assert eq.terms[0].p == 0


def test_from_power_factors_side_condition():
    with pytest.raises(ValueError):
        # alpha_1 - beta_1 = 0.5 < alpha_2 - beta_2 = 0.7
        from_power_factors([(1.0, "1", "1.5"), (1.0, "0", "0.7")], delta="0")


def test_transformed_powers_are_exact():
    # the declared p_i equals (power of x) - (derivative order) exactly
    eq = from_constant_coefficients([(2.0, "2.1"), (0.5, "1.4"), (1.0, "0.7")], kind=RL)
    a1 = Fraction(21, 10)
    for t in eq.terms:
        alpha_exact = a1 - t.p
        assert t.p == a1 - alpha_exact
        assert float(alpha_exact) == pytest.approx(t.alpha, abs=1e-15)
