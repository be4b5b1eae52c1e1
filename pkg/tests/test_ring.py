"""Series arithmetic: precision rules, exact division, parsing, rendering."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arclift import (
    DEFAULT_PRECISION,
    FieldMismatchError,
    NotAUnitError,
    NotDivisibleError,
    ParseError,
    PrecisionExhaustedError,
    PrimeField,
    QQ,
    SeriesRing,
    StructureError,
    UnknownVariableError,
)

R = SeriesRing(QQ)
R5 = SeriesRing(PrimeField(5))


# -- construction and basic queries ------------------------------------


def test_series_normalization():
    s = R.series([0, 1, 0, 0], prec=10)
    assert s.coeffs == (Fraction(0), Fraction(1))
    assert s.prec == 10
    assert s.order() == 1
    assert s.order_floor() == 1


def test_prec_is_capped_at_working_precision():
    s = R.series([1], prec=1000)
    assert s.prec == R.n_work


def test_zero_series_has_no_order():
    z = R.zero(12)
    assert z.order() is None
    assert z.order_floor() == 12
    assert z.is_zero()


def test_nonpositive_precision_is_rejected():
    with pytest.raises(PrecisionExhaustedError):
        R.series([1], prec=0)


def test_coefficient_is_strict_about_precision():
    s = R.series([1, 2], prec=5)
    assert s.coefficient(4) == 0
    with pytest.raises(PrecisionExhaustedError):
        s.coefficient(5)
    assert s.coeff_at(5) == 0


def test_series_is_unhashable():
    with pytest.raises(TypeError):
        hash(R.parse("x"))


def test_prime_field_validation():
    with pytest.raises(StructureError):
        PrimeField(4)
    with pytest.raises(StructureError):
        PrimeField(1)
    with pytest.raises(StructureError):
        PrimeField(2**31)
    assert PrimeField(2147483647).p == 2147483647


def test_field_mismatch_is_refused():
    with pytest.raises(FieldMismatchError):
        R.parse("x") + R5.parse("x")


# -- precision rules ----------------------------------------------------


def test_add_takes_minimum_precision():
    a = R.series([1], prec=7)
    b = R.series([0, 1], prec=23)
    assert (a + b).prec == 7


def test_mul_gains_precision_from_the_order():
    """A product is certified beyond its factors' precision by their orders.

    With a known mod x^37 and of order 3, the unknown tail contributes to
    a*a only from degree 37 + 3 = 40 on.
    """
    a = R.series([0, 0, 0, 1], prec=37)
    assert (a * a).prec == 40
    assert (a * a).order() == 6


def test_mul_with_certified_zero():
    z = R.zero(10)
    x = R.x()
    prod = z * x
    assert prod.is_zero()
    assert prod.prec == min(10 + 1, 40 + 10, 40)


def test_div_exact_golden():
    num = R.parse("x^3 + x^4")
    q = num.div_exact(R.x())
    assert q == R.parse("x^2 + x^3")
    assert q.prec == 39


def test_div_exact_refuses_insufficient_order():
    with pytest.raises(NotDivisibleError):
        R.x().div_exact(R.parse("x^2"))


def test_div_exact_refuses_invisible_divisor():
    with pytest.raises(NotDivisibleError):
        R.x().div_exact(R.zero(10))


def test_div_exact_of_certified_zero():
    q = R.zero(10).div_exact(R.parse("x^2"))
    assert q.is_zero()
    assert q.prec == 8


def test_inv_unit_golden():
    u = R.parse("1 + x")
    v = u.inv_unit()
    assert v.prec == 40
    assert all(v.coeff_at(k) == (-1) ** k for k in range(40))
    with pytest.raises(NotAUnitError):
        R.x().inv_unit()


def test_equality_compares_up_to_shared_precision():
    assert R.series([0, 1], prec=40) == R.series([0, 1], prec=10)
    assert R.parse("x") != R.parse("x + x^15")
    assert R.zero(5) == R.zero(30)


def test_truncate_views():
    s = R.parse("x + x^8")
    t = s.truncate(5)
    assert t.prec == 5
    assert t == R.parse("x + O(x^5)")
    assert s.truncate(100) is s


# -- parsing and rendering ---------------------------------------------


def test_parse_golden():
    s = R.parse("1/2*x - x^2")
    assert s.coeff_at(1) == Fraction(1, 2)
    assert s.coeff_at(2) == -1
    assert s.prec == 40


def test_parse_o_tail_sets_precision():
    assert R.parse("x + O(x^5)").prec == 5
    z = R.parse("O(x^7)")
    assert z.is_zero() and z.prec == 7


def test_parse_discards_terms_beyond_the_tail():
    assert R.parse("x + x^10 + O(x^5)") == R.parse("x + O(x^5)")


def test_parse_rejects_misplaced_o():
    with pytest.raises(ParseError):
        R.parse("O(x^3) + x")
    with pytest.raises(ParseError):
        R.parse("x - O(x^3)")


def test_parse_rejects_implicit_multiplication():
    with pytest.raises(ParseError):
        R.parse("2x")


def test_parse_rejects_poly_variables_in_series():
    with pytest.raises(UnknownVariableError):
        R.parse("Y1")


def test_str_shows_precision_render_does_not():
    s = R.parse("x^3 + 6*x^18 + O(x^37)")
    assert str(s) == "x^3 + 6*x^18 + O(x^37)"
    assert s.render() == "x^3 + 6*x^18"
    assert str(R.zero(40)) == "O(x^40)"
    assert R.zero(40).render() == "0"


def test_render_signs_and_fractions():
    assert R.parse("1 - x").render() == "1 - x"
    assert R.parse("-1/2 + 3/4*x").render() == "-1/2 + 3/4*x"


def test_f5_arithmetic_reduces():
    s = R5.parse("3*x + 4*x^2")
    assert (s + s).coeff_at(1) == 1
    assert R5.parse("1/2").coeff_at(0) == 3
    with pytest.raises(NotAUnitError):
        R5.field.from_pair(1, 5)
    with pytest.raises(ParseError):
        R5.parse("1/5")


# -- properties ---------------------------------------------------------


def _series(ring, max_len=8):
    if ring.field.p is None:
        scalars = st.fractions(
            min_value=-4, max_value=4, max_denominator=4
        )
    else:
        scalars = st.integers(min_value=0, max_value=ring.field.p - 1)
    return st.builds(
        lambda coeffs, prec: ring.series(coeffs, prec),
        st.lists(scalars, min_size=0, max_size=max_len),
        st.integers(min_value=1, max_value=ring.n_work),
    )


@settings(max_examples=120)
@given(_series(R), _series(R))
def test_add_precision_rule(a, b):
    assert (a + b).prec == min(a.prec, b.prec)


@settings(max_examples=120)
@given(_series(R), _series(R))
def test_mul_precision_rule(a, b):
    got = a * b
    want = min(a.prec + b.order_floor(), b.prec + a.order_floor(), R.n_work)
    assert got.prec == want


@settings(max_examples=120)
@given(_series(R), _series(R), _series(R))
def test_ring_laws_hold_at_shared_precision(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=120)
@given(_series(R5), _series(R5))
def test_product_division_roundtrip(a, b):
    if b.is_zero():
        return
    prod = a * b
    q = prod.div_exact(b)
    assert q == a


@settings(max_examples=100)
@given(_series(R))
def test_parse_of_str_is_identity(s):
    back = R.parse(str(s))
    assert back == s
    assert back.prec == s.prec


@settings(max_examples=80)
@given(_series(R5))
def test_unit_inverse_property(u):
    if u.order() != 0:
        return
    assert u * u.inv_unit() == R5.one()
