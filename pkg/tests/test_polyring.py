"""Multivariate polynomials over the series ring: parsing, calculus, matrices."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arclift import (
    MissingVariableError,
    ParseError,
    Poly,
    PolyMatrix,
    PrimeField,
    QQ,
    SeriesRing,
    StructureError,
    VarSpace,
    jacobian,
    parse_poly,
)

R = SeriesRing(QQ)
R5 = SeriesRing(PrimeField(5))
YS = VarSpace.ys(2)
TS = VarSpace.ts(2)


def P(text, ring=R, space=YS):
    return parse_poly(text, ring, space)


# -- variable spaces ----------------------------------------------------


def test_varspace_constructors():
    assert VarSpace.ys(3).names == ("Y1", "Y2", "Y3")
    assert VarSpace.ts(2).names == ("T1", "T2")
    assert YS.index("Y2") == 1


def test_varspace_rejects_reserved_and_duplicate_names():
    with pytest.raises(StructureError):
        VarSpace(("x",))
    with pytest.raises(StructureError):
        VarSpace(("O",))
    with pytest.raises(StructureError):
        VarSpace(("A", "A"))
    with pytest.raises(MissingVariableError):
        YS.index("Y9")


# -- parsing and rendering ---------------------------------------------


def test_parse_render_roundtrip_golden():
    p = P("Y1^2 - Y2^3")
    assert p.render() == "Y1^2 - Y2^3"
    assert P("Y2^3 - Y1^2") == -p


def test_term_order_is_stable():
    p = parse_poly("T1 + 6*x^6*T1*T2 + x^2*T1^2 - 16*x^16*T2^3 - 3*x^10*T2^2", R, TS)
    assert p.render() == "T1 + x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3"


def test_parse_rejects_unknown_variable():
    with pytest.raises(ParseError):
        P("Y1 + Z")


def test_series_coefficients_inside_polynomials():
    p = P("Y1 + x*Y1")
    assert p.coeff((1, 0)) == R.parse("1 + x")
    assert p.total_degree() == 1


def test_zero_retention_in_equality():
    explicit = P("Y1 - Y1 + Y2")
    assert explicit == P("Y2")
    assert explicit.is_zero() is False
    assert P("Y1 - Y1").is_zero()


# -- calculus -----------------------------------------------------------


def test_diff_golden():
    p = P("Y1^2 - Y2^3")
    assert p.diff("Y1") == P("2*Y1")
    assert p.diff("Y2") == P("-3*Y2^2")


def test_diff_drops_multiples_of_the_characteristic():
    p = parse_poly("Y1^5", R5, YS)
    assert p.diff("Y1").is_zero()


def test_jacobian_golden():
    jac = jacobian([P("Y1^2 - Y2^3")])
    assert jac.shape == (1, 2)
    assert jac.rows[0][0] == P("2*Y1")
    assert jac.rows[0][1] == P("-3*Y2^2")


def test_eval_golden():
    p = P("Y1^2 - Y2^3")
    val = p.eval({"Y1": R.parse("x^3"), "Y2": R.parse("x^2")})
    assert val.is_zero()
    assert val.prec == 40


def test_eval_requires_every_variable():
    with pytest.raises(MissingVariableError):
        P("Y1 + Y2").eval({"Y1": R.x()})


def test_subst_composes_with_eval():
    p = P("Y1*Y2 + Y2^2")
    images = {"Y1": parse_poly("T1 + T2", R, TS), "Y2": parse_poly("x*T1", R, TS)}
    point = {"T1": R.parse("x + x^2"), "T2": R.parse("x^3")}
    q = p.subst(images, TS)
    direct = p.eval({nm: images[nm].eval(point) for nm in ("Y1", "Y2")})
    assert q.eval(point) == direct


# -- matrices -----------------------------------------------------------


def test_matrix_identity_and_mul():
    ident = PolyMatrix.identity(R, YS, 2)
    m = PolyMatrix([[P("Y1"), P("Y2")], [P("0"), P("1")]])
    assert m.mul(ident) == m
    assert ident.mul(m) == m


def test_det_and_adjugate_golden():
    m = PolyMatrix([[P("Y1"), P("Y2")], [P("Y2"), P("Y1")]])
    assert m.det() == P("Y1^2 - Y2^2")
    adj = m.adjugate()
    assert adj.rows[0][0] == P("Y1")
    assert adj.rows[0][1] == P("-Y2")
    prod = m.mul(adj)
    assert prod.rows[0][0] == m.det()
    assert prod.rows[0][1].is_zero()


def test_det_rejects_non_square():
    with pytest.raises(StructureError):
        PolyMatrix([[P("Y1"), P("Y2")]]).det()


# -- properties ---------------------------------------------------------


def _polys(space=YS, ring=R):
    coeff = st.integers(min_value=-3, max_value=3)
    exps = st.tuples(
        st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2)
    )
    def build(pairs):
        acc = Poly.zero(ring, space)
        for (e, c) in pairs:
            mono = Poly._make(ring, space, {e: ring.scalar(ring.field.coerce(c))})
            acc = acc + mono
        return acc
    return st.builds(build, st.lists(st.tuples(exps, coeff), max_size=5))


_POINT = {
    "Y1": R.parse("x - x^2"),
    "Y2": R.parse("2*x"),
}


@settings(max_examples=80)
@given(_polys(), _polys())
def test_evaluation_is_additive_and_multiplicative(p, q):
    assert (p + q).eval(_POINT) == p.eval(_POINT) + q.eval(_POINT)
    assert (p * q).eval(_POINT) == p.eval(_POINT) * q.eval(_POINT)


@settings(max_examples=40)
@given(_polys(), _polys(), _polys(), _polys())
def test_adjugate_identity_on_random_matrices(a, b, c, d):
    m = PolyMatrix([[a, b], [c, d]])
    det = m.det()
    prod = m.mul(m.adjugate())
    ident = PolyMatrix.identity(R, YS, 2)
    assert prod == ident.scale(det)
