"""Parsing, exact local analysis and Riemann schemes of theta-form operators."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from fuchsmon import _ratpoly as rp
from fuchsmon.errors import (OperatorSyntaxError, PolynomialDivisionError,
                             ThetaDegreeError)
from fuchsmon.operators import (DifferentialOperator, INFINITY,
                                classify_exponents, parse_operator,
                                parse_operator_file, riemann_scheme)

OP217 = ("T^4 - 2^4*t*(2*T+1)^2*(8*T^2+8*T+3) "
         "+ 2^12*t^2*(2*T+1)^2*(2*T+3)^2")


# -- parsing -------------------------------------------------------------------

def test_parse_pure_theta_fourth():
    op = parse_operator("T^4")
    assert op.theta_coeffs == ((), (), (), (), (mpq(1),))


def test_parse_217_theta0_coefficient():
    # constant terms of the two degree-4 factors are 3 and 9
    op = parse_operator(OP217)
    a0 = op.theta_coeffs[0]
    assert a0 == (mpq(0), mpq(-2 ** 4 * 3), mpq(2 ** 12 * 9))


def test_parse_217_leading_coefficient_factors():
    # a4(t) = (1 - 256 t)^2
    op = parse_operator(OP217)
    assert op.theta_coeffs[4] == (mpq(1), mpq(-512), mpq(65536))


def test_parse_247_pure_theta4_at_origin():
    op = parse_operator("T^4 - 2^4*t*(3072*T^4+5120*T^3+3904*T^2+1344*T+169)"
                        " + 2^23*t^2*(4*T+3)*(24*T^3+62*T^2+49*T+9)"
                        " - 2^34*t^3*(4*T+1)*(4*T+3)*(4*T+7)*(4*T+9)")
    # theta^3 coefficient vanishes at t = 0
    a3 = op.theta_coeffs[3]
    assert a3[0] == 0


def test_parse_rejects_trailing_garbage():
    with pytest.raises(OperatorSyntaxError):
        parse_operator("T^4 )")


def test_parse_reports_position():
    with pytest.raises(OperatorSyntaxError) as exc:
        parse_operator("T^4 + %")
    assert exc.value.position >= 0


def test_parse_rejects_theta_degree_5():
    with pytest.raises(ThetaDegreeError):
        parse_operator("T^5")


def test_parse_rejects_division_by_variable():
    with pytest.raises(PolynomialDivisionError):
        parse_operator("T^4/t")
    with pytest.raises(PolynomialDivisionError):
        parse_operator("T^4/(T+1)")


def test_parse_division_by_constant_is_fine():
    op = parse_operator("T^4/2")
    assert op.theta_coeffs[4] == (mpq(1, 2),)


def test_parse_operator_file_roundtrip():
    table = parse_operator_file("# comment\na | T^4\nb | T^4 - t*T^2\n")
    assert set(table) == {"a", "b"}
    assert table["a"].theta_coeffs[4] == (mpq(1),)


def test_parse_operator_file_rejects_missing_pipe():
    with pytest.raises(OperatorSyntaxError):
        parse_operator_file("a T^4\n")


@st.composite
def theta_operators(draw):
    polys = []
    for i in range(5):
        deg = draw(st.integers(0, 2))
        coeffs = tuple(mpq(draw(st.integers(-9, 9)),
                           draw(st.integers(1, 4)))
                       for _ in range(deg + 1))
        polys.append(rp.ptrim(coeffs))
    if rp.pdeg(polys[4]) < 0 or polys[4][-1] == 0:
        polys[4] = (mpq(1),)
    return DifferentialOperator(tuple(polys))


@settings(max_examples=40, deadline=None)
@given(theta_operators())
def test_parse_print_parse_fixed_point(op):
    text = str(op)
    back = parse_operator(text)
    assert back.canonical().theta_coeffs == op.canonical().theta_coeffs
    assert str(back) == text


# -- indicial polynomials ------------------------------------------------------

def test_indicial_at_mum_point():
    op = parse_operator(OP217)
    ind = op.indicial_polynomial(0)
    assert rp.ptrim(ind) == (mpq(0), mpq(0), mpq(0), mpq(0), mpq(1))


def test_indicial_at_conifold():
    op = parse_operator(OP217)
    roots, rem = rp.rational_roots(op.indicial_polynomial(mpq(1, 256)))
    exps = sorted(r for r, m in roots for _ in range(m))
    assert exps == [0, mpq(1, 2), mpq(1, 2), 1]


def test_indicial_at_ordinary_point():
    op = parse_operator(OP217)
    roots, _ = rp.rational_roots(op.indicial_polynomial(mpq(1, 3)))
    exps = sorted(r for r, m in roots for _ in range(m))
    assert exps == [0, 1, 2, 3]


def test_ordinary_point_detection():
    op = parse_operator(OP217)
    assert op.is_ordinary_at(mpq(1, 3))
    assert not op.is_ordinary_at(0)
    assert not op.is_ordinary_at(mpq(1, 256))


# -- exponent classification ---------------------------------------------------

def test_classify_mum():
    assert classify_exponents((0, 0, 0, 0)) == ("MUM", 0, 0)


def test_classify_conifold_types():
    assert classify_exponents((0, 1, 1, 2)) == ("C_over_n", 1, 1)
    assert classify_exponents((0, mpq(1, 2), mpq(1, 2), 1)) == ("C_over_n", 2, 1)
    assert classify_exponents((0, mpq(1, 4), mpq(1, 4), mpq(1, 2))) == \
        ("C_over_n", 4, 1)
    assert classify_exponents((0, mpq(3, 4), mpq(3, 4), mpq(3, 2))) == \
        ("C_over_n", 4, 3)


def test_classify_other():
    assert classify_exponents((0, 1, 3, 4))[0] == "other"
    assert classify_exponents((mpq(1, 2),) * 4)[0] == "other"
    # points at infinity are never classified as MUM/conifold
    assert classify_exponents((0, 0, 0, 0), at_infinity=True)[0] == "other"


# -- Riemann schemes -----------------------------------------------------------

def test_scheme_217():
    sch = riemann_scheme(parse_operator(OP217))
    assert sch.fuchs_relation_holds
    locs = {e.location: e for e in sch.entries}
    assert locs[mpq(0)].stype == "MUM"
    half = locs[mpq(1, 256)]
    assert (half.stype, half.n, half.k) == ("C_over_n", 2, 1)
    assert half.type_name == "halfC"
    inf = sch[INFINITY]
    assert sorted(inf.exponents) == [mpq(1, 2), mpq(1, 2), mpq(3, 2), mpq(3, 2)]


def test_scheme_615(op615):
    sch = riemann_scheme(op615)
    assert sch.fuchs_relation_holds
    assert sch[mpq(1, 128)].type_name == "halfC"
    assert sch[mpq(1, 64)].type_name == "halfC"
    # 1/256 is a singularity with integer exponents but not a 1/nC point
    assert sch[mpq(1, 256)].stype == "other"


def test_scheme_247(op247):
    sch = riemann_scheme(op247)
    assert sch.fuchs_relation_holds
    q = sch[mpq(1, 16384)]
    assert (q.type_name, q.n, q.k) == ("quarterC", 4, 1)
    assert sorted(sch[INFINITY].exponents) == \
        [mpq(1, 4), mpq(3, 4), mpq(7, 4), mpq(9, 4)]


def test_scheme_json_is_stable():
    sch = riemann_scheme(parse_operator(OP217))
    assert sch.to_json() == sch.to_json()
    assert '"type": "halfC"' in sch.to_json()


def test_scheme_unknown_location_raises():
    sch = riemann_scheme(parse_operator(OP217))
    with pytest.raises(KeyError):
        sch[mpq(1, 3)]


# -- exact variable changes ----------------------------------------------------

def test_translate_moves_indicial_data():
    op = parse_operator(OP217)
    s = mpq(1, 256)
    moved = op.translate(s)
    roots, _ = rp.rational_roots(moved.indicial_polynomial(0))
    exps = sorted(r for r, m in roots for _ in range(m))
    assert exps == [0, mpq(1, 2), mpq(1, 2), 1]


def test_scale_moves_singularities():
    op = parse_operator(OP217)
    sch = riemann_scheme(op.scale(2))
    assert sch[mpq(1, 512)].type_name == "halfC"


def test_infinity_exponents_via_substitution():
    op = parse_operator(OP217)
    roots, _ = rp.rational_roots(op.indicial_polynomial(INFINITY))
    exps = sorted(r for r, m in roots for _ in range(m))
    assert exps == [mpq(1, 2), mpq(1, 2), mpq(3, 2), mpq(3, 2)]
