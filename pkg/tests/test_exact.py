"""Exact arithmetic layer: polynomials, rational functions, carriers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dercalc.exact import (
    IntegerWindow,
    MultiPoly,
    NotDivisibleError,
    RatFunc,
    gf,
    poly_divexact,
    poly_formal_derivative,
    poly_gcd,
    rational,
    zmod,
)

VARS = ("t", "u")


def mono(exps, coeff=1):
    return MultiPoly(VARS, {tuple(exps): Fraction(coeff)})


coeffs = st.integers(-9, 9).map(Fraction)
exponents = st.tuples(st.integers(0, 4), st.integers(0, 3))


@st.composite
def polys(draw, max_terms=5):
    terms = draw(st.dictionaries(exponents, coeffs, max_size=max_terms))
    return MultiPoly(VARS, terms)


@st.composite
def nonzero_polys(draw, max_terms=5):
    p = draw(polys(max_terms=max_terms))
    if p.is_zero():
        p = p + draw(st.integers(1, 5))
    return p


points = st.fixed_dictionaries(
    {"t": st.integers(-6, 6).map(Fraction), "u": st.integers(-6, 6).map(Fraction)}
)


def test_rational_coercions():
    assert rational(3) == Fraction(3)
    assert rational("3/4") == Fraction(3, 4)
    assert rational(Fraction(-2, 6)) == Fraction(-1, 3)
    with pytest.raises(Exception):
        rational(0.5)


def test_zero_terms_dropped():
    p = MultiPoly(VARS, {(1, 0): Fraction(0), (0, 1): Fraction(2)})
    assert p.sorted_terms() == [((0, 1), Fraction(2))]
    assert str(p) == "2*u"


@given(polys(), polys())
def test_add_commutes(p, q):
    assert p + q == q + p


@given(polys(), polys(), polys())
def test_mul_distributes(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(polys(), polys(), polys())
def test_mul_associates(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polys(), polys(), points)
def test_substitute_is_ring_hom(p, q, pt):
    assert (p * q).substitute(pt) == p.substitute(pt) * q.substitute(pt)
    assert (p + q).substitute(pt) == p.substitute(pt) + q.substitute(pt)


@given(polys(), polys())
def test_derivative_product_rule(p, q):
    dp = poly_formal_derivative(p, "t")
    dq = poly_formal_derivative(q, "t")
    assert poly_formal_derivative(p * q, "t") == dp * q + p * dq


@given(polys(), st.integers(0, 3))
def test_pow_matches_repeated_mul(p, k):
    expected = MultiPoly.const(VARS, 1)
    for _ in range(k):
        expected = expected * p
    assert p**k == expected


@given(nonzero_polys(2), nonzero_polys(2), nonzero_polys(2))
@settings(max_examples=40, deadline=None)
def test_gcd_divides_both(p, q, g):
    h = poly_gcd(p * g, q * g)
    for prod in (p * g, q * g):
        assert poly_divexact(prod, h) * h == prod


@given(nonzero_polys(), nonzero_polys())
@settings(max_examples=60, deadline=None)
def test_gcd_leading_coefficient_positive(p, q):
    h = poly_gcd(p, q)
    _, lead = h.leading()
    assert lead > 0


@given(nonzero_polys())
@settings(max_examples=60, deadline=None)
def test_gcd_with_self_is_sign_normalized(p):
    assert poly_gcd(p, p) in (p, -p)


def test_gcd_coprime_is_one():
    t, u = mono((1, 0)), mono((0, 1))
    assert poly_gcd(t + 1, u + 2) == MultiPoly.const(VARS, 1)


def test_divexact_rejects_inexact():
    t = mono((1, 0))
    with pytest.raises(NotDivisibleError):
        poly_divexact(t + 1, t)


def test_ratfunc_canonical_form():
    x = MultiPoly(("x",), {(1,): Fraction(1)})
    r = RatFunc(2 * x * x, 4 * x)
    assert str(r) == "x/2"
    assert r == RatFunc(x, 2)


def test_ratfunc_denominator_sign_normalized():
    x = MultiPoly(("x",), {(1,): Fraction(1)})
    r = RatFunc(MultiPoly.const(("x",), 1), -x)
    assert str(r) == "-1/x"


@st.composite
def ratfuncs(draw):
    num = draw(polys(max_terms=3))
    den = draw(nonzero_polys())
    return RatFunc(num, den)


@given(ratfuncs(), ratfuncs())
@settings(max_examples=80, deadline=None)
def test_ratfunc_add_commutes(a, b):
    assert a + b == b + a


@given(ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=50, deadline=None)
def test_ratfunc_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(ratfuncs())
@settings(max_examples=50, deadline=None)
def test_ratfunc_inverse(a):
    if a.is_zero():
        return
    one = RatFunc.const(VARS, 1)
    assert a * (one / a) == one
    assert a ** (-1) == one / a


@given(ratfuncs(), points)
@settings(max_examples=80, deadline=None)
def test_ratfunc_substitute_matches_fractions(a, pt):
    try:
        got = a.substitute(pt)
    except ZeroDivisionError:
        return
    num = a.num.substitute(pt)
    den = a.den.substitute(pt)
    assert got == num / den


def test_gf_units_and_inverses():
    k = gf(5)
    assert k.units() == [1, 2, 3, 4]
    for a in k.units():
        assert k.mul(a, k.inv(a)) == 1
    assert k.inv(0) is None
    assert k.characteristic == 5


def test_zmod_units():
    r = zmod(6)
    assert r.units() == [1, 5]
    assert r.inv(2) is None
    assert r.characteristic == 6


def test_gf_requires_prime():
    with pytest.raises(Exception):
        gf(4)


def test_window_enumeration_order():
    w = IntegerWindow(-10, 10)
    head = []
    for a in w.elements():
        head.append(a)
        if len(head) == 5:
            break
    assert head == [0, 1, -1, 2, -2]
    assert w.contains(10) and not w.contains(11)
    assert w.positives() == list(range(1, 11))


def test_window_asymmetric():
    w = IntegerWindow(-2, 5)
    assert list(w.elements()) == [0, 1, -1, 2, -2, 3, 4, 5]


def test_window_empty_rejected():
    with pytest.raises(ValueError):
        IntegerWindow(3, 1)
