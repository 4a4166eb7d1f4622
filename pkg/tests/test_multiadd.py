"""Symmetric multiadditive maps: polarization, diagonals, recovery."""

from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from dercalc.multiadd import (
    MultiAddError,
    NotPolynomialError,
    PolyFunction,
    SymMultiMap,
    as_vector,
    binomial_check,
    delta,
    polarization_check,
    recover_components,
    trace,
)

frac = st.integers(-7, 7).map(Fraction)


def sorted_indices(arity, dim):
    base = st.tuples(*([st.integers(0, dim - 1)] * arity))
    return base.map(lambda t: tuple(sorted(t)))


@st.composite
def multimaps(draw, max_arity=3, max_dim=3):
    arity = draw(st.integers(1, max_arity))
    dim = draw(st.integers(1, max_dim))
    coeffs = draw(st.dictionaries(sorted_indices(arity, dim), frac, max_size=4))
    return SymMultiMap(arity, dim, coeffs)


def vectors(dim):
    return st.tuples(*([frac] * dim))


def test_as_vector_wraps_scalars():
    assert as_vector(3, 1) == (Fraction(3),)
    assert as_vector((1, 2), 2) == (Fraction(1), Fraction(2))
    with pytest.raises(MultiAddError):
        as_vector((1, 2), 3)


def test_coefficients_are_symmetrized():
    A = SymMultiMap(2, 2, {(1, 0): 5})
    assert A.coefficient((0, 1)) == 5
    assert A.coefficient((1, 0)) == 5
    assert A.apply([(1, 0), (0, 1)]) == 5
    assert A.apply([(0, 1), (1, 0)]) == 5


def test_conflicting_symmetric_entries_rejected():
    with pytest.raises(MultiAddError):
        SymMultiMap(2, 2, {(0, 1): 1, (1, 0): 2})


def test_zero_coefficients_dropped():
    A = SymMultiMap(2, 2, {(0, 0): 0, (0, 1): 3})
    assert A.coeffs == {(0, 1): Fraction(3)}
    assert A.serialize() == ["(0,1) 3"]


@given(multimaps(), st.data())
@settings(max_examples=80, deadline=None)
def test_additive_in_each_slot(A, data):
    args = [data.draw(vectors(A.dim)) for _ in range(A.arity)]
    extra = data.draw(vectors(A.dim))
    slot = data.draw(st.integers(0, A.arity - 1))
    bumped = list(args)
    bumped[slot] = tuple(a + b for a, b in zip(args[slot], extra))
    split = list(args)
    split[slot] = extra
    assert A.apply(bumped) == A.apply(args) + A.apply(split)


@given(multimaps(), st.data())
@settings(max_examples=80, deadline=None)
def test_symmetric_under_argument_swap(A, data):
    args = [data.draw(vectors(A.dim)) for _ in range(A.arity)]
    i = data.draw(st.integers(0, A.arity - 1))
    j = data.draw(st.integers(0, A.arity - 1))
    swapped = list(args)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert A.apply(args) == A.apply(swapped)


@given(multimaps(), st.data(), st.integers(-5, 5))
@settings(max_examples=80, deadline=None)
def test_trace_is_homogeneous(A, data, r):
    x = data.draw(vectors(A.dim))
    rx = tuple(Fraction(r) * c for c in x)
    assert trace(A, rx) == Fraction(r) ** A.arity * trace(A, x)


def test_delta_inclusion_exclusion():
    f = lambda v: v[0] ** 2
    assert delta(f, [(1,)], (3,)) == 16 - 9
    assert delta(f, [(1,), (1,)], (0,)) == 2
    assert delta(f, [(1,), (1,), (1,)], (0,)) == 0
    with pytest.raises(MultiAddError):
        delta(f, [], (0,))


@given(multimaps(), st.data())
@settings(max_examples=60, deadline=None)
def test_polarization_at_arity(A, data):
    ys = [data.draw(vectors(A.dim)) for _ in range(A.arity)]
    x = data.draw(vectors(A.dim))
    report = polarization_check(A, ys, x)
    assert report.ok
    assert report.lhs == factorial(A.arity) * A.apply(ys)


@given(multimaps(max_arity=2), st.data())
@settings(max_examples=60, deadline=None)
def test_polarization_above_arity_kills(A, data):
    ys = [data.draw(vectors(A.dim)) for _ in range(A.arity + 1)]
    x = data.draw(vectors(A.dim))
    report = polarization_check(A, ys, x)
    assert report.ok
    assert report.lhs == 0


def test_polarization_needs_enough_increments():
    A = SymMultiMap(2, 1, {(0, 0): 1})
    with pytest.raises(MultiAddError):
        polarization_check(A, [(1,)], (0,))


@given(multimaps(), st.data())
@settings(max_examples=60, deadline=None)
def test_binomial_expansion_of_diagonal(A, data):
    x = data.draw(vectors(A.dim))
    y = data.draw(vectors(A.dim))
    report = binomial_check(A, x, y)
    assert report.ok
    assert report.lhs == trace(A, tuple(a + b for a, b in zip(x, y)))


def test_poly_function_shape_checks():
    c = SymMultiMap.constant(1, 7)
    lin = SymMultiMap(1, 1, {(0,): 2})
    p = PolyFunction([c, lin])
    assert p(5) == 17
    assert p.degree == 1
    with pytest.raises(MultiAddError):
        PolyFunction([lin])
    with pytest.raises(MultiAddError):
        PolyFunction([])


def test_recover_univariate_cubic():
    p = lambda v: 2 * v[0] ** 3 - v[0] + 5
    pf = recover_components(p, 3, 1)
    assert pf.components[0].coefficient(()) == 5
    assert pf.components[1].coefficient((0,)) == -1
    assert pf.components[2].coeffs == {}
    assert pf.components[3].coefficient((0, 0, 0)) == 2
    assert pf(7) == p((Fraction(7),))


def test_recover_bivariate_quadratic():
    p = lambda v: v[0] * v[1] + 3 * v[0] + 1
    pf = recover_components(p, 2, 2)
    assert pf.components[2].coefficient((0, 1)) == Fraction(1, 2)
    assert pf.components[1].coefficient((0,)) == 3
    assert pf.components[0].coefficient(()) == 1


@st.composite
def poly_functions(draw, max_degree=4, max_dim=2):
    degree = draw(st.integers(0, max_degree))
    dim = draw(st.integers(1, max_dim))
    comps = [SymMultiMap.constant(dim, draw(frac))]
    for k in range(1, degree + 1):
        coeffs = draw(st.dictionaries(sorted_indices(k, dim), frac, max_size=3))
        comps.append(SymMultiMap(k, dim, coeffs))
    return PolyFunction(comps)


@given(poly_functions())
@settings(max_examples=40, deadline=None)
def test_recover_round_trip(pf):
    got = recover_components(pf, pf.degree, pf.dim)
    assert got == pf


def test_recover_flags_non_polynomial():
    p = lambda v: abs(v[0])
    with pytest.raises(NotPolynomialError) as err:
        recover_components(p, 1, 1)
    assert err.value.point is not None


def test_recover_flags_degree_overflow():
    p = lambda v: v[0] ** 4
    with pytest.raises(NotPolynomialError):
        recover_components(p, 3, 1)
