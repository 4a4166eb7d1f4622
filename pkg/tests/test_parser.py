"""Expression grammar: parse/print round trip, precedence, error positions."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dercalc.parser import (
    Apply,
    Bin,
    DercalcSyntaxError,
    Neg,
    Num,
    Pow,
    Sym,
    parse_equation,
    parse_expr,
    to_text,
)

names = st.sampled_from(["x", "y", "t", "u", "f", "g", "phi", "a2"])
numbers = st.integers(0, 99).map(lambda n: Num(Fraction(n)))
symbols = names.map(Sym)


def extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(children, st.integers(-4, 6)).map(lambda p: Pow(*p)),
        st.tuples(names, children).map(lambda p: Apply(*p)),
        st.tuples(st.sampled_from("+-*/"), children, children).map(
            lambda p: Bin(*p)
        ),
    )


trees = st.recursive(st.one_of(numbers, symbols), extend, max_leaves=25)


@given(trees)
@settings(max_examples=500, deadline=None)
def test_print_parse_round_trip(tree):
    assert parse_expr(to_text(tree)) == tree


@given(trees)
@settings(max_examples=100, deadline=None)
def test_rendering_is_stable(tree):
    assert to_text(parse_expr(to_text(tree))) == to_text(tree)


def test_precedence_layers():
    assert parse_expr("a + b * c") == Bin(
        "+", Sym("a"), Bin("*", Sym("b"), Sym("c"))
    )
    assert parse_expr("-t^2") == Neg(Pow(Sym("t"), 2))
    assert parse_expr("2*t^3") == Bin("*", Num(Fraction(2)), Pow(Sym("t"), 3))


def test_left_associativity():
    assert parse_expr("a - b - c") == Bin("-", Bin("-", Sym("a"), Sym("b")), Sym("c"))
    assert parse_expr("a / b / c") == Bin("/", Bin("/", Sym("a"), Sym("b")), Sym("c"))


def test_negative_exponent_and_parenthesised_base():
    assert parse_expr("t^-2") == Pow(Sym("t"), -2)
    assert parse_expr("(t + 1)^2") == Pow(Bin("+", Sym("t"), Num(Fraction(1))), 2)


def test_function_application():
    assert parse_expr("f(x + y)") == Apply("f", Bin("+", Sym("x"), Sym("y")))
    assert parse_expr("f(g(x))") == Apply("f", Apply("g", Sym("x")))


def test_double_negation():
    assert parse_expr("--x") == Neg(Neg(Sym("x")))


def test_equation_split():
    lhs, rhs = parse_equation("f(x) = x^2")
    assert lhs == Apply("f", Sym("x"))
    assert rhs == Pow(Sym("x"), 2)


def test_equation_requires_single_equals():
    with pytest.raises(DercalcSyntaxError):
        parse_equation("f(x) + 1")
    with pytest.raises(DercalcSyntaxError):
        parse_equation("a = b = c")


def test_error_position_double_caret():
    with pytest.raises(DercalcSyntaxError) as err:
        parse_expr("t^^2")
    assert err.value.line == 1
    assert err.value.column == 3


def test_error_position_second_line():
    with pytest.raises(DercalcSyntaxError) as err:
        parse_expr("t +\n* 2")
    assert err.value.line == 2
    assert err.value.column == 1


def test_error_on_bad_character():
    with pytest.raises(DercalcSyntaxError) as err:
        parse_expr("a + $")
    assert err.value.column == 5


def test_error_on_unbalanced_paren():
    with pytest.raises(DercalcSyntaxError):
        parse_expr("f(x")
    with pytest.raises(DercalcSyntaxError):
        parse_expr("(a + b")


def test_trailing_garbage_rejected():
    with pytest.raises(DercalcSyntaxError):
        parse_expr("a b")


def test_printer_rejects_non_integer_literal():
    with pytest.raises(ValueError):
        to_text(Num(Fraction(1, 2)))
