"""Brute-force functional equation checking and solving on finite carriers."""

import pytest
from hypothesis import given, settings, strategies as st

from dercalc.exact import BudgetError, IntegerWindow, gf, zmod
from dercalc.cocycle import alien_check
from dercalc.feq import (
    CORPUS,
    CarrierUnsupportedError,
    Equation,
    FeqError,
    FnTable,
    UnboundSymbolError,
    default_budget,
    equation_by_name,
    feq_check,
    feq_solve_brute,
    logarithmic_zero_check,
    t1431_check,
)


def window_parity(lo=-10, hi=10):
    w = IntegerWindow(lo, hi)
    return FnTable(w, {x: abs(x) % 2 for x in range(lo, hi + 1)})


def test_corpus_contents():
    assert len(CORPUS) == 11
    assert set(CORPUS) == {
        "cauchy-add",
        "cauchy-exp",
        "cauchy-log",
        "cauchy-mult",
        "jensen",
        "hosszu",
        "ger-hom",
        "leibniz",
        "alien-c22",
        "opp2",
        "opp3",
    }
    for eq in CORPUS.values():
        assert eq.functions == ("f",)
    assert equation_by_name("hosszu").min_size == 5
    assert "finite-carrier evidence only" in equation_by_name("opp2").note
    with pytest.raises(FeqError):
        equation_by_name("nope")


def test_parse_catches_unbound_symbols():
    with pytest.raises(UnboundSymbolError):
        Equation.parse("bad", "f(x) + c = 0")
    eq = Equation.parse("good", "c*f(x) = f(c*x)", params=("c",))
    assert eq.params == ("c",)
    assert eq.functions == ("f",)


def test_fn_table_basics():
    k = gf(3)
    t = FnTable(k, {0: 0, 1: 4, 2: 2})
    assert t(1) == 1  # reduced mod 3
    assert str(t) == "{0->0, 1->1, 2->2}"
    assert t.serialize() == ["0 -> 0", "1 -> 1", "2 -> 2"]
    assert FnTable.zero(k).is_zero()
    assert FnTable.from_callable(k, lambda x: x * x).values == {0: 0, 1: 1, 2: 1}
    with pytest.raises(FeqError):
        FnTable(k, {0: 0, 1: 1})


def test_check_needs_complete_bindings():
    eq = equation_by_name("cauchy-add")
    with pytest.raises(UnboundSymbolError):
        feq_check(eq, {})
    with pytest.raises(UnboundSymbolError):
        feq_check(equation_by_name("alien-c22"), {"f": FnTable.zero(gf(3))})


def test_check_rejects_mixed_carriers():
    eq = Equation.parse("two", "f(x) = g(x)")
    with pytest.raises(FeqError):
        feq_check(eq, {"f": FnTable.zero(gf(3)), "g": FnTable.zero(gf(5))})


def test_cauchy_add_solutions_on_gf3():
    report = feq_solve_brute(equation_by_name("cauchy-add"), ["f"], gf(3))
    assert report.status == "complete"
    assert report.count == 3
    got = {tuple(t.values.values()) for t in report.tables("f")}
    assert got == {(0, 0, 0), (0, 1, 2), (0, 2, 1)}


def test_cauchy_add_solutions_are_linear_on_gf5():
    report = feq_solve_brute(equation_by_name("cauchy-add"), ["f"], gf(5))
    assert report.count == 5
    for t in report.tables("f"):
        c = t(1)
        assert all(t(x) == c * x % 5 for x in range(5))


def test_cauchy_exp_solutions_on_gf3():
    report = feq_solve_brute(equation_by_name("cauchy-exp"), ["f"], gf(3))
    got = {tuple(t.values.values()) for t in report.tables("f")}
    assert got == {(0, 0, 0), (1, 1, 1)}


def test_ger_hom_solutions_on_gf5():
    report = feq_solve_brute(equation_by_name("ger-hom"), ["f"], gf(5))
    got = {tuple(t.values.values()) for t in report.tables("f")}
    assert got == {(0,) * 5, (4,) * 5}


def test_leibniz_only_zero_on_prime_field():
    report = feq_solve_brute(equation_by_name("leibniz"), ["f"], gf(5))
    assert report.count == 1
    assert report.tables("f")[0].is_zero()


def test_hosszu_structure_on_gf5():
    report = feq_solve_brute(equation_by_name("hosszu"), ["f"], gf(5))
    assert report.status == "complete"
    assert report.count == 25
    for t in report.tables("f"):
        g = {x: (t(x) - t(0)) % 5 for x in range(5)}
        assert all(g[(x + y) % 5] == (g[x] + g[y]) % 5 for x in range(5) for y in range(5))


def test_hosszu_skipped_below_min_size():
    report = feq_solve_brute(equation_by_name("hosszu"), ["f"], gf(3))
    assert report.status == "skipped"
    assert report.count == 0
    assert "five elements" in report.note


def test_jensen_rejected_on_even_carriers():
    eq = equation_by_name("jensen")
    with pytest.raises(CarrierUnsupportedError) as err:
        feq_solve_brute(eq, ["f"], zmod(4))
    assert "constant divisor 2 is not invertible modulo 4" in str(err.value)
    with pytest.raises(CarrierUnsupportedError):
        feq_solve_brute(eq, ["f"], gf(2))
    with pytest.raises(CarrierUnsupportedError):
        feq_check(eq, {"f": FnTable.zero(zmod(4))})


def test_jensen_full_solution_set_on_gf5():
    report = feq_solve_brute(equation_by_name("jensen"), ["f"], gf(5))
    assert report.count == 25
    for t in report.tables("f"):
        a, b = t(0), (t(1) - t(0)) % 5
        assert all(t(x) == (a + b * x) % 5 for x in range(5))


def test_jensen_parity_witness_on_window():
    report = feq_check(equation_by_name("jensen"), {"f": window_parity()})
    assert not report.ok
    assert report.witness == (0, 2)
    assert report.line() == (
        "jensen: FAIL at (0, 2): lhs 1 != rhs 0 (2 pairs checked, 2 skipped)"
    )


def test_hosszu_parity_passes_on_window():
    report = feq_check(equation_by_name("hosszu"), {"f": window_parity()})
    assert report.ok
    assert report.line() == "hosszu: pass (118 pairs, 323 skipped)"
    assert report.checked + report.skipped == 21 * 21


def test_alien_equation_agrees_with_direct_search():
    eq = equation_by_name("alien-c22")
    report = feq_solve_brute(eq, ["f"], gf(5), params={"lam": 1, "mu": 1})
    direct = alien_check(1, 1, gf(5))
    got = {tuple(t.values.values()) for t in report.tables("f")}
    assert got == set(direct.solutions)
    assert report.count == 1


def test_alien_equation_requires_params():
    with pytest.raises(UnboundSymbolError):
        feq_solve_brute(equation_by_name("alien-c22"), ["f"], gf(3))


def test_open_equations_admit_only_zero_on_small_fields():
    for name in ("opp2", "opp3"):
        for p in (3, 5):
            report = feq_solve_brute(equation_by_name(name), ["f"], gf(p))
            assert report.status == "complete"
            assert report.count == 1
            assert report.tables("f")[0].is_zero()


def test_unknown_in_divisor_uses_dynamic_path():
    eq = Equation.parse("selfdiv", "x / f(y) = x / f(y)")
    report = feq_solve_brute(eq, ["f"], gf(3))
    # trivially true wherever defined, so every table is a solution
    assert report.count == 27


@given(st.sampled_from(["cauchy-add", "cauchy-mult", "ger-hom", "hosszu"]))
@settings(max_examples=8, deadline=None)
def test_solutions_survive_recheck(name):
    eq = equation_by_name(name)
    report = feq_solve_brute(eq, ["f"], gf(5))
    for t in report.tables("f"):
        assert feq_check(eq, {"f": t}).ok


def test_solver_guards():
    eq = equation_by_name("cauchy-add")
    with pytest.raises(FeqError):
        feq_solve_brute(eq, ["g"], gf(3))
    with pytest.raises(FeqError):
        feq_solve_brute(eq, ["f"], IntegerWindow(-3, 3))
    with pytest.raises(BudgetError):
        feq_solve_brute(eq, ["f"], gf(3), budget=10)
    with pytest.raises(BudgetError):
        feq_solve_brute(eq, ["f"], gf(13))


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("DERCALC_BUDGET", "123")
    assert default_budget() == 123
    monkeypatch.delenv("DERCALC_BUDGET")
    assert default_budget() == 10_000_000


def test_sampled_check_mode():
    eq = equation_by_name("cauchy-add")
    t = FnTable.from_callable(gf(7), lambda x: 3 * x % 7)
    report = feq_check(eq, {"f": t}, mode="sampled", sample=30, seed=2)
    assert report.ok
    assert report.checked + report.skipped == 30
    with pytest.raises(FeqError):
        feq_check(eq, {"f": t}, mode="sampled", sample=0)
    with pytest.raises(FeqError):
        feq_check(eq, {"f": t}, mode="almost")


def test_log_zero_on_full_carrier():
    report = logarithmic_zero_check(gf(5))
    assert report.only_zero
    assert not report.units_only


def test_log_zero_units_only():
    report = logarithmic_zero_check(gf(5), units_only=True)
    assert len(report.solutions) == 4
    # homomorphisms from the cyclic unit group into Z_4
    for sol in report.solutions:
        assert sol[1] == 0
        assert all(
            sol[a * b % 5] == (sol[a] + sol[b]) % 4 for a in sol for b in sol
        )
    assert not report.only_zero


def test_reflection_survivors():
    for p in (3, 5, 7):
        report = t1431_check(p)
        assert report.survivors == (0,)
        assert report.all_leibniz
        assert report.only_zero
    with pytest.raises(FeqError):
        t1431_check(4)
    with pytest.raises(FeqError):
        t1431_check(2)
