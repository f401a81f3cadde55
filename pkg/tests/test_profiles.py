import random

import pytest
import sympy

from cmcsurf.errors import EvalDomainError, ExprSyntaxError, UnknownIdentifierError
from cmcsurf.profiles import (
    BinOp,
    Const,
    Func,
    Jet2,
    Neg,
    Num,
    ProfileFunction,
    Var,
    eval_jet,
    parse,
    to_text,
)

from dsl_random import random_expression, run_randomized_cases


# --- parsing ------------------------------------------------------------------

def test_parse_sqrt_profile_tree():
    expr = parse("sqrt(-u^2+2*u)")
    expected = Func("sqrt", BinOp("+", Neg(BinOp("^", Var(), Num(2.0))),
                                  BinOp("*", Num(2.0), Var())))
    assert expr == expected


def test_parse_rejects_double_star():
    with pytest.raises(ExprSyntaxError) as err:
        parse("2**u")
    assert err.value.offset == 1


def test_parse_bound_constant():
    expr = parse("cosh(u)+a", constants=("a",))
    assert expr == BinOp("+", Func("cosh", Var()), Const("a"))


def test_parse_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as err:
        parse("cosh(u)+bogus")
    assert err.value.name == "bogus"
    assert err.value.offset == 8


def test_parse_precedence_and_associativity():
    assert parse("1+2*3") == BinOp("+", Num(1.0), BinOp("*", Num(2.0), Num(3.0)))
    assert parse("-u^2") == Neg(BinOp("^", Var(), Num(2.0)))
    assert parse("u-1-2") == BinOp("-", BinOp("-", Var(), Num(1.0)), Num(2.0))
    assert parse("u^2^3") == BinOp("^", BinOp("^", Var(), Num(2.0)), Num(3.0))
    assert parse("2*u/3") == BinOp("/", BinOp("*", Num(2.0), Var()), Num(3.0))


def test_parse_rejects_variable_exponent():
    with pytest.raises(ExprSyntaxError):
        parse("2^u")
    with pytest.raises(ExprSyntaxError):
        parse("u^(u+1)")
    # constant exponents are fine, including bound names
    parse("u^(a+1)", constants=("a",))


def test_parse_error_offsets():
    with pytest.raises(ExprSyntaxError) as err:
        parse("1+*2")
    assert err.value.offset == 2
    with pytest.raises(ExprSyntaxError):
        parse("sin u")  # function requires parentheses
    with pytest.raises(ExprSyntaxError):
        parse("(1+2")
    with pytest.raises(ExprSyntaxError):
        parse("1 $ 2")


def test_print_reparse_idempotent_random():
    rng = random.Random(7)
    for _ in range(300):
        tree = parse(random_expression(rng))
        printed = to_text(tree)
        assert parse(printed) == tree, printed


def test_print_reparse_handles_exponent_minus():
    for text in ("u^-2", "(-u)^2", "-(u+1)", "1-(2-3)", "2/(u*3)", "u^2^3"):
        tree = parse(text)
        assert parse(to_text(tree)) == tree


# --- jets ---------------------------------------------------------------------

def test_eval_examples():
    assert eval_jet(parse("u^2"), 3.0) == Jet2(9.0, 6.0, 2.0)
    assert eval_jet(parse("cosh(u)"), 0.0) == Jet2(1.0, 0.0, 1.0)
    jet = eval_jet(parse("sqrt(-u^2+2*u)"), 1.0)
    assert jet.val == pytest.approx(1.0, abs=1e-15)
    assert jet.d1 == pytest.approx(0.0, abs=1e-15)
    assert jet.d2 == pytest.approx(-1.0, abs=1e-15)


def test_eval_with_constants():
    expr = parse("a*u^2+b", constants=("a", "b"))
    assert eval_jet(expr, 2.0, {"a": 3.0, "b": -1.0}) == Jet2(11.0, 12.0, 6.0)
    with pytest.raises(UnknownIdentifierError):
        eval_jet(expr, 2.0, {"a": 3.0})


def test_builtin_pi():
    assert eval_jet(parse("cos(pi)"), 0.0).val == pytest.approx(-1.0)


@pytest.mark.parametrize("text,bad_u", [
    ("sqrt(u)", -1.0),
    ("sqrt(u)", 0.0),
    ("ln(u)", 0.0),
    ("1/u", 0.0),
    ("abs(u)", 0.0),
    ("u^0.5", -2.0),
    ("exp(u)", 1000.0),
])
def test_domain_errors_carry_u(text, bad_u):
    with pytest.raises(EvalDomainError) as err:
        eval_jet(parse(text), bad_u)
    assert err.value.u == bad_u


def test_abs_away_from_zero():
    assert eval_jet(parse("abs(u)"), -2.0) == Jet2(2.0, -1.0, 0.0)
    assert eval_jet(parse("abs(u)"), 2.0) == Jet2(2.0, 1.0, 0.0)


def test_integer_power_negative_base():
    assert eval_jet(parse("u^3"), -2.0) == Jet2(-8.0, 12.0, -12.0)
    assert eval_jet(parse("u^-1"), 2.0) == Jet2(0.5, -0.25, 0.25)


def test_jets_match_sympy():
    u = sympy.Symbol("u")
    cases = [
        ("sin(u)*cosh(2*u)", sympy.sin(u) * sympy.cosh(2 * u)),
        ("exp(u)/(1+u^2)", sympy.exp(u) / (1 + u**2)),
        ("sqrt(1+u^2)*ln(2+u)", sympy.sqrt(1 + u**2) * sympy.log(2 + u)),
        ("(u^3-2*u+1)/(u+3)", (u**3 - 2 * u + 1) / (u + 3)),
        ("cos(sinh(u))", sympy.cos(sympy.sinh(u))),
        ("u^0.5+u^-2", u**sympy.Rational(1, 2) + u**-2),
    ]
    points = [0.4, 1.1, 1.9]
    for text, sym in cases:
        expr = parse(text)
        d1_sym = sympy.diff(sym, u)
        d2_sym = sympy.diff(sym, u, 2)
        for point in points:
            jet = eval_jet(expr, point)
            val = float(sym.subs(u, point))
            d1 = float(d1_sym.subs(u, point))
            d2 = float(d2_sym.subs(u, point))
            assert jet.val == pytest.approx(val, rel=1e-12, abs=1e-12)
            assert jet.d1 == pytest.approx(d1, rel=1e-12, abs=1e-12)
            assert jet.d2 == pytest.approx(d2, rel=1e-11, abs=1e-11)


def test_central_difference_agreement_sample():
    cases, worst1, worst2 = run_randomized_cases(200, seed=11)
    assert cases == 200
    assert worst1 <= 1e-6 and worst2 <= 1e-6


# --- ProfileFunction ----------------------------------------------------------

def test_profile_function_spot_checks():
    prof = ProfileFunction.from_text("sqrt(-u^2+2*u)", (0.2, 1.8))
    assert prof.jet(1.0).val == pytest.approx(1.0)
    with pytest.raises(EvalDomainError):
        ProfileFunction.from_text("sqrt(-u^2+2*u)", (1.5, 2.5))


def test_profile_function_consts_sweep():
    prof = ProfileFunction.from_text("a*u", (0.5, 1.5), {"a": 2.0})
    assert prof.jet(1.0).val == 2.0
    assert eval_jet(prof.expr, 1.0, {"a": 5.0}).val == 5.0
