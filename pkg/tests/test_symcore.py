from fractions import Fraction

import pytest

from cmverify.symcore import (DivisionByZeroExpr, DomainError, Expr,
                              ExprSyntaxError, Point, UnknownSymbol,
                              differentiate, esum, eval_rational, evaluate,
                              normalize, parse_expr, render, substitute,
                              tokenize)

SYMS = {"x", "y", "z"}


def ex(text):
    return parse_expr(text, SYMS)


class TestTokenize:
    def test_token_triples(self):
        assert tokenize("2*x + y^2") == [
            ("int", 2, 0), ("op", "*", 1), ("name", "x", 2),
            ("op", "+", 4), ("name", "y", 6), ("op", "^", 7),
            ("int", 2, 8)]

    def test_multicharacter_names(self):
        toks = tokenize("a1*b12")
        assert [t[:2] for t in toks] == [
            ("name", "a1"), ("op", "*"), ("name", "b12")]

    def test_bad_character(self):
        with pytest.raises(ExprSyntaxError):
            tokenize("x @ y")


class TestParse:
    def test_precedence(self):
        assert ex("1 + 2*x^2") == ex("1 + 2*(x^2)")
        assert ex("2*x^2") != ex("(2*x)^2")

    def test_unary_minus(self):
        assert ex("-x^2") == ex("-(x^2)")
        assert ex("1 - -x") == ex("1 + x")

    def test_division_is_left_associative(self):
        assert ex("x/y/z") == ex("x/(y*z)")

    def test_power_binds_tighter_than_division(self):
        assert ex("1/x^2") == ex("1/(x*x)")

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol, match="'q'"):
            parse_expr("q + 1", {"x"})

    @pytest.mark.parametrize("bad", ["x +", "(x", "x 2", "", "x ^ y"])
    def test_syntax_errors_carry_position(self, bad):
        with pytest.raises(ExprSyntaxError, match="position"):
            parse_expr(bad, SYMS)


class TestCanonicalEquality:
    """Equality and hashing act on the canonical rational function, not on
    the tree shape."""

    def test_rearranged_sums(self):
        assert ex("x + y - x") == ex("y")
        assert hash(ex("x + x")) == hash(ex("2*x"))

    def test_cancelled_quotient(self):
        assert ex("(x^2 - 1)/(x - 1)") == ex("x + 1")

    def test_nested_fractions(self):
        assert ex("1/(1/x)") == ex("x")
        assert ex("(x/y)/(z/y)") == ex("x/z")

    def test_binomial_square(self):
        assert ex("(x + y)^2") == ex("x^2 + 2*x*y + y^2")

    def test_is_zero(self):
        assert ex("x*(x + 1) - x^2 - x").is_zero
        assert not ex("x - y").is_zero

    def test_denominator_normalizing_to_zero(self):
        with pytest.raises(DivisionByZeroExpr):
            ex("1/(x - x)").is_zero


def test_normalize_canonical_render():
    assert render(normalize(ex("(x^2 - 1)/(x - 1)"))) == "x + 1"
    assert render(normalize(ex("x - x"))) == "0"
    assert render(normalize(ex("x/(2*y)"))) == "(1/2)*x/y"


def test_render_preserves_input_shape():
    for text in ("x^2 - 2*x + 1", "-x", "x/(2*y)", "2*(x + y)", "1/2"):
        assert render(ex(text)) == text


def test_render_parse_round_trip():
    for text in ("(x + y)/(z - 1)", "-(x - y)^3", "x*y/z^2 + 1/2"):
        e = ex(text)
        assert parse_expr(render(e), SYMS) == e


class TestCalculus:
    def test_polynomial_derivative(self):
        assert differentiate(ex("x^2*y"), "x") == ex("2*x*y")
        assert differentiate(ex("x^2*y"), "z").is_zero

    def test_quotient_rule(self):
        assert differentiate(ex("x/y"), "y") == ex("-x/y^2")

    def test_chain_through_powers(self):
        assert differentiate(ex("(x + y)^3"), "x") == ex("3*(x + y)^2")

    def test_linearity(self):
        a, b = ex("x^2/z"), ex("y*z")
        assert (differentiate(a + b, "z")
                == differentiate(a, "z") + differentiate(b, "z"))


class TestSubstitute:
    def test_polynomial(self):
        assert substitute(ex("x^2 + y"), {"x": ex("z + 1")}) \
            == ex("z^2 + 2*z + 1 + y")

    def test_into_denominator(self):
        assert substitute(ex("1/x"), {"x": ex("y^2")}) == ex("1/y^2")

    def test_simultaneous(self):
        got = substitute(ex("x + y"), {"x": ex("y"), "y": ex("x")})
        assert got == ex("x + y")


class TestEvaluate:
    def test_tree_evaluation_is_exact(self):
        assert evaluate(ex("x/y"), Point({"x": 1, "y": 4}, {})) == 0.25

    def test_rational_evaluation(self):
        v = eval_rational(ex("(x + 1)/y"), {"x": Fraction(1), "y": Fraction(1, 2)})
        assert v == Fraction(4)

    def test_pole_raises(self):
        with pytest.raises(DomainError):
            eval_rational(ex("1/x"), {"x": Fraction(0)})

    def test_missing_binding_raises(self):
        with pytest.raises(DomainError):
            eval_rational(ex("x + y"), {"x": Fraction(1)})


def test_esum_accumulates_and_cancels():
    assert esum([ex("x"), ex("y"), ex("-x")]) == ex("y")
    assert esum([]).is_zero


def test_expr_constructors():
    assert Expr.const(Fraction(3, 2)) == ex("3/2")
    assert Expr.sym("x") == ex("x")
    assert (Expr.sym("x") ** 3) == ex("x^3")
