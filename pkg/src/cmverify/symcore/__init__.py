"""Exact symbolic kernel: expression trees over rational functions."""

from .expr import (Add, Const, Div, DivisionByZeroExpr, DomainError, Expr,
                   ExprSyntaxError, Mul, Neg, Point, Pow, Sym, UnknownSymbol,
                   differentiate, esum, eval_rational, evaluate,
                   is_identically_zero, normalize, render, substitute)
from .parse import parse_expr, parse_tokens, tokenize

ZERO = Expr.const(0)
ONE = Expr.const(1)

__all__ = [
    "Add", "Const", "Div", "Mul", "Neg", "Pow", "Sym",
    "Expr", "Point", "ZERO", "ONE",
    "ExprSyntaxError", "UnknownSymbol", "DivisionByZeroExpr", "DomainError",
    "parse_expr", "parse_tokens", "tokenize",
    "normalize", "differentiate", "is_identically_zero", "evaluate",
    "eval_rational", "substitute", "render", "esum",
]
