"""Expression parser.

Precedence, tightest first: ^, unary -, * and /, binary + and -.
Multiplication is always explicit.  Integer literals juxtaposed with /
form rational constants; identifiers are [A-Za-z][A-Za-z0-9_]*.
"""
from __future__ import annotations

from fractions import Fraction

from .expr import (Add, Const, Div, Expr, ExprSyntaxError, Mul, Neg, Pow,
                   Sym, UnknownSymbol)

_OPS = set("+-*/^()")


def tokenize(text: str):
    """List of (kind, value, position) with kind in {int, name, op}."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in _OPS:
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


def _fold_neg(node):
    if isinstance(node, Const):
        return Const(-node.value)
    if isinstance(node, Mul) and isinstance(node.factors[0], Const):
        lead = Const(-node.factors[0].value)
        return Mul((lead,) + node.factors[1:])
    return Neg(node)


def _mk_div(num, den):
    if isinstance(num, Const) and isinstance(den, Const) \
            and den.value != 0 \
            and num.value.denominator == 1 and den.value.denominator == 1:
        return Const(Fraction(num.value, den.value))
    return Div(num, den)


class _Parser:
    def __init__(self, tokens, symbols, end_pos):
        self.tokens = tokens
        self.symbols = set(symbols) if symbols is not None else None
        self.pos = 0
        self.end_pos = end_pos

    def peek(self):
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return ("end", None, self.end_pos)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, value, at = self.take()
        if kind != "op" or value != op:
            raise ExprSyntaxError(f"expected {op!r}", at)

    def parse_sum(self):
        terms = []
        node = self.parse_term()
        terms.extend(node.terms if isinstance(node, Add) else [node])
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.take()
                rhs = self.parse_term()
                if value == "-":
                    rhs = _fold_neg(rhs)
                terms.extend(rhs.terms if isinstance(rhs, Add) else [rhs])
            else:
                break
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def parse_term(self):
        node = self.parse_unary()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "*/":
                self.take()
                rhs = self.parse_unary()
                if value == "*":
                    lhs_f = node.factors if isinstance(node, Mul) else (node,)
                    rhs_f = rhs.factors if isinstance(rhs, Mul) else (rhs,)
                    node = Mul(lhs_f + rhs_f)
                else:
                    node = _mk_div(node, rhs)
            else:
                break
        return node

    def parse_unary(self):
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.take()
            return _fold_neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        kind, value, _ = self.peek()
        if kind == "op" and value == "^":
            self.take()
            exp = self.parse_exponent()
            return Pow(base, exp)
        return base

    def parse_exponent(self):
        kind, value, at = self.take()
        sign = 1
        if kind == "op" and value == "-":
            sign = -1
            kind, value, at = self.take()
        if kind != "int":
            raise ExprSyntaxError("exponent must be an integer literal", at)
        return sign * value

    def parse_atom(self):
        kind, value, at = self.take()
        if kind == "int":
            return Const(Fraction(value))
        if kind == "name":
            if self.symbols is not None and value not in self.symbols:
                raise UnknownSymbol(
                    f"symbol {value!r} is not a declared coordinate or parameter")
            return Sym(value)
        if kind == "op" and value == "(":
            node = self.parse_sum()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ExprSyntaxError("unexpected end of expression", at)
        raise ExprSyntaxError(f"unexpected token {value!r}", at)


def parse_tokens(tokens, symbols=None, end_pos=0):
    """Parse a complete token list into a syntax tree node."""
    parser = _Parser(tokens, symbols, end_pos)
    node = parser.parse_sum()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected token {value!r}", at)
    return node


def parse_expr(text: str, symbols=None) -> Expr:
    """Parse text into an Expr; `symbols`, when given, is the set of
    admissible identifiers."""
    tokens = tokenize(text)
    if not tokens:
        raise ExprSyntaxError("empty expression", 0)
    return Expr.from_node(parse_tokens(tokens, symbols, len(text)))
