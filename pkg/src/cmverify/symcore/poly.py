"""Sparse multivariate polynomials and rational functions with exact
Fraction coefficients.

A monomial is a tuple of (symbol, exponent) pairs sorted by symbol name,
with every exponent positive.  The empty tuple is the constant monomial.
Term order is graded lexicographic with symbols compared alphabetically;
this order fixes leading terms, hence the monic scaling of denominators.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key

Monomial = tuple

_ZERO = Fraction(0)
_ONE = Fraction(1)


def mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    out = []
    i = j = 0
    while i < len(m1) and j < len(m2):
        n1, e1 = m1[i]
        n2, e2 = m2[j]
        if n1 == n2:
            out.append((n1, e1 + e2))
            i += 1
            j += 1
        elif n1 < n2:
            out.append(m1[i])
            i += 1
        else:
            out.append(m2[j])
            j += 1
    out.extend(m1[i:])
    out.extend(m2[j:])
    return tuple(out)


def mono_gcd(m1: Monomial, m2: Monomial) -> Monomial:
    d1 = dict(m1)
    out = []
    for name, exp in m2:
        e = min(exp, d1.get(name, 0))
        if e > 0:
            out.append((name, e))
    return tuple(sorted(out))


def mono_divides(m1: Monomial, m2: Monomial) -> bool:
    """True when m1 divides m2."""
    d2 = dict(m2)
    return all(d2.get(name, 0) >= exp for name, exp in m1)


def mono_div(m2: Monomial, m1: Monomial) -> Monomial:
    """m2 / m1, assuming divisibility."""
    d = dict(m2)
    for name, exp in m1:
        rem = d[name] - exp
        if rem:
            d[name] = rem
        else:
            del d[name]
    return tuple(sorted(d.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_cmp(m1: Monomial, m2: Monomial) -> int:
    """Graded lex: total degree first, then earlier symbols with higher
    exponents win."""
    if m1 == m2:
        return 0
    d1, d2 = mono_degree(m1), mono_degree(m2)
    if d1 != d2:
        return 1 if d1 > d2 else -1
    e1, e2 = dict(m1), dict(m2)
    for name in sorted(set(e1) | set(e2)):
        a, b = e1.get(name, 0), e2.get(name, 0)
        if a != b:
            return 1 if a > b else -1
    return 0


_MONO_KEY = cmp_to_key(mono_cmp)


class Poly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict):
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self._hash = None

    @staticmethod
    def const(value) -> "Poly":
        value = Fraction(value)
        return Poly({(): value} if value else {})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): _ONE})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((), _ZERO)

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for name, _ in m:
                out.add(name)
        return out

    def leading(self):
        """(monomial, coefficient) of the graded-lex leading term."""
        m = max(self.terms, key=_MONO_KEY)
        return m, self.terms[m]

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return [(m, self.terms[m]) for m in
                sorted(self.terms, key=_MONO_KEY, reverse=True)]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other: "Poly") -> "Poly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, _ZERO) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero or other.is_zero:
            return _P_ZERO
        if self.is_const:
            return other.scale(self.const_value())
        if other.is_const:
            return self.scale(other.const_value())
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, _ZERO) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly(out)

    def scale(self, k: Fraction) -> "Poly":
        if k == 0:
            return _P_ZERO
        if k == 1:
            return self
        return Poly({m: c * k for m, c in self.terms.items()})

    def mul_mono(self, mono: Monomial, coef: Fraction = _ONE) -> "Poly":
        return Poly({mono_mul(m, mono): c * coef for m, c in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a Poly")
        result = _P_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def derivative(self, name: str) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(name, 0)
            if not e:
                continue
            if e == 1:
                del d[name]
            else:
                d[name] = e - 1
            mono = tuple(sorted(d.items()))
            s = out.get(mono, _ZERO) + c * e
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly(out)

    def eval(self, bindings: dict):
        """Evaluate with numeric bindings (Fraction or float values)."""
        total = None
        for m, c in self.terms.items():
            v = c
            for name, exp in m:
                v = v * bindings[name] ** exp
            total = v if total is None else total + v
        return total if total is not None else _ZERO

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def mono_content(self) -> Monomial:
        """Greatest monomial dividing every term."""
        it = iter(self.terms)
        try:
            acc = next(it)
        except StopIteration:
            return ()
        for m in it:
            acc = mono_gcd(acc, m)
            if not acc:
                break
        return acc

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        bits = []
        for m, c in self.sorted_terms():
            mono = "*".join(f"{n}^{e}" if e > 1 else n for n, e in m)
            bits.append(f"{c}{'*' + mono if mono else ''}")
        return "Poly(" + " + ".join(bits) + ")"


_P_ZERO = Poly({})
_P_ONE = Poly({(): _ONE})


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact division a / b; raises ValueError when b does not divide a."""
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero:
        return _P_ZERO
    if b.is_const:
        return a.scale(1 / b.const_value())
    mb, cb = b.leading()
    rem = a
    out = {}
    while not rem.is_zero:
        ma, ca = rem.leading()
        if not mono_divides(mb, ma):
            raise ValueError("inexact polynomial division")
        q_m = mono_div(ma, mb)
        q_c = ca / cb
        out[q_m] = out.get(q_m, _ZERO) + q_c
        rem = rem - b.mul_mono(q_m, q_c)
    return Poly(out)


def _coeffs_in(p: Poly, name: str) -> dict:
    """Poly as a univariate in `name`: degree -> coefficient Poly."""
    out: dict = {}
    for m, c in p.terms.items():
        d = dict(m)
        e = d.pop(name, 0)
        mono = tuple(sorted(d.items()))
        coeff = out.setdefault(e, {})
        coeff[mono] = coeff.get(mono, _ZERO) + c
    return {e: Poly(t) for e, t in out.items()}


def _from_coeffs(coeffs: dict, name: str) -> Poly:
    out = {}
    for e, cp in coeffs.items():
        for m, c in cp.terms.items():
            mono = mono_mul(m, ((name, e),)) if e else m
            out[mono] = out.get(mono, _ZERO) + c
    return Poly(out)


def _content_in(p: Poly, name: str) -> Poly:
    coeffs = _coeffs_in(p, name)
    acc = None
    for cp in coeffs.values():
        acc = cp if acc is None else poly_gcd(acc, cp)
        if acc.is_const and not acc.is_zero:
            return _P_ONE
    return acc if acc is not None else _P_ZERO


def _monic(p: Poly) -> Poly:
    if p.is_zero:
        return p
    _, lc = p.leading()
    return p.scale(1 / lc)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd in Q[symbols].  Constants are units, so any nonzero
    constant input gives gcd 1."""
    if a.is_zero:
        return _monic(b)
    if b.is_zero:
        return _monic(a)
    if a.is_const or b.is_const:
        return _P_ONE

    common = mono_gcd(a.mono_content(), b.mono_content())
    if common:
        a = Poly({mono_div(m, common): c for m, c in a.terms.items()})
        b = Poly({mono_div(m, common): c for m, c in b.terms.items()})
    base = Poly({common: _ONE})
    if a.is_const or b.is_const:
        return base

    va, vb = a.variables(), b.variables()
    shared = va & vb
    if not shared:
        return base
    name = min(shared)
    if not (va - {name}) and not (vb - {name}):
        g = _gcd_univariate(a, b, name)
    else:
        g = _gcd_recursive(a, b, name)
    return _monic(base * g)


def _gcd_univariate(a: Poly, b: Poly, name: str) -> Poly:
    f, g = a, b
    if f.degree_in(name) < g.degree_in(name):
        f, g = g, f
    while not g.is_zero:
        f, g = g, _poly_rem_univ(f, g, name)
    return _monic(f)


def _poly_rem_univ(f: Poly, g: Poly, name: str) -> Poly:
    dg = g.degree_in(name)
    cg = _coeffs_in(g, name)[dg].const_value()
    while not f.is_zero:
        df = f.degree_in(name)
        if df < dg:
            break
        cf = _coeffs_in(f, name).get(df, _P_ZERO).const_value()
        shift = Poly({((name, df - dg),) if df > dg else (): cf / cg})
        f = f - shift * g
    return f


def _gcd_recursive(a: Poly, b: Poly, name: str) -> Poly:
    cont_a = _content_in(a, name)
    cont_b = _content_in(b, name)
    prim_a = poly_divexact(a, cont_a)
    prim_b = poly_divexact(b, cont_b)
    cont = poly_gcd(cont_a, cont_b)

    f, g = prim_a, prim_b
    if f.degree_in(name) < g.degree_in(name):
        f, g = g, f
    while True:
        dg = g.degree_in(name)
        if dg == 0:
            return cont
        r = _pseudo_rem(f, g, name)
        if r.is_zero:
            prim_g = poly_divexact(g, _content_in(g, name))
            return _monic(cont * prim_g)
        r = poly_divexact(r, _content_in(r, name))
        f, g = g, r


def _pseudo_rem(f: Poly, g: Poly, name: str) -> Poly:
    dg = g.degree_in(name)
    lc_g = _coeffs_in(g, name)[dg]
    while True:
        df = f.degree_in(name)
        if f.is_zero or df < dg:
            return f
        lc_f = _coeffs_in(f, name)[df]
        shift = ((name, df - dg),) if df > dg else ()
        f = lc_g * f - (lc_f * g).mul_mono(shift)


class RationalFunction:
    """Canonical quotient num/den: gcd(num, den) = 1 and den monic under
    graded lex.  Zero is 0/1."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = _P_ONE, *, reduced: bool = False):
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            self.num, self.den = _P_ZERO, _P_ONE
            return
        if not reduced:
            if den.is_const:
                num = num.scale(1 / den.const_value())
                den = _P_ONE
            else:
                g = poly_gcd(num, den)
                if not (g.is_const and g.const_value() == 1):
                    num = poly_divexact(num, g)
                    den = poly_divexact(den, g)
        if not den.is_const:
            _, lc = den.leading()
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        elif den.const_value() != 1:
            num = num.scale(1 / den.const_value())
            den = _P_ONE
        self.num, self.den = num, den

    @staticmethod
    def const(value) -> "RationalFunction":
        return RationalFunction(Poly.const(value), _P_ONE, reduced=True)

    @staticmethod
    def var(name: str) -> "RationalFunction":
        return RationalFunction(Poly.var(name), _P_ONE, reduced=True)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_const(self) -> bool:
        return self.num.is_const and self.den.is_const

    def const_value(self) -> Fraction:
        return self.num.const_value()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other):
        return (isinstance(other, RationalFunction)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        if self.is_zero or other.is_zero:
            return _RF_ZERO
        # cross-cancel first to keep intermediate products small
        a, d2 = _cancel(self.num, other.den)
        b, d1 = _cancel(other.num, self.den)
        return RationalFunction(a * b, d1 * d2)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if other.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return self * RationalFunction(other.den, other.num)

    def __pow__(self, n: int) -> "RationalFunction":
        if n == 0:
            return _RF_ONE
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("zero to a negative power")
            return RationalFunction(self.den ** -n, self.num ** -n)
        return RationalFunction(self.num ** n, self.den ** n, reduced=True)

    def derivative(self, name: str) -> "RationalFunction":
        dn = self.num.derivative(name)
        if self.den is _P_ONE or self.den.is_const:
            return RationalFunction(dn, self.den, reduced=True)
        dd = self.den.derivative(name)
        return RationalFunction(dn * self.den - self.num * dd,
                                self.den * self.den)

    def eval(self, bindings: dict):
        dv = self.den.eval(bindings)
        if dv == 0:
            raise ZeroDivisionError("pole at evaluation point")
        return self.num.eval(bindings) / dv


def _cancel(num: Poly, den: Poly):
    if den.is_const or num.is_zero:
        return num, den
    g = poly_gcd(num, den)
    if g.is_const and g.const_value() == 1:
        return num, den
    return poly_divexact(num, g), poly_divexact(den, g)


_RF_ZERO = RationalFunction.const(0)
_RF_ONE = RationalFunction.const(1)
