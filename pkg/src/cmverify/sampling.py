"""Deterministic numeric sampling of expressions on the chart domain."""
from __future__ import annotations

import random
from fractions import Fraction

from .symcore import DomainError, Expr, eval_rational

DEFAULT_SEED = 42
DEFAULT_POINTS = 8
DEFAULT_TOL = 1e-9


class Sampler:
    """Draws admissible points and evaluates residuals.

    Values are rational, from [-3,-1] u [1,3] with three decimal digits,
    so exact-zero residuals evaluate to exactly zero.
    """

    def __init__(self, spec, seed=DEFAULT_SEED, points=DEFAULT_POINTS,
                 tol=DEFAULT_TOL):
        self.spec = spec
        self.seed = seed
        self.count = points
        self.tol = tol
        self._points = None

    def _draw_value(self, rng) -> Fraction:
        mag = Fraction(rng.randrange(1000, 3001), 1000)
        return mag if rng.random() < 0.5 else -mag

    def points(self):
        if self._points is not None:
            return self._points
        rng = random.Random(self.seed)
        excluded = {c.coord: c.excluded for c in self.spec.coords.constraints}
        out = []
        for _ in range(self.count):
            bindings = {}
            for name in self.spec.coords.names:
                val = self._draw_value(rng)
                bad = excluded.get(name)
                while bad is not None and val == bad:
                    val = self._draw_value(rng)
                bindings[name] = val
            for name in self.spec.params:
                bindings[name] = self._draw_value(rng)
            out.append(bindings)
        self._points = out
        return out

    def max_abs(self, exprs) -> float:
        """Largest |value| over all expressions and sample points; poles at
        individual points are skipped."""
        worst = 0.0
        for e in exprs:
            if isinstance(e, Expr) and e.is_zero:
                continue
            for bindings in self.points():
                try:
                    v = eval_rational(e, bindings)
                except DomainError:
                    continue
                worst = max(worst, abs(float(v)))
        return worst

    def min_abs(self, e) -> float:
        """Smallest |value| over sample points (for nonvanishing checks)."""
        best = None
        for bindings in self.points():
            try:
                v = eval_rational(e, bindings)
            except DomainError:
                continue
            a = abs(float(v))
            best = a if best is None else min(best, a)
        return 0.0 if best is None else best
