"""Moving frames over a coordinate chart.

Index conventions used throughout:
  CoordinateMode   E_i = sum_j a[i][j] d/dx_j
  BracketMode      [E_i, E_j] = sum_k c[i][j][k] E_k,  E_i(x_j) = act[i][j]
  Connection       nabla_{E_i} E_j = sum_k gamma[i][j][k] E_k
  Tensor11         (T E_j)^i = m[i][j]
  Tensor02         T(E_i, E_j) = m[i][j]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import SingularMatrix, mat_det, mat_inv
from .symcore import Expr, differentiate, esum, render

ZERO = Expr.const(0)
ONE = Expr.const(1)


class FrameDependent(ValueError):
    """The declared coordinate frame is linearly dependent."""


class SingularMetric(ValueError):
    pass


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class DomainConstraint:
    coord: str
    excluded: Fraction


@dataclass(frozen=True)
class CoordSystem:
    names: tuple
    constraints: tuple = ()


@dataclass(frozen=True)
class CoordinateMode:
    a: tuple


@dataclass(frozen=True)
class BracketMode:
    c: tuple
    act: tuple


@dataclass(frozen=True)
class FrameSpec:
    name: str
    coords: CoordSystem
    params: tuple
    mode: object
    metric: tuple

    @property
    def dim(self) -> int:
        return len(self.coords.names)

    @property
    def n(self) -> int:
        return (self.dim - 1) // 2

    def symbols(self) -> set:
        return set(self.coords.names) | set(self.params)


@dataclass(frozen=True)
class VectorField:
    components: tuple

    def __add__(self, other):
        return VectorField(tuple(a + b for a, b in
                                 zip(self.components, other.components)))

    def __sub__(self, other):
        return VectorField(tuple(a - b for a, b in
                                 zip(self.components, other.components)))

    def __neg__(self):
        return VectorField(tuple(-a for a in self.components))

    def scale(self, f: Expr):
        return VectorField(tuple(f * a for a in self.components))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)


@dataclass(frozen=True)
class OneForm:
    components: tuple

    def __call__(self, v: VectorField) -> Expr:
        return esum(a * b for a, b in zip(self.components, v.components))

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)


@dataclass(frozen=True)
class Tensor11:
    m: tuple

    def apply(self, v: VectorField) -> VectorField:
        return VectorField(tuple(
            esum(row[j] * v.components[j] for j in range(len(row)))
            for row in self.m))

    def column(self, j: int) -> VectorField:
        return VectorField(tuple(row[j] for row in self.m))

    def compose(self, other: "Tensor11") -> "Tensor11":
        n = len(self.m)
        return Tensor11(tuple(
            tuple(esum(self.m[i][k] * other.m[k][j] for k in range(n))
                  for j in range(n))
            for i in range(n)))

    def trace(self) -> Expr:
        return esum(self.m[i][i] for i in range(len(self.m)))

    def __add__(self, other):
        return Tensor11(tuple(tuple(a + b for a, b in zip(r1, r2))
                              for r1, r2 in zip(self.m, other.m)))

    def __sub__(self, other):
        return Tensor11(tuple(tuple(a - b for a, b in zip(r1, r2))
                              for r1, r2 in zip(self.m, other.m)))

    def __neg__(self):
        return Tensor11(tuple(tuple(-a for a in r) for r in self.m))

    def scale(self, f: Expr):
        return Tensor11(tuple(tuple(f * a for a in r) for r in self.m))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for r in self.m for a in r)


@dataclass(frozen=True)
class Tensor02:
    m: tuple

    def apply(self, x: VectorField, y: VectorField) -> Expr:
        n = len(self.m)
        return esum(self.m[i][j] * x.components[i] * y.components[j]
                    for i in range(n) for j in range(n))

    def __sub__(self, other):
        return Tensor02(tuple(tuple(a - b for a, b in zip(r1, r2))
                              for r1, r2 in zip(self.m, other.m)))

    @property
    def is_zero(self) -> bool:
        return all(a.is_zero for r in self.m for a in r)


@dataclass(frozen=True)
class Connection:
    gamma: tuple


def zero_tensor11(dim: int) -> Tensor11:
    return Tensor11(tuple(tuple(ZERO for _ in range(dim)) for _ in range(dim)))


def identity_tensor11(dim: int) -> Tensor11:
    return Tensor11(tuple(tuple(ONE if i == j else ZERO for j in range(dim))
                          for i in range(dim)))


def basis_vector(dim: int, i: int) -> VectorField:
    return VectorField(tuple(ONE if j == i else ZERO for j in range(dim)))


@dataclass
class ValidationIssue:
    name: str
    level: str       # ok | warning | error
    detail: str = ""


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    def add(self, name, level, detail=""):
        self.issues.append(ValidationIssue(name, level, detail))

    @property
    def ok(self) -> bool:
        return not any(i.level == "error" for i in self.issues)

    @property
    def warnings(self) -> list:
        return [i for i in self.issues if i.level == "warning"]


def frame_apply(spec: FrameSpec, i: int, f: Expr) -> Expr:
    """Directional derivative E_i(f)."""
    coeffs = spec.mode.a[i] if isinstance(spec.mode, CoordinateMode) \
        else spec.mode.act[i]
    return esum(coeffs[j] * differentiate(f, name)
                for j, name in enumerate(spec.coords.names))


def apply_vector(spec: FrameSpec, v: VectorField, f: Expr) -> Expr:
    return esum(v.components[i] * frame_apply(spec, i, f)
                for i in range(spec.dim))


def compute_brackets(spec: FrameSpec):
    """Structure functions c[i][j][k] for the frame."""
    if isinstance(spec.mode, BracketMode):
        return spec.mode.c
    a = spec.mode.a
    dim = spec.dim
    try:
        a_inv = mat_inv([list(r) for r in a])
    except SingularMatrix:
        raise FrameDependent(
            "frame coefficient matrix is singular; fields are dependent") from None
    names = spec.coords.names
    c = []
    for i in range(dim):
        row = []
        for j in range(dim):
            # [E_i, E_j] = sum_m w^m d/dx_m expressed back through the frame
            w = [frame_apply(spec, i, a[j][m]) - frame_apply(spec, j, a[i][m])
                 for m in range(dim)]
            row.append(tuple(
                esum(w[m] * a_inv[m][k] for m in range(dim))
                for k in range(dim)))
        c.append(tuple(row))
    return tuple(c)


def lie_bracket(spec: FrameSpec, v: VectorField, w: VectorField,
                brackets=None) -> VectorField:
    if brackets is None:
        brackets = compute_brackets(spec)
    dim = spec.dim
    comps = []
    for l in range(dim):
        terms = [apply_vector(spec, v, w.components[l]),
                 -apply_vector(spec, w, v.components[l])]
        terms.extend(v.components[a] * w.components[b] * brackets[a][b][l]
                     for a in range(dim) for b in range(dim)
                     if not v.components[a].is_zero
                     and not w.components[b].is_zero)
        comps.append(esum(terms))
    return VectorField(tuple(comps))


def validate_frame(spec: FrameSpec) -> ValidationReport:
    report = ValidationReport()
    dim = spec.dim
    if dim % 2 == 0:
        report.add("odd-dimension", "error", f"dimension {dim} is even")
    else:
        report.add("odd-dimension", "ok")

    gdet = mat_det(spec.metric)
    if gdet.is_zero:
        report.add("metric-nondegenerate", "error",
                   "metric determinant is identically zero")
    elif gdet.variables():
        report.add("metric-nondegenerate", "warning",
                   f"metric degenerates where {render(gdet)} = 0")
    else:
        report.add("metric-nondegenerate", "ok")

    if isinstance(spec.mode, CoordinateMode):
        det = mat_det(spec.mode.a)
        if det.is_zero:
            raise FrameDependent(
                "coordinate frame determinant is identically zero")
        if det.variables():
            report.add("frame-independent", "warning",
                       f"frame degenerates where {render(det)} = 0")
        else:
            report.add("frame-independent", "ok")
        return report

    c, act = spec.mode.c, spec.mode.act
    anti_bad = [(i, j, k) for i in range(dim) for j in range(dim)
                for k in range(dim)
                if not (c[i][j][k] + c[j][i][k]).is_zero]
    if anti_bad:
        report.add("bracket-antisymmetry", "error",
                   f"c[i][j][k] + c[j][i][k] != 0 at {anti_bad[:3]}")
    else:
        report.add("bracket-antisymmetry", "ok")

    jac_bad = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(j + 1, dim):
                for l in range(dim):
                    res = esum(
                        frame_apply(spec, a, c[b][cc][l])
                        + esum(c[b][cc][m] * c[a][m][l] for m in range(dim))
                        for a, b, cc in ((i, j, k), (j, k, i), (k, i, j)))
                    if not res.is_zero:
                        jac_bad.append(((i, j, k), l, render(res)))
    if jac_bad:
        report.add("jacobi", "warning",
                   f"Jacobi residual nonzero, e.g. {jac_bad[0]}")
    else:
        report.add("jacobi", "ok")

    act_bad = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for f, name in enumerate(spec.coords.names):
                res = (frame_apply(spec, i, act[j][f])
                       - frame_apply(spec, j, act[i][f])
                       - esum(c[i][j][k] * act[k][f] for k in range(dim)))
                if not res.is_zero:
                    act_bad.append(((i, j), name, render(res)))
    if act_bad:
        report.add("action-compatibility", "warning",
                   f"declared actions clash with brackets, e.g. {act_bad[0]}")
    else:
        report.add("action-compatibility", "ok")
    return report


def metric_inverse(spec: FrameSpec):
    try:
        return mat_inv(spec.metric)
    except SingularMatrix:
        raise SingularMetric("metric is singular") from None


def metric_pairing(spec: FrameSpec, x: VectorField, y: VectorField) -> Expr:
    return Tensor02(spec.metric).apply(x, y)


def lower_index(spec: FrameSpec, v: VectorField) -> OneForm:
    dim = spec.dim
    return OneForm(tuple(
        esum(spec.metric[i][j] * v.components[j] for j in range(dim))
        for i in range(dim)))


def raise_index(spec: FrameSpec, w: OneForm, ginv=None) -> VectorField:
    if ginv is None:
        ginv = metric_inverse(spec)
    dim = spec.dim
    return VectorField(tuple(
        esum(ginv[i][j] * w.components[j] for j in range(dim))
        for i in range(dim)))


def koszul_connection(spec: FrameSpec, brackets=None, ginv=None) -> Connection:
    """Levi-Civita connection of the frame metric via the Koszul formula."""
    if brackets is None:
        brackets = compute_brackets(spec)
    if ginv is None:
        ginv = metric_inverse(spec)
    g = spec.metric
    dim = spec.dim
    half = Expr.const(Fraction(1, 2))
    gamma = []
    for i in range(dim):
        gi = []
        for j in range(dim):
            rhs = []
            for k in range(dim):
                val = esum([
                    frame_apply(spec, i, g[j][k]),
                    frame_apply(spec, j, g[i][k]),
                    -frame_apply(spec, k, g[i][j]),
                ] + [brackets[i][j][m] * g[m][k]
                     - brackets[i][k][m] * g[m][j]
                     - brackets[j][k][m] * g[m][i]
                     for m in range(dim)])
                rhs.append(half * val)
            gi.append(tuple(
                esum(ginv[l][k] * rhs[k] for k in range(dim))
                for l in range(dim)))
        gamma.append(tuple(gi))
    return Connection(tuple(gamma))


def covariant_derivative_vector(spec: FrameSpec, conn: Connection,
                                w, v: VectorField) -> VectorField:
    """nabla_w v; `w` is a frame index or a VectorField."""
    dim = spec.dim
    if isinstance(w, VectorField):
        acc = VectorField(tuple(ZERO for _ in range(dim)))
        for i in range(dim):
            if w.components[i].is_zero:
                continue
            acc = acc + covariant_derivative_vector(spec, conn, i, v).scale(
                w.components[i])
        return acc
    i = w
    return VectorField(tuple(
        esum([frame_apply(spec, i, v.components[k])]
             + [v.components[j] * conn.gamma[i][j][k] for j in range(dim)])
        for k in range(dim)))


def covariant_derivative_oneform(spec: FrameSpec, conn: Connection,
                                 i: int, w: OneForm) -> OneForm:
    dim = spec.dim
    return OneForm(tuple(
        frame_apply(spec, i, w.components[j])
        - esum(conn.gamma[i][j][m] * w.components[m] for m in range(dim))
        for j in range(dim)))


def covariant_derivative_tensor11(spec: FrameSpec, conn: Connection,
                                  i: int, t: Tensor11) -> Tensor11:
    dim = spec.dim
    rows = []
    for k in range(dim):
        row = []
        for j in range(dim):
            row.append(esum(
                [frame_apply(spec, i, t.m[k][j])]
                + [conn.gamma[i][m][k] * t.m[m][j] for m in range(dim)]
                + [-(conn.gamma[i][j][m] * t.m[k][m]) for m in range(dim)]))
        rows.append(tuple(row))
    return Tensor11(tuple(rows))


def covariant_derivative_tensor02(spec: FrameSpec, conn: Connection,
                                  i: int, t: Tensor02) -> Tensor02:
    dim = spec.dim
    rows = []
    for j in range(dim):
        row = []
        for k in range(dim):
            row.append(esum(
                [frame_apply(spec, i, t.m[j][k])]
                + [-(conn.gamma[i][j][m] * t.m[m][k]) for m in range(dim)]
                + [-(conn.gamma[i][k][m] * t.m[j][m]) for m in range(dim)]))
        rows.append(tuple(row))
    return Tensor02(tuple(rows))


def to_bracket_mode(spec: FrameSpec) -> FrameSpec:
    """Re-express a CoordinateMode spec through its structure functions."""
    if isinstance(spec.mode, BracketMode):
        return spec
    c = compute_brackets(spec)
    act = tuple(tuple(row) for row in spec.mode.a)
    return FrameSpec(spec.name, spec.coords, spec.params,
                     BracketMode(c, act), spec.metric)
