"""Curvature of a framed metric.

Sign convention: R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].
Tables store R[i][j][k][l], the E_l-component of R(E_i,E_j)E_k.
"""
from __future__ import annotations

from dataclasses import dataclass

from .frames import (Connection, FrameSpec, Tensor02, Tensor11, VectorField,
                     compute_brackets, covariant_derivative_vector,
                     frame_apply, metric_inverse)
from .symcore import Expr, esum

ZERO = Expr.const(0)


def riemann(spec: FrameSpec, conn: Connection, brackets=None):
    if brackets is None:
        brackets = compute_brackets(spec)
    dim = spec.dim
    gamma = conn.gamma
    table = [[[None] * dim for _ in range(dim)] for _ in range(dim)]
    zero_vec = tuple(ZERO for _ in range(dim))
    for i in range(dim):
        for j in range(dim):
            if j < i:
                for k in range(dim):
                    table[i][j][k] = tuple(-x for x in table[j][i][k])
                continue
            if j == i:
                for k in range(dim):
                    table[i][j][k] = zero_vec
                continue
            for k in range(dim):
                d_jk = VectorField(gamma[j][k])
                d_ik = VectorField(gamma[i][k])
                first = covariant_derivative_vector(spec, conn, i, d_jk)
                second = covariant_derivative_vector(spec, conn, j, d_ik)
                comps = []
                for l in range(dim):
                    comps.append(esum(
                        [first.components[l], -second.components[l]]
                        + [-(brackets[i][j][m] * gamma[m][k][l])
                           for m in range(dim)]))
                table[i][j][k] = tuple(comps)
    return tuple(tuple(tuple(row) for row in plane) for plane in table)


def riemann_apply(r_table, x: VectorField, y: VectorField,
                  z: VectorField) -> VectorField:
    """R(X,Y)Z for arbitrary fields, multilinear over components."""
    dim = len(r_table)
    comps = [[] for _ in range(dim)]
    for i in range(dim):
        xi = x.components[i]
        if xi.is_zero:
            continue
        for j in range(dim):
            yj = y.components[j]
            if yj.is_zero:
                continue
            for k in range(dim):
                zk = z.components[k]
                if zk.is_zero:
                    continue
                coef = xi * yj * zk
                for l in range(dim):
                    if not r_table[i][j][k][l].is_zero:
                        comps[l].append(coef * r_table[i][j][k][l])
    return VectorField(tuple(esum(c) for c in comps))


def nabla_riemann(spec: FrameSpec, conn: Connection, r_table, w,
                  x: VectorField, y: VectorField, z: VectorField) -> VectorField:
    """(nabla_w R)(X,Y)Z; `w` is a frame index or a VectorField."""
    dim = spec.dim
    if isinstance(w, VectorField):
        acc = VectorField(tuple(ZERO for _ in range(dim)))
        for i in range(dim):
            if w.components[i].is_zero:
                continue
            acc = acc + nabla_riemann(spec, conn, r_table, i, x, y, z).scale(
                w.components[i])
        return acc
    i = w
    rxyz = riemann_apply(r_table, x, y, z)
    lead = covariant_derivative_vector(spec, conn, i, rxyz)
    dx = covariant_derivative_vector(spec, conn, i, x)
    dy = covariant_derivative_vector(spec, conn, i, y)
    dz = covariant_derivative_vector(spec, conn, i, z)
    return (lead
            - riemann_apply(r_table, dx, y, z)
            - riemann_apply(r_table, x, dy, z)
            - riemann_apply(r_table, x, y, dz))


def nabla_riemann_table(spec: FrameSpec, conn: Connection, r_table):
    """(nabla_{E_w} R)(E_i,E_j)E_k components, indexed [w][i][j][k][l]."""
    dim = spec.dim
    gamma = conn.gamma
    out = []
    for w in range(dim):
        plane_w = []
        for i in range(dim):
            plane_i = []
            for j in range(dim):
                plane_j = []
                for k in range(dim):
                    lead = covariant_derivative_vector(
                        spec, conn, w, VectorField(r_table[i][j][k]))
                    comps = []
                    for l in range(dim):
                        corr = [
                            -(gamma[w][i][m] * r_table[m][j][k][l])
                            for m in range(dim)
                        ] + [
                            -(gamma[w][j][m] * r_table[i][m][k][l])
                            for m in range(dim)
                        ] + [
                            -(gamma[w][k][m] * r_table[i][j][m][l])
                            for m in range(dim)
                        ]
                        comps.append(esum([lead.components[l]] + corr))
                    plane_j.append(tuple(comps))
                plane_i.append(tuple(plane_j))
            plane_w.append(tuple(plane_i))
        out.append(tuple(plane_w))
    return tuple(out)


@dataclass
class RicciData:
    S: Tensor02
    r: Expr
    Q: Tensor11


def ricci(spec: FrameSpec, r_table, ginv=None) -> RicciData:
    """Ricci tensor S(Y,Z) = g^{ab} g(R(E_a,Y)Z, E_b), its g-trace r, and
    the raised operator Q."""
    if ginv is None:
        ginv = metric_inverse(spec)
    dim = spec.dim
    g = spec.metric
    s_rows = []
    for j in range(dim):
        row = []
        for k in range(dim):
            row.append(esum(
                ginv[a][b] * r_table[a][j][k][l] * g[l][b]
                for a in range(dim) for b in range(dim) for l in range(dim)
                if not r_table[a][j][k][l].is_zero))
        s_rows.append(tuple(row))
    s = Tensor02(tuple(s_rows))
    r_scal = esum(ginv[j][k] * s.m[j][k]
                  for j in range(dim) for k in range(dim))
    q = Tensor11(tuple(
        tuple(esum(ginv[i][k] * s.m[k][j] for k in range(dim))
              for j in range(dim))
        for i in range(dim)))
    return RicciData(s, r_scal, q)


def g_tensor(spec: FrameSpec, x: VectorField, y: VectorField,
             z: VectorField) -> VectorField:
    """G(X,Y)Z = g(Y,Z)X - g(X,Z)Y, the constant-curvature model tensor."""
    gyz = Tensor02(spec.metric).apply(y, z)
    gxz = Tensor02(spec.metric).apply(x, z)
    return x.scale(gyz) - y.scale(gxz)


def g_tensor_table(spec: FrameSpec):
    dim = spec.dim
    g = spec.metric
    return tuple(
        tuple(
            tuple(
                tuple((g[j][k] if l == i else ZERO)
                      - (g[i][k] if l == j else ZERO)
                      for l in range(dim))
                for k in range(dim))
            for j in range(dim))
        for i in range(dim))


def covariant_ricci_table(spec: FrameSpec, conn: Connection, s: Tensor02):
    """(nabla_{E_w} S) for each frame direction w."""
    from .frames import covariant_derivative_tensor02
    return tuple(covariant_derivative_tensor02(spec, conn, w, s)
                 for w in range(spec.dim))
