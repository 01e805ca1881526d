"""Connection and curvature tables are frozen against hand-derived values
for the bundled manifolds before any solver consumes them."""

from cmverify.curvature import (covariant_ricci_table, g_tensor,
                                g_tensor_table, riemann_apply)
from cmverify.frames import basis_vector
from cmverify.symcore import Expr, render


def _nonzero_gamma(conn, dim=3):
    out = {}
    for i in range(dim):
        for j in range(dim):
            comps = [render(c) for c in conn.gamma[i][j]]
            if any(c != "0" for c in comps):
                out[(i, j)] = comps
    return out


def test_connection_table_frozen(ex3):
    assert _nonzero_gamma(ex3.conn) == {
        (1, 0): ["0", "-1/y", "0"],
        (1, 1): ["1/y", "0", "0"],
    }


def test_connection_flat_baseline(flat):
    assert _nonzero_gamma(flat.conn) == {}


def test_riemann_table_frozen(ex3):
    rt = ex3.r_table
    assert [render(c) for c in rt[0][1][0]] == ["0", "2/y^2", "0"]
    assert [render(c) for c in rt[0][1][1]] == ["-2/y^2", "0", "0"]
    for (i, j, k) in [(0, 1, 2), (0, 2, 0), (0, 2, 1), (0, 2, 2),
                      (1, 2, 0), (1, 2, 1), (1, 2, 2)]:
        assert all(c.is_zero for c in rt[i][j][k])


def test_riemann_flat_baseline(flat):
    assert all(c.is_zero for p1 in flat.r_table for p2 in p1 for row in p2
               for c in row)


def test_riemann_constant_curvature_sphere(sph):
    # R(X,Y)Z = g(Y,Z)X - g(X,Z)Y at curvature one
    vecs = [basis_vector(3, i) for i in range(3)]
    for i in range(3):
        for j in range(3):
            for k in range(3):
                got = riemann_apply(sph.r_table, vecs[i], vecs[j], vecs[k])
                model = g_tensor(sph.spec, vecs[i], vecs[j], vecs[k])
                assert (got - model).is_zero


def test_riemann_apply_is_multilinear(ex3):
    y = Expr.sym("y")
    e1, e2 = basis_vector(3, 0), basis_vector(3, 1)
    scaled = riemann_apply(ex3.r_table, e1.scale(y), e2, e1)
    plain = riemann_apply(ex3.r_table, e1, e2, e1).scale(y)
    assert (scaled - plain).is_zero


def test_nabla_riemann_frozen(ex3):
    nr = ex3.nr_table
    nonzero = {}
    for w in range(3):
        for i in range(3):
            for j in range(i + 1, 3):
                for k in range(3):
                    comps = [render(c) for c in nr[w][i][j][k]]
                    if any(c != "0" for c in comps):
                        nonzero[(w, i, j, k)] = comps
    assert nonzero == {
        (0, 0, 1, 0): ["0", "-4/y^3", "0"],
        (0, 0, 1, 1): ["4/y^3", "0", "0"],
    }


def test_nabla_riemann_vanishes_on_symmetric_space(sph):
    assert all(c.is_zero
               for p1 in sph.nr_table for p2 in p1 for p3 in p2
               for row in p3 for c in row)


def test_ricci_data_frozen(ex3):
    ric = ex3.ric
    assert [[render(c) for c in row] for row in ric.S.m] == [
        ["-2/y^2", "0", "0"], ["0", "-2/y^2", "0"], ["0", "0", "0"]]
    assert render(ric.r) == "-4/y^2"
    assert [render(c) for c in ric.Q.column(0).components] \
        == ["-2/y^2", "0", "0"]


def test_ricci_einstein_sphere(sph):
    ric = sph.ric
    for i in range(3):
        for j in range(3):
            want = Expr.const(2) * sph.spec.metric[i][j]
            assert (ric.S.m[i][j] - want).is_zero
    assert render(ric.r) == "6"
    # Q is g-self-adjoint here because S is symmetric and g the identity
    assert [render(c) for c in ric.Q.column(0).components] == ["2", "0", "0"]


def test_covariant_ricci_frozen(ex3):
    crt = covariant_ricci_table(ex3.spec, ex3.conn, ex3.ric.S)
    nonzero = {(w, i, j): render(crt[w].m[i][j])
               for w in range(3) for i in range(3) for j in range(3)
               if not crt[w].m[i][j].is_zero}
    assert nonzero == {(0, 0, 0): "4/y^3", (0, 1, 1): "4/y^3"}


def test_g_tensor_model(ex3):
    e1, e2 = basis_vector(3, 0), basis_vector(3, 1)
    got = g_tensor(ex3.spec, e1, e2, e1)
    assert [render(c) for c in got.components] == ["0", "-1", "0"]
    table = g_tensor_table(ex3.spec)
    assert (riemann_apply(table, e1, e2, e1) - got).is_zero
