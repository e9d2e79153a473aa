import math
from fractions import Fraction

import numpy as np
import pytest

from rmplab import _exact
from rmplab.fields import FieldSpec
from rmplab.linalg import (KakFactors, LinalgError, Matrix, ProjPoint, Subspace,
                           distance_to_subspace, fubini_distance,
                           is_orthogonal_complement, kak_decompose,
                           orthogonal_complement, wedge_square)

R = FieldSpec.real()
Q2 = FieldSpec.padic(2)


def test_matrix_basics():
    m = Matrix.make(R, [[1, 2], [3, 4]])
    assert m.det() == pytest.approx(-2.0)
    assert (m @ m.inverse()).to_numpy() == pytest.approx(np.eye(2))
    assert m.transpose().rows[0] == (1.0, 3.0)
    with pytest.raises(LinalgError):
        Matrix.make(R, [[1, 2, 3], [4, 5, 6]])


def test_matrix_padic():
    m = Matrix.make(Q2, [["1/2", 1], [0, 3]])
    assert m.det() == Fraction(3, 2)
    assert m.operator_norm() == 2.0  # max entry |1/2|_2 = 2
    inv = m.inverse()
    assert (m @ inv).rows == Matrix.identity(Q2, 2).rows


def test_singular_inverse_raises():
    with pytest.raises(LinalgError):
        Matrix.make(R, [[1, 1], [1, 1]]).inverse()
    with pytest.raises(LinalgError):
        Matrix.make(Q2, [[1, 1], [1, 1]]).inverse()


def test_proj_point_canonical():
    p = ProjPoint.make(R, [0, -2, 0])
    assert p.coords == (0.0, 1.0, 0.0)
    q = ProjPoint.make(Q2, [Fraction(2), Fraction(4)])
    assert q.coords == (1, 2)


def test_fubini_distance_real():
    x = ProjPoint.make(R, [1, 0])
    y = ProjPoint.make(R, [1, 1])
    assert fubini_distance(x, y) == pytest.approx(1 / math.sqrt(2))
    assert fubini_distance(x, x) == pytest.approx(0.0)
    z = ProjPoint.make(R, [0, 1])
    assert fubini_distance(x, z) == pytest.approx(1.0)


def test_fubini_distance_scale_invariant():
    gen = np.random.Generator(np.random.Philox(key=5))
    for _ in range(20):
        a, b = gen.standard_normal((2, 3))
        x1 = ProjPoint.make(R, list(a))
        x2 = ProjPoint.make(R, list(-3.7 * a))
        y = ProjPoint.make(R, list(b))
        assert fubini_distance(x1, y) == pytest.approx(fubini_distance(x2, y))


def test_fubini_padic_ultrametric():
    pts = [ProjPoint.make(Q2, [1, Fraction(k)]) for k in (0, 1, 2, 4)]
    for a in pts:
        for b in pts:
            for c in pts:
                dab = fubini_distance(a, b)
                assert dab <= max(fubini_distance(a, c), fubini_distance(c, b)) + 1e-12


def test_subspace_span_and_contains():
    s = Subspace.span(R, [[1, 0, 0], [0, 1, 0]])
    assert s.dim == 2
    assert s.contains_vector([2, 3, 0])
    assert not s.contains_vector([0, 0, 1])
    with pytest.raises(LinalgError):
        Subspace.span(R, [[1, 0], [2, 0]])


def test_subspace_sign_canonical():
    s = Subspace.span(R, [[-2, 0, 0]])
    assert s.basis[0][0] == pytest.approx(1.0)


def test_subspace_sum_intersection():
    a = Subspace.span(R, [[1, 0, 0]])
    b = Subspace.span(R, [[0, 1, 0]])
    assert a.sum(b).dim == 2
    assert a.intersection(b) is None
    c = Subspace.span(R, [[1, 0, 0], [0, 1, 0]])
    d = Subspace.span(R, [[1, 0, 0], [0, 0, 1]])
    inter = c.intersection(d)
    assert inter.dim == 1 and inter.contains_vector([1, 0, 0])


def test_subspace_padic():
    s = Subspace.span(Q2, [[Fraction(2), Fraction(4), Fraction(0)]], 3)
    assert s.dim == 1
    assert s.contains_vector([Fraction(1), Fraction(2), Fraction(0)])
    assert not s.contains_vector([Fraction(1), Fraction(0), Fraction(0)])


def test_orthogonal_complement_real():
    e = Subspace.span(R, [[1, 1, 0]])
    w = orthogonal_complement(e)
    assert w.dim == 2
    assert is_orthogonal_complement(e, w)


def test_orthogonal_complement_padic():
    e = Subspace.span(Q2, [[Fraction(1), Fraction(2)]], 2)
    w = orthogonal_complement(e)
    assert is_orthogonal_complement(e, w)


def test_distance_to_subspace_real():
    e = Subspace.span(R, [[1, 0, 0]])
    x = ProjPoint.make(R, [1, 1, 0])
    assert distance_to_subspace(x, e) == pytest.approx(1 / math.sqrt(2))
    assert distance_to_subspace(ProjPoint.make(R, [1, 0, 0]), e) == pytest.approx(0.0)


def test_distance_to_subspace_padic():
    e = Subspace.span(Q2, [[Fraction(1), Fraction(0)]], 2)
    x = ProjPoint.make(Q2, [Fraction(1), Fraction(2)])
    assert distance_to_subspace(x, e) == pytest.approx(0.5)
    y = ProjPoint.make(Q2, [Fraction(2), Fraction(1)])
    assert distance_to_subspace(y, e) == pytest.approx(1.0)


def test_kak_real():
    g = Matrix.make(R, [[3, 1], [0, 2]])
    kak = kak_decompose(g)
    assert kak.reconstruct().to_numpy() == pytest.approx(g.to_numpy())
    assert np.allclose(kak.k.to_numpy() @ kak.k.to_numpy().T, np.eye(2))
    assert list(kak.a) == sorted(kak.a, reverse=True)


def test_kak_padic():
    g = Matrix.make(Q2, [[2, 1], [0, 1]])
    kak = kak_decompose(g)
    assert kak.reconstruct().rows == g.rows
    assert _exact.in_gl_O([list(r) for r in kak.k.rows], 2)
    assert _exact.in_gl_O([list(r) for r in kak.u.rows], 2)


def test_kak_singular_raises():
    with pytest.raises(LinalgError):
        kak_decompose(Matrix.make(R, [[1, 1], [1, 1]]))


def test_wedge_square_multiplicative():
    gen = np.random.Generator(np.random.Philox(key=6))
    a = Matrix.make(R, gen.standard_normal((3, 3)))
    b = Matrix.make(R, gen.standard_normal((3, 3)))
    lhs = wedge_square(a @ b).to_numpy()
    rhs = (wedge_square(a) @ wedge_square(b)).to_numpy()
    assert lhs == pytest.approx(rhs, abs=1e-10)


def test_wedge_square_norm_identity():
    """||(g wedge g)(x wedge y)|| matches the wedge of the images."""
    gen = np.random.Generator(np.random.Philox(key=7))
    g = Matrix.make(R, gen.standard_normal((3, 3)))
    x, y = gen.standard_normal((2, 3))
    from itertools import combinations

    w_in = [x[i] * y[j] - x[j] * y[i] for i, j in combinations(range(3), 2)]
    gx, gy = g.to_numpy() @ x, g.to_numpy() @ y
    w_direct = [gx[i] * gy[j] - gx[j] * gy[i] for i, j in combinations(range(3), 2)]
    w_mapped = wedge_square(g).to_numpy() @ np.asarray(w_in)
    assert w_mapped == pytest.approx(np.asarray(w_direct), abs=1e-10)
