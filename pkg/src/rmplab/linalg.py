"""Dense vectors, matrices, projective points and subspaces over R and Q_p.

Real objects are backed by numpy float64; p-adic objects by exact Fractions.
The canonical norms are the Euclidean norm over R and the max norm over Q_p,
matching the Fubini-Study metric delta([x],[y]) = ||x ^ y|| / (||x|| ||y||).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import _exact
from .fields import FieldSpec, abs_scalar, polar_part, vector_norm

RANK_TOL = 1e-9


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Square matrix over a field; immutable, row-major."""

    field: FieldSpec
    rows: tuple

    @classmethod
    def make(cls, field: FieldSpec, rows) -> "Matrix":
        if field.is_real:
            data = tuple(tuple(float(x) for x in r) for r in rows)
        else:
            data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        d = len(data)
        if any(len(r) != d for r in data):
            raise LinalgError("matrix must be square")
        return cls(field, data)

    @classmethod
    def identity(cls, field: FieldSpec, d: int) -> "Matrix":
        one = 1.0 if field.is_real else Fraction(1)
        return cls.make(field, [[one if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.rows], dtype=np.float64)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise LinalgError("field mismatch")
        if self.field.is_real:
            return Matrix.make(self.field, self.to_numpy() @ other.to_numpy())
        return Matrix.make(self.field, _exact.mat_mul(self.rows, other.rows))

    def matvec(self, x):
        if self.field.is_real:
            return list(self.to_numpy() @ np.asarray([float(c) for c in x]))
        return _exact.mat_vec(self.rows, [Fraction(c) for c in x])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)))

    def det(self):
        if self.field.is_real:
            return float(np.linalg.det(self.to_numpy()))
        return _exact.det(self.rows)

    def inverse(self) -> "Matrix":
        if self.field.is_real:
            a = self.to_numpy()
            if not self.is_invertible():
                raise LinalgError("singular matrix")
            return Matrix.make(self.field, np.linalg.inv(a))
        try:
            return Matrix.make(self.field, _exact.invert(self.rows))
        except ZeroDivisionError:
            raise LinalgError("singular matrix") from None

    def is_invertible(self) -> bool:
        if self.field.is_real:
            a = self.to_numpy()
            s = np.linalg.svd(a, compute_uv=False)
            return bool(s[-1] > RANK_TOL * max(s[0], 1.0))
        return _exact.det(self.rows) != 0

    def operator_norm(self) -> float:
        """Norm as an operator for the canonical vector norm."""
        if self.field.is_real:
            return float(np.linalg.norm(self.to_numpy(), 2))
        return max(abs_scalar(x, self.field) for r in self.rows for x in r)

    def scale(self, c) -> "Matrix":
        return Matrix.make(self.field, [[c * x for x in r] for r in self.rows])


@dataclass(frozen=True)
class ProjPoint:
    """Point of P(V): a representative with unit polar part."""

    field: FieldSpec
    coords: tuple

    @classmethod
    def make(cls, field: FieldSpec, coords) -> "ProjPoint":
        _, xi = polar_part(list(coords), field)
        if field.is_real:
            # fix the sign of the largest component for a canonical representative
            i = max(range(len(xi)), key=lambda j: abs(xi[j]))
            if xi[i] < 0:
                xi = [-c for c in xi]
        return cls(field, tuple(xi))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def apply(self, g: Matrix) -> "ProjPoint":
        return ProjPoint.make(self.field, g.matvec(self.coords))


def _wedge_coords(x, y):
    return [x[i] * y[j] - x[j] * y[i] for i, j in combinations(range(len(x)), 2)]


def fubini_distance(x: ProjPoint, y: ProjPoint) -> float:
    """delta([x],[y]) = ||x ^ y|| / (||x|| ||y||), in [0, 1]."""
    if x.field != y.field or x.dim != y.dim:
        raise LinalgError("incompatible projective points")
    f = x.field
    w = _wedge_coords(list(x.coords), list(y.coords))
    return vector_norm(w, f) / (vector_norm(x.coords, f) * vector_norm(y.coords, f))


@dataclass(frozen=True)
class Subspace:
    """Subspace with an orthonormal basis (rows of ``basis``).

    Over Q_p the basis extends to a basis of the standard Z_p-lattice, i.e. it
    is part of a GL(Z_p) change of basis.
    """

    field: FieldSpec
    ambient_dim: int
    basis: tuple  # tuple of coordinate tuples

    @classmethod
    def span(cls, field: FieldSpec, vectors, ambient_dim: int | None = None) -> "Subspace":
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise LinalgError("empty basis")
        d = ambient_dim if ambient_dim is not None else len(vectors[0])
        if field.is_real:
            a = np.array(vectors, dtype=np.float64).T  # d x r
            scale = max(np.abs(a).max(), 1.0)
            if np.linalg.matrix_rank(a, tol=RANK_TOL * scale) != a.shape[1]:
                raise LinalgError("basis vectors are dependent")
            q, _ = np.linalg.qr(a)
            # canonical sign: largest-magnitude component of each vector positive
            for j in range(q.shape[1]):
                i = int(np.argmax(np.abs(q[:, j])))
                if q[i, j] < 0:
                    q[:, j] = -q[:, j]
            basis = tuple(tuple(float(x) for x in q[:, j]) for j in range(a.shape[1]))
        else:
            ob, _ = _exact.orthonormal_extension(vectors, field.p, d)
            basis = tuple(tuple(v) for v in ob)
        return cls(field, d, basis)

    @classmethod
    def full(cls, field: FieldSpec, d: int) -> "Subspace":
        eye = Matrix.identity(field, d)
        return cls.span(field, [list(r) for r in eye.rows])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.basis], dtype=np.float64).T

    def contains_vector(self, x, tol: float = RANK_TOL) -> bool:
        if self.field.is_real:
            u = self.basis_matrix()
            xv = np.asarray([float(c) for c in x], dtype=np.float64)
            n = np.linalg.norm(xv)
            if n == 0:
                return True
            resid = xv - u @ (u.T @ xv)
            return bool(np.linalg.norm(resid) <= tol * n)
        rows = [list(v) for v in self.basis] + [[Fraction(c) for c in x]]
        return _exact.gauss_rank(rows) == self.dim

    def contains(self, p: ProjPoint, tol: float = RANK_TOL) -> bool:
        return self.contains_vector(p.coords, tol)

    def equals(self, other: "Subspace", tol: float = RANK_TOL) -> bool:
        if self.dim != other.dim or self.ambient_dim != other.ambient_dim:
            return False
        return all(other.contains_vector(v, tol) for v in self.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        vecs = [list(v) for v in self.basis] + [list(v) for v in other.basis]
        if self.field.is_real:
            a = np.array(vecs, dtype=np.float64).T
            u, s, _ = np.linalg.svd(a, full_matrices=False)
            r = int(np.sum(s > RANK_TOL * max(s[0], 1.0)))
            return Subspace.span(self.field, [list(u[:, j]) for j in range(r)])
        picked = []
        for v in vecs:
            if picked and _exact.gauss_rank(picked + [v]) == len(picked):
                continue
            picked.append(v)
        return Subspace.span(self.field, picked, self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace | None":
        """Intersection subspace, or None when it is {0}."""
        if self.field.is_real:
            a = np.hstack([self.basis_matrix(), -other.basis_matrix()])
            _, s, vt = np.linalg.svd(a)
            tol = RANK_TOL * max(s[0] if len(s) else 1.0, 1.0)
            null = vt[np.sum(s > tol):].T  # columns: [alpha; beta]
            if null.shape[1] == 0:
                return None
            vecs = self.basis_matrix() @ null[: self.dim]
            return Subspace.span(self.field, [list(vecs[:, j]) for j in range(vecs.shape[1])])
        cols_a = [list(v) for v in self.basis]
        cols_b = [list(v) for v in other.basis]
        mat = [[cols_a[j][i] for j in range(len(cols_a))]
               + [-cols_b[j][i] for j in range(len(cols_b))]
               for i in range(self.ambient_dim)]
        null = _exact.nullspace(mat)
        if not null:
            return None
        vecs = []
        for coeffs in null:
            v = [sum((coeffs[j] * cols_a[j][i] for j in range(len(cols_a))), Fraction(0))
                 for i in range(self.ambient_dim)]
            vecs.append(v)
        picked = []
        for v in vecs:
            if picked and _exact.gauss_rank(picked + [v]) == len(picked):
                continue
            picked.append(v)
        return Subspace.span(self.field, picked, self.ambient_dim)

    def annihilator(self) -> "Subspace":
        """The annihilator in V*, identified with V via the dual basis."""
        if self.dim == self.ambient_dim:
            raise LinalgError("annihilator of the full space is trivial")
        if self.field.is_real:
            return orthogonal_complement(self)
        null = _exact.nullspace([list(v) for v in self.basis])
        return Subspace.span(self.field, null, self.ambient_dim)


def distance_to_subspace(x: ProjPoint, e: Subspace) -> float:
    """delta([x],[E]) via the quotient-norm formula ||pi_{E_perp}(x)|| / ||x||."""
    if e.dim == 0 or e.dim >= e.ambient_dim:
        raise LinalgError("E must be a proper nonzero subspace")
    f = x.field
    if f.is_real:
        u = e.basis_matrix()
        xv = np.asarray([float(c) for c in x.coords])
        resid = xv - u @ (u.T @ xv)
        return float(np.linalg.norm(resid) / np.linalg.norm(xv))
    comp = orthogonal_complement(e)
    cols = [list(v) for v in e.basis] + [list(v) for v in comp.basis]
    bmat = [[cols[j][i] for j in range(len(cols))] for i in range(e.ambient_dim)]
    coeffs = _exact.solve(bmat, [Fraction(c) for c in x.coords])
    num = max((abs_scalar(c, f) for c in coeffs[e.dim:]), default=0.0)
    den = max(abs_scalar(c, f) for c in coeffs)
    return num / den


def orthogonal_complement(e: Subspace) -> Subspace:
    """A complement W with V = E + W and the norm combination rule of the field.

    Over Q_p the complement is not unique; any subspace passing
    ``is_orthogonal_complement`` is equally valid.
    """
    if e.dim == 0 or e.dim >= e.ambient_dim:
        raise LinalgError("E must be a proper nonzero subspace")
    if e.field.is_real:
        u = e.basis_matrix()
        full_u, _, _ = np.linalg.svd(u, full_matrices=True)
        comp = full_u[:, e.dim:]
        return Subspace.span(e.field, [list(comp[:, j]) for j in range(comp.shape[1])])
    _, comp = _exact.orthonormal_extension([list(v) for v in e.basis], e.field.p, e.ambient_dim)
    return Subspace.span(e.field, comp, e.ambient_dim)


def is_orthogonal_complement(e: Subspace, w: Subspace) -> bool:
    """Validator for the orthogonality contract of a claimed complement."""
    if e.field != w.field or e.ambient_dim != w.ambient_dim:
        return False
    if e.dim + w.dim != e.ambient_dim:
        return False
    cols = [list(v) for v in e.basis] + [list(v) for v in w.basis]
    if e.field.is_real:
        b = np.array(cols, dtype=np.float64).T
        return bool(np.max(np.abs(b.T @ b - np.eye(e.ambient_dim))) < 1e-9)
    bmat = [[cols[j][i] for j in range(len(cols))] for i in range(e.ambient_dim)]
    return _exact.in_gl_O(bmat, e.field.p)


@dataclass(frozen=True)
class KakFactors:
    """g = k @ a @ u with k, u isometries and a diagonal."""

    k: Matrix
    a: tuple
    u: Matrix

    def reconstruct(self) -> Matrix:
        field = self.k.field
        d = len(self.a)
        amat = Matrix.make(field, [[self.a[i] if i == j else 0 for j in range(d)] for i in range(d)])
        return self.k @ amat @ self.u


def kak_decompose(g: Matrix) -> KakFactors:
    """KAK/Cartan decomposition: SVD over R, valuation-pivot Smith over Q_p.

    Over R the diagonal is sorted descending; over Q_p the entries are powers
    of p sorted by ascending valuation (equivalently descending absolute
    value), with k, u in GL_d(Z_p).
    """
    if not g.is_invertible():
        raise LinalgError("singular matrix has no KAK decomposition")
    if g.field.is_real:
        uu, s, vt = np.linalg.svd(g.to_numpy())
        return KakFactors(
            Matrix.make(g.field, uu), tuple(float(x) for x in s), Matrix.make(g.field, vt)
        )
    pmat, diag, qmat = _exact.smith_padic([list(r) for r in g.rows], g.field.p)
    return KakFactors(
        Matrix.make(g.field, pmat), tuple(diag), Matrix.make(g.field, qmat)
    )


def wedge_square(g: Matrix) -> Matrix:
    """The induced map on the second exterior power, in the e_i ^ e_j basis."""
    d = g.dim
    if d < 2:
        raise LinalgError("wedge square needs dimension >= 2")
    pairs = list(combinations(range(d), 2))
    rows = []
    for (i, j) in pairs:
        row = []
        for (k, l) in pairs:
            row.append(g.rows[i][k] * g.rows[j][l] - g.rows[i][l] * g.rows[j][k])
        rows.append(row)
    return Matrix.make(g.field, rows)
