"""Skew-product coordinates on L x S(V/L) and the affine fiber cocycle.

A chart consists of an invariant subspace L and a complement identified with
V/L.  Every atom is block upper triangular in the adapted basis; the action
on chart coordinates is (t, xi) -> ((A t + B xi) / N(C xi), C xi / N(C xi))
where N is the polar-part normalizer of the field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact
from .fields import FieldSpec, polar_part, vector_norm
from .linalg import LinalgError, Matrix, ProjPoint, Subspace, orthogonal_complement
from .measure import MeasureSpec, RngStream, sample

BLOCK_TOL = 1e-10


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class SkewPoint:
    t: tuple  # fiber coordinate in L
    xi: tuple  # unit vector in V/L

    @property
    def fiber_norm(self) -> float:
        return max(abs(float(c)) for c in self.t)


@dataclass(frozen=True)
class SkewChart:
    field: FieldSpec
    L: Subspace
    L_tilde: Subspace
    _basis: tuple  # adapted basis columns, L first
    _inv: tuple  # inverse of the adapted basis matrix

    @classmethod
    def make(cls, L: Subspace, L_tilde: Subspace | None = None) -> "SkewChart":
        field = L.field
        if L_tilde is None:
            L_tilde = orthogonal_complement(L)
        cols = [list(v) for v in L.basis] + [list(v) for v in L_tilde.basis]
        d = L.ambient_dim
        if len(cols) != d:
            raise ChartError("L and its complement do not span V")
        if field.is_real:
            b = np.array(cols, dtype=np.float64).T
            binv = np.linalg.inv(b)
            basis = tuple(tuple(float(x) for x in b[:, j]) for j in range(d))
            inv = tuple(tuple(float(x) for x in binv[i]) for i in range(d))
        else:
            bmat = [[cols[j][i] for j in range(len(cols))] for i in range(d)]
            binv = _exact.invert(bmat)
            basis = tuple(tuple(Fraction(bmat[i][j]) for i in range(d)) for j in range(d))
            inv = tuple(tuple(Fraction(x) for x in row) for row in binv)
        return cls(field, L, L_tilde, basis, inv)

    @property
    def dim_l(self) -> int:
        return self.L.dim

    @property
    def dim_q(self) -> int:
        return self.L.ambient_dim - self.L.dim

    def _to_adapted(self, coords):
        if self.field.is_real:
            inv = np.array(self._inv)
            return list(inv @ np.asarray([float(c) for c in coords]))
        return _exact.mat_vec([list(r) for r in self._inv], [Fraction(c) for c in coords])

    def _from_adapted(self, coords):
        d = len(self._basis[0])
        if self.field.is_real:
            b = np.array([[self._basis[j][i] for j in range(d)] for i in range(d)])
            return list(b @ np.asarray([float(c) for c in coords]))
        out = [Fraction(0)] * d
        for j, col in enumerate(self._basis):
            for i in range(d):
                out[i] += Fraction(coords[j]) * col[i]
        return out

    def blocks(self, g: Matrix):
        """Adapted-basis blocks (A, B, C) of g = [[A, B], [0, C]].

        Raises ChartError when g does not stabilize L.
        """
        r, q = self.dim_l, self.dim_q
        cols = [self._to_adapted(g.matvec(list(col))) for col in self._basis]
        if self.field.is_real:
            m = np.array(cols).T
            lower = m[r:, :r]
            if np.max(np.abs(lower), initial=0.0) > BLOCK_TOL * max(np.max(np.abs(m)), 1.0):
                raise ChartError("atom does not stabilize L in this chart")
            return m[:r, :r], m[:r, r:], m[r:, r:]
        m = [[cols[j][i] for j in range(r + q)] for i in range(r + q)]
        if any(m[i][j] != 0 for i in range(r, r + q) for j in range(r)):
            raise ChartError("atom does not stabilize L in this chart")
        a = [row[:r] for row in m[:r]]
        b = [row[r:] for row in m[:r]]
        c = [row[r:] for row in m[r:]]
        return a, b, c


def to_chart(x: ProjPoint, chart: SkewChart) -> SkewPoint:
    """Chart coordinates of [x], defined away from [L]."""
    r = chart.dim_l
    coords = chart._to_adapted(list(x.coords))
    ell, w = coords[:r], coords[r:]
    if chart.field.is_real:
        if vector_norm(w, chart.field) <= 1e-12 * vector_norm(coords, chart.field):
            raise ChartError("point at infinity for this chart")
        n, xi = polar_part([float(c) for c in w], chart.field)
        t = tuple(float(c) / n for c in ell)
    else:
        if all(Fraction(c) == 0 for c in w):
            raise ChartError("point at infinity for this chart")
        n, xi = polar_part([Fraction(c) for c in w], chart.field)
        t = tuple(Fraction(c) / n for c in ell)
    return SkewPoint(t, tuple(xi))


def from_chart(s: SkewPoint, chart: SkewChart) -> ProjPoint:
    coords = list(s.t) + list(s.xi)
    return ProjPoint.make(chart.field, chart._from_adapted(coords))


@dataclass(frozen=True)
class AffineMap:
    """t -> linear @ t + translation on the fiber L."""

    linear: tuple  # r x r rows
    translation: tuple

    def apply(self, t):
        r = len(self.translation)
        if isinstance(self.translation[0], float):
            lin = np.array(self.linear)
            return tuple(float(x) for x in lin @ np.asarray([float(c) for c in t])
                         + np.asarray(self.translation))
        out = list(self.translation)
        for i in range(r):
            for j in range(r):
                out[i] += Fraction(self.linear[i][j]) * Fraction(t[j])
        return tuple(out)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other."""
        r = len(self.translation)
        if isinstance(self.translation[0], float):
            a = np.array(self.linear) @ np.array(other.linear)
            b = np.array(self.linear) @ np.asarray(other.translation) \
                + np.asarray(self.translation)
            return AffineMap(tuple(map(tuple, a)), tuple(float(x) for x in b))
        lin = _exact.mat_mul([list(x) for x in self.linear], [list(x) for x in other.linear])
        tr = _exact.mat_vec([list(x) for x in self.linear], list(other.translation))
        tr = [x + y for x, y in zip(tr, self.translation)]
        return AffineMap(tuple(map(tuple, lin)), tuple(tr))


def _apply_blocks(a, b, c, s: SkewPoint, field: FieldSpec):
    if field.is_real:
        cxi = np.array(c) @ np.asarray([float(x) for x in s.xi])
        n, xi = polar_part(list(cxi), field)
        tnew = (np.array(a) @ np.asarray([float(x) for x in s.t])
                + np.array(b) @ np.asarray([float(x) for x in s.xi])) / n
        return SkewPoint(tuple(float(x) for x in tnew), tuple(xi))
    cxi = _exact.mat_vec([list(r) for r in c], [Fraction(x) for x in s.xi])
    n, xi = polar_part(cxi, field)
    at = _exact.mat_vec([list(r) for r in a], [Fraction(x) for x in s.t])
    bxi = _exact.mat_vec([list(r) for r in b], [Fraction(x) for x in s.xi])
    tnew = [(u + v) / n for u, v in zip(at, bxi)]
    return SkewPoint(tuple(tnew), tuple(xi))


def act_skew(g: Matrix, s: SkewPoint, chart: SkewChart) -> SkewPoint:
    """Lifted action of g on (t, xi)."""
    a, b, c = chart.blocks(g)
    return _apply_blocks(a, b, c, s, chart.field)


def base_action(g: Matrix, xi, chart: SkewChart):
    """Projective action of the quotient block on the base sphere."""
    _, _, c = chart.blocks(g)
    if chart.field.is_real:
        cxi = np.array(c) @ np.asarray([float(x) for x in xi])
        _, out = polar_part(list(cxi), chart.field)
        return tuple(out)
    cxi = _exact.mat_vec([list(r) for r in c], [Fraction(x) for x in xi])
    _, out = polar_part(cxi, chart.field)
    return tuple(out)


def sigma_cocycle(g: Matrix, xi, chart: SkewChart) -> AffineMap:
    """The affine fiber map sigma(g, xi): t -> (A t + B xi) / N(C xi)."""
    a, b, c = chart.blocks(g)
    field = chart.field
    if field.is_real:
        cxi = np.array(c) @ np.asarray([float(x) for x in xi])
        n, _ = polar_part(list(cxi), field)
        lin = np.array(a) / n
        tr = (np.array(b) @ np.asarray([float(x) for x in xi])) / n
        return AffineMap(tuple(map(tuple, lin)), tuple(float(x) for x in tr))
    cxi = _exact.mat_vec([list(r) for r in c], [Fraction(x) for x in xi])
    n, _ = polar_part(cxi, field)
    lin = [[Fraction(x) / n for x in row] for row in a]
    tr = [x / n for x in _exact.mat_vec([list(r) for r in b], [Fraction(x) for x in xi])]
    return AffineMap(tuple(map(tuple, lin)), tuple(tr))


def run_recursion(spec: MeasureSpec, s0: SkewPoint, chart: SkewChart, n: int,
                  rng: RngStream):
    """Trajectory of the stochastic fiber/base recursion, length n + 1."""
    blocks = [chart.blocks(a) for a in spec.atoms]
    idx = sample(spec, rng, n)
    out = [s0]
    cur = s0
    for k in idx:
        a, b, c = blocks[int(k)]
        cur = _apply_blocks(a, b, c, cur, chart.field)
        out.append(cur)
    return out
