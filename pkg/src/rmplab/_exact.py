"""Exact rational linear algebra and p-adic matrix factorizations.

Everything here works on nested lists of ``Fraction``.  The p-adic routines
implement valuation-pivoted reductions whose accumulated row/column operations
stay in GL_d(Z_p): multipliers always have nonnegative valuation and scalings
are p-adic units, so the outer factors are isometries of the max norm.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .fields import padic_valuation

Frac = Fraction


def identity(n):
    return [[Frac(1) if i == j else Frac(0) for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), Frac(0)) for j in range(m)]
        for i in range(n)
    ]


def mat_vec(a, x):
    return [sum((a[i][j] * x[j] for j in range(len(x))), Frac(0)) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def gauss_rank(rows) -> int:
    """Rank over Q by fraction-free-ish elimination."""
    a = [list(map(Frac, r)) for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    rank = 0
    col = 0
    while rank < nr and col < nc:
        piv = next((i for i in range(rank, nr) if a[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, nr):
            if a[i][col] != 0:
                m = a[i][col] / a[rank][col]
                a[i] = [x - m * y for x, y in zip(a[i], a[rank])]
        rank += 1
        col += 1
    return rank


def solve(a, b):
    """Solve the square system a x = b exactly; raises on singular a."""
    n = len(a)
    m = [[Frac(x) for x in row] + [Frac(b[i])] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] for i in range(n)]


def invert(a):
    n = len(a)
    cols = [solve(a, [Frac(1) if i == j else Frac(0) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def det(a):
    n = len(a)
    m = [[Frac(x) for x in row] for row in a]
    d = Frac(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Frac(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def nullspace(rows):
    """Basis of the right nullspace of the matrix, as a list of vectors."""
    a = [list(map(Frac, r)) for r in rows]
    if not a:
        return []
    nr, nc = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Frac(0)] * nc
        v[fc] = Frac(1)
        for ri, pc in enumerate(pivots):
            v[pc] = -a[ri][fc]
        basis.append(v)
    return basis


def _min_val_entry(a, p, r0, c0):
    """Position of a nonzero entry of minimal valuation in the trailing block."""
    best = None
    best_v = math.inf
    for i in range(r0, len(a)):
        for j in range(c0, len(a[0])):
            if a[i][j] != 0:
                v = padic_valuation(a[i][j], p)
                if v < best_v:
                    best_v = v
                    best = (i, j)
    return best, best_v


def smith_padic(mat, p):
    """Factor mat = P @ D @ Q with P, Q in GL(Z_p) and D diagonal powers of p.

    mat may be rectangular (r x c); P is r x r, Q is c x c, D is returned as the
    list of diagonal entries (Fractions p^v, ascending valuation), padded
    implicitly with zeros.  Pivoting always picks a minimal-valuation entry, so
    every elimination multiplier lies in Z_p.
    """
    a = [[Frac(x) for x in row] for row in mat]
    if not a or not a[0]:
        return identity(len(a)), [], identity(0)
    nr, nc = len(a), len(a[0])
    pmat = identity(nr)  # accumulates inverse row ops: mat = P @ a
    qmat = identity(nc)  # accumulates inverse col ops
    diag = []
    for s in range(min(nr, nc)):
        pos, v = _min_val_entry(a, p, s, s)
        if pos is None:
            break
        i0, j0 = pos
        if i0 != s:
            a[s], a[i0] = a[i0], a[s]
            for r in range(nr):  # P <- P * swap
                pmat[r][s], pmat[r][i0] = pmat[r][i0], pmat[r][s]
        if j0 != s:
            for r in range(nr):
                a[r][s], a[r][j0] = a[r][j0], a[r][s]
            qmat[s], qmat[j0] = qmat[j0], qmat[s]
        pivot = a[s][s]
        # scale the pivot row by the unit part so the pivot becomes p^v
        unit = pivot / Frac(p) ** v
        if unit != 1:
            a[s] = [x / unit for x in a[s]]
            for r in range(nr):
                pmat[r][s] = pmat[r][s] * unit
        pivot = a[s][s]
        for i in range(s + 1, nr):
            if a[i][s] != 0:
                m = a[i][s] / pivot  # valuation >= 0 by pivot choice
                a[i] = [x - m * y for x, y in zip(a[i], a[s])]
                for r in range(nr):
                    pmat[r][s] += m * pmat[r][i]
        for j in range(s + 1, nc):
            if a[s][j] != 0:
                m = a[s][j] / pivot
                for r in range(nr):
                    a[r][j] -= m * a[r][s]
                qmat[s] = [x + m * y for x, y in zip(qmat[s], qmat[j])]
        diag.append(pivot)
    return pmat, diag, qmat


def iwasawa_padic(mat, p):
    """Factor mat = K @ R with K in GL_d(Z_p) and R upper triangular.

    Row-pivoted elimination where every multiplier has valuation >= 0; the
    p-adic analogue of a QR step, used for spectrum deflation.  Requires mat
    invertible.
    """
    a = [[Frac(x) for x in row] for row in mat]
    n = len(a)
    kmat = identity(n)  # mat = K @ a throughout
    for c in range(n):
        piv = None
        piv_v = math.inf
        for i in range(c, n):
            if a[i][c] != 0:
                v = padic_valuation(a[i][c], p)
                if v < piv_v:
                    piv_v = v
                    piv = i
        if piv is None:
            raise ZeroDivisionError("singular matrix in Iwasawa step")
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            for r in range(n):
                kmat[r][c], kmat[r][piv] = kmat[r][piv], kmat[r][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                m = a[i][c] / a[c][c]
                a[i] = [x - m * y for x, y in zip(a[i], a[c])]
                for r in range(n):
                    kmat[r][c] += m * kmat[r][i]
    return kmat, a


def in_gl_O(mat, p) -> bool:
    """True iff the matrix and its inverse have entries in Z_p."""
    for row in mat:
        for x in row:
            if x != 0 and padic_valuation(x, p) < 0:
                return False
    d = det(mat)
    return d != 0 and padic_valuation(d, p) == 0


def orthonormal_extension(basis_vectors, p, dim):
    """Given independent vectors over Q_p, return (ortho_basis, complement).

    Both come from a GL(Z_p) change of basis (columns of the P factor of the
    Smith reduction of the coordinate matrix), so the concatenation is an
    orthonormal basis of the whole space.
    """
    cols = [list(map(Frac, v)) for v in basis_vectors]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(dim)]
    pmat, diag, _ = smith_padic(mat, p)
    r = len([d for d in diag if d != 0])
    if r != len(cols):
        raise ValueError("basis vectors are dependent")
    pcols = transpose(pmat)
    return [list(c) for c in pcols[:r]], [list(c) for c in pcols[r:]]
