"""Proximal elements, attractor points and limit-set enumeration over words.

A matrix is proximal when its dominant eigenvalue is simple and strictly
largest in modulus; its attracting direction p+(g) is the corresponding
eigenvector.  The support of the stationary measure is approximated by the
cloud of attractors over words in the atoms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .linalg import LinalgError, Matrix, ProjPoint, Subspace, distance_to_subspace
from .measure import MeasureSpec, RngStream, sample
from .skew import SkewChart, SkewPoint, act_skew, base_action, sigma_cocycle

PROXIMALITY_RATIO = 1.0 + 1e-6


@dataclass(frozen=True)
class ProximalData:
    """A proximal matrix's dominant eigenvalue and attracting direction."""

    lambda_top: float
    attractor: ProjPoint
    word: tuple  # atom indices, empty for a bare matrix
    gap_ratio: float
    in_U: bool | None = None
    off_L: bool | None = None


def _word_matrix(spec: MeasureSpec, word) -> Matrix:
    g = spec.atoms[word[0]]
    for k in word[1:]:
        g = g @ spec.atoms[k]
    return g


def proximal_check(g: Matrix, word=(), ratio_tol: float = PROXIMALITY_RATIO):
    """ProximalData when |lambda_1| / |lambda_2| > ratio_tol, else None."""
    if not g.field.is_real:
        raise NotImplementedError("proximality check implemented over R only")
    if not g.is_invertible():
        raise LinalgError("matrix must be invertible")
    vals, vecs = np.linalg.eig(g.to_numpy())
    if g.dim == 1:
        return ProximalData(float(vals[0].real), ProjPoint.make(g.field, [1.0]),
                            tuple(word), math.inf)
    order = np.argsort(-np.abs(vals))
    lam1, lam2 = vals[order[0]], vals[order[1]]
    if abs(lam2) == 0 or abs(lam1) / abs(lam2) <= ratio_tol:
        return None
    if abs(lam1.imag) > 1e-12 * abs(lam1):
        return None
    v = vecs[:, order[0]]
    v = np.real(v / v[np.argmax(np.abs(v))])
    return ProximalData(
        lambda_top=float(lam1.real),
        attractor=ProjPoint.make(g.field, list(v)),
        word=tuple(word),
        gap_ratio=float(abs(lam1) / abs(lam2)),
    )


def attractor_point_block(g: Matrix, chart: SkewChart) -> SkewPoint:
    """Fixed point (t0, xi_C) of the lifted action of a fiber-contracting g.

    t0 = -(A - lambda_top(C) I)^{-1} (B xi_C) where xi_C is the attracting
    direction of the quotient block C.
    """
    if not chart.field.is_real:
        raise NotImplementedError("block attractor implemented over R only")
    a, b, c = chart.blocks(g)
    cdata = proximal_check(Matrix.make(chart.field, c))
    if cdata is None:
        raise LinalgError("quotient block is not proximal")
    lam = cdata.lambda_top
    if max(np.abs(np.linalg.eigvals(np.asarray(a)))) >= abs(lam):
        raise LinalgError("fiber block does not contract relative to lambda_top(C)")
    xi = np.asarray([float(x) for x in cdata.attractor.coords])
    m = np.asarray(a) - lam * np.eye(len(a))
    if abs(np.linalg.det(m)) < 1e-12 * max(abs(lam) ** len(a), 1.0):
        raise LinalgError("resonant block")
    t0 = -np.linalg.solve(m, np.asarray(b) @ xi)
    return SkewPoint(tuple(float(x) for x in t0), tuple(float(x) for x in xi))


def _tagged(data: ProximalData, l_mu: Subspace | None,
            u_mu: Subspace | None, tol: float = 1e-9) -> ProximalData:
    off_l = None
    if l_mu is not None and 0 < l_mu.dim < l_mu.ambient_dim:
        off_l = distance_to_subspace(data.attractor, l_mu) > tol
    in_u = None
    if u_mu is not None:
        in_u = (u_mu.dim == u_mu.ambient_dim) or u_mu.contains(data.attractor, tol)
    return ProximalData(data.lambda_top, data.attractor, data.word,
                        data.gap_ratio, in_U=in_u, off_L=off_l)


def limit_set_sample(spec: MeasureSpec, max_word_len: int, budget: int,
                     rng: RngStream, l_mu: Subspace | None = None,
                     u_mu: Subspace | None = None, dedup_tol: float = 1e-7):
    """Attractors of words, exhaustive to max_word_len then random to budget.

    Deduplicates by a quantized projective-point key; tags each attractor with
    whether it avoids [L_mu] and lies in [U_mu] when those are supplied.
    """
    k = len(spec.atoms)
    words = []
    count = 0
    for n in range(1, max_word_len + 1):
        if count + k ** n > budget:
            break
        words.extend(iter_product(range(k), repeat=n))
        count += k ** n
    gen = rng.generator()
    while count < budget:
        n = int(gen.integers(max_word_len + 1, 2 * max_word_len + 1))
        words.append(tuple(int(i) for i in sample(spec, rng.substream(count), n)))
        count += 1

    out, seen = [], set()
    for w in words:
        try:
            data = proximal_check(_word_matrix(spec, w), w)
        except LinalgError:
            # long words can be numerically rank-deficient; skip them
            continue
        if data is None:
            continue
        key = tuple(np.round(np.asarray(data.attractor.coords) / dedup_tol).astype(np.int64))
        if key in seen:
            continue
        seen.add(key)
        out.append(_tagged(data, l_mu, u_mu))
    return out


def attractor_cloud_coords(samples) -> np.ndarray:
    return np.array([[float(c) for c in s.attractor.coords] for s in samples])


def hausdorff_fs(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance between two unit-row clouds in the Fubini-Study metric."""
    g = np.clip(np.abs(a @ b.T), 0.0, 1.0)
    d = np.sqrt(np.clip(1.0 - g * g, 0.0, None))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def orbit_escape_test(g: Matrix, s: SkewPoint, chart: SkewChart, n: int,
                      threshold: float = 1e6, tail: int = 10):
    """Iterate g on (t, xi); escape means the fiber norm blows up monotonically.

    When xi is a fixed direction of the base action the fiber over it is
    invariant, and the iteration reduces to the affine map sigma(g, xi); that
    path is used because a repelling fixed base direction is numerically
    unstable under the full skew iteration.

    Returns (escaped, norms) with norms the fiber-norm trajectory.
    """
    norms = [s.fiber_norm]
    xi0 = np.asarray([float(x) for x in s.xi])
    xi1 = np.asarray([float(x) for x in base_action(g, s.xi, chart)]) \
        if chart.field.is_real else None
    base_fixed = xi1 is not None and min(
        np.linalg.norm(xi1 - xi0), np.linalg.norm(xi1 + xi0)) <= 1e-9
    if base_fixed:
        aff = sigma_cocycle(g, s.xi, chart)
        t = s.t
        for _ in range(n):
            t = aff.apply(t)
            norms.append(max(abs(float(c)) for c in t))
            if norms[-1] > threshold:
                break
    else:
        cur = s
        for _ in range(n):
            cur = act_skew(g, cur, chart)
            norms.append(cur.fiber_norm)
            if norms[-1] > threshold:
                break
    tail_vals = norms[-tail:]
    monotone_tail = all(x <= y * (1 + 1e-9) for x, y in zip(tail_vals, tail_vals[1:]))
    escaped = norms[-1] > threshold and monotone_tail
    return escaped, norms
