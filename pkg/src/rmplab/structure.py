"""Invariant-subspace structure of the generated matrix semigroup.

Invariance questions are decided constructively through the unital algebra
generated by the atoms: cyclic modules A.v are the minimal invariant subspaces
containing v, and every invariant subspace is a sum of cyclic modules.
Exponent comparisons are statistical and use non-overlap of bootstrap CIs;
ties are reported as undecided rather than silently resolved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact
from ._stats import bootstrap_mean_ci, intervals_disjoint_below
from .linalg import RANK_TOL, LinalgError, Matrix, Subspace
from .measure import MeasureSpec, RngStream
from .walks import SpectrumEstimate, lyapunov_spectrum


class NotInvariantError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraBasis:
    """Basis of the unital algebra generated by the atoms."""

    field: object
    basis: tuple  # tuple of Matrix

    @property
    def dim(self) -> int:
        return len(self.basis)


def _flatten(m: Matrix):
    return [x for row in m.rows for x in row]


def algebra_closure(generators) -> AlgebraBasis:
    """Span-closure of words in the generators (the identity included)."""
    gens = list(generators)
    field = gens[0].field
    d = gens[0].dim
    basis = [Matrix.identity(field, d)]
    if field.is_real:
        flat = np.array([_flatten(basis[0])], dtype=np.float64)
    else:
        flat = [_flatten(basis[0])]
    frontier = list(basis)
    while frontier:
        new_frontier = []
        for g in gens:
            for b in frontier:
                cand = g @ b
                if field.is_real:
                    v = np.array(_flatten(cand), dtype=np.float64)
                    stacked = np.vstack([flat, v])
                    s = np.linalg.svd(stacked, compute_uv=False)
                    # independent iff the stack has full row rank
                    if stacked.shape[0] <= stacked.shape[1] and s[-1] > RANK_TOL * s[0]:
                        flat = stacked
                        basis.append(cand)
                        new_frontier.append(cand)
                else:
                    v = _flatten(cand)
                    if _exact.gauss_rank(flat + [v]) > len(flat):
                        flat.append(v)
                        basis.append(cand)
                        new_frontier.append(cand)
        frontier = new_frontier
        if len(basis) == d * d:
            break
    return AlgebraBasis(field, tuple(basis))


def minimal_invariant_subspace(alg: AlgebraBasis, v) -> Subspace:
    """Smallest subspace containing v that every generator maps into itself."""
    field = alg.field
    images = [b.matvec(v) for b in alg.basis]
    if field.is_real:
        a = np.array(images, dtype=np.float64)
        u, s, _ = np.linalg.svd(a.T, full_matrices=False)
        r = int(np.sum(s > RANK_TOL * max(s[0], 1.0)))
        return Subspace.span(field, [list(u[:, j]) for j in range(r)])
    picked = []
    for w in images:
        w = [Fraction(c) for c in w]
        if any(c != 0 for c in w):
            if picked and _exact.gauss_rank(picked + [w]) == len(picked):
                continue
            picked.append(w)
    return Subspace.span(field, picked, alg.basis[0].dim)


def is_invariant(spec: MeasureSpec, w: Subspace) -> bool:
    return all(
        all(w.contains_vector(a.matvec(v)) for v in w.basis) for a in spec.atoms
    )


def restrict_measure(spec: MeasureSpec, w: Subspace) -> MeasureSpec:
    """The measure of restrictions g|W written in W's orthonormal basis."""
    if not is_invariant(spec, w):
        raise NotInvariantError("subspace not stable under the atoms")
    field = spec.field
    if field.is_real:
        u = w.basis_matrix()
        mats = [u.T @ a.to_numpy() @ u for a in spec.atoms]
        return MeasureSpec.make(field, mats, spec.weights)
    from .linalg import orthogonal_complement

    comp = orthogonal_complement(w) if w.dim < w.ambient_dim else None
    cols = [list(v) for v in w.basis] + ([list(v) for v in comp.basis] if comp else [])
    bmat = [[cols[j][i] for j in range(len(cols))] for i in range(w.ambient_dim)]
    mats = []
    for a in spec.atoms:
        rows = []
        for v in w.basis:
            coords = _exact.solve(bmat, a.matvec(v))
            rows.append(coords[: w.dim])
        # rows are images of basis vectors: restriction matrix is the transpose
        mats.append([list(c) for c in zip(*rows)])
    return MeasureSpec.make(field, mats, spec.weights)


def exponent_of_subspace(spec: MeasureSpec, w: Subspace, n: int, trials: int,
                         rng: RngStream):
    """Top Lyapunov exponent of the walk restricted to an invariant subspace.

    Returns (estimate, stderr, per-trial samples).
    """
    sub = restrict_measure(spec, w)
    est = lyapunov_spectrum(sub, n, trials, rng)
    return est.lambdas[0], est.stderr[0], est.per_trial[:, 0]


@dataclass(frozen=True)
class StructureReport:
    L_mu: Subspace | None  # None encodes the zero subspace
    U_mu: Subspace | None  # None when the top gap is uncertified
    fk_levels: tuple  # ((beta, stderr, level_subspace_or_None), ...)
    spectrum: SpectrumEstimate
    gap_certified: bool
    undecided: tuple = ()
    duality_ok: bool | None = None

    def to_json(self) -> dict:
        def sub_json(s):
            return None if s is None else [[str(x) for x in v] for v in s.basis]

        return {
            "gap_certified": self.gap_certified,
            "L_mu": sub_json(self.L_mu),
            "U_mu": sub_json(self.U_mu),
            "fk_levels": [
                {"beta": b, "stderr": se, "subspace": sub_json(s)}
                for (b, se, s) in self.fk_levels
            ],
            "lambda": list(self.spectrum.lambdas),
            "lambda_stderr": list(self.spectrum.stderr),
            "undecided": len(self.undecided),
            "duality_ok": self.duality_ok,
        }


def _candidate_vectors(spec: MeasureSpec, rng: RngStream):
    d = spec.dim
    field = spec.field
    vecs = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        vecs.append([float(x) if field.is_real else Fraction(x) for x in e])
    gen = rng.generator()
    for _ in range(4 * d):
        if field.is_real:
            v = list(gen.standard_normal(d))
        else:
            v = [Fraction(int(x)) for x in gen.integers(-9, 10, size=d)]
            if all(c == 0 for c in v):
                v[0] = Fraction(1)
        vecs.append(v)
    return vecs


def _classify(ci_w, ci_top) -> str:
    if intervals_disjoint_below(ci_w, ci_top):
        return "below"
    # A restriction can never grow faster than the ambient walk, so a CI
    # sitting strictly above ci_top can only reflect finite-n bias of the
    # ambient estimate: the subspace carries the top exponent.
    return "top"


def compute_structure(spec: MeasureSpec, n: int, trials: int, rng: RngStream,
                      level: float = 0.99) -> StructureReport:
    """Compute L_mu, U_mu and the full invariant filtration with growth rates."""
    d = spec.dim
    field = spec.field
    full = Subspace.full(field, d)
    spectrum = lyapunov_spectrum(spec, n, trials, rng.substream(1))
    ci_top = bootstrap_mean_ci(spectrum.per_trial[:, 0], rng.substream(2).generator(), level)
    gap_ci = bootstrap_mean_ci(spectrum.gap_samples(), rng.substream(3).generator(), level)
    gap_certified = gap_ci[0] > 0.0

    alg = algebra_closure(spec.atoms)
    candidates = []
    for v in _candidate_vectors(spec, rng.substream(4)):
        w = minimal_invariant_subspace(alg, v)
        if not any(w.equals(c) for c in candidates):
            candidates.append(w)

    below, top, undecided = [], [], []
    for i, w in enumerate(candidates):
        if w.dim == d:
            top.append((w, ci_top))
            continue
        _, _, samples = exponent_of_subspace(spec, w, n, trials, rng.substream(10 + i))
        ci_w = bootstrap_mean_ci(samples, rng.substream(100 + i).generator(), level)
        label = _classify(ci_w, ci_top)
        if label == "below":
            below.append((w, ci_w))
        elif label == "top":
            top.append((w, ci_w))
        else:
            undecided.append((w, ci_w))

    l_mu = None
    for w, _ in below:
        l_mu = w if l_mu is None else l_mu.sum(w)

    u_mu = None
    if gap_certified:
        u_mu = full
        for w, _ in top:
            if w.dim < u_mu.dim:
                inter = u_mu.intersection(w)
                u_mu = inter if inter is not None else u_mu

    fk_levels = []
    beta = spectrum.lambdas[0]
    beta_se = spectrum.stderr[0]
    current_l = l_mu
    fk_levels.append((float(beta), float(beta_se), current_l))
    sub_spec = spec
    guard = 0
    while current_l is not None and guard < d:
        guard += 1
        sub_spec = restrict_measure(spec, current_l)
        sub_report_rng = rng.substream(1000 + guard)
        sub_spectrum = lyapunov_spectrum(sub_spec, n, trials, sub_report_rng)
        sub_ci = bootstrap_mean_ci(
            sub_spectrum.per_trial[:, 0], rng.substream(2000 + guard).generator(), level
        )
        sub_alg = algebra_closure(sub_spec.atoms)
        sub_below = None
        for v in _candidate_vectors(sub_spec, rng.substream(3000 + guard)):
            w = minimal_invariant_subspace(sub_alg, v)
            if w.dim == sub_spec.dim:
                continue
            _, _, samples = exponent_of_subspace(
                sub_spec, w, n, trials, rng.substream(4000 + 13 * guard + w.dim)
            )
            ci_w = bootstrap_mean_ci(
                samples, rng.substream(5000 + 13 * guard + w.dim).generator(), level
            )
            if _classify(ci_w, sub_ci) == "below":
                sub_below = w if sub_below is None else sub_below.sum(w)
        next_l = _lift(sub_below, current_l) if sub_below is not None else None
        fk_levels.append((float(sub_spectrum.lambdas[0]), float(sub_spectrum.stderr[0]), next_l))
        current_l = next_l

    return StructureReport(
        L_mu=l_mu,
        U_mu=u_mu,
        fk_levels=tuple(fk_levels),
        spectrum=spectrum,
        gap_certified=gap_certified,
        undecided=tuple(w for w, _ in undecided),
    )


def _lift(sub: Subspace, parent: Subspace) -> Subspace:
    """Map a subspace given in parent-basis coordinates back to the ambient space."""
    field = parent.field
    vecs = []
    for v in sub.basis:
        if field.is_real:
            u = parent.basis_matrix()
            vecs.append(list(u @ np.asarray([float(c) for c in v])))
        else:
            amb = [Fraction(0)] * parent.ambient_dim
            for coef, bvec in zip(v, parent.basis):
                for i, c in enumerate(bvec):
                    amb[i] += Fraction(coef) * Fraction(c)
            vecs.append(amb)
    return Subspace.span(field, vecs, parent.ambient_dim)


def annihilator_of(s: Subspace | None, field, d: int) -> Subspace | None:
    """Annihilator in the dual, with None standing for the zero subspace."""
    if s is None:
        return Subspace.full(field, d)
    if s.dim == d:
        return None
    return s.annihilator()


def duality_check(spec: MeasureSpec, report: StructureReport, n: int, trials: int,
                  rng: RngStream) -> bool:
    """Check ann(L_mu) = U of the transposed measure, and dually."""
    from .measure import transpose_measure

    if not report.gap_certified:
        raise ValueError("top gap uncertified; duality not defined")
    rep_t = compute_structure(transpose_measure(spec), n, trials, rng)
    if not rep_t.gap_certified:
        raise ValueError("top gap uncertified for the transposed measure")
    d = spec.dim
    field = spec.field

    def eq(a, b):
        if a is None or b is None:
            return a is None and b is None
        return a.equals(b)

    ok1 = eq(annihilator_of(report.L_mu, field, d), rep_t.U_mu)
    ok2 = eq(annihilator_of(report.U_mu, field, d), rep_t.L_mu)
    return ok1 and ok2
