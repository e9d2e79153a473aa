"""Samplers for the stationary measure on P(V) \\ [L_mu] and diagnostics.

Two samplers approximate draws: the top singular direction of the right
product R_n, and the pushforward R_n [x] of a start point off [L_mu].  Their
statistical agreement (energy-distance test on the Fubini-Study metric space)
is the operational content of uniqueness.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from ._stats import DecayCurve
from .linalg import LinalgError, ProjPoint, Subspace, distance_to_subspace, kak_decompose
from .measure import MeasureSpec, RngStream, sample
from .walks import WalkState, index_matrix, step_right
from . import kernels


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Uniformly weighted sample cloud with its provenance."""

    points: tuple  # tuple of ProjPoint
    provenance: dict = dc_field(default_factory=dict, compare=False)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def field(self):
        return self.points[0].field

    def coords_numpy(self) -> np.ndarray:
        return np.array([[float(c) for c in p.coords] for p in self.points])


def _top_left_direction_real(prods: np.ndarray) -> np.ndarray:
    """First left singular vector of each (d, d) matrix in the stack."""
    u, _, _ = np.linalg.svd(prods)
    return u[:, :, 0]


def sample_stationary(spec: MeasureSpec, n: int, trials: int, rng: RngStream,
                      sampler: str = "top", start: ProjPoint | None = None,
                      l_mu: Subspace | None = None) -> EmpiricalMeasure:
    """Approximate i.i.d. draws of the stationary measure.

    sampler = "top": top left-singular direction of R_n (first column of the
    isometry factor over Q_p).  sampler = "pushforward": R_n applied to
    ``start``, which must avoid [L_mu].
    """
    if sampler not in ("top", "pushforward"):
        raise ValueError(f"unknown sampler {sampler!r}")
    if sampler == "pushforward":
        if start is None:
            raise ValueError("pushforward sampler needs a start point")
        if l_mu is not None and l_mu.contains(start):
            raise LinalgError("start point lies in [L_mu]")
    prov = {"sampler": sampler, "n": n, "trials": trials,
            "seed": rng.master_seed, "stream": rng.stream_index}
    field = spec.field
    if field.is_real:
        idx = index_matrix(spec, rng, trials, n)
        prods, _ = kernels.right_products(spec.atoms_numpy(), idx,
                                          np.array([n], dtype=np.int64))
        mats = prods[:, 0]
        if sampler == "top":
            dirs = _top_left_direction_real(mats)
        else:
            x = np.asarray([float(c) for c in start.coords])
            dirs = mats @ x
        pts = tuple(ProjPoint.make(field, list(v)) for v in dirs)
        return EmpiricalMeasure(pts, prov)
    pts = []
    for t in range(trials):
        idx = sample(spec, rng.substream(t), n)
        state = WalkState.initial(field, spec.dim)
        for k in idx:
            state = step_right(state, spec.atoms[int(k)])
        if sampler == "top":
            kak = kak_decompose(state.product)
            col = [kak.k.rows[i][0] for i in range(spec.dim)]
            pts.append(ProjPoint.make(field, col))
        else:
            pts.append(start.apply(state.product))
    return EmpiricalMeasure(tuple(pts), prov)


def _pairwise_fs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Fubini-Study distances between rows of two unit-vector arrays."""
    g = np.clip(a @ b.T, -1.0, 1.0)
    return np.sqrt(np.clip(1.0 - g * g, 0.0, None))


def _subsample(arr: np.ndarray, cap: int, gen) -> np.ndarray:
    if len(arr) <= cap:
        return arr
    pick = gen.choice(len(arr), size=cap, replace=False)
    return arr[np.sort(pick)]


def energy_distance(m1: EmpiricalMeasure, m2: EmpiricalMeasure,
                    rng: RngStream | None = None, cap: int = 2000) -> float:
    """Energy distance on the Fubini-Study metric space (subsampled to cap)."""
    gen = (rng or RngStream(0)).generator()
    a = _subsample(m1.coords_numpy(), cap, gen)
    b = _subsample(m2.coords_numpy(), cap, gen)
    return float(2.0 * _pairwise_fs(a, b).mean()
                 - _pairwise_fs(a, a).mean() - _pairwise_fs(b, b).mean())


def energy_test(m1: EmpiricalMeasure, m2: EmpiricalMeasure, rng: RngStream,
                cap: int = 2000, n_perm: int = 200, sigmas: float = 3.0):
    """Two-sample energy test with a permutation null.

    Returns (statistic, threshold, passed) where threshold is
    null_mean + sigmas * null_std and passed means 'indistinguishable'.
    """
    gen = rng.generator()
    a = _subsample(m1.coords_numpy(), cap, gen)
    b = _subsample(m2.coords_numpy(), cap, gen)
    pooled = np.vstack([a, b])
    dmat = _pairwise_fs(pooled, pooled)
    na = len(a)

    def stat(ia, ib):
        return (2.0 * dmat[np.ix_(ia, ib)].mean()
                - dmat[np.ix_(ia, ia)].mean() - dmat[np.ix_(ib, ib)].mean())

    observed = stat(np.arange(na), np.arange(na, len(pooled)))
    null = np.empty(n_perm)
    for i in range(n_perm):
        perm = gen.permutation(len(pooled))
        null[i] = stat(perm[:na], perm[na:])
    threshold = float(null.mean() + sigmas * null.std(ddof=1))
    return float(observed), threshold, observed <= threshold


def pushforward_once(nu_hat: EmpiricalMeasure, spec: MeasureSpec,
                     rng: RngStream) -> EmpiricalMeasure:
    """One-step pushforward: each sample moved by an independent atom draw."""
    idx = sample(spec, rng, nu_hat.size)
    pts = tuple(p.apply(spec.atoms[int(k)]) for p, k in zip(nu_hat.points, idx))
    return EmpiricalMeasure(pts, {"pushforward_of": nu_hat.provenance})


def stationarity_residual(nu_hat: EmpiricalMeasure, spec: MeasureSpec,
                          rng: RngStream, cap: int = 2000) -> float:
    """Energy distance between nu_hat and its one-step pushforward."""
    if nu_hat.size == 0:
        raise ValueError("empty empirical measure")
    pushed = pushforward_once(nu_hat, spec, rng.substream(1))
    return energy_distance(nu_hat, pushed, rng.substream(2), cap)


def stationarity_test(nu_hat: EmpiricalMeasure, spec: MeasureSpec,
                      rng: RngStream, cap: int = 2000, n_perm: int = 200,
                      sigmas: float = 3.0):
    """(residual, threshold, passed) for the stationarity null."""
    pushed = pushforward_once(nu_hat, spec, rng.substream(1))
    return energy_test(nu_hat, pushed, rng.substream(2), cap, n_perm, sigmas)


def subspace_mass(nu_hat: EmpiricalMeasure, w: Subspace, eps: float) -> float:
    """Fraction of samples within Fubini-Study distance eps of [W]."""
    if w.dim >= w.ambient_dim:
        raise LinalgError("W must be proper")
    if nu_hat.field.is_real:
        u = w.basis_matrix()
        pts = nu_hat.coords_numpy()
        resid = pts - pts @ u @ u.T
        dist = np.linalg.norm(resid, axis=1)
        return float(np.mean(dist <= eps))
    hits = sum(1 for p in nu_hat.points if distance_to_subspace(p, w) <= eps)
    return hits / nu_hat.size


def boundary_convergence(spec: MeasureSpec, nu_hat: EmpiricalMeasure,
                         n_grid, rng: RngStream, pair_cap: int = 200) -> DecayCurve:
    """Median diameter of R_n . nu_hat along one sampled trajectory omega."""
    n_grid = sorted(int(n) for n in n_grid)
    n_max = n_grid[-1]
    gen = rng.substream(7).generator()
    field = spec.field
    if field.is_real:
        idx = sample(spec, rng.substream(1), n_max).reshape(1, -1)
        prods, _ = kernels.right_products(spec.atoms_numpy(), idx,
                                          np.array(n_grid, dtype=np.int64))
        pts = _subsample(nu_hat.coords_numpy(), pair_cap, gen)
        diams = []
        for gi in range(len(n_grid)):
            imgs = pts @ prods[0, gi].T
            imgs /= np.linalg.norm(imgs, axis=1, keepdims=True)
            dm = _pairwise_fs(imgs, imgs)
            iu = np.triu_indices(len(imgs), k=1)
            diams.append(float(np.median(dm[iu])))
        return DecayCurve.fit(n_grid, diams)
    raise NotImplementedError("boundary convergence curve is real-field only")
