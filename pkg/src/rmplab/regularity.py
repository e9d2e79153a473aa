"""Empirical decay-rate experiments: convergence in direction, Holder mass
bounds for the stationary measure, and hyperplane-hitting probabilities.

Everything here is Monte Carlo with seed-fixed streams; acceptance is on
signs and monotonicity (negative fitted slopes, finite weighted integrals),
not on closed-form rate values.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from ._stats import DecayCurve, bootstrap_mean_ci, fit_log_slope
from .linalg import LinalgError, ProjPoint, Subspace, distance_to_subspace
from .measure import MeasureSpec, RngStream
from .stationary import EmpiricalMeasure
from .walks import index_matrix


def direction_convergence_rate(spec: MeasureSpec, x: ProjPoint, n_grid, trials: int,
                               rng: RngStream, l_mu: Subspace | None = None,
                               level: float = 0.99) -> DecayCurve:
    """Mean Fubini-Study distance of R_n [x] to the trajectory's limit direction.

    The limit direction per trajectory is approximated by the top singular
    direction of R_{n_max}; the fitted log-slope should be negative when the
    top exponent is simple.
    """
    if not spec.field.is_real:
        raise NotImplementedError("decay experiments run over R only")
    if l_mu is not None and l_mu.contains(x):
        raise LinalgError("start direction lies in [L_mu]")
    n_grid = sorted(int(n) for n in n_grid)
    idx = index_matrix(spec, rng, trials, n_grid[-1])
    prods, _ = kernels.right_products(spec.atoms_numpy(), idx,
                                      np.array(n_grid, dtype=np.int64))
    xv = np.asarray([float(c) for c in x.coords])
    # per-trajectory limit: top left singular direction at n_max
    u, _, _ = np.linalg.svd(prods[:, -1])
    z = u[:, :, 0]
    imgs = prods @ xv  # (trials, len(grid), d)
    imgs /= np.linalg.norm(imgs, axis=2, keepdims=True)
    cos = np.clip(np.abs(np.einsum("tgd,td->tg", imgs, z)), 0.0, 1.0)
    dists = np.sqrt(np.clip(1.0 - cos * cos, 0.0, None))  # (trials, grid)
    means = dists.mean(axis=0)
    stderr = dists.std(axis=0, ddof=1) / np.sqrt(trials)
    # bootstrap the slope for a CI
    gen = rng.substream(-3).generator()
    slopes = np.empty(200)
    for b in range(200):
        pick = gen.integers(0, trials, size=trials)
        slopes[b], _ = fit_log_slope(n_grid, dists[pick].mean(axis=0))
    alpha = (1.0 - level) / 2.0
    ci = tuple(float(q) for q in np.quantile(slopes, [alpha, 1.0 - alpha]))
    return DecayCurve.fit(n_grid, means, stderr, slope_ci=ci)


def holder_alpha_estimate(nu_hat: EmpiricalMeasure, hyperplanes, alpha_grid,
                          rng: RngStream, l_mu_check: Subspace | None = None,
                          stability: float = 4.0, resamples: int = 50):
    """Largest grid alpha with a bootstrap-stable weighted integral sup.

    ``hyperplanes`` is a list of dual ProjPoints f; each integral
    \\int delta([x], [Ker f])^(-alpha) dnu_hat(x) is weighted by
    delta([f], [L_mu-check]) when that subspace is supplied.  The sup over
    hyperplanes must stay within ``stability`` times its median across
    bootstrap resamples of nu_hat for alpha to count as stable.

    Returns (alpha_hat, report) with the sup-attaining hyperplane index and
    per-alpha sups in the report.
    """
    pts = nu_hat.coords_numpy()
    fs = np.array([[float(c) for c in f.coords] for f in hyperplanes])
    fs /= np.linalg.norm(fs, axis=1, keepdims=True)
    weights = np.ones(len(fs))
    if l_mu_check is not None and 0 < l_mu_check.dim < l_mu_check.ambient_dim:
        weights = np.array([
            distance_to_subspace(f, l_mu_check) for f in hyperplanes
        ])
    # delta([x], [Ker f]) = |<x, f>| for unit vectors
    dmat = np.abs(pts @ fs.T)  # (samples, hyperplanes)
    gen = rng.generator()
    n = len(pts)
    boots = [gen.integers(0, n, size=n) for _ in range(resamples)]

    alpha_hat = 0.0
    report = {"alphas": [], "sups": [], "argmax": []}
    for alpha in sorted(float(a) for a in alpha_grid):
        with np.errstate(divide="ignore", over="ignore"):
            integrand = dmat ** (-alpha)
        vals = weights * integrand.mean(axis=0)
        sup = float(np.nanmax(np.where(np.isfinite(vals), vals, np.inf)))
        report["alphas"].append(alpha)
        report["sups"].append(sup)
        report["argmax"].append(int(np.argmax(np.where(np.isfinite(vals), vals, np.inf))))
        if not np.isfinite(sup):
            break
        boot_sups = []
        for pick in boots:
            bvals = weights * integrand[pick].mean(axis=0)
            boot_sups.append(np.max(bvals))
        boot_sups = np.asarray(boot_sups)
        if not np.all(np.isfinite(boot_sups)):
            break
        med = np.median(boot_sups)
        if med == 0 or boot_sups.max() > stability * med:
            break
        alpha_hat = alpha
    return alpha_hat, report


def hitting_probability_curve(spec: MeasureSpec, x: ProjPoint, f: ProjPoint,
                              eps: float, n_grid, trials: int, rng: RngStream,
                              l_mu: Subspace | None = None,
                              l_mu_check: Subspace | None = None) -> DecayCurve:
    """P[delta(L_n [x], [Ker f]) <= exp(-eps n)] estimated per grid point."""
    if not spec.field.is_real:
        raise NotImplementedError("decay experiments run over R only")
    if l_mu is not None and l_mu.contains(x):
        raise LinalgError("start direction lies in [L_mu]")
    if l_mu_check is not None and l_mu_check.contains(f):
        raise LinalgError("functional lies in [L_mu-check]")
    n_grid = sorted(int(n) for n in n_grid)
    xv = np.asarray([float(c) for c in x.coords])
    fv = np.asarray([float(c) for c in f.coords])
    fv /= np.linalg.norm(fv)
    idx = index_matrix(spec, rng, trials, n_grid[-1])
    traj, _ = kernels.vector_left_walk(spec.atoms_numpy(), idx, xv,
                                       np.array(n_grid, dtype=np.int64))
    traj /= np.linalg.norm(traj, axis=2, keepdims=True)
    dists = np.abs(traj @ fv)  # (trials, grid): delta to the hyperplane Ker f
    thresholds = np.exp(-eps * np.asarray(n_grid, dtype=np.float64))
    hits = dists <= thresholds  # (trials, grid)
    probs = hits.mean(axis=0)
    stderr = hits.std(axis=0, ddof=1) / np.sqrt(trials) if trials > 1 else np.zeros_like(probs)
    # continuity-corrected floor keeps zero estimates finite on the log scale
    floor = 1.0 / (2.0 * trials)
    slope, resid = fit_log_slope(n_grid, np.maximum(probs, floor))
    gen = rng.substream(-3).generator()
    slopes = np.empty(200)
    for b in range(200):
        pick = gen.integers(0, trials, size=trials)
        slopes[b], _ = fit_log_slope(n_grid, np.maximum(hits[pick].mean(axis=0), floor))
    ci = tuple(float(q) for q in np.quantile(slopes, [0.005, 0.995]))
    return DecayCurve(tuple(int(n) for n in n_grid), tuple(float(p) for p in probs),
                      tuple(float(s) for s in stderr), slope, resid, ci)
