"""Small statistics helpers: bootstrap intervals, slope fits, chunked maps."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def bootstrap_mean_ci(samples, rng_gen, level=0.99, resamples=200):
    """Percentile bootstrap CI for the mean of a 1-d sample."""
    samples = np.asarray(samples, dtype=np.float64)
    n = len(samples)
    if n == 1 or np.ptp(samples) == 0.0:
        m = float(samples.mean())
        return m, m
    idx = rng_gen.integers(0, n, size=(resamples, n))
    means = samples[idx].mean(axis=1)
    alpha = (1.0 - level) / 2.0
    lo, hi = np.quantile(means, [alpha, 1.0 - alpha])
    return float(lo), float(hi)


def bootstrap_mean_stderr(samples, rng_gen, resamples=200):
    samples = np.asarray(samples, dtype=np.float64)
    if len(samples) == 1 or np.ptp(samples) == 0.0:
        return 0.0
    idx = rng_gen.integers(0, len(samples), size=(resamples, len(samples)))
    return float(samples[idx].mean(axis=1).std(ddof=1))


def intervals_disjoint_below(ci_a, ci_b) -> bool:
    """True when interval a lies strictly below interval b."""
    return ci_a[1] < ci_b[0]


def fit_log_slope(ns, values, floor=1e-300):
    """Least-squares slope of log(values) against n; returns (slope, resid)."""
    ns = np.asarray(ns, dtype=np.float64)
    ys = np.log(np.maximum(np.asarray(values, dtype=np.float64), floor))
    a = np.vstack([ns, np.ones_like(ns)]).T
    coef, res, _, _ = np.linalg.lstsq(a, ys, rcond=None)
    resid = float(res[0]) if len(res) else 0.0
    return float(coef[0]), resid


from dataclasses import dataclass


@dataclass(frozen=True)
class DecayCurve:
    """A statistic sampled along increasing n, with a log-scale slope fit."""

    ns: tuple
    values: tuple
    stderr: tuple
    slope: float
    fit_residual: float
    slope_ci: tuple = (float("nan"), float("nan"))

    @classmethod
    def fit(cls, ns, values, stderr=None, slope_ci=None) -> "DecayCurve":
        slope, resid = fit_log_slope(ns, values)
        return cls(
            tuple(int(n) for n in ns),
            tuple(float(v) for v in values),
            tuple(float(s) for s in (stderr if stderr is not None else [0.0] * len(ns))),
            slope,
            resid,
            tuple(slope_ci) if slope_ci is not None else (float("nan"), float("nan")),
        )


def thread_count(default=1) -> int:
    import os

    raw = os.environ.get("RMPLAB_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return default


def map_chunks(fn, items, chunk_size=None):
    """Apply fn to fixed-size chunks of items, merging in deterministic order.

    Chunk boundaries never depend on the thread count, so results are
    byte-identical however many workers run.
    """
    items = list(items)
    threads = thread_count()
    if chunk_size is None:
        chunk_size = max(1, math.ceil(len(items) / max(threads, 1)))
    chunks = [items[i : i + chunk_size] for i in range(0, len(items), chunk_size)]
    if threads <= 1 or len(chunks) <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, chunks))
