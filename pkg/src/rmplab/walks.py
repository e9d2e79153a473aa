"""Streamed left/right random walks and Lyapunov spectrum estimation.

The real-field hot loops run in the selected walk kernel (compiled or numpy).
The p-adic path is exact: renormalization shifts powers of p and deflation
uses a valuation-pivoted triangular factorization whose frame is an isometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact, kernels
from ._stats import bootstrap_mean_ci, bootstrap_mean_stderr, map_chunks
from .fields import FieldSpec, padic_valuation
from .linalg import Matrix
from .measure import MeasureSpec, RngStream, sample

LOG_CAP = 16.0


@dataclass(frozen=True)
class WalkState:
    """Renormalized running product; the true product is
    product * exp(log_scale) (over R) or product * p**scale_pow (over Q_p)."""

    product: Matrix
    log_scale: float
    step: int
    scale_pow: int = 0

    @classmethod
    def initial(cls, field: FieldSpec, d: int) -> "WalkState":
        return cls(Matrix.identity(field, d), 0.0, 0)

    def true_log_norm(self) -> float:
        return math.log(self.product.operator_norm()) + self.log_scale


def _advance(state: WalkState, g: Matrix, left: bool) -> WalkState:
    prod = (g @ state.product) if left else (state.product @ g)
    field = prod.field
    if field.is_real:
        nrm = float(np.linalg.norm(prod.to_numpy()))
        if abs(math.log(nrm)) > LOG_CAP:
            return WalkState(prod.scale(1.0 / nrm), state.log_scale + math.log(nrm),
                             state.step + 1)
        return WalkState(prod, state.log_scale, state.step + 1)
    vmin = min(padic_valuation(x, field.p) for r in prod.rows for x in r if x != 0)
    if vmin != 0:
        shift = Fraction(field.p) ** vmin
        prod = prod.scale(1 / shift)
    return WalkState(prod, state.log_scale + vmin * math.log(field.p),
                     state.step + 1, state.scale_pow + vmin)


def step_left(state: WalkState, g: Matrix) -> WalkState:
    """L_{n+1} = g L_n."""
    return _advance(state, g, left=True)


def step_right(state: WalkState, g: Matrix) -> WalkState:
    """R_{n+1} = R_n g."""
    return _advance(state, g, left=False)


@dataclass(frozen=True)
class SpectrumEstimate:
    lambdas: tuple
    stderr: tuple
    n_steps: int
    n_trials: int
    per_trial: np.ndarray  # (trials, d) per-trajectory estimates

    def gap_samples(self) -> np.ndarray:
        return self.per_trial[:, 0] - self.per_trial[:, 1]


def index_matrix(spec: MeasureSpec, rng: RngStream, trials: int, n: int) -> np.ndarray:
    """Per-trial atom indices from independent substreams (order-free).

    Each trial owns a substream, so the result is identical for any thread
    count or chunking.
    """
    def draw(chunk):
        return np.stack([sample(spec, rng.substream(t), n) for t in chunk])

    rows = map_chunks(draw, range(trials))
    return np.concatenate(rows).astype(np.int64)


def _padic_deflation_logs(spec: MeasureSpec, idx_row, every: int) -> np.ndarray:
    p = spec.field.p
    logp = math.log(p)
    d = spec.dim
    frame = _exact.identity(d)
    sumlogs = np.zeros(d)
    buf = None
    since = 0
    n = len(idx_row)
    for s in range(n):
        g = [list(r) for r in spec.atoms[int(idx_row[s])].rows]
        buf = _exact.mat_mul(g, frame if buf is None else buf)
        since += 1
        if since == every or s == n - 1:
            kmat, rmat = _exact.iwasawa_padic(buf, p)
            for j in range(d):
                sumlogs[j] += -padic_valuation(rmat[j][j], p) * logp
            frame = kmat
            buf = None
            since = 0
    return sumlogs


def lyapunov_spectrum(spec: MeasureSpec, n: int, trials: int, rng: RngStream,
                      every: int = 8, resamples: int = 200) -> SpectrumEstimate:
    """Spectrum via deflation of the streamed left walk, with bootstrap errors."""
    if n < 1 or trials < 1:
        raise ValueError("need n >= 1 and trials >= 1")
    d = spec.dim
    idx = index_matrix(spec, rng, trials, n)
    if spec.field.is_real:
        sumlogs = kernels.qr_deflation(spec.atoms_numpy(), idx, every)
        per_trial = sumlogs / n
    else:
        per_trial = np.stack([
            _padic_deflation_logs(spec, idx[t], every) / n for t in range(trials)
        ])
    # enforce the sorted-exponent convention trialwise
    per_trial = -np.sort(-per_trial, axis=1)
    boot_gen = rng.substream(-1).generator()
    lambdas = tuple(float(x) for x in per_trial.mean(axis=0))
    stderr = tuple(
        bootstrap_mean_stderr(per_trial[:, j], boot_gen, resamples) for j in range(d)
    )
    return SpectrumEstimate(lambdas, stderr, n, trials, per_trial)


@dataclass(frozen=True)
class GapEstimate:
    gap: float
    ci: tuple
    simple_top: bool
    spectrum: SpectrumEstimate


def top_gap(spec: MeasureSpec, n: int, trials: int, rng: RngStream,
            level: float = 0.99) -> GapEstimate:
    """lambda_1 - lambda_2 with a bootstrap CI; certified iff CI > 0."""
    est = lyapunov_spectrum(spec, n, trials, rng)
    gaps = est.gap_samples()
    ci = bootstrap_mean_ci(gaps, rng.substream(-2).generator(), level)
    gap = float(gaps.mean())
    return GapEstimate(gap, ci, ci[0] > 0.0, est)


def top_exponent(spec: MeasureSpec, n: int, trials: int, rng: RngStream,
                 resamples: int = 200):
    """Top exponent with bootstrap stderr and per-trial samples."""
    est = lyapunov_spectrum(spec, n, trials, rng, resamples=resamples)
    return est.lambdas[0], est.stderr[0], est.per_trial[:, 0]
