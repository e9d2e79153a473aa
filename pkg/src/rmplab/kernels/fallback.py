"""Pure-numpy implementations of the hot walk kernels (real field only).

Semantics mirror the compiled extension: same renormalization rule, same
modified-Gram-Schmidt column order, so the two backends agree to rounding.
All kernels are vectorized over the trial axis.
"""

from __future__ import annotations

import numpy as np

#: renormalize whenever the running norm leaves [exp(-16), exp(16)]
LOG_CAP = 16.0


def _renorm_mats(prod, logs):
    norms = np.sqrt(np.sum(prod * prod, axis=(1, 2)))
    mask = np.abs(np.log(norms)) > LOG_CAP
    if np.any(mask):
        prod[mask] /= norms[mask, None, None]
        logs[mask] += np.log(norms[mask])


def _renorm_vecs(vecs, logs):
    norms = np.sqrt(np.sum(vecs * vecs, axis=1))
    mask = np.abs(np.log(norms)) > LOG_CAP
    if np.any(mask):
        vecs[mask] /= norms[mask, None]
        logs[mask] += np.log(norms[mask])


def _step_products(atoms, idx_col, prod, left):
    g = atoms[idx_col]
    if left:
        np.matmul(g, prod, out=prod)
    else:
        np.matmul(prod, g, out=prod)


def _products(atoms, idx, grid, left):
    trials, n = idx.shape
    d = atoms.shape[1]
    grid = np.asarray(grid, dtype=np.int64)
    out = np.empty((trials, len(grid), d, d))
    out_logs = np.empty((trials, len(grid)))
    prod = np.broadcast_to(np.eye(d), (trials, d, d)).copy()
    logs = np.zeros(trials)
    gpos = 0
    for s in range(n):
        _step_products(atoms, idx[:, s], prod, left)
        _renorm_mats(prod, logs)
        while gpos < len(grid) and grid[gpos] == s + 1:
            out[:, gpos] = prod
            out_logs[:, gpos] = logs
            gpos += 1
    return out, out_logs


def left_products(atoms, idx, grid):
    """Renormalized left products L_s = X_s ... X_1 recorded at grid steps.

    Returns (prods (T,G,d,d), logs (T,G)); the true product is
    prods * exp(logs).
    """
    return _products(atoms, idx, grid, left=True)


def right_products(atoms, idx, grid):
    """Renormalized right products R_s = X_1 ... X_s recorded at grid steps."""
    return _products(atoms, idx, grid, left=False)


def vector_left_walk(atoms, idx, x0, grid):
    """Renormalized orbit L_s x0 recorded at grid steps: (vecs, logs)."""
    trials, n = idx.shape
    d = atoms.shape[1]
    grid = np.asarray(grid, dtype=np.int64)
    out = np.empty((trials, len(grid), d))
    out_logs = np.empty((trials, len(grid)))
    vecs = np.broadcast_to(np.asarray(x0, dtype=np.float64), (trials, d)).copy()
    logs = np.zeros(trials)
    gpos = 0
    for s in range(n):
        g = atoms[idx[:, s]]
        vecs = np.einsum("tij,tj->ti", g, vecs)
        _renorm_vecs(vecs, logs)
        while gpos < len(grid) and grid[gpos] == s + 1:
            out[:, gpos] = vecs
            out_logs[:, gpos] = logs
            gpos += 1
    return out, out_logs


def _mgs(frame, sumlogs):
    """In-place modified Gram-Schmidt on each trial's frame columns."""
    d = frame.shape[1]
    for j in range(d):
        r = np.sqrt(np.sum(frame[:, :, j] ** 2, axis=1))
        sumlogs[:, j] += np.log(r)
        frame[:, :, j] /= r[:, None]
        for l in range(j + 1, d):
            proj = np.sum(frame[:, :, j] * frame[:, :, l], axis=1)
            frame[:, :, l] -= proj[:, None] * frame[:, :, j]


def qr_deflation(atoms, idx, every):
    """Benettin-style deflation of the left walk.

    Maintains an orthonormal frame, re-orthonormalizes every ``every`` steps,
    and accumulates the log of each diagonal stretch.  Returns sumlogs (T, d);
    dividing by n gives the Lyapunov spectrum estimates, ordered descending.
    """
    trials, n = idx.shape
    d = atoms.shape[1]
    frame = np.broadcast_to(np.eye(d), (trials, d, d)).copy()
    sumlogs = np.zeros((trials, d))
    since = 0
    for s in range(n):
        g = atoms[idx[:, s]]
        frame = np.matmul(g, frame)
        since += 1
        if since == every or s == n - 1:
            _mgs(frame, sumlogs)
            since = 0
    return sumlogs
