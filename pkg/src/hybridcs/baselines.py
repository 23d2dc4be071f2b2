"""Classic greedy recovery from a single linear measurement system (A, y).

Orthogonal matching pursuit, subspace pursuit, and CoSaMP in their
canonical formulations.  All restricted fits go through the same QR-based
solver as the hybrid algorithms, and every top-k / argmax selection breaks
ties toward smaller indices so results are reproducible bit for bit.
"""

from __future__ import annotations

import numpy as np

from .measurement import MeasurementMatrix
from .recovery import RecoveryResult, embed, restricted_least_squares

COSAMP_STALL_RTOL = 1e-6
COSAMP_MAX_ITERS = 50
SP_MAX_ITERS = 100


def _top_k(magnitudes: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k largest magnitudes, ties toward smaller index."""
    order = np.lexsort((np.arange(magnitudes.size), -magnitudes))
    return np.sort(order[:k])


def omp(a: MeasurementMatrix, y: np.ndarray, s: int) -> RecoveryResult:
    """Orthogonal matching pursuit: s rounds of correlate, pick, refit."""
    y = np.asarray(y, dtype=float)
    support = np.zeros(0, dtype=np.intp)
    r = y.copy()
    for _ in range(s):
        corr = np.abs(a.entries.T @ r)
        corr[support] = -1.0  # never re-pick a detected column
        support = np.sort(np.append(support, int(np.argmax(corr))))
        z = restricted_least_squares(a, y, support)
        r = y - a.entries[:, support] @ z
    estimate = embed(restricted_least_squares(a, y, support), support, a.n)
    return RecoveryResult(estimate=estimate, support=support, iterations=s)


def sp(a: MeasurementMatrix, y: np.ndarray, s: int) -> RecoveryResult:
    """Subspace pursuit: refine a size-s support until the residue stalls.

    Initializes with the top-s proxy indices, then repeats
    {union with top-s of |A^T r|, least squares, prune to the s largest
    coefficients, refit, residue update} and keeps the previous support as
    soon as the residue norm stops decreasing.
    """
    y = np.asarray(y, dtype=float)
    support = _top_k(np.abs(a.entries.T @ y), s)
    z = restricted_least_squares(a, y, support)
    r = y - a.entries[:, support] @ z
    r_norm = float(np.linalg.norm(r))
    iterations = 0
    converged = False
    for _ in range(SP_MAX_ITERS):
        iterations += 1
        extra = _top_k(np.abs(a.entries.T @ r), s)
        union = np.union1d(support, extra)
        z_union = restricted_least_squares(a, y, union)
        mags = np.zeros(a.n)
        mags[union] = np.abs(z_union)
        pruned = _top_k(mags, s)
        z_new = restricted_least_squares(a, y, pruned)
        r_new = y - a.entries[:, pruned] @ z_new
        r_new_norm = float(np.linalg.norm(r_new))
        if r_new_norm >= r_norm:
            converged = True
            break
        support, r, r_norm = pruned, r_new, r_new_norm
    estimate = embed(restricted_least_squares(a, y, support), support, a.n)
    return RecoveryResult(
        estimate=estimate, support=support, iterations=iterations, converged=converged
    )


def cosamp(a: MeasurementMatrix, y: np.ndarray, s: int) -> RecoveryResult:
    """CoSaMP: proxy top-2s, union, least squares, prune to s, repeat.

    Stops when the residue norm changes by less than ``COSAMP_STALL_RTOL``
    relative to the previous one, or after ``COSAMP_MAX_ITERS`` rounds.

    The union can hold up to 3s columns, more than the row count under tight
    budgets, so that one fit uses minimum-norm least squares; the size-s fits
    keep the strict rank-checked solver.
    """
    y = np.asarray(y, dtype=float)
    support = np.zeros(0, dtype=np.intp)
    r = y.copy()
    r_norm = float(np.linalg.norm(r))
    iterations = 0
    converged = False
    for _ in range(COSAMP_MAX_ITERS):
        iterations += 1
        proxy = _top_k(np.abs(a.entries.T @ r), 2 * s)
        union = np.union1d(support, proxy)
        z_union = np.linalg.lstsq(a.entries[:, union], y, rcond=None)[0]
        mags = np.zeros(a.n)
        mags[union] = np.abs(z_union)
        support = _top_k(mags, s)
        z = restricted_least_squares(a, y, support)
        r = y - a.entries[:, support] @ z
        r_new_norm = float(np.linalg.norm(r))
        if abs(r_norm - r_new_norm) < COSAMP_STALL_RTOL * max(r_norm, np.finfo(float).tiny):
            converged = True
            break
        r_norm = r_new_norm
    estimate = embed(restricted_least_squares(a, y, support), support, a.n)
    return RecoveryResult(
        estimate=estimate, support=support, iterations=iterations, converged=converged
    )
