"""Greedy support recovery driven by one-bit inequality checks.

Two algorithms share the same scoring primitive: a candidate support T is
scored by how many binary measurements agree in sign with the linear
least-squares estimate restricted to T.

* :func:`detect_support` grows a support from scratch, one index per
  iteration.  Residue correlations against the linear channel shortlist the
  candidates; the inequality score picks the winner; the residue is then
  re-projected.
* :func:`refine_support` starts from a size-s guess and repeatedly augments
  it with the best complement index, then prunes back to size s, until the
  support stops changing.

All argmax steps break ties deterministically (smallest index, or
lexicographically smallest index tuple for subset pruning) so that repeated
runs are bit-identical.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DegenerateSystemError, RecoveryFailureError
from .measurement import HybridMeasurements, MeasurementMatrix, Signal

# QR diagonal ratio below which a restricted system is declared rank deficient.
RANK_TOL = 1e-10


@dataclass
class RecoveryResult:
    """Output bundle of every recovery routine in this package."""

    estimate: Signal
    support: np.ndarray
    iterations: int
    satisfied_counts: list[int] = field(default_factory=list)
    converged: bool = True


@dataclass
class Residue:
    """Linear-channel residue after projecting out the detected columns."""

    r: np.ndarray
    iteration: int


def _as_support(indices, n: int) -> np.ndarray:
    support = np.unique(np.asarray(indices, dtype=np.intp))
    if support.size and (support[0] < 0 or support[-1] >= n):
        raise ValueError(f"support indices must lie in 0..{n - 1}")
    return support


def restricted_least_squares(
    a_r: MeasurementMatrix, y_r: np.ndarray, t: np.ndarray
) -> np.ndarray:
    """Least-squares coefficients of y_r against the columns of A_r indexed by t.

    Solves via a reduced QR factorization.  Raises
    :class:`DegenerateSystemError` when the restricted columns are
    numerically dependent (smallest |R_ii| below ``RANK_TOL`` times the
    largest).
    """
    t = np.asarray(t, dtype=np.intp)
    if t.size == 0:
        return np.zeros(0)
    if t.size > a_r.m:
        raise DegenerateSystemError(
            f"{t.size} columns cannot be independent in {a_r.m} rows"
        )
    cols = a_r.entries[:, t]
    q, r = np.linalg.qr(cols)
    diag = np.abs(np.diagonal(r))
    if diag.min() < RANK_TOL * max(diag.max(), np.finfo(float).tiny):
        raise DegenerateSystemError(
            f"restricted system on {t.size} columns is rank deficient"
        )
    return solve_triangular(r, q.T @ y_r, lower=False, check_finite=False)


def embed(coeffs: np.ndarray, t: np.ndarray, n: int) -> Signal:
    """Scatter coefficients onto support t inside a length-n zero vector."""
    t = np.asarray(t, dtype=np.intp)
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (t.size,):
        raise ValueError(f"{coeffs.size} coefficients for a support of size {t.size}")
    values = np.zeros(n)
    values[t] = coeffs
    return Signal(values=values, s=int(t.size), support=t.copy())


def satisfied_count(
    y_o: np.ndarray,
    a_o: MeasurementMatrix,
    t: np.ndarray,
    a_r: MeasurementMatrix,
    y_r: np.ndarray,
) -> int:
    """Number of binary measurements consistent with the estimate restricted to t.

    Fits the linear channel on the columns in t, predicts the one-bit channel
    as ``v = A_o[:, t] @ z``, and counts indices with ``y_o * v >= 0``.
    Working with the restricted product (rather than forming
    ``A_o_T @ pinv(A_r_T)`` explicitly) is algebraically identical and much
    cheaper.
    """
    z = restricted_least_squares(a_r, y_r, t)
    t = np.asarray(t, dtype=np.intp)
    v = a_o.entries[:, t] @ z
    return int(np.count_nonzero(y_o * v >= 0))


def candidate_shortlist_size(j: int, s: int, n: int) -> int:
    """Shortlist size for iteration j: floor((s-j+1)/s * n), capped by the pool.

    The cap at ``n - j + 1`` (the number of still-undetected indices) keeps
    the shortlist inside the available complement.
    """
    kappa = (s - j + 1) * n // s
    return min(kappa, n - j + 1)


def candidate_select(
    a_r: MeasurementMatrix,
    residue: Residue,
    omega_prev: np.ndarray,
    j: int,
    s: int,
) -> np.ndarray:
    """Shortlist the undetected columns most correlated with the residue.

    Returns the ``candidate_shortlist_size(j, s, n)`` undetected indices of
    largest |<a_i, r>|, ties broken toward the smaller index.  Detected
    indices never re-enter the shortlist, even when their (zeroed)
    correlations would survive a large cutoff.
    """
    n = a_r.n
    omega_prev = np.asarray(omega_prev, dtype=np.intp)
    pool = np.setdiff1d(np.arange(n), omega_prev, assume_unique=False)
    corr = np.abs(a_r.entries[:, pool].T @ residue.r)
    keep = candidate_shortlist_size(j, s, n)
    order = np.lexsort((pool, -corr))
    return np.sort(pool[order[:keep]])


def residue_update(
    a_r: MeasurementMatrix, y_r: np.ndarray, omega: np.ndarray
) -> Residue:
    """Residue of y_r after least-squares projection onto the omega columns."""
    omega = np.asarray(omega, dtype=np.intp)
    if omega.size == 0:
        return Residue(r=np.asarray(y_r, dtype=float).copy(), iteration=0)
    z = restricted_least_squares(a_r, y_r, omega)
    return Residue(r=y_r - a_r.entries[:, omega] @ z, iteration=int(omega.size))


def _best_candidate(hm: HybridMeasurements, base: np.ndarray, candidates) -> tuple[int, int]:
    """Argmax of satisfied_count over supports base | {p}, ties to smaller p.

    Candidates whose restricted system is degenerate are skipped with a
    warning; if all of them are, raises :class:`RecoveryFailureError`.
    """
    best_p = -1
    best_count = -1
    skipped = 0
    for p in candidates:
        t = np.sort(np.append(base, p))
        try:
            count = satisfied_count(hm.y_o, hm.a_o, t, hm.a_r, hm.y_r)
        except DegenerateSystemError:
            skipped += 1
            continue
        if count > best_count:
            best_count = count
            best_p = int(p)
    if skipped:
        warnings.warn(f"skipped {skipped} rank-deficient candidate support(s)")
    if best_p < 0:
        raise RecoveryFailureError("every candidate support was rank deficient")
    return best_p, best_count


def detect_support(hm: HybridMeasurements, s: int) -> RecoveryResult:
    """Grow a support of size s by binary inequality checking with residue updates.

    Runs exactly s iterations of shortlist -> inequality-score argmax ->
    residue re-projection, then refits the final estimate on the detected
    support.
    """
    a_r, y_r = hm.a_r, hm.y_r
    n = a_r.n
    if s > a_r.m:
        warnings.warn(
            f"support size s={s} exceeds the {a_r.m} linear measurements; "
            "restricted fits will be underdetermined"
        )
    omega = np.zeros(0, dtype=np.intp)
    residue = Residue(r=np.asarray(y_r, dtype=float).copy(), iteration=0)
    counts: list[int] = []
    for j in range(1, s + 1):
        shortlist = candidate_select(a_r, residue, omega, j, s)
        p, count = _best_candidate(hm, omega, shortlist)
        omega = np.sort(np.append(omega, p))
        counts.append(count)
        residue = residue_update(a_r, y_r, omega)
    estimate = embed(restricted_least_squares(a_r, y_r, omega), omega, n)
    return RecoveryResult(
        estimate=estimate,
        support=omega,
        iterations=s,
        satisfied_counts=counts,
        converged=True,
    )


def refine_support(
    hm: HybridMeasurements,
    s: int,
    omega0,
    max_iters: int | None = None,
) -> RecoveryResult:
    """Refine a size-s support guess by augment-then-prune inequality checking.

    Each iteration appends the best complement index, then keeps the best of
    the s+1 size-s subsets.  Stops when an iteration leaves the support
    unchanged (``converged=True``) or after ``max_iters`` iterations
    (default 10*s; nothing guarantees convergence, so a cap is required).
    """
    n = hm.a_r.n
    omega = _as_support(omega0, n)
    if omega.size != s:
        raise ValueError(f"initial support has {omega.size} distinct indices, expected {s}")
    if max_iters is None:
        max_iters = 10 * s
    counts: list[int] = []
    converged = False
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        pool = np.setdiff1d(np.arange(n), omega)
        p, _ = _best_candidate(hm, omega, pool)
        t_aug = np.sort(np.append(omega, p))

        best_subset: tuple[int, ...] | None = None
        best_count = -1
        skipped = 0
        for drop in t_aug:
            subset = tuple(int(i) for i in t_aug if i != drop)
            try:
                count = satisfied_count(hm.y_o, hm.a_o, np.asarray(subset), hm.a_r, hm.y_r)
            except DegenerateSystemError:
                skipped += 1
                continue
            if count > best_count or (count == best_count and subset < best_subset):
                best_count = count
                best_subset = subset
        if skipped:
            warnings.warn(f"skipped {skipped} rank-deficient prune subset(s)")
        if best_subset is None:
            raise RecoveryFailureError("every prune subset was rank deficient")

        omega_next = np.asarray(best_subset, dtype=np.intp)
        counts.append(best_count)
        if np.array_equal(omega_next, omega):
            converged = True
            break
        omega = omega_next
    estimate = embed(restricted_least_squares(hm.a_r, hm.y_r, omega), omega, n)
    return RecoveryResult(
        estimate=estimate,
        support=omega,
        iterations=iterations,
        satisfied_counts=counts,
        converged=converged,
    )
