"""Closed-form lower bounds on greedy support recovery success probabilities.

Everything reduces to binomial tail probabilities expressed through the
regularized incomplete beta function I_x(a, b): a candidate support scores
a Binomial(m_o, p) number of satisfied one-bit inequalities, and the
agreement probability p is controlled by an angle fraction derived from the
sorted support magnitudes of the signal.

Two bounds are provided: :func:`detection_bound` for the from-scratch
detector (:func:`hybridcs.recovery.detect_support`) and
:func:`modification_bound` for the augment/prune refiner
(:func:`hybridcs.recovery.refine_support`).  Both are lower bounds and can
be vacuous (nonpositive) — in fact the iteration-1 detection factor is
nonpositive whenever more than two candidates compete, because the correct
candidate's worst-case agreement probability degenerates to a coin flip
while a union bound is paid over every competitor.  Results therefore carry
both the raw value and a [0, 1]-clamped companion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import InvalidParameterError, OutOfRegimeError
from .measurement import Signal
from .recovery import candidate_shortlist_size


def reg_inc_beta(x: float, a: float, b: float) -> float:
    """Regularized incomplete beta I_x(a, b), accurate to about 1e-13.

    Thin wrapper over SciPy's continued-fraction evaluation with strict
    domain checks (x in [0, 1], a > 0, b > 0).
    """
    if not 0.0 <= x <= 1.0:
        raise InvalidParameterError(f"beta argument x={x} outside [0, 1]")
    if a <= 0 or b <= 0:
        raise InvalidParameterError(f"beta shape parameters must be positive, got a={a}, b={b}")
    return float(special.betainc(a, b, x))


def _beta_term(x: float, a: float, b: float) -> float:
    """I_x(a, b) extended to zero shape parameters by its binomial limits.

    The bound formulas produce a = 0 or b = 0 at pool-boundary parameters
    (e.g. a shortlist as large as the remaining pool); the limits below are
    the CDF values of the corresponding degenerate binomial counts.
    """
    if a == 0:
        return 1.0 if x > 0 else 0.0
    if b == 0:
        return 1.0 if x == 1.0 else 0.0
    return reg_inc_beta(x, a, b)


def binom_cdf(k: int, n_prime: int, p: float) -> float:
    """P{X <= k} for X ~ Binomial(n_prime, p), via I_{1-p}(n'-k, k+1)."""
    if not 0 <= k <= n_prime:
        raise InvalidParameterError(f"need 0 <= k <= n', got k={k}, n'={n_prime}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"probability p={p} outside [0, 1]")
    if k == n_prime:
        return 1.0  # full range, regardless of p
    return _beta_term(1.0 - p, n_prime - k, k + 1)


def _sorted_support_magnitudes(x: Signal) -> np.ndarray:
    mags = np.abs(x.values[x.support])
    return np.sort(mags)[::-1]


def _tail_norms(mags: np.ndarray) -> np.ndarray:
    """tail[k] = l2 norm of the magnitudes after dropping the k largest."""
    tails = np.sqrt(np.cumsum((mags[::-1] ** 2)))[::-1]
    return np.append(tails, 0.0)


def detection_angles(x: Signal, j: int) -> tuple[float, float]:
    """Angle fractions (theta_j1, theta_j2) for detection iteration j.

    theta_j1 caps the sign-flip probability of the estimate built on the j
    largest-magnitude support indices; theta_j2 caps the sign-agreement
    probability of the best competing wrong candidate.  Both are fractions
    of pi, usable directly as beta arguments.

    Requires ||x||_2 >= sqrt(2) * (norm of the support tail beyond the
    largest entry); otherwise the arcsine argument leaves [-1, 1] and an
    :class:`OutOfRegimeError` is raised.
    """
    if not 1 <= j <= x.s:
        raise InvalidParameterError(f"iteration j={j} outside 1..{x.s}")
    mags = _sorted_support_magnitudes(x)
    norm_x = float(np.linalg.norm(mags))
    if norm_x == 0.0:
        raise InvalidParameterError("signal norm is zero")
    tails = _tail_norms(mags)
    if norm_x < math.sqrt(2.0) * tails[1]:
        raise OutOfRegimeError(
            "signal too flat: ||x|| must be at least sqrt(2) times the "
            "support tail beyond its largest entry"
        )
    sin_arg = 1.0 - math.sqrt(2.0) * (tails[1] - tails[j]) / norm_x
    theta_j1 = math.asin(min(1.0, max(-1.0, sin_arg))) / math.pi

    keep = list(range(j - 1))  # the j-1 largest
    if j + 1 <= x.s:
        keep.append(j)  # skip rank j, include rank j+1 (0-based index j)
    competitor_norm = float(np.linalg.norm(mags[keep])) if keep else 0.0
    theta_j2 = math.acos(min(1.0, competitor_norm / norm_x)) / math.pi
    return theta_j1, theta_j2


@dataclass
class DetectionBoundParams:
    """Inputs for :func:`detection_bound`.

    ``c`` (selection reference values, entries for iterations 2..s are used)
    and ``n_thr`` (per-iteration satisfied-count thresholds, in 1..m_o) are
    schedules the analysis leaves to the caller.
    """

    x: Signal
    m_o: int
    c: np.ndarray
    n_thr: np.ndarray
    n: int
    s: int

    @classmethod
    def with_default_schedule(cls, x: Signal, m_o: int, n: int) -> "DetectionBoundParams":
        """c_j = 0.1 and n_j = ceil(0.75 * m_o) for every iteration."""
        s = x.s
        return cls(
            x=x,
            m_o=m_o,
            c=np.full(s, 0.1),
            n_thr=np.full(s, math.ceil(0.75 * m_o), dtype=int),
            n=n,
            s=s,
        )

    def validate(self) -> None:
        if self.s != self.x.s or self.n != self.x.n:
            raise InvalidParameterError("params (n, s) disagree with the signal")
        if len(self.c) != self.s or len(self.n_thr) != self.s:
            raise InvalidParameterError("schedules c and n_thr must have length s")
        if np.any(np.asarray(self.c) <= 0):
            raise InvalidParameterError("selection reference values c_j must be positive")
        thr = np.asarray(self.n_thr)
        if np.any(thr < 1) or np.any(thr > self.m_o):
            raise InvalidParameterError("thresholds n_j must lie in 1..m_o")


@dataclass
class BoundValue:
    """A probability lower bound, raw (possibly vacuous) and clamped to [0, 1]."""

    raw: float
    clamped: float


def _assemble(factors: list[float]) -> BoundValue:
    """Product of per-iteration factors, with vacuity kept visible.

    Each factor lower-bounds a conditional probability, so once any factor
    is nonpositive the overall bound is vacuous; reporting the worst factor
    (rather than a sign-scrambled product of negatives) keeps the raw value
    a faithful "how vacuous" indicator and never exceeds 1.
    """
    if any(f <= 0 for f in factors):
        raw = min(factors)
    else:
        raw = float(np.prod(factors)) if factors else 1.0
    return BoundValue(raw=raw, clamped=min(1.0, max(0.0, raw)))


def _count_threshold_term(theta: float, m_o: int, n_thr: int) -> float:
    """I_theta(m_o - n_thr + 1, n_thr) = P{Binomial(m_o, 1 - theta) <= n_thr - 1}."""
    return _beta_term(theta, m_o - n_thr + 1, n_thr)


def detection_factors(p: DetectionBoundParams) -> tuple[list[float], list[float]]:
    """Per-iteration factors of the detection bound.

    Returns (shortlist factors for j = 2..s, detection factors for
    j = 1..s).  Exposed separately so callers can see which iteration makes
    the bound vacuous.
    """
    p.validate()
    shortlist_factors = []
    for j in range(2, p.s + 1):
        kappa = candidate_shortlist_size(j, p.s, p.n)
        c_j = float(p.c[j - 1])
        miss = _beta_term(math.exp(-c_j**2 / 2.0), kappa, p.n - j + 1 - kappa)
        shortlist_factors.append((1.0 - math.sqrt(2.0 / math.pi) * c_j) * (1.0 - miss))

    detect_factors = []
    for j in range(1, p.s + 1):
        kappa = candidate_shortlist_size(j, p.s, p.n)
        theta_j1, theta_j2 = detection_angles(p.x, j)
        n_j = int(p.n_thr[j - 1])
        true_fails = _count_threshold_term(theta_j1, p.m_o, n_j)
        wrong_passes = 1.0 - _count_threshold_term(theta_j2, p.m_o, n_j)
        detect_factors.append(1.0 - true_fails - (kappa - 1) * wrong_passes)
    return shortlist_factors, detect_factors


def detection_bound(p: DetectionBoundParams) -> BoundValue:
    """Lower bound on the from-scratch detector finding the exact support."""
    shortlist_factors, detect_factors = detection_factors(p)
    return _assemble(shortlist_factors + detect_factors)


@dataclass
class ModificationBoundParams:
    """Inputs for :func:`modification_bound`.

    ``s_missed`` is the number of true support indices the initial guess
    fails to contain; by convention these are the ``s_missed``
    largest-magnitude ones (the detected part is the rest of the support).
    ``n_hat`` / ``n_tilde`` are the augmentation / pruning count-threshold
    schedules.  ``n_terms`` is the number of factors multiplied; the claim
    concerns one iteration per missed index, so it defaults to ``s_missed``.
    """

    x: Signal
    m_o: int
    s_missed: int
    n_hat: np.ndarray
    n_tilde: np.ndarray
    n: int
    s: int
    n_terms: int | None = None

    @classmethod
    def with_default_schedule(
        cls, x: Signal, m_o: int, n: int, s_missed: int
    ) -> "ModificationBoundParams":
        thr = math.ceil(0.75 * m_o)
        return cls(
            x=x,
            m_o=m_o,
            s_missed=s_missed,
            n_hat=np.full(max(s_missed, 1), thr, dtype=int),
            n_tilde=np.full(max(s_missed, 1), thr, dtype=int),
            n=n,
            s=x.s,
        )

    def validate(self) -> None:
        if self.s != self.x.s or self.n != self.x.n:
            raise InvalidParameterError("params (n, s) disagree with the signal")
        if not 0 <= self.s_missed <= self.s:
            raise InvalidParameterError("missed-index count must lie in 0..s")
        terms = self.s_missed if self.n_terms is None else self.n_terms
        if terms > min(len(self.n_hat), len(self.n_tilde)):
            raise InvalidParameterError("threshold schedules shorter than the product range")
        for thr in (np.asarray(self.n_hat)[:terms], np.asarray(self.n_tilde)[:terms]):
            if thr.size and (np.any(thr < 1) or np.any(thr > self.m_o)):
                raise InvalidParameterError("thresholds must lie in 1..m_o")


def modification_angles(x: Signal, s_missed: int, j: int) -> tuple[float, float, float]:
    """Angle fractions (theta-hat_j1, theta-hat_j2, theta-tilde_j2) for refinement.

    The missed part of the support is taken to be its ``s_missed``
    largest-magnitude indices, ordered by decreasing magnitude; iteration j
    fixes the j-th of them.  theta-hat_j1 caps the sign flips of the
    estimate holding the detected part plus the first j missed indices,
    theta-hat_j2 covers wrong augmentation candidates, and theta-tilde_j2
    covers wrong pruning choices (dropping the smallest-magnitude kept
    index instead of the freshly added one).
    """
    if not 1 <= j <= s_missed:
        raise InvalidParameterError(f"iteration j={j} outside 1..{s_missed}")
    mags = _sorted_support_magnitudes(x)
    norm_x = float(np.linalg.norm(mags))
    if norm_x == 0.0:
        raise InvalidParameterError("signal norm is zero")
    missed = mags[:s_missed]  # decreasing magnitudes
    detected = mags[s_missed:]
    missed_tails = _tail_norms(missed)
    if norm_x < math.sqrt(2.0) * missed_tails[1]:
        raise OutOfRegimeError(
            "signal too flat: ||x|| must be at least sqrt(2) times the "
            "missed tail beyond its largest entry"
        )
    sin_arg = 1.0 - math.sqrt(2.0) * (missed_tails[1] - missed_tails[j]) / norm_x
    theta_hat_j1 = math.asin(min(1.0, max(-1.0, sin_arg))) / math.pi

    kept = list(detected) + list(missed[: j - 1])
    competitor = kept + ([missed[j]] if j + 1 <= s_missed else [])
    theta_hat_j2 = math.acos(min(1.0, float(np.linalg.norm(competitor)) / norm_x)) / math.pi

    after_aug = np.asarray(list(detected) + list(missed[:j]))
    drop_smallest = np.sort(after_aug)[1:] if after_aug.size else after_aug
    theta_tilde_j2 = (
        math.acos(min(1.0, float(np.linalg.norm(drop_smallest)) / norm_x)) / math.pi
    )
    return theta_hat_j1, theta_hat_j2, theta_tilde_j2


def modification_factors(p: ModificationBoundParams) -> tuple[list[float], list[float]]:
    """Per-iteration (augmentation, pruning) factors of the modification bound."""
    p.validate()
    terms = p.s_missed if p.n_terms is None else p.n_terms
    aug_factors = []
    prune_factors = []
    for j in range(1, terms + 1):
        th1, th2_aug, th2_prune = modification_angles(p.x, p.s_missed, j)
        n_hat = int(p.n_hat[j - 1])
        n_tilde = int(p.n_tilde[j - 1])
        aug_true_fails = _count_threshold_term(th1, p.m_o, n_hat)
        aug_wrong_passes = 1.0 - _count_threshold_term(th2_aug, p.m_o, n_hat)
        aug_factors.append(1.0 - aug_true_fails - (p.n - p.s - 1) * aug_wrong_passes)
        pru_true_fails = _count_threshold_term(th1, p.m_o, n_tilde)
        pru_wrong_passes = 1.0 - _count_threshold_term(th2_prune, p.m_o, n_tilde)
        prune_factors.append(
            1.0
            - (p.s - p.s_missed + j) * pru_true_fails
            - (p.s_missed - j + 1) * pru_wrong_passes
        )
    return aug_factors, prune_factors


def modification_bound(p: ModificationBoundParams) -> BoundValue:
    """Lower bound on the refiner fixing every missed support index.

    With ``s_missed = 0`` there is nothing to fix and the bound is exactly 1.
    """
    aug_factors, prune_factors = modification_factors(p)
    return _assemble(aug_factors + prune_factors)


@dataclass
class RateEstimate:
    """Empirical success fraction with a Wilson 95% confidence interval."""

    rate: float
    ci_low: float
    ci_high: float
    n_trials: int

    @property
    def sigma(self) -> float:
        """Standard error at the Wilson-adjusted center (positive even at rate 1)."""
        center = 0.5 * (self.ci_low + self.ci_high)
        return math.sqrt(center * (1.0 - center) / self.n_trials)


def wilson_interval(successes: int, n_trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n_trials < 1:
        raise InvalidParameterError("need at least one trial")
    phat = successes / n_trials
    denom = 1.0 + z**2 / n_trials
    center = (phat + z**2 / (2 * n_trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n_trials + z**2 / (4 * n_trials**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def empirical_success_rate(trial, n_trials: int, master_seed: int) -> RateEstimate:
    """Fraction of trials for which ``trial(rng)`` reports success.

    ``trial`` receives a fresh child generator per call, derived from
    ``master_seed``, and returns a truthy value on success.  Used to compare
    measured support-recovery rates against the closed-form bounds.
    """
    if n_trials < 1:
        raise InvalidParameterError("need at least one trial")
    streams = np.random.SeedSequence(master_seed).spawn(n_trials)
    successes = sum(bool(trial(np.random.default_rng(ss))) for ss in streams)
    low, high = wilson_interval(successes, n_trials)
    return RateEstimate(
        rate=successes / n_trials, ci_low=low, ci_high=high, n_trials=n_trials
    )
