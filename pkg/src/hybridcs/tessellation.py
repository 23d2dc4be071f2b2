"""Empirical geometry of random hyperplane sign measurements.

A Gaussian row a defines the hyperplane <a, .> = 0; two points are
separated when their measurements differ in sign.  For a single Gaussian
row the separation probability equals angle(x, y) / pi, and the fraction of
separating rows in a matrix controls how far apart two unit-normalized
signals can be.  This module measures those quantities and checks the
direction-error inequality

    || x/||x|| - x_hat/||x_hat|| ||_2  <=  delta + (separating fraction of A_o
                                                    between x + u and x_hat)

on concrete sparse instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError
from .measurement import MeasurementMatrix, Signal, sign_pm1


@dataclass
class TessellationReport:
    """One evaluation of the direction-error inequality."""

    lhs: float  # distance between the unit-normalized signal and estimate
    rhs: float  # delta + separating fraction
    holds: bool
    d_a: float  # separating fraction of the one-bit matrix
    theta: float  # angle (radians) between the contaminated signal and the estimate


def separation_fraction(a: MeasurementMatrix, x: np.ndarray, y: np.ndarray) -> float:
    """Fraction of the rows of A whose hyperplane separates x and y."""
    sx = sign_pm1(a.entries @ np.asarray(x))
    sy = sign_pm1(a.entries @ np.asarray(y))
    return float(np.count_nonzero(sx != sy)) / a.m


def angle(x: np.ndarray, y: np.ndarray) -> float:
    """Angle between two nonzero vectors, in [0, pi]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise InvalidParameterError("angle undefined for zero vectors")
    return math.acos(min(1.0, max(-1.0, float(x @ y) / (nx * ny))))


def sign_flip_rate(
    x: np.ndarray, y: np.ndarray, n_rows: int, rng: np.random.Generator
) -> float:
    """Monte Carlo estimate of P{sign<a,x> != sign<a,y>} over Gaussian rows a.

    Converges to angle(x, y) / pi as n_rows grows.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.linalg.norm(x) == 0.0 or np.linalg.norm(y) == 0.0:
        raise InvalidParameterError("sign flip rate undefined for zero vectors")
    if n_rows < 1:
        raise InvalidParameterError("need at least one row")
    rows = rng.standard_normal((n_rows, x.size))
    flips = sign_pm1(rows @ x) != sign_pm1(rows @ y)
    return float(np.count_nonzero(flips)) / n_rows


@dataclass
class WidthEstimate:
    """Monte Carlo Gaussian mean width with a normal-approximation 95% CI."""

    value: float
    ci_low: float
    ci_high: float
    n_samples: int


def gaussian_mean_width_sparse(
    n: int, s: int, n_samples: int, rng: np.random.Generator
) -> WidthEstimate:
    """Mean width of the s-sparse unit ball in R^n.

    For a standard normal g, the supremum of <g, q> over unit-norm s-sparse
    q is attained by normalizing the restriction of g to its s
    largest-magnitude entries, so each sample contributes the l2 norm of
    that top-s restriction.
    """
    if not 1 <= s <= n:
        raise InvalidParameterError(f"need 1 <= s <= n, got s={s}, n={n}")
    if n_samples < 2:
        raise InvalidParameterError("need at least two samples for a CI")
    g = rng.standard_normal((n_samples, n))
    if s == n:
        sup = np.linalg.norm(g, axis=1)
    else:
        top = np.partition(np.abs(g), n - s, axis=1)[:, n - s:]
        sup = np.linalg.norm(top, axis=1)
    mean = float(np.mean(sup))
    half = 1.959963984540054 * float(np.std(sup, ddof=1)) / math.sqrt(n_samples)
    return WidthEstimate(
        value=mean, ci_low=mean - half, ci_high=mean + half, n_samples=n_samples
    )


def direction_error_check(
    x: Signal,
    u: np.ndarray,
    x_hat: Signal,
    a_o: MeasurementMatrix,
    delta: float,
) -> TessellationReport:
    """Evaluate the direction-error inequality on one instance.

    The left side compares unit-normalized signal and estimate; the right
    side is delta plus the fraction of one-bit hyperplanes separating the
    contaminated signal x + u from the estimate.
    """
    nx = float(np.linalg.norm(x.values))
    nh = float(np.linalg.norm(x_hat.values))
    if nx == 0.0 or nh == 0.0:
        raise InvalidParameterError("direction error undefined for zero vectors")
    lhs = float(np.linalg.norm(x.values / nx - x_hat.values / nh))
    contaminated = x.values + np.asarray(u)
    d_a = separation_fraction(a_o, contaminated, x_hat.values)
    rhs = delta + d_a
    return TessellationReport(
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs,
        d_a=d_a,
        theta=angle(contaminated, x_hat.values),
    )
