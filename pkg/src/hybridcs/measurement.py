"""Sparse test signals, SNR-calibrated noise, and hybrid linear/one-bit measurements.

The measurement model mixes two channels observing the same contaminated
signal ``x + u``: a real-valued channel ``y_r = A_r (x + u)`` and a binary
channel ``y_o = sign(A_o (x + u))``.  Matrices carry i.i.d. N(0, 1/m)
entries so that rows are unit-variance after aggregation.

All randomness flows through explicit ``numpy.random.Generator`` streams;
nothing touches global RNG state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError


@dataclass
class Signal:
    """An s-sparse vector together with its sparsity and support.

    For generated signals, ``values`` is nonzero exactly on ``support``.
    Estimates produced by recovery routines reuse this container; their
    support is the detected one.
    """

    values: np.ndarray
    s: int
    support: np.ndarray  # sorted indices, 0-based

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass
class NoiseModel:
    """Signal-level noise ``u`` calibrated to a target signal SNR in dB."""

    u: np.ndarray
    target_snr_db: float


@dataclass
class MeasurementMatrix:
    """Dense sensing matrix with i.i.d. N(0, 1/m) entries.

    ``entries`` already includes the 1/sqrt(m) scaling; ``scale`` records it.
    """

    entries: np.ndarray
    scale: float

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]


@dataclass
class HybridMeasurements:
    """The bundle (A_r, y_r, A_o, y_o) seen by the hybrid recovery algorithms."""

    a_r: MeasurementMatrix
    y_r: np.ndarray
    a_o: MeasurementMatrix
    y_o: np.ndarray


def sign_pm1(v: np.ndarray) -> np.ndarray:
    """Sign with values in {-1, +1}; zero maps to +1.

    The +1 convention at zero matches the ``>= 0`` form of the binary
    inequality tests used throughout (a measure-zero event for continuous
    inputs, but it must be fixed somewhere).
    """
    return np.where(np.asarray(v) >= 0, 1.0, -1.0)


def gen_sparse_signal(n: int, s: int, rng: np.random.Generator) -> Signal:
    """Draw an exactly s-sparse signal of dimension n.

    The support is uniform over s-subsets of {0..n-1} and the support
    entries are i.i.d. standard normal; everything else is exactly zero.
    """
    if not (1 <= s <= n):
        raise InvalidParameterError(f"sparsity must satisfy 1 <= s <= n, got s={s}, n={n}")
    support = np.sort(rng.choice(n, size=s, replace=False))
    values = np.zeros(n)
    values[support] = rng.standard_normal(s)
    return Signal(values=values, s=s, support=support)


def gen_noise_for_snr(x: Signal, xi_s_db: float, rng: np.random.Generator) -> NoiseModel:
    """Draw noise u with ||x||^2 / ||u||^2 = 10^(xi_s_db/10) exactly.

    ``xi_s_db = math.inf`` is the noiseless flag and yields u = 0 exactly.
    """
    norm_x = float(np.linalg.norm(x.values))
    if norm_x == 0.0:
        raise InvalidParameterError("cannot calibrate noise against a zero signal")
    if math.isinf(xi_s_db) and xi_s_db > 0:
        return NoiseModel(u=np.zeros(x.n), target_snr_db=xi_s_db)
    if not math.isfinite(xi_s_db):
        raise InvalidParameterError(f"target SNR must be finite or +inf, got {xi_s_db}")
    g = rng.standard_normal(x.n)
    u = g * (norm_x / np.linalg.norm(g)) * 10.0 ** (-xi_s_db / 20.0)
    return NoiseModel(u=u, target_snr_db=xi_s_db)


def gen_gaussian_matrix(m: int, n: int, rng: np.random.Generator) -> MeasurementMatrix:
    """Sensing matrix with i.i.d. standard normal entries divided by sqrt(m)."""
    if m < 1 or n < 1:
        raise InvalidParameterError(f"matrix dimensions must be positive, got {m}x{n}")
    scale = 1.0 / math.sqrt(m)
    return MeasurementMatrix(entries=rng.standard_normal((m, n)) * scale, scale=scale)


def linear_measure(a_r: MeasurementMatrix, x_tilde: np.ndarray) -> np.ndarray:
    """Real-valued measurements ``A_r @ x_tilde``."""
    x_tilde = np.asarray(x_tilde)
    if x_tilde.shape != (a_r.n,):
        raise InvalidParameterError(
            f"signal length {x_tilde.shape} does not match matrix width {a_r.n}"
        )
    return a_r.entries @ x_tilde


def binary_measure(a_o: MeasurementMatrix, x_tilde: np.ndarray) -> np.ndarray:
    """One-bit measurements ``sign(A_o @ x_tilde)`` with entries in {-1, +1}."""
    return sign_pm1(linear_measure(a_o, x_tilde))


def measure_hybrid(
    a_r: MeasurementMatrix, a_o: MeasurementMatrix, x_tilde: np.ndarray
) -> HybridMeasurements:
    """Take both measurement types of the same contaminated signal."""
    return HybridMeasurements(
        a_r=a_r,
        y_r=linear_measure(a_r, x_tilde),
        a_o=a_o,
        y_o=binary_measure(a_o, x_tilde),
    )
