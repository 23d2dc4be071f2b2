"""Sparse recovery from mixed linear and one-bit measurements.

The package provides:

* :mod:`hybridcs.measurement` — sparse signals, SNR-calibrated noise, and
  the two-channel (linear + sign) measurement model;
* :mod:`hybridcs.recovery` — greedy support detection and refinement driven
  by one-bit inequality checks;
* :mod:`hybridcs.baselines` — OMP, subspace pursuit, and CoSaMP on a single
  linear system;
* :mod:`hybridcs.theory` — binomial/beta machinery and closed-form lower
  bounds on recovery success probabilities;
* :mod:`hybridcs.tessellation` — hyperplane-separation geometry and mean
  width estimation;
* :mod:`hybridcs.experiment` — the bit-budget-matched Monte Carlo benchmark;
* :mod:`hybridcs.cli` — the ``hybridcs`` command-line front end.
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateSystemError,
    InvalidParameterError,
    OutOfRegimeError,
    RecoveryFailureError,
)
from .measurement import (
    HybridMeasurements,
    MeasurementMatrix,
    NoiseModel,
    Signal,
    binary_measure,
    gen_gaussian_matrix,
    gen_noise_for_snr,
    gen_sparse_signal,
    linear_measure,
    measure_hybrid,
    sign_pm1,
)
from .recovery import (
    RecoveryResult,
    Residue,
    candidate_select,
    candidate_shortlist_size,
    detect_support,
    embed,
    refine_support,
    residue_update,
    restricted_least_squares,
    satisfied_count,
)
from .baselines import cosamp, omp, sp
from .theory import (
    BoundValue,
    DetectionBoundParams,
    ModificationBoundParams,
    RateEstimate,
    binom_cdf,
    detection_angles,
    detection_bound,
    empirical_success_rate,
    modification_angles,
    modification_bound,
    reg_inc_beta,
    wilson_interval,
)
from .tessellation import (
    TessellationReport,
    WidthEstimate,
    angle,
    direction_error_check,
    gaussian_mean_width_sparse,
    separation_fraction,
    sign_flip_rate,
)
from .experiment import (
    ExperimentConfig,
    ExperimentResult,
    TrialRecord,
    bit_budget,
    preset_config,
    run_experiment,
    run_trial,
)
