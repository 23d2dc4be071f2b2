"""Monte Carlo benchmark comparing hybrid and traditional greedy recovery.

Both experiment presets match bit budgets exactly: a stored linear
measurement costs ``bits_per_real`` (32 by default) bits and a one-bit
measurement costs one, so the hybrid pair (m_r, m_o) and the traditional
count m satisfy 32*m_r + m_o = 32*m at every grid point.

* Experiment 1 scales the budget with sparsity: m_r = ceil(1.5 s),
  m_o = 32 * floor(0.5 s), m = 2 s (64 s bits in total).
* Experiment 2 fixes the budget at 2048 bits: m_r = 48, m_o = 512, m = 64.

Each trial draws one sparse signal, one noise vector shared by both
pipelines, and independent measurement matrices, then runs the requested
algorithms.  Per-trial RNG streams depend only on (master seed, grid
indices, trial index), so results are reproducible and independent of the
worker count.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import baselines, measurement, recovery
from .errors import InvalidParameterError, RecoveryFailureError

CSV_SCHEMA_VERSION = 1
RATIO_CLAMP = 1e-12  # floor on ||x - x_hat||^2 relative to ||x||^2

TRIALS_COLUMNS = [
    "experiment", "algorithm", "n", "s", "m_r", "m_o", "m",
    "xi_s_db", "trial", "ratio", "support_exact", "iterations", "wall_time_ms",
]
AGGREGATE_COLUMNS = [
    "experiment", "algorithm", "n", "s", "m_r", "m_o", "m",
    "xi_s_db", "n_v", "xi_r_db", "success_rate",
]

ALGORITHMS = ("alg1", "alg2", "omp", "sp", "cosamp")


@dataclass
class ExperimentConfig:
    experiment_id: int
    s_grid: tuple[int, ...]
    snr_grid_db: tuple[float, ...]
    n: int = 256
    n_v: int = 500
    bits_per_real: int = 32
    master_seed: int = 0
    algorithms: tuple[str, ...] = ALGORITHMS

    def __post_init__(self):
        if self.experiment_id not in (1, 2):
            raise InvalidParameterError(f"unknown experiment id {self.experiment_id}")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise InvalidParameterError(f"unknown algorithm(s): {sorted(unknown)}")

    def measurement_counts(self, s: int) -> tuple[int, int, int]:
        """(m_r, m_o, m) at sparsity s under this experiment's budget rule."""
        if self.experiment_id == 1:
            return math.ceil(1.5 * s), 32 * (s // 2), 2 * s
        return 48, 512, 64


@dataclass
class TrialRecord:
    experiment: int
    algorithm: str
    n: int
    s: int
    m_r: int
    m_o: int
    m: int
    xi_s_db: float
    trial: int
    ratio: float
    support_exact: bool
    iterations: int
    wall_time_ms: float


@dataclass
class AggregateRow:
    experiment: int
    algorithm: str
    n: int
    s: int
    m_r: int
    m_o: int
    m: int
    xi_s_db: float
    n_v: int
    xi_r_db: float
    success_rate: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: list[TrialRecord] = field(default_factory=list)
    aggregates: list[AggregateRow] = field(default_factory=list)


def preset_config(experiment_id: int) -> ExperimentConfig:
    """The published grid for either experiment."""
    if experiment_id == 1:
        return ExperimentConfig(
            experiment_id=1,
            s_grid=(4, 8, 16, 32),
            snr_grid_db=(0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0),
        )
    if experiment_id == 2:
        return ExperimentConfig(
            experiment_id=2,
            s_grid=(4, 8, 16, 32),
            snr_grid_db=(0.0, 10.0),
        )
    raise InvalidParameterError(f"unknown experiment id {experiment_id}")


def bit_budget(m_r: int, m_o: int, bits_per_real: int = 32) -> int:
    """Stored bits for m_r real measurements plus m_o one-bit measurements."""
    if m_r < 0 or m_o < 0 or bits_per_real < 0:
        raise InvalidParameterError("measurement counts and bit width must be nonnegative")
    return bits_per_real * m_r + m_o


def _trial_rng_streams(cfg: ExperimentConfig, s_idx: int, snr_idx: int, trial_idx: int):
    """Five independent child streams (signal, noise, A_r, A_o, A) for one trial."""
    ss = np.random.SeedSequence(cfg.master_seed, spawn_key=(s_idx, snr_idx, trial_idx))
    return [np.random.default_rng(child) for child in ss.spawn(5)]


def _ratio(x: measurement.Signal, estimate: np.ndarray) -> float:
    err = float(np.sum((x.values - estimate) ** 2))
    sig = float(np.sum(x.values**2))
    return sig / max(err, RATIO_CLAMP * sig)


def run_trial(cfg: ExperimentConfig, s_idx: int, snr_idx: int, trial_idx: int) -> list[TrialRecord]:
    """One Monte Carlo trial: draw an instance, run every requested algorithm.

    The refinement algorithm is initialized with the detector's output
    support, so the detector runs whenever either hybrid algorithm is
    requested.  A recovery failure is recorded as a zero estimate rather
    than aborting the trial.
    """
    s = cfg.s_grid[s_idx]
    xi_s = cfg.snr_grid_db[snr_idx]
    m_r, m_o, m = cfg.measurement_counts(s)
    rng_x, rng_u, rng_ar, rng_ao, rng_a = _trial_rng_streams(cfg, s_idx, snr_idx, trial_idx)

    x = measurement.gen_sparse_signal(cfg.n, s, rng_x)
    noise = measurement.gen_noise_for_snr(x, xi_s, rng_u)
    x_tilde = x.values + noise.u

    a_r = measurement.gen_gaussian_matrix(m_r, cfg.n, rng_ar)
    a_o = measurement.gen_gaussian_matrix(m_o, cfg.n, rng_ao)
    hm = measurement.measure_hybrid(a_r, a_o, x_tilde)
    a = measurement.gen_gaussian_matrix(m, cfg.n, rng_a)
    y = measurement.linear_measure(a, x_tilde)

    meta = dict(
        experiment=cfg.experiment_id, n=cfg.n, s=s, m_r=m_r, m_o=m_o, m=m,
        xi_s_db=xi_s, trial=trial_idx,
    )
    records = []

    def make_record(algorithm: str, result, elapsed_ms: float) -> TrialRecord:
        if result is None:  # recovery failure: score the zero estimate
            estimate = np.zeros(cfg.n)
            support = np.zeros(0, dtype=np.intp)
            iterations = 0
        else:
            estimate, support, iterations = (
                result.estimate.values, result.support, result.iterations,
            )
        return TrialRecord(
            algorithm=algorithm,
            ratio=_ratio(x, estimate),
            support_exact=bool(
                support.size == x.support.size and np.array_equal(support, x.support)
            ),
            iterations=iterations,
            wall_time_ms=elapsed_ms,
            **meta,
        )

    def timed(runner):
        start = time.perf_counter()
        try:
            result = runner()
        except RecoveryFailureError:
            result = None
        return result, (time.perf_counter() - start) * 1e3

    detector_result = None
    if "alg1" in cfg.algorithms or "alg2" in cfg.algorithms:
        detector_result, elapsed = timed(lambda: recovery.detect_support(hm, s))
        if "alg1" in cfg.algorithms:
            records.append(make_record("alg1", detector_result, elapsed))
    if "alg2" in cfg.algorithms:
        if detector_result is None:
            records.append(make_record("alg2", None, 0.0))
        else:
            omega0 = detector_result.support
            result, elapsed = timed(lambda: recovery.refine_support(hm, s, omega0))
            records.append(make_record("alg2", result, elapsed))
    for name, solver in (("omp", baselines.omp), ("sp", baselines.sp), ("cosamp", baselines.cosamp)):
        if name in cfg.algorithms:
            result, elapsed = timed(lambda: solver(a, y, s))
            records.append(make_record(name, result, elapsed))

    order = {name: i for i, name in enumerate(cfg.algorithms)}
    records.sort(key=lambda rec: order[rec.algorithm])
    return records


def _grid_worker(args) -> tuple[tuple[int, int, int], list[TrialRecord]]:
    cfg, s_idx, snr_idx, trial_idx = args
    return (s_idx, snr_idx, trial_idx), run_trial(cfg, s_idx, snr_idx, trial_idx)


def run_experiment(
    cfg: ExperimentConfig, out_dir: str | Path | None = None, threads: int = 1
) -> ExperimentResult:
    """Run the full grid, optionally writing trials.csv and aggregate.csv.

    Trials are independent work items; results are reduced in (grid, trial)
    order regardless of the worker count, so the aggregate output is
    byte-identical for any ``threads``.
    """
    if threads < 1:
        raise InvalidParameterError("threads must be >= 1")
    work = [
        (cfg, s_idx, snr_idx, trial_idx)
        for s_idx in range(len(cfg.s_grid))
        for snr_idx in range(len(cfg.snr_grid_db))
        for trial_idx in range(cfg.n_v)
    ]
    if threads == 1:
        keyed = [_grid_worker(item) for item in work]
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunk = max(1, len(work) // (8 * threads))
            keyed = list(pool.map(_grid_worker, work, chunksize=chunk))
    keyed.sort(key=lambda kv: kv[0])

    result = ExperimentResult(config=cfg)
    for _, records in keyed:
        result.trials.extend(records)

    for s_idx, s in enumerate(cfg.s_grid):
        m_r, m_o, m = cfg.measurement_counts(s)
        for snr_idx, xi_s in enumerate(cfg.snr_grid_db):
            for algorithm in cfg.algorithms:
                rows = [
                    rec
                    for rec in result.trials
                    if rec.s == s and rec.xi_s_db == xi_s and rec.algorithm == algorithm
                ]
                rows.sort(key=lambda rec: rec.trial)
                ratios = np.array([rec.ratio for rec in rows])
                result.aggregates.append(
                    AggregateRow(
                        experiment=cfg.experiment_id,
                        algorithm=algorithm,
                        n=cfg.n,
                        s=s,
                        m_r=m_r,
                        m_o=m_o,
                        m=m,
                        xi_s_db=xi_s,
                        n_v=len(rows),
                        xi_r_db=10.0 * math.log10(float(np.mean(ratios))),
                        success_rate=float(
                            np.mean([rec.support_exact for rec in rows])
                        ),
                    )
                )

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_trials_csv(result.trials, out / "trials.csv")
        write_aggregate_csv(result.aggregates, out / "aggregate.csv")
    return result


def _fmt(value) -> str:
    """17-significant-digit floats, 0/1 booleans, plain ints and strings."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _write_csv(path: Path, columns: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in columns])


def write_trials_csv(trials: list[TrialRecord], path: str | Path) -> None:
    _write_csv(Path(path), TRIALS_COLUMNS, trials)


def write_aggregate_csv(aggregates: list[AggregateRow], path: str | Path) -> None:
    _write_csv(Path(path), AGGREGATE_COLUMNS, aggregates)


def with_overrides(cfg: ExperimentConfig, **kwargs) -> ExperimentConfig:
    """Copy a config with selected fields replaced (grids given as sequences)."""
    if "s_grid" in kwargs:
        kwargs["s_grid"] = tuple(int(s) for s in kwargs["s_grid"])
    if "snr_grid_db" in kwargs:
        kwargs["snr_grid_db"] = tuple(float(v) for v in kwargs["snr_grid_db"])
    if "algorithms" in kwargs:
        kwargs["algorithms"] = tuple(kwargs["algorithms"])
    return replace(cfg, **kwargs)
