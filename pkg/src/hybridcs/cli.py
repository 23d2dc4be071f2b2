"""Command-line entry point.

Subcommands::

    hybridcs experiment  --id {1,2} --nv N --seed S --out DIR [...]
    hybridcs recover     --alg {alg1,alg2,omp,sp,cosamp} --n --s --mr --mo --snr --seed
    hybridcs bound       --theorem {5,6} --magnitudes ... --n --mo [...]
    hybridcs tessellate  --n --s --mo --delta --trials --seed [...]
    hybridcs width       --n --s --samples --seed

Every run echoes its resolved configuration; ``experiment`` additionally
writes run-manifest.txt beside its CSV outputs.  Exit codes: 0 success,
2 invalid arguments, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, baselines, experiment, measurement, recovery, tessellation, theory
from .errors import InvalidParameterError, OutOfRegimeError, RecoveryFailureError


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _echo(config: dict) -> None:
    for key, value in config.items():
        print(f"{key}={value}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridcs",
        description="Greedy sparse recovery from mixed linear/one-bit measurements.",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"hybridcs {__version__} (csv-schema {experiment.CSV_SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exp = sub.add_parser("experiment", help="run a Monte Carlo benchmark grid")
    p_exp.add_argument("--id", type=int, required=True, choices=(1, 2),
                       help="experiment preset: 1 = budget scales with s, 2 = fixed 2048 bits")
    p_exp.add_argument("--nv", type=int, default=500, help="trials per grid point")
    p_exp.add_argument("--seed", type=int, default=0, help="master seed")
    p_exp.add_argument("--out", type=str, default=".", help="output directory for CSVs")
    p_exp.add_argument("--s-grid", type=_parse_int_list, default=None,
                       help="comma-separated sparsity grid override")
    p_exp.add_argument("--snr-grid", type=_parse_float_list, default=None,
                       help="comma-separated signal SNR grid override (dB)")
    p_exp.add_argument("--algorithms", type=str, default=None,
                       help="comma-separated subset of alg1,alg2,omp,sp,cosamp")
    p_exp.add_argument("--threads", type=int, default=None,
                       help="parallel workers (default: available cores); output is identical for any value")

    p_rec = sub.add_parser("recover", help="run one recovery on a fresh random instance")
    p_rec.add_argument("--alg", required=True, choices=experiment.ALGORITHMS)
    p_rec.add_argument("--n", type=int, default=256)
    p_rec.add_argument("--s", type=int, required=True)
    p_rec.add_argument("--mr", type=int, required=True, help="number of linear measurements")
    p_rec.add_argument("--mo", type=int, required=True, help="number of one-bit measurements")
    p_rec.add_argument("--m", type=int, default=None,
                       help="linear measurements for baseline algorithms "
                            "(default: the bit-matched (32*mr+mo)/32)")
    p_rec.add_argument("--snr", type=float, default=math.inf,
                       help="signal SNR in dB (inf = noiseless)")
    p_rec.add_argument("--seed", type=int, default=0)

    p_bound = sub.add_parser("bound", help="evaluate a closed-form success-probability lower bound")
    p_bound.add_argument("--theorem", type=int, required=True, choices=(5, 6),
                         help="5 = from-scratch detection, 6 = support modification")
    p_bound.add_argument("--magnitudes", type=_parse_float_list, required=True,
                         help="comma-separated nonzero support magnitudes")
    p_bound.add_argument("--n", type=int, required=True, help="signal dimension")
    p_bound.add_argument("--mo", type=int, required=True, help="one-bit measurement count")
    p_bound.add_argument("--c", type=_parse_float_list, default=None,
                         help="selection reference values (scalar or one per iteration, default 0.1)")
    p_bound.add_argument("--nthr", type=_parse_int_list, default=None,
                         help="satisfied-count thresholds (scalar or one per iteration, "
                              "default ceil(0.75*mo))")
    p_bound.add_argument("--s-missed", type=int, default=None,
                         help="number of initially missed support indices (modification bound)")
    p_bound.add_argument("--nhat", type=_parse_int_list, default=None,
                         help="augmentation thresholds (modification bound)")
    p_bound.add_argument("--ntilde", type=_parse_int_list, default=None,
                         help="pruning thresholds (modification bound)")
    p_bound.add_argument("--terms", type=int, default=None,
                         help="number of product terms (default: one per missed index)")

    p_tess = sub.add_parser("tessellate", help="empirically check the direction-error inequality")
    p_tess.add_argument("--n", type=int, default=128)
    p_tess.add_argument("--s", type=int, default=4)
    p_tess.add_argument("--mo", type=int, default=2048)
    p_tess.add_argument("--delta", type=float, default=0.5)
    p_tess.add_argument("--trials", type=int, default=200)
    p_tess.add_argument("--noise", type=float, default=1e-3,
                        help="noise norm relative to the signal norm")
    p_tess.add_argument("--perturb", type=float, default=0.5,
                        help="max relative perturbation used to build the estimate")
    p_tess.add_argument("--seed", type=int, default=0)

    p_width = sub.add_parser("width", help="estimate the mean width of the s-sparse unit ball")
    p_width.add_argument("--n", type=int, required=True)
    p_width.add_argument("--s", type=int, required=True)
    p_width.add_argument("--samples", type=int, default=10000)
    p_width.add_argument("--seed", type=int, default=0)

    return parser


def _cmd_experiment(args) -> int:
    cfg = experiment.preset_config(args.id)
    overrides: dict = {"n_v": args.nv, "master_seed": args.seed}
    if args.s_grid is not None:
        overrides["s_grid"] = args.s_grid
    if args.snr_grid is not None:
        overrides["snr_grid_db"] = args.snr_grid
    if args.algorithms is not None:
        requested = tuple(tok.strip() for tok in args.algorithms.split(",") if tok.strip())
        unknown = [name for name in requested if name not in experiment.ALGORITHMS]
        if unknown:
            raise InvalidParameterError(
                f"--algorithms: unknown algorithm(s) {', '.join(unknown)}; "
                f"choose from {', '.join(experiment.ALGORITHMS)}"
            )
        overrides["algorithms"] = requested
    cfg = experiment.with_overrides(cfg, **overrides)
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    if threads < 1:
        raise InvalidParameterError("--threads must be >= 1")

    resolved = {
        "command": "experiment",
        "experiment": cfg.experiment_id,
        "n": cfg.n,
        "n_v": cfg.n_v,
        "s_grid": ",".join(str(s) for s in cfg.s_grid),
        "snr_grid_db": ",".join(format(v, "g") for v in cfg.snr_grid_db),
        "algorithms": ",".join(cfg.algorithms),
        "bits_per_real": cfg.bits_per_real,
        "master_seed": cfg.master_seed,
        "threads": threads,
        "out": args.out,
        "package_version": __version__,
        "csv_schema_version": experiment.CSV_SCHEMA_VERSION,
    }
    _echo(resolved)

    out = Path(args.out)
    result = experiment.run_experiment(cfg, out_dir=out, threads=threads)
    with open(out / "run-manifest.txt", "w", encoding="utf-8") as fh:
        for key, value in resolved.items():
            fh.write(f"{key}={value}\n")
    print(f"wrote {out / 'trials.csv'}")
    print(f"wrote {out / 'aggregate.csv'}")
    print(f"wrote {out / 'run-manifest.txt'}")
    for row in result.aggregates:
        print(
            f"s={row.s} xi_s={row.xi_s_db:g}dB {row.algorithm}: "
            f"xi_r={row.xi_r_db:.2f}dB success={row.success_rate:.3f}"
        )
    return 0


def _cmd_recover(args) -> int:
    if args.s < 1:
        raise InvalidParameterError("--s must be >= 1")
    m_default = (32 * args.mr + args.mo) // 32
    m = args.m if args.m is not None else m_default
    resolved = {
        "command": "recover", "alg": args.alg, "n": args.n, "s": args.s,
        "mr": args.mr, "mo": args.mo, "m": m, "snr_db": args.snr, "seed": args.seed,
    }
    _echo(resolved)

    ss = np.random.SeedSequence(args.seed)
    rng_x, rng_u, rng_ar, rng_ao, rng_a = (np.random.default_rng(c) for c in ss.spawn(5))
    x = measurement.gen_sparse_signal(args.n, args.s, rng_x)
    noise = measurement.gen_noise_for_snr(x, args.snr, rng_u)
    x_tilde = x.values + noise.u

    if args.alg in ("alg1", "alg2"):
        a_r = measurement.gen_gaussian_matrix(args.mr, args.n, rng_ar)
        a_o = measurement.gen_gaussian_matrix(args.mo, args.n, rng_ao)
        hm = measurement.measure_hybrid(a_r, a_o, x_tilde)
        result = recovery.detect_support(hm, args.s)
        if args.alg == "alg2":
            result = recovery.refine_support(hm, args.s, result.support)
    else:
        a = measurement.gen_gaussian_matrix(m, args.n, rng_a)
        y = measurement.linear_measure(a, x_tilde)
        solver = {"omp": baselines.omp, "sp": baselines.sp, "cosamp": baselines.cosamp}[args.alg]
        result = solver(a, y, args.s)

    err = float(np.sum((x.values - result.estimate.values) ** 2))
    sig = float(np.sum(x.values**2))
    ratio = sig / max(err, experiment.RATIO_CLAMP * sig)
    print(f"true_support={list(map(int, x.support))}")
    print(f"detected_support={list(map(int, result.support))}")
    print(f"support_exact={int(np.array_equal(result.support, x.support))}")
    print(f"iterations={result.iterations}")
    print(f"recovery_snr_db={10.0 * math.log10(ratio):.6g}")
    return 0


def _schedule(values, length: int, default):
    """Broadcast a scalar schedule or validate a per-iteration one."""
    if values is None:
        return np.full(length, default)
    if len(values) == 1:
        return np.full(length, values[0])
    if len(values) != length:
        raise InvalidParameterError(
            f"schedule needs 1 or {length} entries, got {len(values)}"
        )
    return np.asarray(values)


def _cmd_bound(args) -> int:
    mags = np.asarray(args.magnitudes, dtype=float)
    s = mags.size
    if s < 1 or np.any(mags == 0):
        raise InvalidParameterError("--magnitudes must list nonzero support values")
    if s > args.n:
        raise InvalidParameterError("--magnitudes longer than the dimension --n")
    x = measurement.Signal(
        values=np.concatenate([mags, np.zeros(args.n - s)]),
        s=s,
        support=np.arange(s, dtype=np.intp),
    )
    default_thr = math.ceil(0.75 * args.mo)

    if args.theorem == 5:
        params = theory.DetectionBoundParams(
            x=x, m_o=args.mo,
            c=_schedule(args.c, s, 0.1),
            n_thr=_schedule(args.nthr, s, default_thr).astype(int),
            n=args.n, s=s,
        )
        resolved = {
            "command": "bound", "theorem": 5, "n": args.n, "s": s, "mo": args.mo,
            "c": ",".join(format(v, "g") for v in params.c),
            "n_thr": ",".join(str(int(v)) for v in params.n_thr),
        }
        _echo(resolved)
        value = theory.detection_bound(params)
    else:
        if args.s_missed is None:
            raise InvalidParameterError("--s-missed is required for the modification bound")
        terms = args.s_missed if args.terms is None else args.terms
        sched_len = max(terms, 1)
        params = theory.ModificationBoundParams(
            x=x, m_o=args.mo, s_missed=args.s_missed,
            n_hat=_schedule(args.nhat, sched_len, default_thr).astype(int),
            n_tilde=_schedule(args.ntilde, sched_len, default_thr).astype(int),
            n=args.n, s=s, n_terms=args.terms,
        )
        resolved = {
            "command": "bound", "theorem": 6, "n": args.n, "s": s, "mo": args.mo,
            "s_missed": args.s_missed, "terms": terms,
            "n_hat": ",".join(str(int(v)) for v in params.n_hat),
            "n_tilde": ",".join(str(int(v)) for v in params.n_tilde),
        }
        _echo(resolved)
        value = theory.modification_bound(params)

    print(f"raw_bound={value.raw:.17g}")
    print(f"clamped_bound={value.clamped:.17g}")
    if value.raw <= 0:
        print("note=bound is vacuous (nonpositive) for these parameters")
    return 0


def _cmd_tessellate(args) -> int:
    resolved = {
        "command": "tessellate", "n": args.n, "s": args.s, "mo": args.mo,
        "delta": args.delta, "trials": args.trials, "noise": args.noise,
        "perturb": args.perturb, "seed": args.seed,
    }
    _echo(resolved)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    holds = 0
    lhs_vals = []
    for _ in range(args.trials):
        x = measurement.gen_sparse_signal(args.n, args.s, rng)
        norm_x = float(np.linalg.norm(x.values))
        u = rng.standard_normal(args.n)
        u *= args.noise * norm_x / np.linalg.norm(u)
        bump = np.zeros(args.n)
        bump[x.support] = rng.standard_normal(args.s)
        bump *= rng.uniform(0.0, args.perturb) * norm_x / np.linalg.norm(bump)
        x_hat = measurement.Signal(values=x.values + bump, s=args.s, support=x.support)
        a_o = measurement.gen_gaussian_matrix(args.mo, args.n, rng)
        report = tessellation.direction_error_check(x, u, x_hat, a_o, args.delta)
        holds += int(report.holds)
        lhs_vals.append(report.lhs)
    print(f"holds_rate={holds / args.trials:.4f}")
    print(f"mean_lhs={float(np.mean(lhs_vals)):.6g}")
    return 0


def _cmd_width(args) -> int:
    resolved = {
        "command": "width", "n": args.n, "s": args.s,
        "samples": args.samples, "seed": args.seed,
    }
    _echo(resolved)
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    est = tessellation.gaussian_mean_width_sparse(args.n, args.s, args.samples, rng)
    print(f"width={est.value:.6g}")
    print(f"ci95=[{est.ci_low:.6g}, {est.ci_high:.6g}]")
    return 0


_COMMANDS = {
    "experiment": _cmd_experiment,
    "recover": _cmd_recover,
    "bound": _cmd_bound,
    "tessellate": _cmd_tessellate,
    "width": _cmd_width,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InvalidParameterError, OutOfRegimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RecoveryFailureError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
