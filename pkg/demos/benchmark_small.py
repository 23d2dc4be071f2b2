"""Small fixed-budget benchmark run producing the CSV outputs.

A trimmed version of the fixed-2048-bit experiment (fewer trials, two
sparsity levels) that writes trials.csv and aggregate.csv into
./benchmark_out/.  The aggregate file feeds the plotting front end.
"""

from hybridcs.experiment import preset_config, run_experiment, with_overrides

cfg = with_overrides(
    preset_config(2),
    n_v=10,
    s_grid=(4, 8),
    master_seed=0,
)
print(f"experiment {cfg.experiment_id}: n={cfg.n}, trials per point={cfg.n_v}, "
      f"s grid={cfg.s_grid}, signal SNR grid={cfg.snr_grid_db} dB")

result = run_experiment(cfg, out_dir="benchmark_out")
print("wrote benchmark_out/trials.csv and benchmark_out/aggregate.csv\n")

header = f"{'s':>3} {'snr':>5} " + " ".join(f"{a:>8}" for a in cfg.algorithms)
print(header)
for s in cfg.s_grid:
    for snr in cfg.snr_grid_db:
        row = [
            next(
                r.xi_r_db
                for r in result.aggregates
                if r.s == s and r.xi_s_db == snr and r.algorithm == alg
            )
            for alg in cfg.algorithms
        ]
        print(f"{s:>3} {snr:>5.0f} " + " ".join(f"{v:8.2f}" for v in row))
