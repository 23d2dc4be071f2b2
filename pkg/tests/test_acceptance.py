"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and timings.  Statistical criteria use fixed seeds; the oracle
criteria are exact.
"""

import math
import time
from itertools import combinations

import numpy as np

import hybridcs as h
from hybridcs.cli import main as cli_main
from hybridcs.experiment import preset_config, run_experiment, with_overrides


def report(num: int, description: str, ok: bool, started: float, budget: float):
    elapsed = time.perf_counter() - started
    in_budget = elapsed < budget
    status = "PASS" if (ok and in_budget) else "FAIL"
    print(f"ACCEPTANCE {num} [{status}] {description} ({elapsed:.1f}s / budget {budget:.0f}s)")
    assert ok, f"criterion {num} failed: {description}"
    assert in_budget, f"criterion {num} exceeded its {budget:.0f}s budget ({elapsed:.1f}s)"


def test_criterion_1_binomial_beta_oracle():
    started = time.perf_counter()
    p_grid = [0.01, 0.05] + [k / 10 for k in range(1, 10)] + [0.95, 0.99]
    worst = 0.0
    for n_prime in range(1, 61):
        for p in p_grid:
            pmf = [
                math.comb(n_prime, i) * p**i * (1 - p) ** (n_prime - i)
                for i in range(n_prime + 1)
            ]
            acc = 0.0
            for k in range(n_prime + 1):
                acc += pmf[k]
                worst = max(worst, abs(h.binom_cdf(k, n_prime, p) - min(acc, 1.0)))
    report(1, f"binom_cdf vs direct summation, max |diff| = {worst:.2e}",
           worst <= 1e-12, started, budget=5.0)


def test_criterion_2_least_squares_residue():
    started = time.perf_counter()
    g = np.random.default_rng(np.random.SeedSequence(2))
    worst_orth = 0.0
    worst_agree = 0.0
    for _ in range(1000):
        size_t = int(g.integers(1, 17))
        m_r = int(g.integers(size_t, 65))
        n = int(g.integers(size_t, 80))
        a = h.gen_gaussian_matrix(m_r, n, g)
        y = g.standard_normal(m_r)
        t = np.sort(g.choice(n, size=size_t, replace=False))
        z = h.restricted_least_squares(a, y, t)
        cols = a.entries[:, t]
        r = y - cols @ z
        worst_orth = max(worst_orth, float(np.max(np.abs(cols.T @ r))))
        oracle = np.linalg.solve(cols.T @ cols, cols.T @ y)
        worst_agree = max(worst_agree, float(np.max(np.abs(z - oracle))))
    ok = worst_orth <= 1e-8 and worst_agree <= 1e-8
    report(2, f"1000 restricted fits: orthogonality {worst_orth:.2e}, "
              f"normal-equations agreement {worst_agree:.2e}", ok, started, budget=10.0)


def test_criterion_3_sign_flip_probability():
    started = time.perf_counter()
    g = np.random.default_rng(np.random.SeedSequence(3))
    ok_pairs = 0
    for _ in range(20):
        n = int(g.integers(2, 12))
        x, y = g.standard_normal(n), g.standard_normal(n)
        target = h.angle(x, y) / math.pi
        rate = h.sign_flip_rate(x, y, 10_000, g)
        sigma = math.sqrt(target * (1 - target) / 10_000)
        ok_pairs += abs(rate - target) <= 3 * sigma
    report(3, f"sign-flip rate within 3 sigma of angle/pi in {ok_pairs}/20 pairs",
           ok_pairs >= 19, started, budget=10.0)


def test_criterion_4_direction_error_bound():
    started = time.perf_counter()
    g = np.random.default_rng(np.random.SeedSequence(4))
    n, s, m_o, delta = 128, 4, 2048, 0.5
    holds = 0
    for _ in range(200):
        x = h.gen_sparse_signal(n, s, g)
        norm_x = float(np.linalg.norm(x.values))
        u = g.standard_normal(n)
        u *= 1e-3 * norm_x / np.linalg.norm(u)
        bump = np.zeros(n)
        bump[x.support] = g.standard_normal(s)
        bump *= g.uniform(0.1, 0.8) * norm_x / np.linalg.norm(bump)
        x_hat = h.Signal(values=x.values + bump, s=s, support=x.support)
        a_o = h.gen_gaussian_matrix(m_o, n, g)
        holds += h.direction_error_check(x, u, x_hat, a_o, delta).holds
    report(4, f"direction-error inequality holds in {holds}/200 trials",
           holds >= 190, started, budget=60.0)


def test_criterion_5_small_instance_recovery_oracle():
    started = time.perf_counter()
    matches = 0
    for seed in range(100):
        ss = np.random.SeedSequence(seed, spawn_key=(5,))
        rx, rr, ro = (np.random.default_rng(c) for c in ss.spawn(3))
        x = h.gen_sparse_signal(8, 2, rx)
        a_r = h.gen_gaussian_matrix(6, 8, rr)
        a_o = h.gen_gaussian_matrix(128, 8, ro)
        hm = h.measure_hybrid(a_r, a_o, x.values)
        got = h.detect_support(hm, 2)
        best = None
        for sup in combinations(range(8), 2):
            c = h.satisfied_count(hm.y_o, hm.a_o, np.array(sup), hm.a_r, hm.y_r)
            if best is None or c > best[0] or (c == best[0] and sup < best[1]):
                best = (c, sup)
        matches += tuple(got.support) == best[1]

    keeps = 0
    for seed in range(100):
        ss = np.random.SeedSequence(seed, spawn_key=(6,))
        rx, rr, ro = (np.random.default_rng(c) for c in ss.spawn(3))
        x = h.gen_sparse_signal(8, 2, rx)
        a_r = h.gen_gaussian_matrix(6, 8, rr)
        a_o = h.gen_gaussian_matrix(128, 8, ro)
        hm = h.measure_hybrid(a_r, a_o, x.values)
        res = h.refine_support(hm, 2, x.support)
        keeps += bool(res.converged and np.array_equal(res.support, x.support))

    ok = matches >= 90 and keeps >= 90
    report(5, f"detector matches exhaustive scoring {matches}/100, "
              f"refiner keeps true support {keeps}/100", ok, started, budget=60.0)


def test_criterion_6_experiment1_orderings():
    started = time.perf_counter()
    cfg = with_overrides(
        preset_config(1),
        n_v=50, s_grid=(4, 8), snr_grid_db=(0.0, 10.0, 20.0), master_seed=1,
    )
    result = run_experiment(cfg)

    def xi_r(s, snr, alg):
        return next(
            r.xi_r_db for r in result.aggregates
            if r.s == s and r.xi_s_db == snr and r.algorithm == alg
        )

    refiner_ok = all(
        xi_r(s, snr, "alg2") >= xi_r(s, snr, "alg1") - 0.5
        for s in (4, 8) for snr in (0.0, 10.0, 20.0)
    )
    hybrid_ok = all(
        max(xi_r(s, snr, "alg1"), xi_r(s, snr, "alg2")) > xi_r(s, snr, base)
        for s in (4, 8) for snr in (0.0, 10.0) for base in ("omp", "sp", "cosamp")
    )
    report(6, f"refiner within 0.5 dB of detector everywhere: {refiner_ok}; "
              f"hybrid beats all baselines at 0/10 dB: {hybrid_ok}",
           refiner_ok and hybrid_ok, started, budget=600.0)


def test_criterion_7_experiment2_sparsity_trend():
    started = time.perf_counter()
    cfg = with_overrides(preset_config(2), n_v=50, s_grid=(4, 32), master_seed=1)
    result = run_experiment(cfg)

    def xi_r(s, snr, alg):
        return next(
            r.xi_r_db for r in result.aggregates
            if r.s == s and r.xi_s_db == snr and r.algorithm == alg
        )

    ok = all(
        xi_r(4, snr, alg) > xi_r(32, snr, alg) - 1.0
        for snr in (0.0, 10.0) for alg in cfg.algorithms
    )
    report(7, "recovery SNR at s=4 exceeds s=32 (1 dB slack) for every algorithm",
           ok, started, budget=600.0)


def test_criterion_8_bit_parity():
    started = time.perf_counter()
    ok = True
    for exp_id in (1, 2):
        cfg = preset_config(exp_id)
        for s in cfg.s_grid:
            m_r, m_o, m = cfg.measurement_counts(s)
            ok = ok and (32 * m_r + m_o == 32 * m)
    report(8, "32*m_r + m_o == 32*m at every grid point of both presets",
           ok, started, budget=5.0)


def test_criterion_9_thread_count_determinism(tmp_path):
    started = time.perf_counter()
    base = ["experiment", "--id", "2", "--nv", "5", "--seed", "42"]
    code1 = cli_main(base + ["--out", str(tmp_path / "t1"), "--threads", "1"])
    code2 = cli_main(base + ["--out", str(tmp_path / "t2"), "--threads", "2"])
    bytes1 = (tmp_path / "t1" / "aggregate.csv").read_bytes()
    bytes2 = (tmp_path / "t2" / "aggregate.csv").read_bytes()
    ok = code1 == 0 and code2 == 0 and bytes1 == bytes2
    report(9, "aggregate CSV byte-identical across --threads 1 and 2",
           ok, started, budget=600.0)
