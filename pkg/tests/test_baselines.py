import numpy as np
import pytest

import hybridcs as h


def rng(seed=0):
    return np.random.default_rng(np.random.SeedSequence(seed))


def make_linear_instance(seed, n, s, m, spawn=0):
    ss = np.random.SeedSequence(seed, spawn_key=(spawn,))
    rx, ra = (np.random.default_rng(c) for c in ss.spawn(2))
    x = h.gen_sparse_signal(n, s, rx)
    a = h.gen_gaussian_matrix(m, n, ra)
    return x, a, h.linear_measure(a, x.values)


# Reference solvers written independently of the library code paths:
# plain lstsq-based fits and argsort-based selections.

def ref_omp(A, y, s):
    support = []
    r = y.copy()
    for _ in range(s):
        corr = np.abs(A.T @ r)
        corr[support] = -np.inf
        support.append(int(np.argmax(corr)))
        cols = A[:, sorted(support)]
        z = np.linalg.lstsq(cols, y, rcond=None)[0]
        r = y - cols @ z
    return np.array(sorted(support))


def ref_sp(A, y, s):
    n = A.shape[1]

    def top(v, k):
        return np.array(sorted(np.argsort(-v, kind="stable")[:k]))

    support = top(np.abs(A.T @ y), s)
    z = np.linalg.lstsq(A[:, support], y, rcond=None)[0]
    r = y - A[:, support] @ z
    for _ in range(100):
        union = np.union1d(support, top(np.abs(A.T @ r), s))
        zu = np.linalg.lstsq(A[:, union], y, rcond=None)[0]
        mags = np.zeros(n)
        mags[union] = np.abs(zu)
        pruned = top(mags, s)
        zp = np.linalg.lstsq(A[:, pruned], y, rcond=None)[0]
        r_new = y - A[:, pruned] @ zp
        if np.linalg.norm(r_new) >= np.linalg.norm(r):
            break
        support, r = pruned, r_new
    return support


def ref_cosamp(A, y, s):
    n = A.shape[1]

    def top(v, k):
        return np.array(sorted(np.argsort(-v, kind="stable")[:k]))

    support = np.array([], dtype=int)
    r = y.copy()
    r_norm = np.linalg.norm(r)
    for _ in range(50):
        union = np.union1d(support, top(np.abs(A.T @ r), 2 * s)).astype(int)
        zu = np.linalg.lstsq(A[:, union], y, rcond=None)[0]
        mags = np.zeros(n)
        mags[union] = np.abs(zu)
        support = top(mags, s)
        z = np.linalg.lstsq(A[:, support], y, rcond=None)[0]
        r = y - A[:, support] @ z
        if abs(r_norm - np.linalg.norm(r)) < 1e-6 * max(r_norm, 1e-300):
            break
        r_norm = np.linalg.norm(r)
    return support


class TestOmp:
    def test_orthonormal_singleton(self):
        a = h.MeasurementMatrix(entries=np.eye(5), scale=1.0)
        y = np.zeros(5)
        y[3] = 2.0
        res = h.omp(a, y, 1)
        np.testing.assert_array_equal(res.support, [3])
        assert res.estimate.values[3] == pytest.approx(2.0)

    def test_support_size(self):
        x, a, y = make_linear_instance(1, 32, 3, 12)
        assert h.omp(a, y, 3).support.size == 3

    def test_reference_agreement_tight_budget(self):
        agree = 0
        for seed in range(100):
            x, a, y = make_linear_instance(seed, 32, 3, 12, spawn=1)
            res = h.omp(a, y, 3)
            agree += bool(np.array_equal(res.support, ref_omp(a.entries, y, 3)))
        assert agree >= 95

    def test_recovery_rate(self):
        hits = 0
        for seed in range(100):
            x, a, y = make_linear_instance(seed, 32, 3, 20, spawn=1)
            res = h.omp(a, y, 3)
            hits += bool(np.array_equal(res.support, x.support))
        assert hits >= 90


class TestSp:
    def test_consistent_instance_residue(self):
        x, a, y = make_linear_instance(2, 32, 3, 16)
        res = h.sp(a, y, 3)
        if np.array_equal(res.support, x.support):
            r = y - a.entries[:, res.support] @ h.restricted_least_squares(a, y, res.support)
            assert np.linalg.norm(r) <= 1e-8 * np.linalg.norm(y)

    def test_support_size(self):
        x, a, y = make_linear_instance(3, 32, 3, 16)
        assert h.sp(a, y, 3).support.size == 3

    def test_recovery_rate_and_reference_agreement(self):
        hits = 0
        agree = 0
        for seed in range(100):
            x, a, y = make_linear_instance(seed, 32, 3, 16, spawn=2)
            res = h.sp(a, y, 3)
            hits += bool(np.array_equal(res.support, x.support))
            agree += bool(np.array_equal(res.support, ref_sp(a.entries, y, 3)))
        assert hits >= 90
        assert agree >= 95


class TestCosamp:
    def test_zero_measurements(self):
        a = h.gen_gaussian_matrix(8, 16, rng(4))
        res = h.cosamp(a, np.zeros(8), 3)
        assert np.all(res.estimate.values == 0.0)
        assert res.support.size == 3

    def test_support_size(self):
        x, a, y = make_linear_instance(5, 32, 3, 20)
        assert h.cosamp(a, y, 3).support.size == 3

    def test_recovery_rate_and_reference_agreement(self):
        hits = 0
        agree = 0
        for seed in range(100):
            x, a, y = make_linear_instance(seed, 32, 3, 20, spawn=3)
            res = h.cosamp(a, y, 3)
            hits += bool(np.array_equal(res.support, x.support))
            agree += bool(np.array_equal(res.support, ref_cosamp(a.entries, y, 3)))
        assert hits >= 90
        assert agree >= 95


@pytest.mark.parametrize("solver", [h.omp, h.sp, h.cosamp])
def test_repeat_calls_bit_identical(solver):
    x, a, y = make_linear_instance(6, 24, 3, 14)
    first = solver(a, y, 3)
    second = solver(a, y, 3)
    np.testing.assert_array_equal(first.support, second.support)
    np.testing.assert_array_equal(first.estimate.values, second.estimate.values)


@pytest.mark.parametrize("solver", [h.omp, h.sp, h.cosamp])
def test_residue_orthogonal_to_selected_columns(solver):
    x, a, y = make_linear_instance(7, 24, 3, 14)
    res = solver(a, y, 3)
    r = y - a.entries @ res.estimate.values
    assert np.max(np.abs(a.entries[:, res.support].T @ r)) <= 1e-8
