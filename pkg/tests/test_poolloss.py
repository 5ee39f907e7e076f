"""Pooling loss against a naive double-loop window-sum oracle."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavcover.poolloss import default_schedule, pool_loss, sum_pool


def naive_sum_pool(m, f):
    """Direct window-sum oracle in plain Python integers/floats."""
    n_r, n_c = m.shape
    out = np.zeros_like(m)
    for i in range(n_r):
        for j in range(n_c):
            acc = 0
            for a in range(i - f // 2, i - f // 2 + f):
                for b in range(j - f // 2, j - f // 2 + f):
                    if 0 <= a < n_r and 0 <= b < n_c:
                        acc += m[a, b]
            out[i, j] = acc
    return out


def naive_pool_loss(k, y, schedule):
    total = 0
    for f in schedule:
        d = naive_sum_pool(k, f).astype(np.int64) - naive_sum_pool(y, f).astype(np.int64)
        total += int((d * d).sum())
    return total


class TestSumPool:
    def test_f1_identity(self):
        m = np.arange(16).reshape(4, 4)
        assert (sum_pool(m, 1) == m).all()

    def test_two_by_two_ones_f2(self):
        out = sum_pool(np.ones((2, 2), dtype=np.int64), 2)
        assert out.tolist() == [[1, 2], [2, 4]]

    def test_zeros_stay_zero(self):
        for f in (1, 2, 4, 8):
            assert sum_pool(np.zeros((8, 8), dtype=np.int64), f).sum() == 0

    def test_out_of_range_filter(self):
        m = np.ones((4, 4), dtype=np.int64)
        with pytest.raises(ValueError):
            sum_pool(m, 0)
        with pytest.raises(ValueError):
            sum_pool(m, 5)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_oracle_bit_exact(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 20))
        m = rng.integers(0, 9, (n, n))
        for f in (1, 2, 3, 4, 8):
            if f <= n:
                assert (sum_pool(m, f) == naive_sum_pool(m, f)).all()

    @pytest.mark.parametrize("seed", range(4))
    def test_real_matches_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        m = rng.uniform(0, 1, (10, 10))
        for f in (2, 4, 7):
            assert np.allclose(sum_pool(m, f), naive_sum_pool(m, f), rtol=1e-12)

    @given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 4, 8]))
    @settings(max_examples=30, deadline=None)
    def test_mass_bounded_by_f_squared(self, seed, f):
        rng = np.random.default_rng(seed)
        m = rng.integers(0, 5, (12, 12))
        pooled_mass = int(sum_pool(m, f).sum())
        assert pooled_mass <= f * f * int(m.sum())

    def test_mass_equality_when_unclipped(self):
        m = np.zeros((16, 16), dtype=np.int64)
        m[6:10, 6:10] = 3  # at least f from every edge for f=4
        f = 4
        assert int(sum_pool(m, f).sum()) == f * f * int(m.sum())


class TestPoolLoss:
    def test_equal_inputs_zero(self):
        rng = np.random.default_rng(3)
        m = rng.integers(0, 4, (16, 16))
        res = pool_loss(m, m)
        assert res.total == 0
        assert all(level == 0 for _, level in res.per_level)

    def test_f1_level_is_frobenius(self):
        rng = np.random.default_rng(4)
        k = rng.integers(0, 4, (8, 8))
        y = rng.integers(0, 4, (8, 8))
        res = pool_loss(k, y)
        assert res.per_level[0] == (1, int(((k - y) ** 2).sum()))

    def test_displacement_monotone(self):
        # frozen from the direct window-sum oracle: offsets 1/4/8 on a 16x16
        k = np.zeros((16, 16), dtype=np.int64)
        k[4, 4] = 1
        totals = []
        for col in (5, 8, 12):
            y = np.zeros((16, 16), dtype=np.int64)
            y[4, col] = 1
            totals.append(pool_loss(k, y).total)
        assert totals == [43, 158, 266]
        assert totals[0] < totals[1] < totals[2]

    @pytest.mark.parametrize("seed", range(10))
    def test_matches_naive_oracle(self, seed):
        rng = np.random.default_rng(200 + seed)
        n = int(rng.integers(8, 17))
        k = rng.integers(0, 3, (n, n))
        y = rng.integers(0, 3, (n, n))
        sched = default_schedule(n)
        res = pool_loss(k, y, sched)
        assert res.total == naive_pool_loss(k, y, sched)

    @pytest.mark.parametrize("seed", range(6))
    def test_symmetry_exact(self, seed):
        rng = np.random.default_rng(300 + seed)
        k = rng.uniform(0, 1, (16, 16))
        y = rng.uniform(0, 1, (16, 16))
        assert pool_loss(k, y).total == pool_loss(y, k).total

    def test_zero_iff_equal(self):
        rng = np.random.default_rng(5)
        k = rng.integers(0, 3, (8, 8))
        y = k.copy()
        y[3, 3] += 1
        assert pool_loss(k, y).total > 0

    def test_shape_mismatch(self):
        with pytest.raises(ValueError, match="mismatch"):
            pool_loss(np.zeros((4, 4)), np.zeros((5, 5)))

    def test_schedule_validation(self):
        m = np.zeros((16, 16), dtype=np.int64)
        with pytest.raises(ValueError):
            pool_loss(m, m, [1, 3])  # not a power of two
        with pytest.raises(ValueError):
            pool_loss(m, m, [2, 2])  # not strictly increasing
        with pytest.raises(ValueError):
            pool_loss(m, m, [1, 32])  # exceeds min(64, n) = 16

    def test_default_schedule_caps(self):
        assert default_schedule(256) == [1, 2, 4, 8, 16, 32, 64]
        assert default_schedule(64) == [1, 2, 4, 8, 16, 32, 64]
        assert default_schedule(16) == [1, 2, 4, 8, 16]
