import math

import numpy as np
import pytest

from itermap import exact, montecarlo


class TestDeterminism:
    def test_repeat_is_identical(self):
        a = montecarlo.run_experiment(200, 300, seed=7)
        b = montecarlo.run_experiment(200, 300, seed=7)
        assert a.mean_log_T == b.mean_log_T
        assert a.var_log_B == b.var_log_B
        assert np.array_equal(a.hist, b.hist)
        assert np.array_equal(a.z_counts, b.z_counts)

    def test_seed_changes_output(self):
        a = montecarlo.run_experiment(200, 300, seed=7)
        b = montecarlo.run_experiment(200, 300, seed=8)
        assert not np.array_equal(a.z_counts, b.z_counts)

    def test_block_rng_is_documented_split(self):
        rng = montecarlo.block_rng(42, 3)
        ref = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=42, spawn_key=(3,)))
        )
        assert np.array_equal(rng.integers(0, 100, 50), ref.integers(0, 100, 50))


class TestInvariants:
    def test_no_violations_small(self):
        s = montecarlo.run_experiment(50, 2000, seed=1)
        assert s.violations == {"T_divides_B": 0, "denes": 0, "logB_lt_logT": 0}
        assert s.samples == 2000
        assert int(s.hist.sum()) == 2000
        assert int(s.z_counts.sum()) == 2000

    def test_no_violations_large_n_path(self):
        # n above the batch threshold exercises the per-row 1D descent
        s = montecarlo.run_experiment(2000, 50, seed=3)
        assert sum(s.violations.values()) == 0
        assert s.mean_log_B >= s.mean_log_T

    def test_crosscheck_exact_lcm(self):
        s = montecarlo.run_experiment(300, 200, seed=5, crosscheck=True)
        assert s.crosscheck_max_rel <= 1e-12

    def test_crosscheck_ceiling(self):
        with pytest.raises(montecarlo.ResourceError, match="crosscheck"):
            montecarlo.run_experiment(2000, 10, seed=0, crosscheck=True)

    def test_resource_errors(self):
        with pytest.raises(montecarlo.ResourceError, match="experiment too large"):
            montecarlo.run_experiment(montecarlo.MAX_N + 1, 1, seed=0)
        with pytest.raises(montecarlo.ResourceError):
            montecarlo.run_experiment(10, 0, seed=0)


class TestAgainstExact:
    def test_n2_z_frequency(self):
        # P(Z=1) = P(Z=2) = 1/2 at n = 2
        s = montecarlo.run_experiment(2, 20000, seed=11)
        frac = s.z_counts[1] / 20000
        assert abs(frac - 0.5) < 0.02

    def test_mean_z_within_three_se(self):
        n, samples = 100, 5000
        s = montecarlo.run_experiment(n, samples, seed=13)
        pmf = [float(p) for p in exact.z_pmf(n).pmf]
        mean = sum(m * p for m, p in enumerate(pmf, start=1))
        var = sum(m * m * p for m, p in enumerate(pmf, start=1)) - mean * mean
        obs = float(np.dot(np.arange(n + 1), s.z_counts)) / samples
        assert abs(obs - mean) <= 3 * math.sqrt(var / samples)


class TestGof:
    def test_true_pmf_rarely_rejected(self):
        # 20 independent experiments against the true Z pmf at n = 30
        pmf = exact.z_pmf(30)
        ok = 0
        for seed in range(20):
            s = montecarlo.run_experiment(30, 2000, seed=1000 + seed)
            _, p = montecarlo.z_gof(s.z_counts, pmf)
            ok += p > 0.001
        assert ok >= 18

    def test_wrong_pmf_rejected(self):
        s = montecarlo.run_experiment(30, 5000, seed=2)
        wrong = np.full(30, 1.0 / 30)
        _, p = montecarlo.z_gof(s.z_counts, wrong)
        assert p < 1e-6

    def test_insufficient_data(self):
        with pytest.raises(montecarlo.ResourceError, match="insufficient data"):
            montecarlo.z_gof(np.array([0, 3, 1]), np.array([0.5, 0.5]))

    def test_hist_edges(self):
        e = montecarlo.hist_bin_edges()
        assert e[0] == -4.0 and e[-1] == 4.0
        assert len(e) == montecarlo.HIST_BINS + 1
