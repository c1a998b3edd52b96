import numpy as np
import pytest
from scipy import stats

from uavcellsim.experiments import (ExperimentConfig, default_config, ecdf,
                                    percentile, run_cnc, run_shared,
                                    validate_config)


class TestEcdf:
    def test_definition(self):
        values, probs = ecdf([3, 1, 2])
        assert list(values) == [1, 2, 3]
        assert list(probs) == pytest.approx([1 / 3, 2 / 3, 1.0])

    def test_all_equal_collapses(self):
        values, probs = ecdf([5.0, 5.0, 5.0])
        assert list(values) == [5.0]
        assert list(probs) == [1.0]

    def test_monotone_and_ends_at_one(self):
        rng = np.random.default_rng(0)
        values, probs = ecdf(rng.normal(size=500))
        assert np.all(np.diff(values) > 0)
        assert np.all(np.diff(probs) > 0)
        assert probs[-1] == 1.0

    def test_uniform_ks_bound(self):
        rng = np.random.default_rng(42)
        values, probs = ecdf(rng.random(10_000))
        assert np.max(np.abs(probs - values)) < 0.03

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            ecdf([])


class TestPercentile:
    def test_nearest_rank_small(self):
        assert percentile([1, 2, 3, 4], 5) == 1
        assert percentile([1, 2, 3, 4], 50) == 2
        assert percentile([1, 2, 3, 4], 75) == 3
        assert percentile([1, 2, 3, 4], 76) == 4

    def test_normal_fifth_percentile(self):
        rng = np.random.default_rng(7)
        samples = rng.standard_normal(100_000)
        assert percentile(samples, 5) == pytest.approx(
            stats.norm.ppf(0.05), abs=0.03)

    def test_invalid_inputs(self):
        with pytest.raises(ValueError):
            percentile([], 50)
        with pytest.raises(ValueError):
            percentile([1.0], 0)
        with pytest.raises(ValueError):
            percentile([1.0], 100)


class TestConfig:
    def test_scenario_defaults(self):
        cnc = default_config("cnc")
        assert (cnc.carrier_ghz, cnc.drops) == (5.0, 10_000)
        shared = default_config("shared")
        assert (shared.carrier_ghz, shared.drops) == (2.0, 2_000)

    def test_invariants_name_fields(self):
        with pytest.raises(ValueError, match="drops"):
            validate_config(ExperimentConfig(scenario="cnc", drops=0))
        with pytest.raises(ValueError, match="n_uav"):
            validate_config(ExperimentConfig(scenario="shared",
                                             n_uav_values=(25,), n_total=20))
        with pytest.raises(ValueError, match="altitudes"):
            validate_config(ExperimentConfig(scenario="cnc", altitudes=(400.0,)))

    def test_unknown_scenario_rejected(self):
        with pytest.raises(ValueError, match="scenario"):
            default_config("uplink")


class TestRunCnc:
    def test_single_drop_association_is_point_mass(self):
        cfg = default_config("cnc", drops=1, altitudes=(90.0,), master_seed=3)
        result = run_cnc(cfg)
        row = result.association[0]
        assert np.count_nonzero(row) == 1
        assert row.sum() == 1.0

    def test_association_rows_sum_to_one(self):
        cfg = default_config("cnc", drops=40, master_seed=5)
        result = run_cnc(cfg)
        assert np.allclose(result.association.sum(axis=1), 1.0, atol=1e-9)
        assert result.association.shape == (3, 57)

    def test_snr_samples_sorted_one_per_drop(self):
        cfg = default_config("cnc", drops=25, master_seed=1)
        result = run_cnc(cfg)
        for samples in result.snr_db:
            assert samples.shape == (25,)
            assert np.all(np.diff(samples) >= 0)

    def test_deterministic_same_seed(self):
        cfg = default_config("cnc", drops=30, mode="bf3d", master_seed=9)
        a = run_cnc(cfg)
        b = run_cnc(cfg)
        assert np.array_equal(a.association, b.association)
        for x, y in zip(a.snr_db, b.snr_db):
            assert np.array_equal(x, y)

    def test_worker_count_does_not_change_results(self):
        cfg = default_config("cnc", drops=30, mode="bf3d", master_seed=11)
        serial = run_cnc(cfg, workers=1)
        threaded = run_cnc(cfg, workers=8)
        assert np.array_equal(serial.association, threaded.association)
        for x, y in zip(serial.snr_db, threaded.snr_db):
            assert np.array_equal(x, y)

    def test_different_seeds_differ(self):
        cfg_a = default_config("cnc", drops=30, master_seed=1, altitudes=(90.0,))
        cfg_b = default_config("cnc", drops=30, master_seed=2, altitudes=(90.0,))
        assert not np.array_equal(run_cnc(cfg_a).snr_db[0], run_cnc(cfg_b).snr_db[0])

    def test_wrong_scenario_rejected(self):
        with pytest.raises(ValueError, match="scenario"):
            run_cnc(default_config("shared"))


class TestRunShared:
    def test_sample_counts_and_sorting(self):
        cfg = default_config("shared", drops=8, master_seed=2)
        result = run_shared(cfg)
        assert result.n_uav_values == (0, 5, 10)
        for samples in result.sum_rate_bps:
            assert samples.shape == (8,)
            assert np.all(np.diff(samples) >= 0)
            assert np.all(samples > 0)

    def test_deterministic_and_worker_invariant(self):
        cfg = default_config("shared", drops=6, mode="bf3d", master_seed=4,
                             n_uav_values=(0, 10))
        serial = run_shared(cfg, workers=1)
        threaded = run_shared(cfg, workers=4)
        for x, y in zip(serial.sum_rate_bps, threaded.sum_rate_bps):
            assert np.array_equal(x, y)

    def test_wrong_scenario_rejected(self):
        with pytest.raises(ValueError, match="scenario"):
            run_shared(default_config("cnc"))
