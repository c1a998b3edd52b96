import math

import numpy as np
import pytest

from uavcellsim.antenna import BEAMFORMING_UPA, FIXED_PATTERN_ULA, element_gain_db
from uavcellsim.channel import (ChannelParams, LargeScaleState,
                                draw_channel_vector, draw_large_scale,
                                los_probability, noise_power_dbm, pathloss_db,
                                sample_small_scale, shadowing_sigma_db)
from uavcellsim.geometry import DirectionAngles, UeKind, UeState, build_layout

PARAMS_5G = ChannelParams(carrier_ghz=5.0, rician_k_db=15.0, bandwidth_hz=1e6)


class TestLosProbability:
    def test_high_altitude_always_los(self):
        for d in (10, 500, 5000):
            assert los_probability(d, 200) == 1.0

    def test_inside_aerial_los_distance(self):
        # d_1 = 460*log10(50) - 700 = 81.5 m >= 10 m
        assert los_probability(10, 50) == 1.0

    def test_hand_value_at_500m_90m(self):
        d_1 = 460 * math.log10(90) - 700
        p_1 = 4300 * math.log10(90) - 3800
        expected = d_1 / 500 + math.exp(-500 / p_1) * (1 - d_1 / 500)
        assert los_probability(500, 90) == pytest.approx(expected, abs=1e-12)
        assert los_probability(500, 90) == pytest.approx(0.938, abs=1e-3)

    def test_terrestrial_close_range_certain(self):
        assert los_probability(18, 1.5) == 1.0

    @pytest.mark.parametrize("h_ut", [1.5, 10, 22.5, 30, 60, 90, 99.9, 150])
    def test_within_unit_interval_and_non_increasing(self, h_ut):
        d = np.arange(1.0, 2000.0, 1.0)
        p = los_probability(d, h_ut)
        assert np.all((p >= 0) & (p <= 1))
        assert np.all(np.diff(p) <= 1e-12)

    def test_out_of_band_height_rejected(self):
        with pytest.raises(ValueError):
            los_probability(100, 1.0)
        with pytest.raises(ValueError):
            los_probability(100, 301.0)


class TestPathloss:
    def test_aerial_los_2ghz(self):
        expected = 28 + 22 * math.log10(200) + 20 * math.log10(2)
        assert pathloss_db(0, 200, 90, 25, 2.0, True) == pytest.approx(expected, abs=1e-12)
        assert pathloss_db(0, 200, 90, 25, 2.0, True) == pytest.approx(84.64, abs=0.01)

    def test_aerial_los_5ghz(self):
        expected = 28 + 22 * math.log10(200) + 20 * math.log10(5)
        assert pathloss_db(0, 200, 90, 25, 5.0, True) == pytest.approx(expected, abs=1e-12)
        assert pathloss_db(0, 200, 90, 25, 5.0, True) == pytest.approx(92.60, abs=0.01)

    def test_aerial_nlos_90m(self):
        expected = (-17.5 + (46 - 7 * math.log10(90)) * math.log10(300)
                    + 20 * math.log10(40 * math.pi * 2 / 3))
        assert pathloss_db(0, 300, 90, 25, 2.0, False) == pytest.approx(expected, abs=1e-12)
        assert pathloss_db(0, 300, 90, 25, 2.0, False) == pytest.approx(101.03, abs=0.01)

    def test_nlos_above_100m_rejected(self):
        with pytest.raises(ValueError):
            pathloss_db(100, 150, 150, 25, 2.0, False)

    def test_d3d_below_1m_rejected(self):
        with pytest.raises(ValueError):
            pathloss_db(0.5, 0.5, 30, 25, 2.0, True)

    @pytest.mark.parametrize("h_ut,los", [(1.5, True), (1.5, False),
                                          (60, True), (60, False), (200, True)])
    def test_strictly_increasing_in_distance(self, h_ut, los):
        d3 = np.arange(30.0, 3000.0, 5.0)
        d2 = np.sqrt(np.maximum(d3 ** 2 - (h_ut - 25.0) ** 2, 0.0))
        pl = pathloss_db(d2, d3, h_ut, 25, 2.0, los)
        assert np.all(np.diff(pl) > 0)

    @pytest.mark.parametrize("h_ut", [30, 60, 90])
    def test_aerial_nlos_dominates_los_beyond_50m(self, h_ut):
        d3 = np.arange(50.0, 3000.0, 10.0)
        pl_los = pathloss_db(0, d3, h_ut, 25, 2.0, True)
        pl_nlos = pathloss_db(0, d3, h_ut, 25, 2.0, False)
        assert np.all(pl_nlos >= pl_los)

    def test_terrestrial_nlos_never_below_los(self):
        d3 = np.arange(30.0, 5000.0, 10.0)
        d2 = np.sqrt(d3 ** 2 - 23.5 ** 2)
        pl_los = pathloss_db(d2, d3, 1.5, 25, 2.0, True)
        pl_nlos = pathloss_db(d2, d3, 1.5, 25, 2.0, False)
        assert np.all(pl_nlos >= pl_los)

    def test_terrestrial_two_slope_continuous_at_breakpoint(self):
        h_ut, h_bs, f_c = 1.5, 25.0, 2.0
        d_bp = 4 * (h_bs - 1) * (h_ut - 1) * f_c * 1e9 / 3e8
        d3 = math.hypot(d_bp, h_bs - h_ut)
        below = pathloss_db(d_bp - 1e-6, d3, h_ut, h_bs, f_c, True)
        above = pathloss_db(d_bp + 1e-6, d3, h_ut, h_bs, f_c, True)
        assert below == pytest.approx(above, abs=1e-6)

    def test_los_formula_continuous_across_100m_band_edge(self):
        for d3 in (150.0, 400.0, 1200.0):
            lo = pathloss_db(0, d3, 100.0 - 1e-9, 25, 2.0, True)
            hi = pathloss_db(0, d3, 100.0 + 1e-9, 25, 2.0, True)
            assert lo == pytest.approx(hi, abs=1e-9)


class TestShadowingSigma:
    def test_terrestrial_values(self):
        assert shadowing_sigma_db(1.5, True) == 4.0
        assert shadowing_sigma_db(1.5, False) == 6.0

    def test_aerial_los_decays_with_height(self):
        assert shadowing_sigma_db(100, True) == pytest.approx(
            4.64 * math.exp(-0.66), abs=1e-9)
        assert shadowing_sigma_db(100, True) == pytest.approx(2.398, abs=1e-3)

    def test_aerial_nlos_constant(self):
        assert shadowing_sigma_db(90, False) == 6.0


class TestDrawLargeScale:
    def setup_method(self):
        layout = build_layout(500, 25, 0)
        self.cell = layout.cells[0]

    def test_high_altitude_always_los(self):
        rng = np.random.default_rng(0)
        ue = UeState((300.0, 0.0, 200.0), UeKind.AERIAL)
        for _ in range(50):
            assert draw_large_scale(self.cell, ue, PARAMS_5G, rng).los

    def test_deterministic_given_seed(self):
        ue = UeState((400.0, 120.0, 60.0), UeKind.AERIAL)
        a = draw_large_scale(self.cell, ue, PARAMS_5G, np.random.default_rng(5))
        b = draw_large_scale(self.cell, ue, PARAMS_5G, np.random.default_rng(5))
        assert a == b

    def test_los_fraction_matches_probability(self):
        # d_2d = 500 m, h_ut = 90 m: P_LoS = 0.938.
        ue = UeState((500.0, 0.0, 90.0), UeKind.AERIAL)
        rng = np.random.default_rng(77)
        n = 100_000
        hits = sum(draw_large_scale(self.cell, ue, PARAMS_5G, rng).los
                   for _ in range(n))
        assert hits / n == pytest.approx(0.938, abs=0.005)


class TestSmallScale:
    def test_nlos_unit_variance(self):
        rng = np.random.default_rng(1)
        h = sample_small_scale(np.zeros(100_000, dtype=bool), 80.0, 10.0,
                               BEAMFORMING_UPA, 15.0, rng)
        mean_power = float(np.mean(np.sum(np.abs(h) ** 2, axis=-1))) / 32
        assert mean_power == pytest.approx(1.0, abs=0.01)

    def test_los_rician_normalization(self):
        rng = np.random.default_rng(2)
        h = sample_small_scale(np.ones(100_000, dtype=bool), 70.0, 30.0,
                               BEAMFORMING_UPA, 15.0, rng)
        mean_power = float(np.mean(np.sum(np.abs(h) ** 2, axis=-1))) / 32
        assert mean_power == pytest.approx(1.0, abs=0.01)

    def test_infinite_k_gives_pure_steering(self):
        rng = np.random.default_rng(3)
        h = sample_small_scale(True, 75.0, 20.0, BEAMFORMING_UPA, math.inf, rng)
        assert np.sum(np.abs(h) ** 2) == pytest.approx(32.0, rel=1e-12)

    def test_channel_vector_mean_power(self):
        ls = LargeScaleState(los=True, pathloss_db=95.0, shadowing_db=2.0,
                             angles=DirectionAngles(80.0, 15.0),
                             d_2d=300.0, d_3d=310.0)
        rng = np.random.default_rng(4)
        n = 20_000
        total = 0.0
        for _ in range(n):
            cv = draw_channel_vector(ls, FIXED_PATTERN_ULA, PARAMS_5G, rng)
            total += float(np.sum(np.abs(cv.gains) ** 2))
        expected = 8 * 10 ** ((element_gain_db(ls.angles) - 95.0 - 2.0) / 10.0)
        assert total / n == pytest.approx(expected, rel=0.01)


class TestNoisePower:
    def test_default_budget(self):
        assert noise_power_dbm(PARAMS_5G) == pytest.approx(-105.0)

    def test_unit_bandwidth(self):
        params = ChannelParams(5.0, 15.0, 1.0, noise_figure_db=0.0)
        assert noise_power_dbm(params) == pytest.approx(-174.0)

    def test_no_noise_figure(self):
        params = ChannelParams(5.0, 15.0, 1e6, noise_figure_db=0.0)
        assert noise_power_dbm(params) == pytest.approx(-114.0)

    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            ChannelParams(0.0, 15.0, 1e6)
        with pytest.raises(ValueError):
            ChannelParams(2.0, 15.0, 0.0)
