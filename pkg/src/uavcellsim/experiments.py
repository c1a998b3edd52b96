"""Monte Carlo drivers for the two downlink scenarios and sample statistics.

Scenario "cnc": one aerial UE on a dedicated 5 GHz command-and-control
channel at a fixed horizontal position, swept over altitudes; per drop
the serving cell and its interference-free SNR are recorded.

Scenario "shared": 20 UEs (a subset aerial) reusing one 2 GHz channel;
per drop every UE's SINR and rate are computed and the sum rate recorded.

Determinism: each drop draws from its own random substream derived from
(master_seed, scenario, case index, drop index), so results do not depend
on evaluation order or worker count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import channel as ch
from . import geometry as geo
from . import link
from .antenna import (BEAMFORMING_UPA, DEFAULT_DOWNTILT_DEG, FIXED_PATTERN_ULA,
                      downtilt_weights, fixed_pattern_gains_db, element_gains_db)
from .link import MODE_BF3D, MODE_FIXED

SCENARIO_CNC = "cnc"
SCENARIO_SHARED = "shared"
_SCENARIO_CODES = {SCENARIO_CNC: 0, SCENARIO_SHARED: 1}

LAYOUT_RINGS = 2  # 19 sites, 57 cells


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: str
    mode: str = MODE_FIXED
    isd: float = 500.0
    h_bs: float = 25.0
    carrier_ghz: float = 5.0
    bandwidth_hz: float = 1e6
    cell_power_dbm: float = 20.0
    rician_k_db: float = 15.0
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 9.0
    drops: int = 10_000
    master_seed: int = 0
    # cnc scenario
    uav_xy: tuple[float, float] = (250.0, 100.0)
    altitudes: tuple[float, ...] = (1.5, 90.0, 200.0)
    # shared scenario
    n_total: int = 20
    n_uav_values: tuple[int, ...] = (0, 5, 10)
    disk_radius: float = 1000.0


def default_config(scenario: str, **overrides) -> ExperimentConfig:
    """Config preloaded with the scenario's parameter-table defaults."""
    if scenario == SCENARIO_CNC:
        cfg = ExperimentConfig(scenario=scenario, carrier_ghz=5.0, drops=10_000)
    elif scenario == SCENARIO_SHARED:
        cfg = ExperimentConfig(scenario=scenario, carrier_ghz=2.0, drops=2_000)
    else:
        raise ValueError(f"scenario must be 'cnc' or 'shared', got {scenario!r}")
    cfg = replace(cfg, **overrides)
    validate_config(cfg)
    return cfg


def validate_config(cfg: ExperimentConfig) -> None:
    """Raise ValueError naming the offending field."""
    if cfg.scenario not in _SCENARIO_CODES:
        raise ValueError(f"scenario: must be 'cnc' or 'shared', got {cfg.scenario!r}")
    if cfg.mode not in (MODE_FIXED, MODE_BF3D):
        raise ValueError(f"mode: must be 'fixed' or 'bf3d', got {cfg.mode!r}")
    for name in ("isd", "h_bs", "carrier_ghz", "bandwidth_hz", "disk_radius"):
        if getattr(cfg, name) <= 0:
            raise ValueError(f"{name}: must be positive, got {getattr(cfg, name)}")
    if cfg.drops < 1:
        raise ValueError(f"drops: must be at least 1, got {cfg.drops}")
    if not 0 <= int(cfg.master_seed) < 2 ** 64:
        raise ValueError(f"master_seed: must be an unsigned 64-bit integer")
    if not math.isfinite(cfg.rician_k_db):
        raise ValueError(f"rician_k_db: must be finite, got {cfg.rician_k_db}")
    if len(cfg.uav_xy) != 2:
        raise ValueError(f"uav_xy: expected two coordinates, got {cfg.uav_xy!r}")
    if not cfg.altitudes:
        raise ValueError("altitudes: must not be empty")
    for alt in cfg.altitudes:
        if not geo.GROUND_UE_HEIGHT_M <= alt <= geo.AERIAL_UE_MAX_HEIGHT_M:
            raise ValueError(
                f"altitudes: {alt} outside [{geo.GROUND_UE_HEIGHT_M}, "
                f"{geo.AERIAL_UE_MAX_HEIGHT_M}] m")
    if cfg.n_total < 1:
        raise ValueError(f"n_total: must be at least 1, got {cfg.n_total}")
    if not cfg.n_uav_values:
        raise ValueError("n_uav_values: must not be empty")
    for n_uav in cfg.n_uav_values:
        if not 0 <= n_uav <= cfg.n_total:
            raise ValueError(
                f"n_uav_values: {n_uav} outside [0, n_total={cfg.n_total}]")


@dataclass(frozen=True)
class CncResult:
    altitudes: tuple[float, ...]
    association: np.ndarray  # (n_altitudes, n_cells), rows sum to 1
    snr_db: tuple[np.ndarray, ...]  # sorted, one array of `drops` per altitude


@dataclass(frozen=True)
class SharedResult:
    n_uav_values: tuple[int, ...]
    sum_rate_bps: tuple[np.ndarray, ...]  # sorted, one array of `drops` per entry


def ecdf(samples) -> tuple[np.ndarray, np.ndarray]:
    """Empirical CDF: unique sorted values and P(X <= value)."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("ecdf requires at least one sample")
    s = np.sort(samples)
    values = np.unique(s)
    probs = np.searchsorted(s, values, side="right") / s.size
    return values, probs


def percentile(samples, p: float) -> float:
    """Nearest-rank percentile: sorted sample at index ceil(p*n/100), 1-based."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ValueError("percentile requires at least one sample")
    if not 0.0 < p < 100.0:
        raise ValueError(f"p must be in (0, 100), got {p}")
    s = np.sort(samples)
    k = math.ceil(p * s.size / 100.0 - 1e-12)
    return float(s[k - 1])


def _drop_seeds(master_seed: int, scenario: str, case_index: int,
                drops: int) -> list[np.random.SeedSequence]:
    root = np.random.SeedSequence(entropy=int(master_seed),
                                  spawn_key=(_SCENARIO_CODES[scenario], case_index))
    return root.spawn(drops)


def _map_drops(fn, seeds, workers: int) -> list:
    if workers <= 1:
        return [fn(s) for s in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, seeds))


def _channel_params(cfg: ExperimentConfig) -> ch.ChannelParams:
    return ch.ChannelParams(carrier_ghz=cfg.carrier_ghz,
                            rician_k_db=cfg.rician_k_db,
                            bandwidth_hz=cfg.bandwidth_hz,
                            noise_psd_dbm_hz=cfg.noise_psd_dbm_hz,
                            noise_figure_db=cfg.noise_figure_db)


def run_cnc(cfg: ExperimentConfig, workers: int = 1) -> CncResult:
    """Dedicated-channel experiment: association frequencies and SNR samples."""
    if cfg.scenario != SCENARIO_CNC:
        raise ValueError(f"scenario: run_cnc needs 'cnc', got {cfg.scenario!r}")
    validate_config(cfg)
    array = FIXED_PATTERN_ULA if cfg.mode == MODE_FIXED else BEAMFORMING_UPA
    layout = geo.build_layout(cfg.isd, cfg.h_bs, LAYOUT_RINGS, array=array)
    params = _channel_params(cfg)
    noise_dbm = ch.noise_power_dbm(params)
    n_cells = layout.n_cells

    association = np.zeros((len(cfg.altitudes), n_cells))
    snr_per_altitude = []
    for case_index, altitude in enumerate(cfg.altitudes):
        position = np.array([[cfg.uav_xy[0], cfg.uav_xy[1], altitude]])
        d2d, d3d, zen, az = (a[:, 0] for a in geo.link_geometry(layout, position))
        p_los = ch.los_probability(d2d, altitude)
        if cfg.mode == MODE_FIXED:
            weights = downtilt_weights(array, DEFAULT_DOWNTILT_DEG)
            pattern_db = fixed_pattern_gains_db(array, weights, zen, az)
        else:
            pattern_db = element_gains_db(zen, az)

        def one_drop(seed):
            rng = np.random.default_rng(seed)
            los = rng.random(n_cells) < p_los
            shadow = rng.standard_normal(n_cells) * ch.shadowing_sigma_db(altitude, los)
            pl = ch.pathloss_db(d2d, d3d, altitude, cfg.h_bs, cfg.carrier_ghz, los)
            if cfg.mode == MODE_FIXED:
                rsrp = cfg.cell_power_dbm + pattern_db - pl - shadow
            else:
                h_ss = ch.sample_small_scale(los, zen, az, array,
                                             cfg.rician_k_db, rng)
                norm2 = (10.0 ** ((pattern_db - pl - shadow) / 10.0)
                         * np.sum(np.abs(h_ss) ** 2, axis=-1))
                rsrp = cfg.cell_power_dbm + 10.0 * np.log10(norm2)
            serving = int(np.argmax(rsrp))
            return serving, float(rsrp[serving] - noise_dbm)

        seeds = _drop_seeds(cfg.master_seed, cfg.scenario, case_index, cfg.drops)
        results = _map_drops(one_drop, seeds, workers)
        serving_cells = np.array([r[0] for r in results])
        association[case_index] = (np.bincount(serving_cells, minlength=n_cells)
                                   / cfg.drops)
        snr_per_altitude.append(np.sort(np.array([r[1] for r in results])))

    return CncResult(altitudes=tuple(cfg.altitudes), association=association,
                     snr_db=tuple(snr_per_altitude))


def run_shared(cfg: ExperimentConfig, workers: int = 1) -> SharedResult:
    """Shared-channel experiment: per-drop sum rate over all UEs."""
    if cfg.scenario != SCENARIO_SHARED:
        raise ValueError(f"scenario: run_shared needs 'shared', got {cfg.scenario!r}")
    validate_config(cfg)
    array = FIXED_PATTERN_ULA if cfg.mode == MODE_FIXED else BEAMFORMING_UPA
    layout = geo.build_layout(cfg.isd, cfg.h_bs, LAYOUT_RINGS, array=array)
    params = _channel_params(cfg)
    noise_dbm = ch.noise_power_dbm(params)
    if cfg.mode == MODE_FIXED:
        tilt = downtilt_weights(array, DEFAULT_DOWNTILT_DEG)

    def one_drop(seed, n_uav):
        rng = np.random.default_rng(seed)
        ues = geo.drop_ues(cfg.n_total, n_uav, cfg.disk_radius, rng)
        positions = np.array([ue.position for ue in ues])
        heights = positions[:, 2]
        d2d, d3d, zen, az = geo.link_geometry(layout, positions)
        los = rng.random(d2d.shape) < ch.los_probability(d2d, heights[None, :])
        shadow = (rng.standard_normal(d2d.shape)
                  * ch.shadowing_sigma_db(heights[None, :], los))
        pl = ch.pathloss_db(d2d, d3d, heights[None, :], cfg.h_bs,
                            cfg.carrier_ghz, los)
        if cfg.mode == MODE_FIXED:
            gain_db = fixed_pattern_gains_db(array, tilt, zen, az) - pl - shadow
            state = link.fixed_drop_state(gain_db, cfg.cell_power_dbm, noise_dbm)
        else:
            amp_db = element_gains_db(zen, az) - pl - shadow
            h_ss = ch.sample_small_scale(los, zen, az, array, cfg.rician_k_db, rng)
            chan = 10.0 ** (amp_db[..., None] / 20.0) * h_ss
            state = link.bf3d_drop_state(chan, cfg.cell_power_dbm, noise_dbm)
        rates = link.shannon_rate(link.sinr_shared_all(state), cfg.bandwidth_hz)
        return float(np.sum(rates))

    sum_rates = []
    for case_index, n_uav in enumerate(cfg.n_uav_values):
        seeds = _drop_seeds(cfg.master_seed, cfg.scenario, case_index, cfg.drops)
        samples = _map_drops(lambda s, n=n_uav: one_drop(s, n), seeds, workers)
        sum_rates.append(np.sort(np.array(samples)))
    return SharedResult(n_uav_values=tuple(cfg.n_uav_values),
                        sum_rate_bps=tuple(sum_rates))
