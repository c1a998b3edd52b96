"""Large-scale and small-scale channel models for ground and aerial UEs.

Large-scale models are height-banded urban-macro expressions: below
22.5 m UE height the terrestrial 3GPP TR 38.901 UMa LoS probability,
pathloss and shadowing apply; between 22.5 m and 100 m the UMa-AV
aerial-vehicle extensions (3GPP R1-1714856); above 100 m the link is
always LoS. Distances in meters, carrier in GHz, outputs in dB.

Small-scale fading is a single-ray Rician vector: a plane wave at the
direct-path angles over the diffuse i.i.d. complex-Gaussian component,
power-normalized so E||h_ss||^2 equals the element count. NLoS links are
pure Rayleigh.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import antenna
from .antenna import ArrayGeometry
from .geometry import CellDescriptor, DirectionAngles, UeState, distances, local_angles

AERIAL_BAND_MIN_M = 22.5  # terrestrial band above this height
LOS_CERTAIN_ABOVE_M = 100.0
UE_HEIGHT_MIN_M = 1.5
UE_HEIGHT_MAX_M = 300.0
_C_M_PER_S = 3.0e8


@dataclass(frozen=True)
class ChannelParams:
    carrier_ghz: float
    rician_k_db: float
    bandwidth_hz: float
    noise_psd_dbm_hz: float = -174.0
    noise_figure_db: float = 9.0

    def __post_init__(self):
        if self.carrier_ghz <= 0:
            raise ValueError(f"carrier_ghz must be positive, got {self.carrier_ghz}")
        if self.bandwidth_hz <= 0:
            raise ValueError(f"bandwidth_hz must be positive, got {self.bandwidth_hz}")


@dataclass(frozen=True)
class LargeScaleState:
    los: bool
    pathloss_db: float
    shadowing_db: float  # signed draw; positive values attenuate
    angles: DirectionAngles
    d_2d: float
    d_3d: float


@dataclass(frozen=True, eq=False)
class ChannelVector:
    gains: np.ndarray  # complex per-element amplitudes, length N_e
    large_scale: LargeScaleState


def _check_ue_heights(h_ut) -> np.ndarray:
    h = np.asarray(h_ut, dtype=float)
    if np.any(h < UE_HEIGHT_MIN_M) or np.any(h > UE_HEIGHT_MAX_M):
        raise ValueError(
            f"UE height outside modeled band [{UE_HEIGHT_MIN_M}, {UE_HEIGHT_MAX_M}] m")
    return h


def los_probability(d_2d, h_ut):
    """LoS probability; scalar or broadcastable arrays."""
    h = _check_ue_heights(h_ut)
    d = np.asarray(d_2d, dtype=float)
    d, h = np.broadcast_arrays(d, h)
    d_safe = np.maximum(d, 1e-12)

    # Terrestrial UMa (h <= 22.5 m).
    p_terr = np.where(d <= 18.0, 1.0,
                      18.0 / d_safe + np.exp(-d_safe / 63.0) * (1.0 - 18.0 / d_safe))

    # Aerial band (22.5 m < h <= 100 m); heights below the band are clamped
    # here because their lanes are discarded by the final select anyway.
    log_h = np.log10(np.maximum(h, AERIAL_BAND_MIN_M))
    d_1 = np.maximum(460.0 * log_h - 700.0, 18.0)
    p_1 = 4300.0 * log_h - 3800.0
    p_aer = np.where(d <= d_1, 1.0,
                     d_1 / d_safe + np.exp(-d_safe / p_1) * (1.0 - d_1 / d_safe))

    prob = np.where(h <= AERIAL_BAND_MIN_M, p_terr,
                    np.where(h <= LOS_CERTAIN_ABOVE_M, p_aer, 1.0))
    prob = np.clip(prob, 0.0, 1.0)
    if np.ndim(d_2d) == 0 and np.ndim(h_ut) == 0:
        return float(prob)
    return prob


def pathloss_db(d_2d, d_3d, h_ut, h_bs: float, f_c_ghz: float, los):
    """Pathloss in dB; scalar or broadcastable arrays.

    NLoS is undefined above 100 m UE height (the link is always LoS there).
    """
    d2 = np.asarray(d_2d, dtype=float)
    d3 = np.asarray(d_3d, dtype=float)
    h = np.asarray(h_ut, dtype=float)
    los_mask = np.asarray(los, dtype=bool)
    d2, d3, h, los_mask = np.broadcast_arrays(d2, d3, h, los_mask)
    if np.any(d3 < 1.0):
        raise ValueError("pathloss model requires d_3d >= 1 m")
    if np.any(~los_mask & (h > LOS_CERTAIN_ABOVE_M)):
        raise ValueError("NLoS pathloss undefined for UE height above 100 m")

    log_d3 = np.log10(d3)
    f_term = 20.0 * math.log10(f_c_ghz)

    # Terrestrial UMa LoS: two-slope around the effective breakpoint distance.
    d_bp = 4.0 * (h_bs - 1.0) * (h - 1.0) * f_c_ghz * 1e9 / _C_M_PER_S
    pl_los_near = 28.0 + 22.0 * log_d3 + f_term
    pl_los_far = (28.0 + 40.0 * log_d3 + f_term
                  - 9.0 * np.log10(d_bp ** 2 + (h_bs - h) ** 2))
    terr_los = np.where(d2 <= d_bp, pl_los_near, pl_los_far)
    terr_nlos = np.maximum(
        terr_los, 13.54 + 39.08 * log_d3 + f_term - 0.6 * (h - 1.5))

    # Aerial band: free-space-like LoS, height-dependent-slope NLoS.
    aer_los = 28.0 + 22.0 * log_d3 + f_term
    log_h = np.log10(np.maximum(h, UE_HEIGHT_MIN_M))
    aer_nlos = (-17.5 + (46.0 - 7.0 * log_h) * log_d3
                + 20.0 * math.log10(40.0 * math.pi * f_c_ghz / 3.0))

    terrestrial = h <= AERIAL_BAND_MIN_M
    pl = np.where(terrestrial,
                  np.where(los_mask, terr_los, terr_nlos),
                  np.where(los_mask, aer_los, aer_nlos))
    if np.ndim(d_3d) == 0 and np.ndim(los) == 0 and np.ndim(h_ut) == 0:
        return float(pl)
    return pl


def shadowing_sigma_db(h_ut, los):
    """Lognormal shadowing standard deviation in dB."""
    h = np.asarray(h_ut, dtype=float)
    los_mask = np.asarray(los, dtype=bool)
    h, los_mask = np.broadcast_arrays(h, los_mask)
    terr = np.where(los_mask, 4.0, 6.0)
    aer = np.where(los_mask, 4.64 * np.exp(-0.0066 * h), 6.0)
    sigma = np.where(h <= AERIAL_BAND_MIN_M, terr, aer)
    if np.ndim(h_ut) == 0 and np.ndim(los) == 0:
        return float(sigma)
    return sigma


def draw_large_scale(cell: CellDescriptor, ue: UeState, params: ChannelParams,
                     rng: np.random.Generator) -> LargeScaleState:
    """Sample LoS state and shadowing for one link; pathloss is deterministic."""
    d_2d, d_3d = distances(cell, ue)
    angles = local_angles(cell, ue)
    h_ut = ue.height_m
    los = bool(rng.random() < los_probability(d_2d, h_ut))
    pl = pathloss_db(d_2d, d_3d, h_ut, cell.position[2], params.carrier_ghz, los)
    sf = float(rng.standard_normal() * shadowing_sigma_db(h_ut, los))
    return LargeScaleState(los=los, pathloss_db=pl, shadowing_db=sf,
                           angles=angles, d_2d=d_2d, d_3d=d_3d)


def sample_small_scale(los, zenith_deg, azimuth_deg, array: ArrayGeometry,
                       rician_k_db: float, rng: np.random.Generator) -> np.ndarray:
    """Normalized small-scale vectors, shape broadcast(los, angles) + (N_e,).

    LoS links: Rician mix of a random-phase plane wave at the direct-path
    angles and an i.i.d. CN(0, 1) diffuse part; NLoS links: pure Rayleigh.
    E||h_ss||^2 = N_e either way.
    """
    los_mask, zen, az = np.broadcast_arrays(
        np.asarray(los, dtype=bool),
        np.asarray(zenith_deg, dtype=float),
        np.asarray(azimuth_deg, dtype=float))
    shape = los_mask.shape
    n_e = array.n_elements
    psi = np.exp(2j * np.pi * rng.random(shape))
    diffuse = math.sqrt(0.5) * (rng.standard_normal(shape + (n_e,))
                                + 1j * rng.standard_normal(shape + (n_e,)))
    if math.isinf(rician_k_db):
        los_amp, diffuse_amp = 1.0, 0.0
    else:
        k = 10.0 ** (rician_k_db / 10.0)
        los_amp = math.sqrt(k / (k + 1.0))
        diffuse_amp = math.sqrt(1.0 / (k + 1.0))
    ray = antenna.steering_matrix(array, zen, az)
    rician = los_amp * psi[..., None] * ray + diffuse_amp * diffuse
    return np.where(los_mask[..., None], rician, diffuse)


def draw_channel_vector(ls: LargeScaleState, array: ArrayGeometry,
                        params: ChannelParams, rng: np.random.Generator) -> ChannelVector:
    """Sample the complex per-element channel for one link.

    The element gain at the direct-path angles, pathloss and shadowing set
    the amplitude applied to the normalized small-scale vector.
    """
    h_ss = sample_small_scale(ls.los, ls.angles.zenith_deg, ls.angles.azimuth_deg,
                              array, params.rician_k_db, rng)
    gain_db = (antenna.element_gain_db(ls.angles) - ls.pathloss_db - ls.shadowing_db)
    return ChannelVector(gains=10.0 ** (gain_db / 20.0) * h_ss, large_scale=ls)


def noise_power_dbm(params: ChannelParams) -> float:
    """Thermal noise power over the channel bandwidth, noise figure included."""
    return (params.noise_psd_dbm_hz + 10.0 * math.log10(params.bandwidth_hz)
            + params.noise_figure_db)
