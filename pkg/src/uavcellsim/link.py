"""RSRP, max-RSRP association, downlink SINR and Shannon rates.

Power bookkeeping: every cell radiates the same total power per channel,
split equally among its associated UEs. Intra-cell multiplexing is
orthogonal (no intra-cell interference); inter-cell interference is
always counted; cells with no associated UE stay silent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .antenna import (DEFAULT_DOWNTILT_DEG, DegenerateChannelError,
                      downtilt_weights, fixed_pattern_gain_db)
from .channel import ChannelVector, LargeScaleState
from .geometry import CellDescriptor

MODE_FIXED = "fixed"
MODE_BF3D = "bf3d"

_LN2 = math.log(2.0)


class InvalidStateError(RuntimeError):
    """Drop state is internally inconsistent (associations vs. counts)."""


@dataclass(frozen=True)
class PowerConfig:
    cell_power_dbm: float  # total per cell per channel, split equally per UE


@dataclass(frozen=True)
class LinkMetrics:
    serving_cell: int  # cell_id
    rsrp_dbm: float
    sinr_db: float  # equals SNR when no interferer is present
    rate_bps: float


def rsrp_fixed(cell: CellDescriptor, ls: LargeScaleState, power: PowerConfig,
               tilt_deg: float = DEFAULT_DOWNTILT_DEG) -> float:
    """Large-scale RSRP through the fixed downtilted pattern, in dBm."""
    gain = fixed_pattern_gain_db(cell.array, downtilt_weights(cell.array, tilt_deg),
                                 ls.angles)
    return power.cell_power_dbm + gain - ls.pathloss_db - ls.shadowing_db


def rsrp_bf(h: ChannelVector, power: PowerConfig) -> float:
    """RSRP with MRT beamforming on instantaneous CSI: P + 10 log10 ||h||^2."""
    norm2 = float(np.sum(np.abs(h.gains) ** 2))
    if norm2 == 0.0:
        raise DegenerateChannelError("zero channel vector has no RSRP")
    return power.cell_power_dbm + 10.0 * math.log10(norm2)


def associate(rsrp_dbm: np.ndarray) -> int:
    """Cell id (1-based) with the largest RSRP; ties go to the lowest id."""
    return int(np.argmax(rsrp_dbm)) + 1


def shannon_rate(sinr_db, bandwidth_hz: float):
    """Shannon rate B * log2(1 + SINR) in bit/s."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    sinr_lin = 10.0 ** (np.asarray(sinr_db, dtype=float) / 10.0)
    rate = bandwidth_hz * np.log1p(sinr_lin) / _LN2
    if np.ndim(sinr_db) == 0:
        return float(rate)
    return rate


def noma_pair_rates(s_uav: float, s_gnd: float,
                    bandwidth_hz: float) -> tuple[float, float]:
    """Two-user uplink NOMA rates for noise-normalized receive SNRs.

    The UAV signal is decoded first against the ground UE as noise, then
    cancelled, so the ground UE sees an interference-free channel.
    """
    if s_uav < 0 or s_gnd < 0:
        raise ValueError("linear SNRs must be non-negative")
    r_uav = bandwidth_hz * math.log2(1.0 + s_uav / (1.0 + s_gnd))
    r_gnd = bandwidth_hz * math.log2(1.0 + s_gnd)
    return r_uav, r_gnd


def oma_pair_rates(s_uav: float, s_gnd: float,
                   bandwidth_hz: float) -> tuple[float, float]:
    """Orthogonal benchmark: equal time split, unchanged per-user power."""
    if s_uav < 0 or s_gnd < 0:
        raise ValueError("linear SNRs must be non-negative")
    return (bandwidth_hz / 2.0 * math.log2(1.0 + s_uav),
            bandwidth_hz / 2.0 * math.log2(1.0 + s_gnd))


@dataclass(frozen=True, eq=False)
class DropState:
    """Per-drop link state shared by all SINR evaluations.

    serving holds 0-based cell indices (cell_id - 1). In fixed mode
    gain_db is the composite large-scale gain (pattern - PL - SF) per
    (cell, ue); in bf3d mode chan holds the per-element channels and
    beam_power[u, v] = |w_v^H h_{c_v, u}|^2 the power UE u receives from
    the beam serving UE v (by UE v's cell c_v).
    """

    mode: str
    power_dbm: float
    noise_dbm: float
    serving: np.ndarray  # (n_ue,) int
    counts: np.ndarray  # (n_cells,) int, UEs associated per cell
    rsrp_dbm: np.ndarray  # (n_cells, n_ue)
    gain_db: np.ndarray | None = None  # fixed mode, (n_cells, n_ue)
    chan: np.ndarray | None = None  # bf3d mode, (n_cells, n_ue, n_e)
    beam_power: np.ndarray | None = None  # bf3d mode, (n_ue, n_ue)

    def __post_init__(self):
        expected = np.bincount(self.serving, minlength=self.counts.shape[0])
        if not np.array_equal(expected, self.counts):
            raise InvalidStateError("association counts do not match serving cells")

    @property
    def n_ue(self) -> int:
        return self.serving.shape[0]


def fixed_drop_state(gain_db: np.ndarray, power_dbm: float,
                     noise_dbm: float) -> DropState:
    """Associate by large-scale RSRP and freeze a fixed-pattern drop."""
    rsrp = power_dbm + gain_db
    serving = np.argmax(rsrp, axis=0)
    counts = np.bincount(serving, minlength=gain_db.shape[0])
    return DropState(mode=MODE_FIXED, power_dbm=power_dbm, noise_dbm=noise_dbm,
                     serving=serving, counts=counts, rsrp_dbm=rsrp, gain_db=gain_db)


def bf3d_drop_state(chan: np.ndarray, power_dbm: float,
                    noise_dbm: float) -> DropState:
    """Associate by MRT RSRP and precompute inter-beam powers."""
    norm2 = np.sum(np.abs(chan) ** 2, axis=-1)
    if np.any(norm2 == 0.0):
        raise DegenerateChannelError("zero channel vector in drop")
    rsrp = power_dbm + 10.0 * np.log10(norm2)
    serving = np.argmax(rsrp, axis=0)
    counts = np.bincount(serving, minlength=chan.shape[0])
    n_ue = chan.shape[1]
    # w_v = h_{c_v, v} / ||.||; beam_power[u, v] = |w_v^H h_{c_v, u}|^2.
    own = chan[serving, np.arange(n_ue)]  # (n_ue, n_e)
    w = own / np.linalg.norm(own, axis=-1, keepdims=True)
    towards = chan[serving]  # (v, u, n_e): channel from v's cell to every u
    beam_power = np.abs(np.einsum("vue,ve->uv", towards, w.conj())) ** 2
    return DropState(mode=MODE_BF3D, power_dbm=power_dbm, noise_dbm=noise_dbm,
                     serving=serving, counts=counts, rsrp_dbm=rsrp,
                     chan=chan, beam_power=beam_power)


def _signal_and_interference_mw(state: DropState,
                                ue_index: int) -> tuple[float, float]:
    p_lin = 10.0 ** (state.power_dbm / 10.0)
    serv = state.serving[ue_index]
    if state.mode == MODE_FIXED:
        g_lin = 10.0 ** (state.gain_db[:, ue_index] / 10.0)
        signal = p_lin / state.counts[serv] * g_lin[serv]
        active = (state.counts > 0)
        active[serv] = False
        interference = float(p_lin * np.sum(g_lin[active]))
    else:
        signal = (p_lin / state.counts[serv]
                  * float(state.beam_power[ue_index, ue_index]))
        per_beam = p_lin / state.counts[state.serving]
        other_cell = state.serving != serv
        interference = float(np.sum(
            per_beam[other_cell] * state.beam_power[ue_index, other_cell]))
    return float(signal), interference


def sinr_shared(state: DropState, ue_index: int) -> float:
    """Downlink SINR in dB for one UE of a shared-channel drop."""
    signal, interference = _signal_and_interference_mw(state, ue_index)
    noise = 10.0 ** (state.noise_dbm / 10.0)
    return 10.0 * math.log10(signal / (interference + noise))


def sinr_shared_all(state: DropState) -> np.ndarray:
    return np.array([sinr_shared(state, u) for u in range(state.n_ue)])


def drop_link_metrics(state: DropState, bandwidth_hz: float) -> list[LinkMetrics]:
    """Per-UE serving cell, RSRP, SINR and Shannon rate for a drop."""
    sinrs = sinr_shared_all(state)
    rates = shannon_rate(sinrs, bandwidth_hz)
    return [LinkMetrics(serving_cell=int(state.serving[u]) + 1,
                        rsrp_dbm=float(state.rsrp_dbm[state.serving[u], u]),
                        sinr_db=float(sinrs[u]),
                        rate_bps=float(rates[u]))
            for u in range(state.n_ue)]
