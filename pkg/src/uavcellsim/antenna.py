"""Antenna element pattern, planar-array steering and beamforming weights.

The element pattern is the 3GPP TR 38.901 sector element: 8 dBi peak,
65-degree half-power beamwidth in azimuth and elevation, 30 dB side-lobe
floors. Arrays are M (vertical) x N (horizontal) with half-wavelength
spacing; element (m, n) is flattened to index m * N + n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import DirectionAngles

G_MAX_DBI = 8.0
HPBW_DEG = 65.0
SIDELOBE_FLOOR_DB = 30.0  # SLA_V and A_max


class DegenerateChannelError(ValueError):
    """All-zero channel vector, beamforming direction is undefined."""


@dataclass(frozen=True)
class ArrayGeometry:
    m_vert: int
    n_horiz: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.m_vert < 1 or self.n_horiz < 1:
            raise ValueError("array dimensions must be at least 1x1")

    @property
    def n_elements(self) -> int:
        return self.m_vert * self.n_horiz


# The two configurations used by the experiments.
FIXED_PATTERN_ULA = ArrayGeometry(8, 1)
BEAMFORMING_UPA = ArrayGeometry(8, 4)
DEFAULT_DOWNTILT_DEG = 10.0


@dataclass(frozen=True, eq=False)
class BeamWeights:
    weights: np.ndarray  # complex, unit norm

    def __post_init__(self):
        norm2 = float(np.sum(np.abs(self.weights) ** 2))
        if abs(norm2 - 1.0) > 1e-9:
            raise ValueError(f"beam weights must have unit norm, got |w|^2={norm2}")


def element_gains_db(zenith_deg, azimuth_deg):
    """3GPP element gain in dBi; accepts scalars or broadcastable arrays."""
    zenith_deg = np.asarray(zenith_deg, dtype=float)
    azimuth_deg = np.asarray(azimuth_deg, dtype=float)
    a_v = -np.minimum(12.0 * ((zenith_deg - 90.0) / HPBW_DEG) ** 2, SIDELOBE_FLOOR_DB)
    a_h = -np.minimum(12.0 * (azimuth_deg / HPBW_DEG) ** 2, SIDELOBE_FLOOR_DB)
    attenuation = -np.minimum(-(a_v + a_h), SIDELOBE_FLOOR_DB)
    return G_MAX_DBI + attenuation


def element_gain_db(angles: DirectionAngles) -> float:
    return float(element_gains_db(angles.zenith_deg, angles.azimuth_deg))


def steering_matrix(array: ArrayGeometry, zenith_deg, azimuth_deg) -> np.ndarray:
    """Array response for broadcastable angle arrays; output shape (..., N_e).

    Element (m, n) has phase 2*pi*spacing*(m*cos(theta) + n*sin(theta)*sin(phi));
    all entries are unit magnitude.
    """
    theta = np.radians(np.asarray(zenith_deg, dtype=float))
    phi = np.radians(np.asarray(azimuth_deg, dtype=float))
    m = np.arange(array.m_vert)
    n = np.arange(array.n_horiz)
    # (..., M, N) phase grid, flattened m-major.
    phase = 2.0 * np.pi * array.spacing_wavelengths * (
        np.cos(theta)[..., None, None] * m[:, None]
        + (np.sin(theta) * np.sin(phi))[..., None, None] * n[None, :]
    )
    return np.exp(1j * phase).reshape(*phase.shape[:-2], array.n_elements)


def steering_vector(array: ArrayGeometry, angles: DirectionAngles) -> np.ndarray:
    return steering_matrix(array, angles.zenith_deg, angles.azimuth_deg)


def downtilt_weights(array: ArrayGeometry, tilt_deg: float) -> BeamWeights:
    """Uniform-amplitude weights steering the main lobe to zenith 90+tilt deg.

    Phase-aligned with the steering vector at the tilt direction, so the
    response |w^H a| peaks there; requires the single-column ULA used by
    the fixed-pattern configuration.
    """
    if array.n_horiz != 1:
        raise ValueError(f"downtilt weights require n_horiz=1, got {array.n_horiz}")
    aim = steering_matrix(array, 90.0 + tilt_deg, 0.0)
    return BeamWeights(aim / math.sqrt(array.n_elements))


def mrt_weights(h: np.ndarray) -> BeamWeights:
    """Maximum-ratio-transmission weights w = h / ||h||."""
    h = np.asarray(h, dtype=complex)
    norm = float(np.linalg.norm(h))
    if norm == 0.0:
        raise DegenerateChannelError("cannot form MRT weights from a zero channel")
    return BeamWeights(h / norm)


def fixed_pattern_gains_db(array: ArrayGeometry, weights: BeamWeights,
                           zenith_deg, azimuth_deg):
    """Composite gain: element gain plus array factor |w^H a|^2 in dB."""
    if weights.weights.shape[-1] != array.n_elements:
        raise ValueError(
            f"weights length {weights.weights.shape[-1]} does not match "
            f"array element count {array.n_elements}")
    response = steering_matrix(array, zenith_deg, azimuth_deg) @ weights.weights.conj()
    af = np.abs(response) ** 2
    with np.errstate(divide="ignore"):
        af_db = 10.0 * np.log10(af)
    return element_gains_db(zenith_deg, azimuth_deg) + af_db


def fixed_pattern_gain_db(array: ArrayGeometry, weights: BeamWeights,
                          angles: DirectionAngles) -> float:
    return float(fixed_pattern_gains_db(array, weights,
                                        angles.zenith_deg, angles.azimuth_deg))
