"""Hexagonal multi-site layout and BS-UE geometry.

Coordinates are in meters. The layout is a flat hex lattice of sites
(center plus concentric rings), each site hosting three 120-degree
sectors ("cells") that share the site position but differ in boresight.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .antenna import ArrayGeometry

GROUND_UE_HEIGHT_M = 1.5
AERIAL_UE_MAX_HEIGHT_M = 300.0

# Boresight azimuths per site, degrees counter-clockwise from +x.
SECTOR_BORESIGHTS_DEG = (0.0, 120.0, 240.0)


class DegenerateGeometryError(ValueError):
    """UE coincides with the cell antenna, direction angles are undefined."""


class UeKind(Enum):
    GROUND = "ground"
    AERIAL = "aerial"


@dataclass(frozen=True)
class DirectionAngles:
    """Direction of the BS->UE path in the cell's local frame.

    zenith_deg: 0 points straight up from the array, 90 is horizontal,
    values below 90 point above the horizon.
    azimuth_deg: relative to the cell boresight, wrapped to (-180, 180].
    """

    zenith_deg: float
    azimuth_deg: float


@dataclass(frozen=True)
class UeState:
    position: tuple[float, float, float]  # (x, y, height) [m]
    kind: UeKind

    @property
    def height_m(self) -> float:
        return self.position[2]


@dataclass(frozen=True)
class CellDescriptor:
    cell_id: int  # 1-based, unique across the layout
    site_index: int
    position: tuple[float, float, float]  # site center at height h_bs
    boresight_azimuth_deg: float
    array: "ArrayGeometry"


@dataclass(frozen=True, eq=False)
class NetworkLayout:
    isd: float
    h_bs: float
    sites: np.ndarray  # (n_sites, 2) site centers
    cells: tuple[CellDescriptor, ...]
    # Flat per-cell arrays (index = cell_id - 1), kept for vectorized paths.
    cell_positions: np.ndarray  # (n_cells, 3)
    cell_boresights_deg: np.ndarray  # (n_cells,)

    @property
    def n_sites(self) -> int:
        return self.sites.shape[0]

    @property
    def n_cells(self) -> int:
        return len(self.cells)


def wrap_angle_deg(angle: float | np.ndarray) -> float | np.ndarray:
    """Wrap an angle in degrees to (-180, 180]."""
    wrapped = np.mod(np.asarray(angle) + 180.0, 360.0) - 180.0
    wrapped = np.where(wrapped == -180.0, 180.0, wrapped)
    if np.ndim(angle) == 0:
        return float(wrapped)
    return wrapped


def _hex_site_coords(rings: int) -> list[tuple[int, int]]:
    """Axial lattice coordinates for all sites within `rings` of the center."""
    coords = []
    for q in range(-rings, rings + 1):
        for r in range(-rings, rings + 1):
            if max(abs(q), abs(r), abs(q + r)) <= rings:
                coords.append((q, r))
    return coords


def build_layout(isd: float, h_bs: float, rings: int,
                 array: "ArrayGeometry | None" = None) -> NetworkLayout:
    """Build the hexagonal layout: 1 + 3*rings*(rings+1) sites, 3 cells each.

    Sites are ordered center first, then ring by ring, counter-clockwise
    starting from bearing 0; ring-1 sites sit at bearings 0, 60, ..., 300
    at distance `isd`. Cell ids are site-major in boresight order
    (0, 120, 240 degrees), starting at 1.
    """
    if isd <= 0:
        raise ValueError(f"isd must be positive, got {isd}")
    if rings < 0:
        raise ValueError(f"rings must be non-negative, got {rings}")
    if array is None:
        from .antenna import ArrayGeometry

        array = ArrayGeometry(8, 1)

    # Lattice basis chosen so ring-1 sites land on bearings 0, 60, ... deg.
    u = np.array([isd, 0.0])
    v = np.array([isd / 2.0, isd * math.sqrt(3.0) / 2.0])
    entries = []
    for q, r in _hex_site_coords(rings):
        ring = max(abs(q), abs(r), abs(q + r))
        xy = q * u + r * v
        bearing = math.atan2(xy[1], xy[0]) % (2.0 * math.pi) if ring else 0.0
        entries.append((ring, bearing, xy))
    entries.sort(key=lambda e: (e[0], e[1]))
    sites = np.array([e[2] for e in entries])

    cells = []
    for site_index in range(sites.shape[0]):
        pos = (float(sites[site_index, 0]), float(sites[site_index, 1]), float(h_bs))
        for k, boresight in enumerate(SECTOR_BORESIGHTS_DEG):
            cells.append(CellDescriptor(
                cell_id=3 * site_index + k + 1,
                site_index=site_index,
                position=pos,
                boresight_azimuth_deg=boresight,
                array=array,
            ))

    return NetworkLayout(
        isd=float(isd),
        h_bs=float(h_bs),
        sites=sites,
        cells=tuple(cells),
        cell_positions=np.array([c.position for c in cells]),
        cell_boresights_deg=np.array([c.boresight_azimuth_deg for c in cells]),
    )


def distances(cell: CellDescriptor, ue: UeState) -> tuple[float, float]:
    """Horizontal and 3D Euclidean distances (d_2d, d_3d) in meters."""
    dx = ue.position[0] - cell.position[0]
    dy = ue.position[1] - cell.position[1]
    dz = ue.position[2] - cell.position[2]
    d_2d = math.hypot(dx, dy)
    return d_2d, math.hypot(d_2d, dz)


def local_angles(cell: CellDescriptor, ue: UeState) -> DirectionAngles:
    """Zenith/azimuth of the direct path in the cell's local frame.

    A UE straight above the cell has zenith 0; the azimuth is then
    undefined and returned as 0 by convention.
    """
    d_2d, d_3d = distances(cell, ue)
    if d_3d == 0.0:
        raise DegenerateGeometryError("UE position coincides with the cell antenna")
    dz = ue.position[2] - cell.position[2]
    zenith = math.degrees(math.acos(max(-1.0, min(1.0, dz / d_3d))))
    if d_2d == 0.0:
        return DirectionAngles(zenith_deg=zenith, azimuth_deg=0.0)
    bearing = math.degrees(math.atan2(ue.position[1] - cell.position[1],
                                      ue.position[0] - cell.position[0]))
    azimuth = wrap_angle_deg(bearing - cell.boresight_azimuth_deg)
    return DirectionAngles(zenith_deg=zenith, azimuth_deg=float(azimuth))


def link_geometry(layout: NetworkLayout,
                  positions: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized cell-to-UE geometry.

    positions: (n_ue, 3). Returns (d_2d, d_3d, zenith_deg, azimuth_deg),
    each shaped (n_cells, n_ue), matching `distances`/`local_angles`.
    """
    positions = np.asarray(positions, dtype=float)
    delta = positions[None, :, :] - layout.cell_positions[:, None, :]
    d_2d = np.hypot(delta[..., 0], delta[..., 1])
    d_3d = np.hypot(d_2d, delta[..., 2])
    if np.any(d_3d == 0.0):
        raise DegenerateGeometryError("a UE position coincides with a cell antenna")
    zenith = np.degrees(np.arccos(np.clip(delta[..., 2] / d_3d, -1.0, 1.0)))
    bearing = np.degrees(np.arctan2(delta[..., 1], delta[..., 0]))
    azimuth = wrap_angle_deg(bearing - layout.cell_boresights_deg[:, None])
    azimuth = np.where(d_2d == 0.0, 0.0, azimuth)
    return d_2d, d_3d, zenith, azimuth


def nearest_facing_cells(layout: NetworkLayout, xy: tuple[float, float],
                         k: int = 3) -> list[int]:
    """Cell ids of the best-facing sector at each of the k nearest sites.

    "Nearest" is by horizontal site-center distance (ties by site order);
    per site, the sector with the smallest absolute boresight offset to
    the point wins. Co-sited sectors share distances, so a plain k-nearest
    over cells would be tie-ambiguous; this is the deterministic,
    id-independent reading.
    """
    xy = np.asarray(xy, dtype=float)
    site_d = np.hypot(layout.sites[:, 0] - xy[0], layout.sites[:, 1] - xy[1])
    order = np.argsort(site_d, kind="stable")[:k]
    ids = []
    for site_index in order:
        best = None
        for cell in layout.cells:
            if cell.site_index != site_index:
                continue
            bearing = math.degrees(math.atan2(xy[1] - cell.position[1],
                                              xy[0] - cell.position[0]))
            off = abs(wrap_angle_deg(bearing - cell.boresight_azimuth_deg))
            if best is None or off < best[0]:
                best = (off, cell.cell_id)
        ids.append(best[1])
    return ids


def drop_ues(n_total: int, n_uav: int, disk_radius: float,
             rng: np.random.Generator) -> list[UeState]:
    """Drop UEs uniformly over the disk centered at the layout origin.

    Area-uniform horizontal positions; the first n_uav UEs are aerial with
    altitude uniform on [1.5, 300] m, the rest are ground UEs at 1.5 m.
    """
    if not 0 <= n_uav <= n_total:
        raise ValueError(f"n_uav must be in [0, n_total], got {n_uav} > {n_total}")
    radii = disk_radius * np.sqrt(rng.random(n_total))
    phis = 2.0 * np.pi * rng.random(n_total)
    heights = np.full(n_total, GROUND_UE_HEIGHT_M)
    if n_uav:
        heights[:n_uav] = rng.uniform(GROUND_UE_HEIGHT_M, AERIAL_UE_MAX_HEIGHT_M, n_uav)
    ues = []
    for i in range(n_total):
        kind = UeKind.AERIAL if i < n_uav else UeKind.GROUND
        pos = (float(radii[i] * math.cos(phis[i])),
               float(radii[i] * math.sin(phis[i])),
               float(heights[i]))
        ues.append(UeState(position=pos, kind=kind))
    return ues
