"""City grid mesh: geodesy, triangulation, and vertex adjacency.

A city is represented by its bounding box, triangulated as a uniform grid
with every cell split along the bottom-left to top-right diagonal. Vertex
coordinates are implicit: vertex id = j * nx + i sits at (i * spacing,
j * spacing) meters from the south-west corner.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

EARTH_RADIUS_M = 6_371_000.0

# Link offsets of an interior vertex in cyclic order. Consecutive entries
# share a triangle with the center vertex under the BL->TR diagonal split.
_LINK_OFFSETS = ((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1))


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 position in degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError("non-finite coordinates")
        if not (-90.0 <= self.lat <= 90.0 and -180.0 <= self.lon <= 180.0):
            raise ValueError(f"coordinates out of range: {self.lat}, {self.lon}")


@dataclass(frozen=True)
class ProjectedPoint:
    """Local planar position in meters east/north of a reference origin."""

    x: float
    y: float


def project(p: GeoPoint, origin: GeoPoint) -> ProjectedPoint:
    """Local equirectangular projection of ``p`` about ``origin``.

    Accurate to well under 0.1% at city scale; exactly invertible by
    :func:`unproject`.
    """
    dlat = math.radians(p.lat - origin.lat)
    dlon = math.radians(p.lon - origin.lon)
    return ProjectedPoint(
        x=EARTH_RADIUS_M * math.cos(math.radians(origin.lat)) * dlon,
        y=EARTH_RADIUS_M * dlat,
    )


def unproject(p: ProjectedPoint, origin: GeoPoint) -> GeoPoint:
    """Inverse of :func:`project`."""
    lat = origin.lat + math.degrees(p.y / EARTH_RADIUS_M)
    lon = origin.lon + math.degrees(
        p.x / (EARTH_RADIUS_M * math.cos(math.radians(origin.lat)))
    )
    return GeoPoint(lat=lat, lon=lon)


class Mesh:
    """Uniform triangulated grid over a bounding box.

    Distances are measured in the local equirectangular frame whose
    longitude scale is taken at the bounding-box center latitude and whose
    origin is the south-west corner, so vertex (i, j) sits exactly at
    (i * spacing, j * spacing).
    """

    def __init__(self, south: float, west: float, north: float, east: float,
                 spacing: float):
        if spacing <= 0:
            raise ValueError("spacing must be positive")
        if not (north > south and east > west):
            raise ValueError("degenerate bounding box")
        self.south, self.west, self.north, self.east = south, west, north, east
        self.spacing = float(spacing)
        self.center = GeoPoint((south + north) / 2.0, (west + east) / 2.0)
        self.origin = GeoPoint(south, west)

        width = self._to_xy(GeoPoint(south, east))[0]
        height = self._to_xy(GeoPoint(north, west))[1]
        # Tiny slack so exact multiples of the spacing are not lost to
        # floating-point round-off in the projection.
        self.nx = int(math.floor(width / spacing + 1e-9)) + 1
        self.ny = int(math.floor(height / spacing + 1e-9)) + 1
        if self.nx < 2 or self.ny < 2:
            raise ValueError(
                f"bounding box smaller than spacing ({width:.1f} x {height:.1f} m"
                f" at spacing {spacing})"
            )
        self._neighbors = None

    def _to_xy(self, p: GeoPoint) -> tuple[float, float]:
        coslat = math.cos(math.radians(self.center.lat))
        x = EARTH_RADIUS_M * coslat * math.radians(p.lon - self.west)
        y = EARTH_RADIUS_M * math.radians(p.lat - self.south)
        return x, y

    def project_point(self, p: GeoPoint) -> ProjectedPoint:
        """Project a geographic point into the mesh frame."""
        x, y = self._to_xy(p)
        return ProjectedPoint(x, y)

    def unproject_point(self, p: ProjectedPoint) -> GeoPoint:
        """Map mesh-frame coordinates back to WGS84."""
        coslat = math.cos(math.radians(self.center.lat))
        lat = self.south + math.degrees(p.y / EARTH_RADIUS_M)
        lon = self.west + math.degrees(p.x / (EARTH_RADIUS_M * coslat))
        return GeoPoint(lat, lon)

    @property
    def vertex_count(self) -> int:
        return self.nx * self.ny

    @property
    def triangle_count(self) -> int:
        return 2 * (self.nx - 1) * (self.ny - 1)

    def vertex_id(self, i: int, j: int) -> int:
        return j * self.nx + i

    def vertex_ij(self, v: int) -> tuple[int, int]:
        return v % self.nx, v // self.nx

    def vertex_xy(self, v: int) -> ProjectedPoint:
        i, j = self.vertex_ij(v)
        return ProjectedPoint(i * self.spacing, j * self.spacing)

    def vertex_positions(self) -> tuple[np.ndarray, np.ndarray]:
        """(x, y) arrays of all vertex positions, indexed by vertex id."""
        ids = np.arange(self.vertex_count)
        return (ids % self.nx) * self.spacing, (ids // self.nx) * self.spacing

    def vertex_link(self, v: int) -> list[int]:
        """Neighbors of ``v`` in cyclic order (interior) or path order
        (boundary); consecutive entries are adjacent in the mesh."""
        if not (0 <= v < self.vertex_count):
            raise ValueError(f"invalid vertex id {v}")
        i, j = self.vertex_ij(v)
        present = [
            0 <= i + di < self.nx and 0 <= j + dj < self.ny
            for di, dj in _LINK_OFFSETS
        ]
        if all(present):
            order = range(6)
        else:
            # Rotate the cyclic sequence so the missing run sits at the
            # wrap-around, turning the remainder into a valid path.
            start = next(
                k for k in range(6) if present[k] and not present[k - 1]
            )
            order = [(start + k) % 6 for k in range(6) if present[(start + k) % 6]]
        return [
            self.vertex_id(i + _LINK_OFFSETS[k][0], j + _LINK_OFFSETS[k][1])
            for k in order
        ]

    def is_interior(self, v: int) -> bool:
        i, j = self.vertex_ij(v)
        return 0 < i < self.nx - 1 and 0 < j < self.ny - 1

    def neighbor_lists(self) -> list[tuple[int, ...]]:
        """Cached per-vertex neighbor tuples (link order)."""
        if self._neighbors is None:
            self._neighbors = [tuple(self.vertex_link(v))
                               for v in range(self.vertex_count)]
        return self._neighbors


def build_mesh(bounds: tuple[GeoPoint, GeoPoint], spacing: float) -> Mesh:
    """Build the city mesh from (south-west, north-east) corner points."""
    sw, ne = bounds
    return Mesh(sw.lat, sw.lon, ne.lat, ne.lon, spacing)


@dataclass(frozen=True)
class CityConfig:
    """Per-city configuration loaded from a JSON file."""

    name: str
    south: float
    west: float
    north: float
    east: float
    spacing_m: float = 50.0
    epsilon_m: float = 100.0
    utc_offset_minutes: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "CityConfig":
        b = d["bounds"]
        return cls(
            name=d["name"],
            south=float(b["south"]), west=float(b["west"]),
            north=float(b["north"]), east=float(b["east"]),
            spacing_m=float(d.get("spacing_m", 50.0)),
            epsilon_m=float(d.get("epsilon_m", 100.0)),
            utc_offset_minutes=int(d.get("utc_offset_minutes", 0)),
        )

    @classmethod
    def load(cls, path: str | Path) -> "CityConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bounds": {"south": float(self.south), "west": float(self.west),
                       "north": float(self.north), "east": float(self.east)},
            "spacing_m": float(self.spacing_m),
            "epsilon_m": float(self.epsilon_m),
            "utc_offset_minutes": int(self.utc_offset_minutes),
        }

    def save(self, path: str | Path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def digest(self) -> bytes:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode()).digest()

    def build_mesh(self) -> Mesh:
        return Mesh(self.south, self.west, self.north, self.east, self.spacing_m)
