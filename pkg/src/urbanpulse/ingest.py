"""Point ingestion and density-field computation.

Points are parsed from CSV, bucketed by temporal resolution and scenario
part in city-local time, and accumulated into per-vertex Gaussian density
fields with a truncated kernel. Accumulation is vectorized over a fixed
window of grid vertices around each point, which is exact because the
kernel is truncated at the neighborhood radius.
"""

from __future__ import annotations

import csv
import hashlib
import io
import struct
from dataclasses import dataclass, field
from datetime import datetime, timezone, timedelta
from enum import Enum
from pathlib import Path

import numpy as np

from .geomesh import CityConfig, GeoPoint, Mesh

_EPOCH_WEEKDAY = 3  # 1970-01-01 was a Thursday, Monday = 0


class Resolution(Enum):
    """Temporal resolution: number of steps the data is grouped into."""

    ALL = ("All", 1)
    MONTH = ("Month", 12)
    DAY = ("Day", 7)
    HOUR = ("Hour", 24)

    def __init__(self, label: str, step_count: int):
        self.label = label
        self.step_count = step_count

    @classmethod
    def from_label(cls, label: str) -> "Resolution":
        for r in cls:
            if r.label.lower() == label.lower():
                return r
        raise ValueError(f"unknown resolution {label!r}")


# Canonical resolution order used for feature vectors and file layout.
RESOLUTION_ORDER = (Resolution.ALL, Resolution.MONTH, Resolution.DAY,
                    Resolution.HOUR)


class ScenarioFamily(Enum):
    DEFAULT = "Default"
    PARTS_OF_WEEK = "PartsOfWeek"
    SEASONS = "Seasons"
    PARTS_OF_DAY = "PartsOfDay"

    @classmethod
    def from_label(cls, label: str) -> "ScenarioFamily":
        for f in cls:
            if f.value.lower() == label.lower():
                return f
        raise ValueError(f"unknown scenario family {label!r}")


SCENARIO_RESOLUTIONS: dict[ScenarioFamily, tuple[Resolution, ...]] = {
    ScenarioFamily.DEFAULT: (Resolution.ALL, Resolution.MONTH,
                             Resolution.DAY, Resolution.HOUR),
    ScenarioFamily.PARTS_OF_WEEK: (Resolution.ALL, Resolution.MONTH,
                                   Resolution.HOUR),
    ScenarioFamily.SEASONS: (Resolution.ALL, Resolution.DAY, Resolution.HOUR),
    ScenarioFamily.PARTS_OF_DAY: (Resolution.ALL, Resolution.MONTH,
                                  Resolution.DAY),
}

SCENARIO_PARTS: dict[ScenarioFamily, tuple[str, ...]] = {
    ScenarioFamily.DEFAULT: ("Default",),
    ScenarioFamily.PARTS_OF_WEEK: ("Weekday", "Weekend"),
    ScenarioFamily.SEASONS: ("Spring", "Summer", "Fall", "Winter"),
    ScenarioFamily.PARTS_OF_DAY: ("Morning", "Afternoon", "Evening", "Night"),
}

_SEASON_BY_MONTH = ["Winter", "Winter", "Spring", "Spring", "Spring",
                    "Summer", "Summer", "Summer", "Fall", "Fall", "Fall",
                    "Winter"]


@dataclass(frozen=True)
class Scenario:
    """One analysis condition: a family, one of its parts, and the
    resolutions analyzed for that family."""

    family: ScenarioFamily
    part: str

    def __post_init__(self):
        if self.part not in SCENARIO_PARTS[self.family]:
            raise ValueError(
                f"part {self.part!r} not valid for {self.family.value}")

    @property
    def resolutions(self) -> tuple[Resolution, ...]:
        return SCENARIO_RESOLUTIONS[self.family]


@dataclass(frozen=True)
class DensityParams:
    """Gaussian kernel scale and truncation radius, in meters."""

    epsilon: float = 100.0
    radius: float = 500.0

    def __post_init__(self):
        if not (self.radius >= self.epsilon > 0):
            raise ValueError("require radius >= epsilon > 0")


def _local_seconds(t: np.ndarray, utc_offset_minutes: int) -> np.ndarray:
    return np.asarray(t, dtype=np.int64) + 60 * utc_offset_minutes


def _month_of(local: np.ndarray) -> np.ndarray:
    months = local.astype("datetime64[s]").astype("datetime64[M]")
    return months.astype(np.int64) % 12


def _weekday_of(local: np.ndarray) -> np.ndarray:
    return (local // 86400 + _EPOCH_WEEKDAY) % 7


def _hour_of(local: np.ndarray) -> np.ndarray:
    return (local % 86400) // 3600


def bucket(timestamp: int, res: Resolution, utc_offset_minutes: int = 0) -> int:
    """Step index of one UTC timestamp under a resolution, in city-local
    time (fixed offset, no DST). Month: Jan=0. Day: Monday=0."""
    local = _local_seconds(np.array([timestamp]), utc_offset_minutes)
    return int(bucket_all(local, res)[0])


def bucket_all(local: np.ndarray, res: Resolution) -> np.ndarray:
    """Vectorized step indices for city-local epoch seconds."""
    if res is Resolution.ALL:
        return np.zeros(len(local), dtype=np.int64)
    if res is Resolution.MONTH:
        return _month_of(local)
    if res is Resolution.DAY:
        return _weekday_of(local)
    return _hour_of(local)


def scenario_member(timestamp: int, family: ScenarioFamily,
                    utc_offset_minutes: int = 0) -> str:
    """Scenario part a timestamp belongs to, in city-local time."""
    local = _local_seconds(np.array([timestamp]), utc_offset_minutes)
    return scenario_members(local, family)[0]


def scenario_members(local: np.ndarray, family: ScenarioFamily) -> list[str]:
    """Vectorized scenario part labels for city-local epoch seconds."""
    if family is ScenarioFamily.DEFAULT:
        return ["Default"] * len(local)
    if family is ScenarioFamily.PARTS_OF_WEEK:
        wd = _weekday_of(local)
        return ["Weekend" if d >= 5 else "Weekday" for d in wd]
    if family is ScenarioFamily.SEASONS:
        return [_SEASON_BY_MONTH[m] for m in _month_of(local)]
    hours = _hour_of(local)
    parts = SCENARIO_PARTS[ScenarioFamily.PARTS_OF_DAY]
    # 06-12 Morning, 12-18 Afternoon, 18-24 Evening, 00-06 Night
    return [parts[int((h - 6) % 24) // 6] for h in hours]


def scenario_member_mask(local: np.ndarray, scenario: Scenario) -> np.ndarray:
    members = scenario_members(local, scenario.family)
    return np.array([m == scenario.part for m in members], dtype=bool)


@dataclass
class PointSet:
    """Accepted data points in the mesh frame (parallel arrays)."""

    x: np.ndarray
    y: np.ndarray
    t: np.ndarray  # UTC epoch seconds, int64
    w: np.ndarray  # non-negative weights

    def __len__(self) -> int:
        return len(self.x)


@dataclass
class RejectionReport:
    accepted: int = 0
    malformed: int = 0
    out_of_bounds: int = 0
    messages: list[str] = field(default_factory=list)

    @property
    def rejected(self) -> int:
        return self.malformed + self.out_of_bounds


def _parse_timestamp(s: str) -> int:
    s = s.strip()
    try:
        return int(float(s))
    except ValueError:
        pass
    dt = datetime.fromisoformat(s.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def parse_points(stream: io.TextIOBase, config: CityConfig, mesh: Mesh,
                 radius: float = 500.0) -> tuple[PointSet, RejectionReport]:
    """Parse a CSV of points (``lat,lon,timestamp[,weight]``, header
    required).

    Points farther than ``radius`` outside the mesh are dropped and
    counted; malformed rows are counted, never fatal. Missing required
    columns are fatal.
    """
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("empty input: missing CSV header")
    cols = {name.strip().lower(): k for k, name in enumerate(header)}
    for required in ("lat", "lon", "timestamp"):
        if required not in cols:
            raise ValueError(f"missing required column {required!r}")
    i_lat, i_lon, i_ts = cols["lat"], cols["lon"], cols["timestamp"]
    i_w = cols.get("weight")

    report = RejectionReport()
    xs, ys, ts, ws = [], [], [], []
    xmax = (mesh.nx - 1) * mesh.spacing
    ymax = (mesh.ny - 1) * mesh.spacing
    for row in reader:
        if not row:
            continue
        try:
            lat = float(row[i_lat])
            lon = float(row[i_lon])
            t = _parse_timestamp(row[i_ts])
            w = float(row[i_w]) if i_w is not None and row[i_w].strip() else 1.0
            if not (np.isfinite(lat) and np.isfinite(lon) and np.isfinite(w)
                    and w >= 0 and -90 <= lat <= 90 and -180 <= lon <= 180):
                raise ValueError
        except (ValueError, IndexError):
            report.malformed += 1
            continue
        p = mesh.project_point(GeoPoint(lat, lon))
        if (p.x < -radius or p.x > xmax + radius
                or p.y < -radius or p.y > ymax + radius):
            report.out_of_bounds += 1
            continue
        xs.append(p.x)
        ys.append(p.y)
        ts.append(t)
        ws.append(w)
    report.accepted = len(xs)
    if report.accepted == 0:
        report.messages.append("no points accepted")
    points = PointSet(
        x=np.asarray(xs, dtype=np.float64),
        y=np.asarray(ys, dtype=np.float64),
        t=np.asarray(ts, dtype=np.int64),
        w=np.asarray(ws, dtype=np.float64),
    )
    return points, report


@dataclass
class ScalarField:
    """Raw per-vertex values of one (resolution, step), plus the shared
    normalization divisor of its resolution."""

    resolution: Resolution
    step: int
    raw: np.ndarray
    resolution_max: float = 0.0

    @property
    def norm(self) -> np.ndarray:
        """Values normalized by the resolution-wide maximum (all zeros if
        that maximum is zero)."""
        if self.resolution_max == 0.0:
            return np.zeros_like(self.raw)
        return self.raw / self.resolution_max


@dataclass
class FieldCollection:
    """All fields of one scenario part: one per (resolution, step)."""

    scenario: Scenario
    fields: dict[tuple[Resolution, int], ScalarField]

    def field(self, res: Resolution, step: int) -> ScalarField:
        return self.fields[(res, step)]

    def steps(self, res: Resolution):
        return range(res.step_count)

    def __len__(self) -> int:
        return len(self.fields)


def compute_fields(points: PointSet, mesh: Mesh, scenario: Scenario,
                   params: DensityParams, utc_offset_minutes: int = 0,
                   chunk_size: int = 65536, normalized: bool = True,
                   ) -> FieldCollection:
    """Accumulate truncated-Gaussian density fields for one scenario part.

    Raw value at vertex p for step t is
    ``sum over points x_i in step t with d <= radius of w_i * exp(-d^2/eps^2)``;
    contributions beyond the radius are exactly zero. Candidate vertices are
    enumerated from the vertex grid directly (window of ceil(radius/spacing)
    cells around each point), which prunes exactly like a grid index with
    cell size equal to the radius.
    """
    resolutions = scenario.resolutions
    nv = mesh.vertex_count
    acc = {
        res: np.zeros((res.step_count, nv), dtype=np.float64)
        for res in resolutions
    }

    local = _local_seconds(points.t, utc_offset_minutes)
    mask = scenario_member_mask(local, scenario) if len(points) else \
        np.zeros(0, dtype=bool)
    x, y, w = points.x[mask], points.y[mask], points.w[mask]
    local = local[mask]
    steps = {res: bucket_all(local, res) for res in resolutions}

    s = mesh.spacing
    eps2 = params.epsilon ** 2
    r2 = params.radius ** 2
    half = int(np.ceil((params.radius + s / 2) / s - 0.5))
    offs = np.arange(-half, half + 1)

    for lo in range(0, len(x), chunk_size):
        hi = min(lo + chunk_size, len(x))
        cx, cy, cw = x[lo:hi], y[lo:hi], w[lo:hi]
        ic = np.rint(cx / s).astype(np.int64)
        jc = np.rint(cy / s).astype(np.int64)
        gi = ic[:, None] + offs[None, :]           # (n, m)
        gj = jc[:, None] + offs[None, :]           # (n, m)
        dx = cx[:, None] - gi * s
        dy = cy[:, None] - gj * s
        d2 = dx[:, :, None] ** 2 + dy[:, None, :] ** 2   # (n, m, m)
        valid = ((gi >= 0) & (gi < mesh.nx))[:, :, None] & \
                ((gj >= 0) & (gj < mesh.ny))[:, None, :] & (d2 <= r2)
        contrib = np.where(valid, np.exp(-d2 / eps2), 0.0) * cw[:, None, None]
        vid = np.where(valid, gj[:, None, :] * mesh.nx + gi[:, :, None], 0)

        for res in resolutions:
            st = steps[res][lo:hi]
            for step in np.unique(st):
                sel = st == step
                acc[res][step] += np.bincount(
                    vid[sel].ravel(), weights=contrib[sel].ravel(),
                    minlength=nv)

    fields = {}
    for res in resolutions:
        for step in range(res.step_count):
            fields[(res, step)] = ScalarField(res, step, acc[res][step])
    collection = FieldCollection(scenario=scenario, fields=fields)
    if normalized:
        normalize(collection)
    return collection


def normalize(collection: FieldCollection) -> FieldCollection:
    """Record each resolution's maximum raw value as the shared
    normalization divisor (in place)."""
    for res in collection.scenario.resolutions:
        m = max(float(collection.field(res, t).raw.max(initial=0.0))
                for t in collection.steps(res))
        for t in collection.steps(res):
            collection.field(res, t).resolution_max = m
    return collection


# ---------------------------------------------------------------------------
# UPF1 field file format

_UPF_MAGIC = b"UPF1"
_UPF_VERSION = 1
_RES_CODE = {Resolution.ALL: 0, Resolution.MONTH: 1, Resolution.DAY: 2,
             Resolution.HOUR: 3}
_RES_FROM_CODE = {v: k for k, v in _RES_CODE.items()}


def write_fields(collection: FieldCollection, path: str | Path,
                 config: CityConfig) -> None:
    """Serialize a field collection to the UPF1 binary format."""
    nv = None
    for f in collection.fields.values():
        nv = len(f.raw) if nv is None else nv
        if len(f.raw) != nv:
            raise ValueError("inconsistent field lengths")
    mesh = config.build_mesh()
    if nv != mesh.vertex_count:
        raise ValueError("field length does not match config mesh")
    fam = collection.scenario.family.value.encode()
    part = collection.scenario.part.encode()
    with open(path, "wb") as fh:
        fh.write(_UPF_MAGIC)
        fh.write(struct.pack("<I", _UPF_VERSION))
        fh.write(config.digest())
        fh.write(struct.pack("<IId", mesh.nx, mesh.ny, mesh.spacing))
        fh.write(struct.pack("<B", len(fam)) + fam)
        fh.write(struct.pack("<B", len(part)) + part)
        fh.write(struct.pack("<I", len(collection.fields)))
        for res in collection.scenario.resolutions:
            for step in collection.steps(res):
                f = collection.field(res, step)
                fh.write(struct.pack("<BHd", _RES_CODE[res], step,
                                     f.resolution_max))
                fh.write(np.ascontiguousarray(
                    f.raw, dtype="<f8").tobytes())


def read_fields(path: str | Path, config: CityConfig | None = None,
                ) -> FieldCollection:
    """Read a UPF1 file. If ``config`` is given, its digest and mesh
    dimensions are validated against the file header."""
    with open(path, "rb") as fh:
        data = fh.read()
    buf = memoryview(data)
    if len(buf) < 8 or bytes(buf[:4]) != _UPF_MAGIC:
        raise ValueError("not a UPF1 file (bad magic)")
    (version,) = struct.unpack_from("<I", buf, 4)
    if version != _UPF_VERSION:
        raise ValueError(f"unsupported UPF1 version {version}")
    pos = 8
    digest = bytes(buf[pos:pos + 32]); pos += 32
    nx, ny, spacing = struct.unpack_from("<IId", buf, pos); pos += 16
    (nfam,) = struct.unpack_from("<B", buf, pos); pos += 1
    fam = bytes(buf[pos:pos + nfam]).decode(); pos += nfam
    (npart,) = struct.unpack_from("<B", buf, pos); pos += 1
    part = bytes(buf[pos:pos + npart]).decode(); pos += npart
    (nfields,) = struct.unpack_from("<I", buf, pos); pos += 4

    if config is not None:
        mesh = config.build_mesh()
        if (nx, ny) != (mesh.nx, mesh.ny) or spacing != mesh.spacing:
            raise ValueError(
                f"mesh dimension mismatch: file {nx}x{ny}@{spacing}, "
                f"config {mesh.nx}x{mesh.ny}@{mesh.spacing}")
        if digest != config.digest():
            raise ValueError("city-config digest mismatch")

    scenario = Scenario(ScenarioFamily.from_label(fam), part)
    nv = nx * ny
    fields = {}
    for _ in range(nfields):
        if pos + 11 + 8 * nv > len(buf):
            raise ValueError("truncated UPF1 file")
        code, step, res_max = struct.unpack_from("<BHd", buf, pos); pos += 11
        res = _RES_FROM_CODE[code]
        raw = np.frombuffer(buf, dtype="<f8", count=nv, offset=pos).copy()
        pos += 8 * nv
        fields[(res, step)] = ScalarField(res, step, raw, res_max)
    expected = sum(r.step_count for r in scenario.resolutions)
    if len(fields) != expected:
        raise ValueError(
            f"incomplete collection: {len(fields)} fields, expected {expected}")
    return FieldCollection(scenario=scenario, fields=fields)


def dataset_digest(config: CityConfig, input_bytes: bytes) -> str:
    """Hex digest identifying (config, input data); keys catalogs and ETags."""
    h = hashlib.sha256()
    h.update(config.digest())
    h.update(hashlib.sha256(input_bytes).digest())
    return h.hexdigest()
