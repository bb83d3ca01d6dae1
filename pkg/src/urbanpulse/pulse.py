"""Pulse extraction and analysis.

A pulse is a clustered prominent location together with its beats: per
resolution, a significant-beat bit sequence (high-persistent maximum
present), a maxima-beat bit sequence (any maximum present, zero-activity
steps suppressed), and a function beat (peak field value over the
location's vertices). Feature vectors, ranks, and the similarity measure
are derived from the beats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geomesh import Mesh, ProjectedPoint
from .ingest import FieldCollection, Resolution, RESOLUTION_ORDER, Scenario
from . import topology

DEFAULT_THRESHOLD = 0.2

# Feature-vector beat order within each resolution.
BEAT_KINDS = ("significant", "maxima", "function")


@dataclass(frozen=True)
class PulseLocation:
    """A cluster of prominent vertices and its centroid."""

    id: int
    member_vertices: tuple[int, ...]
    representative: ProjectedPoint


@dataclass
class Beats:
    """The three per-resolution time series of one location."""

    significant: dict[Resolution, np.ndarray]   # 0/1
    maxima: dict[Resolution, np.ndarray]        # 0/1
    function: dict[Resolution, np.ndarray]      # normalized, in [0, 1]
    function_raw: dict[Resolution, np.ndarray]

    @property
    def resolutions(self) -> tuple[Resolution, ...]:
        return tuple(r for r in RESOLUTION_ORDER if r in self.significant)


@dataclass
class Pulse:
    location: PulseLocation
    beats: Beats
    feature: np.ndarray
    rank: float
    resolution_ranks: dict[Resolution, float]

    @property
    def id(self) -> int:
        return self.location.id


class FieldTopology:
    """Per-field persistence results for one collection: pairs, maxima,
    and high-persistent maxima keyed by (resolution, step)."""

    def __init__(self, collection: FieldCollection, mesh: Mesh,
                 threshold: float = DEFAULT_THRESHOLD):
        self.collection = collection
        self.threshold = threshold
        self.pairs: dict[tuple[Resolution, int], list] = {}
        self.maxima: dict[tuple[Resolution, int], set[int]] = {}
        self.significant: dict[tuple[Resolution, int], set[int]] = {}
        for key, f in collection.fields.items():
            pairs = topology.sweep_persistence(f.norm, mesh)
            self.pairs[key] = pairs
            self.maxima[key] = topology.maxima_of(pairs)
            self.significant[key] = topology.high_persistent_maxima(
                pairs, threshold)


def prominent_locations(topo: FieldTopology) -> set[int]:
    """Vertices that are a high-persistent maximum of at least one field."""
    out: set[int] = set()
    for hp in topo.significant.values():
        out |= hp
    return out


def cluster_locations(vertices: set[int], mesh: Mesh,
                      epsilon: float) -> list[tuple[tuple[int, ...],
                                                    ProjectedPoint]]:
    """Single-linkage clusters of vertices under the epsilon-merge
    relation; returns (member tuple, centroid) per cluster, unordered."""
    verts = sorted(vertices)
    if not verts:
        return []
    idx = {v: k for k, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    # Hash vertices into cells of size epsilon; candidates for a merge are
    # confined to the 3x3 neighborhood of a cell.
    s = mesh.spacing
    cells: dict[tuple[int, int], list[int]] = {}
    coords = {}
    for v in verts:
        i, j = mesh.vertex_ij(v)
        coords[v] = (i * s, j * s)
        cell = (int(i * s // epsilon), int(j * s // epsilon))
        cells.setdefault(cell, []).append(v)
    eps2 = epsilon * epsilon
    for (ci, cj), members in cells.items():
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                other = cells.get((ci + di, cj + dj))
                if other is None:
                    continue
                for u in members:
                    ux, uy = coords[u]
                    for v in other:
                        if v <= u:
                            continue
                        vx, vy = coords[v]
                        if (ux - vx) ** 2 + (uy - vy) ** 2 <= eps2:
                            union(idx[u], idx[v])

    groups: dict[int, list[int]] = {}
    for v in verts:
        groups.setdefault(find(idx[v]), []).append(v)
    out = []
    for members in groups.values():
        xs = [coords[v][0] for v in members]
        ys = [coords[v][1] for v in members]
        rep = ProjectedPoint(sum(xs) / len(xs), sum(ys) / len(ys))
        out.append((tuple(sorted(members)), rep))
    return out


def compute_beats(members: tuple[int, ...], collection: FieldCollection,
                  topo: FieldTopology) -> Beats:
    """Beats of one location over all resolutions of the scenario.

    Bit beats OR over member vertices; maxima beats additionally require a
    positive raw value so the technical maximum of an all-zero step never
    registers. Function beats take the max over members.
    """
    mset = set(members)
    midx = np.fromiter(mset, dtype=np.int64)
    sig, mx, fn, fr = {}, {}, {}, {}
    for res in collection.scenario.resolutions:
        nsteps = res.step_count
        sig[res] = np.zeros(nsteps, dtype=np.int8)
        mx[res] = np.zeros(nsteps, dtype=np.int8)
        fn[res] = np.zeros(nsteps, dtype=np.float64)
        fr[res] = np.zeros(nsteps, dtype=np.float64)
        for t in range(nsteps):
            f = collection.field(res, t)
            key = (res, t)
            if mset & topo.significant[key]:
                sig[res][t] = 1
            if any(v in mset and f.raw[v] > 0 for v in topo.maxima[key]):
                mx[res][t] = 1
            fn[res][t] = float(f.norm[midx].max())
            fr[res][t] = float(f.raw[midx].max())
    return Beats(significant=sig, maxima=mx, function=fn, function_raw=fr)


def feature_vector(beats: Beats) -> np.ndarray:
    """3 x |Res| entries in canonical order (All<Month<Day<Hour;
    significant<maxima<function). Bit beats contribute their mean,
    function beats their (normalized) maximum."""
    entries = []
    for res in beats.resolutions:
        t = res.step_count
        entries.append(float(beats.significant[res].sum()) / t)
        entries.append(float(beats.maxima[res].sum()) / t)
        entries.append(float(beats.function[res].max()))
    return np.asarray(entries, dtype=np.float64)


def rank_of(feature: np.ndarray) -> float:
    return float(np.linalg.norm(feature))


def resolution_rank(beats: Beats, res: Resolution) -> float:
    """Rank restricted to one resolution's three beats."""
    t = res.step_count
    part = np.array([
        float(beats.significant[res].sum()) / t,
        float(beats.maxima[res].sum()) / t,
        float(beats.function[res].max()),
    ])
    return float(np.linalg.norm(part))


def similarity(p1: Pulse | Beats, p2: Pulse | Beats,
               use_raw: bool = False) -> float:
    """Similarity measure between two pulses: the L2 norm of per-beat
    L2 distances over the common resolutions. Lower means more similar."""
    b1 = p1.beats if isinstance(p1, Pulse) else p1
    b2 = p2.beats if isinstance(p2, Pulse) else p2
    common = [r for r in RESOLUTION_ORDER
              if r in b1.significant and r in b2.significant]
    if not common:
        raise ValueError("pulses share no common resolution")
    f1 = b1.function_raw if use_raw else b1.function
    f2 = b2.function_raw if use_raw else b2.function
    total = 0.0
    for res in common:
        total += float(np.sum((b1.significant[res].astype(np.float64)
                               - b2.significant[res]) ** 2))
        total += float(np.sum((b1.maxima[res].astype(np.float64)
                               - b2.maxima[res]) ** 2))
        total += float(np.sum((f1[res] - f2[res]) ** 2))
    return float(np.sqrt(total))


def build_pulses(collection: FieldCollection, mesh: Mesh, epsilon: float,
                 threshold: float = DEFAULT_THRESHOLD,
                 topo: FieldTopology | None = None) -> list[Pulse]:
    """Full pulse extraction for one scenario part. Pulses are returned in
    id order: descending rank, ties by representative (y, x)."""
    if topo is None:
        topo = FieldTopology(collection, mesh, threshold)
    clusters = cluster_locations(prominent_locations(topo), mesh, epsilon)
    staged = []
    for members, rep in clusters:
        beats = compute_beats(members, collection, topo)
        feat = feature_vector(beats)
        rank = rank_of(feat)
        rranks = {res: resolution_rank(beats, res)
                  for res in beats.resolutions}
        staged.append((rank, rep, members, beats, feat, rranks))
    staged.sort(key=lambda s: (-s[0], s[1].y, s[1].x))
    pulses = []
    for pid, (rank, rep, members, beats, feat, rranks) in enumerate(staged):
        loc = PulseLocation(id=pid, member_vertices=members, representative=rep)
        pulses.append(Pulse(location=loc, beats=beats, feature=feat,
                            rank=rank, resolution_ranks=rranks))
    return pulses


# ---------------------------------------------------------------------------
# Similarity queries

@dataclass
class SimilarityResult:
    source_id: int
    source_rank: float
    matches: list[tuple[int, float]]  # (target id, measure), ascending


def point_in_polygon(x: float, y: float,
                     ring: list[tuple[float, float]]) -> bool:
    """Even-odd rule; the ring may be open or closed."""
    inside = False
    n = len(ring)
    for k in range(n):
        x1, y1 = ring[k]
        x2, y2 = ring[(k + 1) % n]
        if (y1 > y) != (y2 > y):
            xcross = x1 + (y - y1) / (y2 - y1) * (x2 - x1)
            if x < xcross:
                inside = not inside
    return inside


def similar_pulses(source_pulses: list[Pulse], target_pulses: list[Pulse],
                   selected_source_ids: list[int] | None = None,
                   use_raw: bool = False) -> list[SimilarityResult]:
    """Assign every target pulse to its nearest selected source pulse.

    Results are grouped by source in descending source rank; within a
    group, matches are ordered by ascending measure. A target equidistant
    to two sources goes to the higher-ranked one.
    """
    if selected_source_ids is None:
        sources = list(source_pulses)
    else:
        wanted = set(selected_source_ids)
        sources = [p for p in source_pulses if p.id in wanted]
    if not sources:
        raise ValueError("empty source selection")
    # Higher-ranked sources first so they win measure ties.
    sources = sorted(sources, key=lambda p: (-p.rank, p.id))
    assigned: dict[int, list[tuple[int, float]]] = {p.id: [] for p in sources}
    for t in target_pulses:
        best_src, best_m = None, None
        for s in sources:
            m = similarity(s, t, use_raw=use_raw)
            if best_m is None or m < best_m:
                best_src, best_m = s.id, m
        assigned[best_src].append((t.id, best_m))
    results = []
    for s in sources:
        matches = sorted(assigned[s.id], key=lambda kv: (kv[1], kv[0]))
        results.append(SimilarityResult(source_id=s.id, source_rank=s.rank,
                                        matches=matches))
    return results


# ---------------------------------------------------------------------------
# Catalog serialization

CATALOG_VERSION = 1


def catalog_to_dict(pulses: list[Pulse], mesh: Mesh, scenario: Scenario,
                    city: str, threshold: float, epsilon: float,
                    digest: str = "") -> dict:
    out_pulses = []
    for p in pulses:
        rep_geo = mesh.unproject_point(p.location.representative)
        beats = {}
        for res in p.beats.resolutions:
            beats[res.label] = {
                "significant": p.beats.significant[res].tolist(),
                "maxima": p.beats.maxima[res].tolist(),
                "function": p.beats.function[res].tolist(),
                "function_raw": p.beats.function_raw[res].tolist(),
            }
        out_pulses.append({
            "id": p.id,
            "member_vertices": list(p.location.member_vertices),
            "representative": {
                "lat": rep_geo.lat, "lon": rep_geo.lon,
                "x": p.location.representative.x,
                "y": p.location.representative.y,
            },
            "beats": beats,
            "feature": p.feature.tolist(),
            "rank": p.rank,
            "resolution_ranks": {res.label: r
                                 for res, r in p.resolution_ranks.items()},
        })
    return {
        "version": CATALOG_VERSION,
        "city": city,
        "scenario": {"family": scenario.family.value, "part": scenario.part},
        "threshold": threshold,
        "epsilon_m": epsilon,
        "digest": digest,
        "pulses": out_pulses,
    }


def catalog_from_dict(d: dict) -> list[Pulse]:
    """Rebuild Pulse objects from a catalog dict (beats in mesh-agnostic
    form; representative kept in mesh-frame meters)."""
    pulses = []
    for pd in d["pulses"]:
        sig, mx, fn, fr = {}, {}, {}, {}
        for label, b in pd["beats"].items():
            res = Resolution.from_label(label)
            sig[res] = np.asarray(b["significant"], dtype=np.int8)
            mx[res] = np.asarray(b["maxima"], dtype=np.int8)
            fn[res] = np.asarray(b["function"], dtype=np.float64)
            fr[res] = np.asarray(b["function_raw"], dtype=np.float64)
        beats = Beats(significant=sig, maxima=mx, function=fn,
                      function_raw=fr)
        rep = pd["representative"]
        loc = PulseLocation(
            id=int(pd["id"]),
            member_vertices=tuple(pd["member_vertices"]),
            representative=ProjectedPoint(rep["x"], rep["y"]),
        )
        pulses.append(Pulse(
            location=loc, beats=beats,
            feature=np.asarray(pd["feature"], dtype=np.float64),
            rank=float(pd["rank"]),
            resolution_ranks={Resolution.from_label(k): float(v)
                              for k, v in pd["resolution_ranks"].items()},
        ))
    return pulses


def write_catalog(d: dict, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(d, fh, sort_keys=True, separators=(",", ": "), indent=1)
        fh.write("\n")


def read_catalog(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)
