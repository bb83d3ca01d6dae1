"""Shared fixtures and independent oracles used across the test suite."""

from __future__ import annotations

import math

import numpy as np
import pytest

from urbanpulse.geomesh import EARTH_RADIUS_M, CityConfig, Mesh


def metric_mesh(width_m: float, height_m: float, spacing: float = 50.0,
                south: float = 40.0, west: float = -74.0) -> Mesh:
    """Mesh whose bounding box has (approximately exact) metric size."""
    north = south + math.degrees(height_m / EARTH_RADIUS_M)
    clat = (south + north) / 2.0
    east = west + math.degrees(
        width_m / (EARTH_RADIUS_M * math.cos(math.radians(clat))))
    return Mesh(south, west, north, east, spacing)


def metric_config(name: str, width_m: float, height_m: float,
                  spacing: float = 50.0, epsilon: float = 100.0,
                  south: float = 40.0, west: float = -74.0,
                  utc_offset_minutes: int = 0) -> CityConfig:
    north = south + math.degrees(height_m / EARTH_RADIUS_M)
    clat = (south + north) / 2.0
    east = west + math.degrees(
        width_m / (EARTH_RADIUS_M * math.cos(math.radians(clat))))
    return CityConfig(name=name, south=south, west=west, north=north,
                      east=east, spacing_m=spacing, epsilon_m=epsilon,
                      utc_offset_minutes=utc_offset_minutes)


def brute_force_density(x, y, w, mesh, epsilon, radius):
    """O(points x vertices) reference for the truncated Gaussian field."""
    vx, vy = mesh.vertex_positions()
    out = np.zeros(mesh.vertex_count)
    for px, py, pw in zip(x, y, w):
        d2 = (vx - px) ** 2 + (vy - py) ** 2
        out += np.where(d2 <= radius ** 2, pw * np.exp(-d2 / epsilon ** 2),
                        0.0)
    return out


def brute_force_persistence(values, mesh):
    """Threshold-sweep oracle for super-level-set persistence.

    Adds vertices one by one in the perturbed total order and recomputes
    connected components of the processed subgraph from scratch each step.
    The head of a component is its order-highest vertex; a head that stops
    being a head dies at the vertex just added. The last surviving head
    (the global maximum) pairs with the global minimum.
    """
    n = mesh.vertex_count
    values = np.asarray(values, dtype=np.float64)
    order = sorted(range(n), key=lambda v: (-values[v], v))
    pos = {v: k for k, v in enumerate(order)}
    neighbors = mesh.neighbor_lists()

    processed: set[int] = set()
    alive: set[int] = set()
    pairs = []
    for v in order:
        processed.add(v)
        seen: set[int] = set()
        heads: set[int] = set()
        for u in processed:
            if u in seen:
                continue
            comp = {u}
            stack = [u]
            while stack:
                w = stack.pop()
                for nb in neighbors[w]:
                    if nb in processed and nb not in comp:
                        comp.add(nb)
                        stack.append(nb)
            seen |= comp
            heads.add(min(comp, key=lambda q: pos[q]))
        for dead in alive - heads:
            pairs.append((dead, v, values[dead] - values[v]))
        alive = heads
    assert alive == {order[0]}
    pairs.append((order[0], order[-1], values[order[0]] - values[order[-1]]))
    return pairs


def as_pair_set(pairs):
    """(creator, destroyer) -> persistence map for order-free comparison."""
    out = {}
    for p in pairs:
        if hasattr(p, "creator"):
            out[(p.creator, p.destroyer)] = p.persistence
        else:
            out[(p[0], p[1])] = p[2]
    return out


@pytest.fixture
def small_mesh():
    return metric_mesh(400, 400, spacing=50)
