"""Critical points and 0-dimensional super-level-set persistence.

Vertices are compared in a simulated-perturbation total order: higher
value first, ties broken by ascending vertex id. The sweep processes
vertices in that order with a union-find over already-seen neighbors;
a maximum creates a component, a saddle destroys the younger ones it
merges (elder rule), and the global maximum is finally paired with the
global minimum (extended persistence) so every maximum has finite
persistence.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geomesh import Mesh


class CriticalType(Enum):
    MAXIMUM = "maximum"
    MINIMUM = "minimum"
    SADDLE = "saddle"
    REGULAR = "regular"


@dataclass(frozen=True)
class Classification:
    kind: CriticalType
    multiplicity: int = 0  # saddles: lower-link component count - 1


@dataclass(frozen=True)
class PersistencePair:
    creator: int      # maximum vertex
    destroyer: int    # saddle, or the global minimum for the global maximum
    persistence: float


def total_order(values: np.ndarray) -> np.ndarray:
    """Vertex ids sorted descending in the perturbed total order
    (descending value, ascending id on ties)."""
    return np.argsort(-np.asarray(values), kind="stable")


def _is_above(values, u: int, v: int) -> bool:
    # u above v in the total order
    return values[u] > values[v] or (values[u] == values[v] and u < v)


def _link_components(link: list[int], above: list[bool], cyclic: bool,
                     want: bool) -> int:
    """Number of maximal runs with above == want, in cyclic or path order.

    Valid because consecutive link vertices are adjacent in the mesh, and
    non-consecutive ones are not.
    """
    flags = [a == want for a in above]
    if not any(flags):
        return 0
    if all(flags):
        return 1
    runs = sum(1 for k, f in enumerate(flags) if f and not flags[k - 1])
    if not cyclic and flags[0] and flags[-1]:
        # wrap counted one run too few on a path only when both ends are set
        # and the wrap-around k=0 comparison merged them
        runs += 1
    return runs


def classify(values: np.ndarray, mesh: Mesh, v: int) -> Classification:
    """Classify vertex ``v`` of the field by upper/lower link components."""
    link = mesh.vertex_link(v)
    above = [_is_above(values, u, v) for u in link]
    cyclic = mesh.is_interior(v)
    upper = _link_components(link, above, cyclic, True)
    lower = _link_components(link, above, cyclic, False)
    if upper == 0:
        return Classification(CriticalType.MAXIMUM)
    if lower == 0:
        return Classification(CriticalType.MINIMUM)
    if upper == 1 and lower == 1:
        return Classification(CriticalType.REGULAR)
    return Classification(CriticalType.SADDLE, multiplicity=lower - 1)


def sweep_persistence(values: np.ndarray, mesh: Mesh) -> list[PersistencePair]:
    """Persistence pairs of all maxima of the field.

    Returns one pair per maximum; the global maximum is paired with the
    global minimum. Pairs are listed in sweep (merge) order with the
    extended pair last.
    """
    values = np.asarray(values, dtype=np.float64)
    n = mesh.vertex_count
    if len(values) != n:
        raise ValueError("field length does not match mesh")
    order = total_order(values)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    neighbors = mesh.neighbor_lists()

    parent = np.arange(n, dtype=np.int64)
    creator = np.full(n, -1, dtype=np.int64)

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    pairs: list[PersistencePair] = []
    pos_list = pos.tolist()
    for v in order.tolist():
        pv = pos_list[v]
        roots = {find(u) for u in neighbors[v] if pos_list[u] < pv}
        if not roots:
            creator[v] = v
            continue
        # survivor: component whose creator is highest in the total order
        ordered = sorted(roots, key=lambda r: pos_list[creator[r]])
        survivor = ordered[0]
        parent[v] = survivor
        for r in ordered[1:]:
            c = int(creator[r])
            pairs.append(PersistencePair(c, v, float(values[c] - values[v])))
            parent[r] = survivor

    gmax = int(order[0])
    gmin = int(order[-1])
    pairs.append(PersistencePair(gmax, gmin,
                                 float(values[gmax] - values[gmin])))
    return pairs


def high_persistent_maxima(pairs: list[PersistencePair],
                           threshold: float) -> set[int]:
    """Creators with persistence strictly above the threshold."""
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    return {p.creator for p in pairs if p.persistence > threshold}


def maxima_of(pairs: list[PersistencePair]) -> set[int]:
    """All creators (the maxima of the field)."""
    return {p.creator for p in pairs}


def diagram_rows(pairs: list[PersistencePair]):
    """Rows for the CSV debug dump: creator, destroyer, persistence."""
    for p in pairs:
        yield p.creator, p.destroyer, p.persistence
