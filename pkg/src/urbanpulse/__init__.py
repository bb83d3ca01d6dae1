"""Urban pulse: multi-resolution topological analysis of spatio-temporal
urban point data.

The pipeline turns a CSV of (lat, lon, timestamp[, weight]) points into
per-resolution density fields over a city grid mesh, extracts prominent
"pulse" locations via super-level-set persistence, summarizes them as
beats and feature vectors, and supports ranking and cross-city similarity
queries through a CLI and a read-only HTTP API.
"""

from .geomesh import (CityConfig, GeoPoint, Mesh, ProjectedPoint, build_mesh,
                      project, unproject)
from .ingest import (DensityParams, FieldCollection, PointSet, Resolution,
                     ScalarField, Scenario, ScenarioFamily, bucket,
                     compute_fields, normalize, parse_points, read_fields,
                     scenario_member, write_fields)
from .topology import (Classification, CriticalType, PersistencePair,
                       classify, high_persistent_maxima, sweep_persistence)
from .pulse import (Beats, DEFAULT_THRESHOLD, Pulse, PulseLocation,
                    SimilarityResult, build_pulses, cluster_locations,
                    compute_beats, feature_vector, prominent_locations,
                    similar_pulses, similarity)

__version__ = "0.1.0"

__all__ = [
    "CityConfig", "GeoPoint", "Mesh", "ProjectedPoint", "build_mesh",
    "project", "unproject",
    "DensityParams", "FieldCollection", "PointSet", "Resolution",
    "ScalarField", "Scenario", "ScenarioFamily", "bucket", "compute_fields",
    "normalize", "parse_points", "read_fields", "scenario_member",
    "write_fields",
    "Classification", "CriticalType", "PersistencePair", "classify",
    "high_persistent_maxima", "sweep_persistence",
    "Beats", "DEFAULT_THRESHOLD", "Pulse", "PulseLocation",
    "SimilarityResult", "build_pulses", "cluster_locations", "compute_beats",
    "feature_vector", "prominent_locations", "similar_pulses", "similarity",
]
