import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from urbanpulse.geomesh import (EARTH_RADIUS_M, CityConfig, GeoPoint, Mesh,
                                ProjectedPoint, build_mesh, project,
                                unproject)

from conftest import metric_mesh


class TestProjection:
    def test_identity_at_origin(self):
        o = GeoPoint(40.7, -73.96)
        p = project(o, o)
        assert p.x == 0.0 and p.y == 0.0

    def test_northward_displacement(self):
        # independent evaluation of R * dlat_rad
        o = GeoPoint(40.7, -73.96)
        p = project(GeoPoint(40.701, -73.96), o)
        expected = EARTH_RADIUS_M * math.radians(0.001)
        assert p.x == 0.0
        assert p.y == pytest.approx(expected, abs=1e-9)
        assert p.y == pytest.approx(111.1949266, abs=1e-3)

    def test_eastward_displacement_at_lat_40_7(self):
        # independent evaluation of R * cos(lat) * dlon_rad
        o = GeoPoint(40.7, -73.96)
        p = project(GeoPoint(40.7, -73.959), o)
        expected = EARTH_RADIUS_M * math.cos(math.radians(40.7)) \
            * math.radians(0.001)
        assert p.y == 0.0
        assert p.x == pytest.approx(expected, abs=1e-9)
        assert p.x == pytest.approx(84.3, abs=0.05)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            GeoPoint(float("nan"), 0.0)
        with pytest.raises(ValueError):
            GeoPoint(91.0, 0.0)

    @given(dlat=st.floats(-0.1, 0.1), dlon=st.floats(-0.1, 0.1))
    def test_round_trip(self, dlat, dlon):
        o = GeoPoint(40.7, -73.96)
        p = GeoPoint(40.7 + dlat, -73.96 + dlon)
        q = unproject(project(p, o), o)
        back = project(q, o)
        orig = project(p, o)
        assert abs(back.x - orig.x) < 1e-6
        assert abs(back.y - orig.y) < 1e-6


class TestBuildMesh:
    def test_100m_square_at_spacing_50(self):
        m = metric_mesh(100, 100, spacing=50)
        assert (m.nx, m.ny) == (3, 3)
        assert m.vertex_count == 9
        assert m.triangle_count == 8

    def test_floor_arithmetic(self):
        m = metric_mesh(120, 70, spacing=50)
        assert (m.nx, m.ny) == (3, 2)
        assert m.vertex_count == 6

    def test_nyc_scale_vertex_count(self):
        # NYC-sized bounding box at 50 m spacing lands near the reported
        # ~142k vertices
        m = Mesh(40.68, -74.05, 40.88, -73.86, 50)
        assert 130_000 <= m.vertex_count <= 155_000

    def test_too_small_box_rejected(self):
        with pytest.raises(ValueError):
            metric_mesh(30, 30, spacing=50)

    def test_degenerate_bounds_rejected(self):
        with pytest.raises(ValueError):
            Mesh(40.0, -74.0, 40.0, -73.9, 50)

    def test_build_mesh_from_corner_pair(self):
        m = build_mesh((GeoPoint(40.0, -74.0), GeoPoint(40.01, -73.99)), 50)
        assert m.nx >= 2 and m.ny >= 2


class TestVertexLink:
    def test_center_of_3x3_has_6_neighbors(self):
        m = metric_mesh(100, 100, spacing=50)
        link = m.vertex_link(m.vertex_id(1, 1))
        assert len(link) == 6

    def test_corner_degrees(self):
        m = metric_mesh(100, 100, spacing=50)
        # corners on the BL->TR diagonal have 3 neighbors, off it 2
        assert len(m.vertex_link(m.vertex_id(0, 0))) == 3
        assert len(m.vertex_link(m.vertex_id(2, 2))) == 3
        assert len(m.vertex_link(m.vertex_id(2, 0))) == 2
        assert len(m.vertex_link(m.vertex_id(0, 2))) == 2

    def test_invalid_vertex(self):
        m = metric_mesh(100, 100, spacing=50)
        with pytest.raises(ValueError):
            m.vertex_link(9)
        with pytest.raises(ValueError):
            m.vertex_link(-1)

    def test_degree_set(self, small_mesh):
        degs = {len(small_mesh.vertex_link(v))
                for v in range(small_mesh.vertex_count)}
        assert degs <= {2, 3, 4, 6}

    def test_adjacency_symmetric(self, small_mesh):
        links = small_mesh.neighbor_lists()
        for v, link in enumerate(links):
            for u in link:
                assert v in links[u]

    def test_consecutive_link_entries_adjacent(self, small_mesh):
        # path/cyclic order: consecutive link vertices share an edge
        links = small_mesh.neighbor_lists()
        for v, link in enumerate(links):
            pairs = list(zip(link, link[1:]))
            if small_mesh.is_interior(v):
                pairs.append((link[-1], link[0]))
            for a, b in pairs:
                assert b in links[a]

    def test_euler_formula(self, small_mesh):
        m = small_mesh
        edges = sum(len(m.vertex_link(v)) for v in range(m.vertex_count))
        assert edges % 2 == 0
        e = edges // 2
        assert m.vertex_count - e + m.triangle_count == 1


class TestCityConfig:
    def test_round_trip(self, tmp_path):
        cfg = CityConfig(name="test", south=40.0, west=-74.0, north=40.1,
                         east=-73.9, spacing_m=50, epsilon_m=100,
                         utc_offset_minutes=-300)
        path = tmp_path / "city.json"
        cfg.save(path)
        assert CityConfig.load(path) == cfg
        assert CityConfig.load(path).digest() == cfg.digest()

    def test_digest_changes_with_config(self):
        a = CityConfig("a", 40.0, -74.0, 40.1, -73.9)
        b = CityConfig("a", 40.0, -74.0, 40.1, -73.8)
        assert a.digest() != b.digest()
