import json

import pytest
from fastapi.testclient import TestClient

from urbanpulse.service import create_app

from test_cli import write_city, write_points

pytest.importorskip("httpx")


@pytest.fixture(scope="module")
def data_root(tmp_path_factory):
    """Dataset root with one ingested city, built through the CLI layer."""
    from click.testing import CliRunner
    from urbanpulse.cli import main

    tmp_path = tmp_path_factory.mktemp("svc")
    config, config_path = write_city(tmp_path, name="apitown")
    points_path = write_points(tmp_path, config)
    root = tmp_path / "data"
    out = root / "apitown"
    runner = CliRunner()
    res = runner.invoke(main, ["ingest", "--city", str(config_path),
                               "--input", str(points_path),
                               "--scenario", "Default",
                               "--out", str(out)])
    assert res.exit_code == 0, res.output
    res = runner.invoke(main, ["pulses", "--fields", str(out)])
    assert res.exit_code == 0, res.output
    return root


@pytest.fixture(scope="module")
def client(data_root):
    return TestClient(create_app(data_root))


class TestCities:
    def test_listing(self, client):
        body = client.get("/cities").json()
        assert [c["name"] for c in body] == ["apitown"]
        city = body[0]
        assert city["scenarios"] == {"Default": ["Default"]}
        assert city["mesh"]["spacing_m"] == 50.0
        assert city["digest"]

    def test_unknown_city_404(self, client):
        r = client.get("/cities/nowhere/pulses")
        assert r.status_code == 404
        assert set(r.json()) == {"code", "message"}
        assert r.json()["code"] == "unknown_city"


class TestPulses:
    def test_catalog(self, client):
        r = client.get("/cities/apitown/pulses")
        assert r.status_code == 200
        body = r.json()
        assert body["city"] == "apitown"
        assert len(body["pulses"]) == 2
        ranks = [p["rank"] for p in body["pulses"]]
        assert ranks == sorted(ranks, reverse=True)

    def test_etag_and_reproducibility(self, client):
        r1 = client.get("/cities/apitown/pulses")
        r2 = client.get("/cities/apitown/pulses")
        assert r1.headers["etag"] == r2.headers["etag"]
        assert r1.content == r2.content

    def test_unknown_scenario_404(self, client):
        r = client.get("/cities/apitown/pulses",
                       params={"scenario": "Weather"})
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_scenario"

    def test_missing_catalog_404(self, client):
        r = client.get("/cities/apitown/pulses",
                       params={"scenario": "Seasons", "part": "Winter"})
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_catalog"


class TestFields:
    def test_normalized_field(self, client):
        r = client.get("/cities/apitown/fields/Default/Default/Hour/15")
        assert r.status_code == 200
        body = r.json()
        assert body["normalized"] is True
        assert body["resolution"] == "Hour"
        assert len(body["values"]) == body["nx"] * body["ny"]
        assert all(0.0 <= v <= 1.0 for v in body["values"])

    def test_raw_field(self, client):
        r = client.get("/cities/apitown/fields/Default/Default/All/0",
                       params={"norm": "false"})
        body = r.json()
        assert body["normalized"] is False
        assert max(body["values"]) == pytest.approx(body["resolution_max"],
                                                    abs=1e-6)

    def test_step_out_of_range_400(self, client):
        r = client.get("/cities/apitown/fields/Default/Default/Hour/25")
        assert r.status_code == 400
        assert r.json()["code"] == "invalid_step"

    def test_non_integer_step_400(self, client):
        r = client.get("/cities/apitown/fields/Default/Default/Hour/abc")
        assert r.status_code == 400
        assert r.json()["code"] == "invalid_request"

    def test_unknown_resolution_404(self, client):
        r = client.get("/cities/apitown/fields/Default/Default/Minute/0")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_resolution"


class TestBeats:
    def test_all_resolutions(self, client):
        r = client.get("/cities/apitown/pulses/0/beats")
        assert r.status_code == 200
        body = r.json()
        assert body["id"] == 0
        assert set(body["beats"]) == {"All", "Month", "Day", "Hour"}
        hour = body["beats"]["Hour"]
        assert len(hour["significant"]) == 24
        assert len(hour["maxima"]) == 24
        assert len(hour["function"]) == 24
        assert set(hour["significant"]) <= {0, 1}

    def test_single_resolution_filter(self, client):
        r = client.get("/cities/apitown/pulses/0/beats",
                       params={"resolution": "Day"})
        assert set(r.json()["beats"]) == {"Day"}

    def test_unknown_pulse_404(self, client):
        r = client.get("/cities/apitown/pulses/99/beats")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_pulse"


class TestSimilarity:
    @staticmethod
    def ring_around(client, pulse_id, pad=0.002):
        cat = client.get("/cities/apitown/pulses").json()
        rep = next(p["representative"] for p in cat["pulses"]
                   if p["id"] == pulse_id)
        lon, lat = rep["lon"], rep["lat"]
        return [[lon - pad, lat - pad], [lon + pad, lat - pad],
                [lon + pad, lat + pad], [lon - pad, lat + pad],
                [lon - pad, lat - pad]]

    def request(self, client, **overrides):
        body = {"source_city": "apitown", "scenario": "Default",
                "part": "Default", "target_city": "apitown",
                "region": self.ring_around(client, 0)}
        body.update(overrides)
        return client.post("/similarity", json=body)

    def test_self_similarity(self, client):
        r = self.request(client)
        assert r.status_code == 200
        groups = r.json()
        assert [g["source"] for g in groups] == [0]
        matches = groups[0]["matches"]
        # best match of a pulse against its own catalog is itself at 0
        assert matches[0]["target"] == 0
        assert matches[0]["measure"] == pytest.approx(0.0)
        measures = [m["measure"] for m in matches]
        assert measures == sorted(measures)

    def test_degenerate_polygon_400(self, client):
        r = self.request(client, region=[[0, 0], [1, 1], [0, 0]])
        assert r.status_code == 400
        assert r.json()["code"] == "invalid_polygon"

    def test_empty_selection_400(self, client):
        r = self.request(client, region=[[10, 10], [10.01, 10],
                                         [10.01, 10.01], [10, 10.01]])
        assert r.status_code == 400
        assert r.json()["code"] == "empty_selection"

    def test_unknown_target_city_404(self, client):
        r = self.request(client, target_city="ghost")
        assert r.status_code == 404
        assert r.json()["code"] == "unknown_city"

    def test_missing_field_400(self, client):
        r = client.post("/similarity", json={"source_city": "apitown"})
        assert r.status_code == 400
        assert r.json()["code"] == "invalid_request"
