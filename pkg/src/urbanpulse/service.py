"""Read-only HTTP/JSON API over precomputed city datasets.

All endpoints serve immutable data loaded from a dataset root (one
subdirectory per city); errors are JSON objects ``{code, message}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .ingest import FieldCollection, Resolution, ScenarioFamily
from .pipeline import CityDataset
from . import pulse as pulse_mod


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        self.status = status
        self.code = code
        self.message = message
        super().__init__(message)


class SimilarityRequest(BaseModel):
    source_city: str
    scenario: str
    part: str
    region: list[list[float]]  # polygon ring, lon/lat pairs
    target_city: str
    use_raw: bool = False


class _Store:
    """Immutable in-memory dataset registry with lazy field caching."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.cities: dict[str, CityDataset] = {}
        self.digests: dict[str, str] = {}
        self._fields: dict[tuple, FieldCollection] = {}
        for child in sorted(self.root.iterdir()):
            if not (child / "city.json").is_file():
                continue
            ds = CityDataset.open(child)
            self.cities[ds.name] = ds
            meta = child / "digest.json"
            if meta.is_file():
                self.digests[ds.name] = json.loads(
                    meta.read_text()).get("digest", "")
            else:
                self.digests[ds.name] = ""
        if not self.cities:
            raise ValueError(f"no city datasets under {self.root}")

    def city(self, name: str) -> CityDataset:
        if name not in self.cities:
            raise ApiError(404, "unknown_city", f"unknown city {name!r}")
        return self.cities[name]

    def fields(self, name: str, family: ScenarioFamily,
               part: str) -> FieldCollection:
        key = (name, family, part)
        if key not in self._fields:
            ds = self.city(name)
            try:
                self._fields[key] = ds.fields(family, part)
            except FileNotFoundError:
                raise ApiError(404, "unknown_scenario",
                               f"no fields for {family.value}/{part}")
        return self._fields[key]

    def catalog(self, name: str, family: ScenarioFamily, part: str) -> dict:
        ds = self.city(name)
        try:
            return ds.catalog(family, part)
        except FileNotFoundError:
            raise ApiError(404, "unknown_catalog",
                           f"no pulse catalog for {family.value}/{part}")


def _scenario(label: str) -> ScenarioFamily:
    try:
        return ScenarioFamily.from_label(label)
    except ValueError as e:
        raise ApiError(404, "unknown_scenario", str(e))


def _resolution(label: str) -> Resolution:
    try:
        return Resolution.from_label(label)
    except ValueError as e:
        raise ApiError(404, "unknown_resolution", str(e))


def create_app(data_dir: str | Path) -> FastAPI:
    store = _Store(data_dir)
    app = FastAPI(title="urban-pulse", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"code": exc.code,
                                     "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request,
                                exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"code": "invalid_request",
                                     "message": str(exc.errors())})

    def _etag_response(city: str, payload) -> JSONResponse:
        return JSONResponse(content=payload,
                            headers={"ETag": f'"{store.digests[city]}"'})

    @app.get("/cities")
    def cities():
        out = []
        for name, ds in store.cities.items():
            out.append({
                "name": name,
                "config": ds.config.to_dict(),
                "mesh": {"nx": ds.mesh.nx, "ny": ds.mesh.ny,
                         "spacing_m": ds.mesh.spacing},
                "scenarios": {fam.value: parts
                              for fam, parts in ds.scenarios().items()},
                "digest": store.digests[name],
            })
        return out

    @app.get("/cities/{city}/pulses")
    def pulses(city: str, scenario: str = "Default", part: str = "Default"):
        family = _scenario(scenario)
        catalog = store.catalog(city, family, part)
        return _etag_response(city, catalog)

    @app.get("/cities/{city}/fields/{scenario}/{part}/{resolution}/{step}")
    def field(city: str, scenario: str, part: str, resolution: str,
              step: int, norm: bool = True):
        family = _scenario(scenario)
        res = _resolution(resolution)
        if not 0 <= step < res.step_count:
            raise ApiError(400, "invalid_step",
                           f"step {step} out of range for {res.label} "
                           f"(0..{res.step_count - 1})")
        collection = store.fields(city, family, part)
        f = collection.field(res, step)
        ds = store.city(city)
        values = f.norm if norm else f.raw
        return _etag_response(city, {
            "nx": ds.mesh.nx,
            "ny": ds.mesh.ny,
            "spacing_m": ds.mesh.spacing,
            "resolution": res.label,
            "step": step,
            "resolution_max": f.resolution_max,
            "normalized": norm,
            "values": [round(v, 6) for v in values.tolist()],
        })

    @app.get("/cities/{city}/pulses/{pulse_id}/beats")
    def beats(city: str, pulse_id: int, scenario: str = "Default",
              part: str = "Default", resolution: str | None = None):
        family = _scenario(scenario)
        catalog = store.catalog(city, family, part)
        for pd in catalog["pulses"]:
            if pd["id"] == pulse_id:
                beats = pd["beats"]
                if resolution is not None:
                    res = _resolution(resolution)
                    if res.label not in beats:
                        raise ApiError(404, "unknown_resolution",
                                       f"no {res.label} beats")
                    beats = {res.label: beats[res.label]}
                return _etag_response(city, {"id": pulse_id, "beats": beats})
        raise ApiError(404, "unknown_pulse", f"no pulse {pulse_id}")

    @app.post("/similarity")
    def similarity(req: SimilarityRequest):
        family = _scenario(req.scenario)
        ring = req.region
        if len(ring) >= 2 and ring[0] == ring[-1]:
            ring = ring[:-1]
        if len(ring) < 3:
            raise ApiError(400, "invalid_polygon",
                           "polygon needs at least 3 distinct points")
        src_cat = store.catalog(req.source_city, family, req.part)
        tgt_cat = store.catalog(req.target_city, family, req.part)
        ring_xy = [(float(p[0]), float(p[1])) for p in ring]
        selected = [pd["id"] for pd in src_cat["pulses"]
                    if pulse_mod.point_in_polygon(
                        pd["representative"]["lon"],
                        pd["representative"]["lat"], ring_xy)]
        if not selected:
            raise ApiError(400, "empty_selection",
                           "region selects no source pulses")
        sources = pulse_mod.catalog_from_dict(src_cat)
        targets = pulse_mod.catalog_from_dict(tgt_cat)
        try:
            results = pulse_mod.similar_pulses(sources, targets, selected,
                                               use_raw=req.use_raw)
        except ValueError as e:
            raise ApiError(400, "no_common_resolution", str(e))
        return [
            {"source": r.source_id, "source_rank": r.source_rank,
             "matches": [{"target": t, "measure": m}
                         for t, m in r.matches]}
            for r in results
        ]

    return app
