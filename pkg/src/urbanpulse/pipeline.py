"""End-to-end orchestration and on-disk dataset layout.

A dataset directory holds one city:

    <dir>/city.json
    <dir>/fields/<family>/<part>.upf
    <dir>/pulses/<family>/<part>.json
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .geomesh import CityConfig, Mesh
from .ingest import (DensityParams, FieldCollection, PointSet, Scenario,
                     ScenarioFamily, SCENARIO_PARTS, compute_fields,
                     read_fields, write_fields)
from .pulse import (DEFAULT_THRESHOLD, Pulse, build_pulses, catalog_to_dict,
                    read_catalog, write_catalog)


def default_params(config: CityConfig) -> DensityParams:
    return DensityParams(epsilon=config.epsilon_m,
                         radius=5 * config.epsilon_m)


def ingest_scenario(points: PointSet, config: CityConfig, mesh: Mesh,
                    family: ScenarioFamily,
                    params: DensityParams | None = None,
                    ) -> dict[str, FieldCollection]:
    """Compute field collections for every part of a scenario family."""
    params = params or default_params(config)
    out = {}
    for part in SCENARIO_PARTS[family]:
        out[part] = compute_fields(
            points, mesh, Scenario(family, part), params,
            utc_offset_minutes=config.utc_offset_minutes)
    return out


def write_scenario_fields(collections: dict[str, FieldCollection],
                          config: CityConfig, out_dir: str | Path,
                          family: ScenarioFamily) -> list[Path]:
    out_dir = Path(out_dir)
    fdir = out_dir / "fields" / family.value
    fdir.mkdir(parents=True, exist_ok=True)
    config.save(out_dir / "city.json")
    paths = []
    for part, collection in collections.items():
        p = fdir / f"{part}.upf"
        write_fields(collection, p, config)
        paths.append(p)
    return paths


def load_fields(dataset_dir: str | Path, family: ScenarioFamily,
                part: str) -> tuple[FieldCollection, CityConfig]:
    dataset_dir = Path(dataset_dir)
    config = CityConfig.load(dataset_dir / "city.json")
    path = dataset_dir / "fields" / family.value / f"{part}.upf"
    return read_fields(path, config), config


def available_parts(dataset_dir: str | Path,
                    family: ScenarioFamily | None = None,
                    ) -> dict[ScenarioFamily, list[str]]:
    """Scenario parts with field files present in a dataset directory."""
    dataset_dir = Path(dataset_dir)
    out: dict[ScenarioFamily, list[str]] = {}
    families = [family] if family else list(ScenarioFamily)
    for fam in families:
        fdir = dataset_dir / "fields" / fam.value
        if not fdir.is_dir():
            continue
        parts = [p.stem for p in sorted(fdir.glob("*.upf"))]
        if parts:
            # keep canonical part order
            canon = [p for p in SCENARIO_PARTS[fam] if p in parts]
            out[fam] = canon + [p for p in parts if p not in canon]
    return out


def extract_pulses(dataset_dir: str | Path, family: ScenarioFamily,
                   part: str, threshold: float = DEFAULT_THRESHOLD,
                   digest: str = "") -> tuple[list[Pulse], dict]:
    """Load fields of one scenario part and build its pulse catalog."""
    collection, config = load_fields(dataset_dir, family, part)
    mesh = config.build_mesh()
    pulses = build_pulses(collection, mesh, config.epsilon_m, threshold)
    catalog = catalog_to_dict(pulses, mesh, collection.scenario,
                              config.name, threshold, config.epsilon_m,
                              digest=digest)
    return pulses, catalog


def write_pulse_catalog(catalog: dict, dataset_dir: str | Path) -> Path:
    dataset_dir = Path(dataset_dir)
    fam = catalog["scenario"]["family"]
    part = catalog["scenario"]["part"]
    pdir = dataset_dir / "pulses" / fam
    pdir.mkdir(parents=True, exist_ok=True)
    path = pdir / f"{part}.json"
    write_catalog(catalog, path)
    return path


@dataclass
class CityDataset:
    """In-memory view of one city's dataset directory."""

    name: str
    config: CityConfig
    mesh: Mesh
    root: Path

    @classmethod
    def open(cls, root: str | Path) -> "CityDataset":
        root = Path(root)
        config = CityConfig.load(root / "city.json")
        return cls(name=config.name, config=config,
                   mesh=config.build_mesh(), root=root)

    def scenarios(self) -> dict[ScenarioFamily, list[str]]:
        return available_parts(self.root)

    def fields(self, family: ScenarioFamily, part: str) -> FieldCollection:
        collection, _ = load_fields(self.root, family, part)
        return collection

    def catalog(self, family: ScenarioFamily, part: str) -> dict:
        path = self.root / "pulses" / family.value / f"{part}.json"
        if not path.is_file():
            raise FileNotFoundError(path)
        return read_catalog(path)
