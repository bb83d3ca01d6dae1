"""Command-line interface: ingest, pulses, compare, diagram, serve."""

from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path

import click

from .geomesh import CityConfig
from .ingest import (Resolution, ScenarioFamily, SCENARIO_PARTS,
                     dataset_digest, parse_points)
from . import pipeline, pulse as pulse_mod, topology


@click.group()
def main():
    """Urban pulse analysis: density fields, persistence, pulse catalogs."""


@main.command()
@click.option("--city", "city_path", required=True,
              type=click.Path(exists=True), help="City config JSON.")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True), help="Point CSV.")
@click.option("--scenario", "family_label", default="Default",
              show_default=True, help="Scenario family.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="Render per-part overview heat maps here.")
def ingest(city_path, input_path, family_label, out_dir, figures_dir):
    """Compute and write density fields for every part of a scenario."""
    t0 = time.time()
    config = CityConfig.load(city_path)
    family = ScenarioFamily.from_label(family_label)
    mesh = config.build_mesh()
    params = pipeline.default_params(config)

    with open(input_path, "rb") as fh:
        raw_bytes = fh.read()
    digest = dataset_digest(config, raw_bytes)
    with open(input_path, newline="") as fh:
        points, report = parse_points(fh, config, mesh, radius=params.radius)
    if report.accepted == 0:
        click.echo("warning: no points accepted; fields will be all zero",
                   err=True)

    collections = pipeline.ingest_scenario(points, config, mesh, family,
                                           params)
    paths = pipeline.write_scenario_fields(collections, config, out_dir,
                                           family)
    meta = {
        "digest": digest,
        "scenario": family.value,
        "accepted": report.accepted,
        "malformed": report.malformed,
        "out_of_bounds": report.out_of_bounds,
    }
    with open(Path(out_dir) / "digest.json", "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")

    nfields = sum(len(c) for c in collections.values())
    click.echo(f"accepted {report.accepted} points "
               f"({report.malformed} malformed, "
               f"{report.out_of_bounds} out of bounds)")
    click.echo(f"wrote {nfields} fields across {len(paths)} part file(s) "
               f"in {time.time() - t0:.1f} s")

    if figures_dir:
        from . import report as report_mod
        fdir = Path(figures_dir)
        fdir.mkdir(parents=True, exist_ok=True)
        for part, collection in collections.items():
            f = collection.field(Resolution.ALL, 0)
            report_mod.save_field_heatmap(
                f, mesh, fdir / f"{family.value}_{part}_all.png")
        click.echo(f"figures written to {fdir}")


@main.command()
@click.option("--fields", "fields_dir", required=True,
              type=click.Path(exists=True), help="Dataset dir from ingest.")
@click.option("--scenario", "family_label", default=None,
              help="Scenario family (default: the only one present).")
@click.option("--part", "part", default=None,
              help="Scenario part (default: all parts).")
@click.option("--threshold", default=pulse_mod.DEFAULT_THRESHOLD,
              show_default=True, type=float)
@click.option("--out", "out_path", default=None, type=click.Path(),
              help="Catalog JSON file (single part) or directory.")
@click.option("--figures", "figures_dir", type=click.Path(), default=None,
              help="Render rank scatter and top-10 beat figures here.")
def pulses(fields_dir, family_label, part, threshold, out_path, figures_dir):
    """Extract pulse catalogs from precomputed fields."""
    t0 = time.time()
    available = pipeline.available_parts(fields_dir)
    if not available:
        raise click.ClickException(f"no field files under {fields_dir}")
    if family_label is None:
        if len(available) > 1:
            raise click.ClickException(
                "multiple scenarios present; pass --scenario")
        family = next(iter(available))
    else:
        family = ScenarioFamily.from_label(family_label)
        if family not in available:
            raise click.ClickException(
                f"no fields for scenario {family.value}")
    parts = [part] if part else available[family]

    digest = ""
    meta_path = Path(fields_dir) / "digest.json"
    if meta_path.is_file():
        digest = json.loads(meta_path.read_text()).get("digest", "")

    out_is_dir = out_path is None or (len(parts) > 1) or \
        Path(out_path).is_dir() or str(out_path).endswith("/")
    for p in parts:
        pulses_list, catalog = pipeline.extract_pulses(
            fields_dir, family, p, threshold, digest=digest)
        if out_path is None:
            cat_path = pipeline.write_pulse_catalog(catalog, fields_dir)
        elif out_is_dir:
            Path(out_path).mkdir(parents=True, exist_ok=True)
            cat_path = Path(out_path) / f"{family.value}_{p}.json"
            pulse_mod.write_catalog(catalog, cat_path)
        else:
            cat_path = Path(out_path)
            pulse_mod.write_catalog(catalog, cat_path)
        click.echo(f"{family.value}/{p}: {len(pulses_list)} pulses "
                   f"-> {cat_path}")
        top = sorted(pulses_list, key=lambda q: -q.rank)[:10]
        for q in top:
            click.echo(f"  #{q.id} rank {q.rank:.4f}")
        if figures_dir:
            from . import report as report_mod
            fdir = Path(figures_dir)
            fdir.mkdir(parents=True, exist_ok=True)
            report_mod.save_rank_scatter(
                pulses_list, fdir / f"{family.value}_{p}_ranks.png")
            strip_res = [r for r in (Resolution.HOUR, Resolution.DAY,
                                     Resolution.MONTH, Resolution.ALL)
                         if r in (pulses_list[0].beats.resolutions
                                  if pulses_list else [])]
            for q in top:
                if strip_res:
                    report_mod.save_beats_figure(
                        q, strip_res[0],
                        fdir / f"{family.value}_{p}_pulse{q.id}.png")
    click.echo(f"done in {time.time() - t0:.1f} s")


def _region_ring(region_path: str) -> list[tuple[float, float]]:
    with open(region_path) as fh:
        gj = json.load(fh)
    geom = gj.get("geometry", gj)
    if geom.get("type") != "Polygon":
        raise click.ClickException("region must be a GeoJSON Polygon")
    ring = geom["coordinates"][0]
    if len(ring) < 3:
        raise click.ClickException("degenerate polygon ring")
    return [(float(x), float(y)) for x, y in ring]


@main.command()
@click.option("--a", "catalog_a", required=True, type=click.Path(exists=True),
              help="Source pulse catalog JSON.")
@click.option("--b", "catalog_b", required=True, type=click.Path(exists=True),
              help="Target pulse catalog JSON.")
@click.option("--region", "region_path", type=click.Path(exists=True),
              default=None, help="GeoJSON polygon selecting source pulses.")
@click.option("--raw", is_flag=True,
              help="Compare raw function beats instead of normalized.")
@click.option("--figures", "figures_dir", type=click.Path(), default=None)
def compare(catalog_a, catalog_b, region_path, raw, figures_dir):
    """Similarity report between two catalogs (CSV to stdout)."""
    cat_a = pulse_mod.read_catalog(catalog_a)
    cat_b = pulse_mod.read_catalog(catalog_b)
    sources = pulse_mod.catalog_from_dict(cat_a)
    targets = pulse_mod.catalog_from_dict(cat_b)

    selected = None
    if region_path:
        ring = _region_ring(region_path)
        selected = [pd["id"] for pd in cat_a["pulses"]
                    if pulse_mod.point_in_polygon(
                        pd["representative"]["lon"],
                        pd["representative"]["lat"], ring)]
        if not selected:
            raise click.ClickException("region selects no source pulses")

    try:
        results = pulse_mod.similar_pulses(sources, targets, selected,
                                           use_raw=raw)
    except ValueError as e:
        raise click.ClickException(str(e))

    writer = csv.writer(sys.stdout)
    writer.writerow(["source_id", "source_rank", "target_id", "measure"])
    for res in results:
        for tid, measure in res.matches:
            writer.writerow([res.source_id, f"{res.source_rank:.6f}",
                             tid, f"{measure:.6f}"])

    if figures_dir:
        from . import report as report_mod
        fdir = Path(figures_dir)
        fdir.mkdir(parents=True, exist_ok=True)
        report_mod.save_similarity_figure(results, fdir / "similarity.png")


@main.command()
@click.option("--fields", "fields_dir", required=True,
              type=click.Path(exists=True))
@click.option("--scenario", "family_label", default="Default",
              show_default=True)
@click.option("--part", default=None)
@click.option("--resolution", "res_label", required=True)
@click.option("--step", required=True, type=int)
@click.option("--out", "out_path", default=None, type=click.Path())
def diagram(fields_dir, family_label, part, res_label, step, out_path):
    """Debug dump: persistence diagram of one field as CSV."""
    family = ScenarioFamily.from_label(family_label)
    if part is None:
        part = SCENARIO_PARTS[family][0]
    collection, config = pipeline.load_fields(fields_dir, family, part)
    res = Resolution.from_label(res_label)
    if step not in range(res.step_count):
        raise click.ClickException(
            f"step {step} out of range for {res.label}")
    mesh = config.build_mesh()
    pairs = topology.sweep_persistence(collection.field(res, step).norm, mesh)
    fh = open(out_path, "w", newline="") if out_path else sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(["creator_vertex", "destroyer_vertex", "persistence"])
        for c, d, pi in topology.diagram_rows(pairs):
            writer.writerow([c, d, f"{pi:.12g}"])
    finally:
        if out_path:
            fh.close()


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data", "data_dir", default=None, type=click.Path(),
              envvar="UP_DATA_DIR",
              help="Dataset root (one subdirectory per city); "
                   "defaults to $UP_DATA_DIR.")
def serve(port, host, data_dir):
    """Serve the read-only HTTP/JSON API over precomputed datasets."""
    import uvicorn
    from .service import create_app
    if data_dir is None:
        raise click.ClickException("pass --data or set UP_DATA_DIR")
    app = create_app(data_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
