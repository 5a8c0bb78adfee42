"""Input parsing: GeoJSON regions, tag corpora, CLI argument fragments."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from shapely.geometry import LinearRing, Polygon
from shapely.validation import explain_validity

from .engine import TagSpec
from .geometry import RegionError, RegionPolygon, RegionSet, project


def _polygon_coord_sets(data: dict) -> list[list[list[list[float]]]]:
    """Extract MultiPolygon-shaped coordinate arrays from any GeoJSON root."""
    t = data.get("type")
    if t == "FeatureCollection":
        out = []
        for feat in data.get("features", []):
            out.extend(_polygon_coord_sets(feat))
        if not out:
            raise RegionError("FeatureCollection contains no polygonal feature")
        return out
    if t == "Feature":
        return _polygon_coord_sets(data.get("geometry") or {})
    if t == "Polygon":
        return [data["coordinates"]]
    if t == "MultiPolygon":
        return list(data["coordinates"])
    raise RegionError(f"unsupported GeoJSON type {t!r}; need Polygon or MultiPolygon")


def _project_ring(ring: list[list[float]], poly_idx: int, ring_idx: int):
    if len(ring) < 4:
        raise RegionError(
            f"polygon {poly_idx} ring {ring_idx}: needs at least 4 coordinates")
    if ring[0] != ring[-1]:
        raise RegionError(f"polygon {poly_idx} ring {ring_idx}: ring is not closed")
    try:
        projected = [project(lon, lat).as_tuple() for lon, lat in ring]
    except (TypeError, ValueError) as exc:
        raise RegionError(f"polygon {poly_idx} ring {ring_idx}: {exc}") from exc
    lr = LinearRing(projected)
    if not lr.is_simple:
        raise RegionError(f"polygon {poly_idx} ring {ring_idx}: ring self-intersects")
    return projected


def load_region(path: str | Path) -> RegionSet:
    """Parse a WGS84 GeoJSON region, project it, and normalize orientation."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as exc:
        raise RegionError(f"not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise RegionError("GeoJSON root must be an object")

    polygons = []
    for i, rings in enumerate(_polygon_coord_sets(data)):
        projected = [_project_ring(r, i, j) for j, r in enumerate(rings)]
        shp = Polygon(projected[0], projected[1:])
        if not shp.is_valid:
            raise RegionError(f"polygon {i}: {explain_validity(shp)}")
        polygons.append(RegionPolygon(exterior=projected[0], holes=projected[1:]))
    return RegionSet(polygons)


def _validate_tags(rows: list[tuple[str, float]]) -> list[TagSpec]:
    seen: set[str] = set()
    specs = []
    for text, weight in rows:
        if not text:
            raise ValueError("tag text must be non-empty")
        if text in seen:
            raise ValueError(f"duplicate tag text {text!r}")
        seen.add(text)
        if weight < 0:
            raise ValueError(f"tag {text!r} has negative weight {weight}")
        specs.append(TagSpec(text=text, weight=weight))
    # Descending weight, input order on ties.
    return [s for _, s in sorted(enumerate(specs), key=lambda it: (-it[1].weight, it[0]))]


def load_tags(path: str | Path) -> list[TagSpec]:
    """Read a tag corpus from CSV (text,weight) or a JSON list."""
    p = Path(path)
    if p.suffix.lower() == ".json":
        data = json.loads(p.read_text(encoding="utf-8"))
        if not isinstance(data, list):
            raise ValueError("JSON tag file must be a list")
        rows = []
        for item in data:
            if isinstance(item, dict):
                rows.append((str(item["text"]), float(item["weight"])))
            else:
                rows.append((str(item[0]), float(item[1])))
        return _validate_tags(rows)

    rows = []
    with open(p, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh)):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise ValueError(f"line {lineno + 1}: expected 'text,weight'")
            text = row[0].strip()
            raw = row[1].strip()
            if lineno == 0 and text.lower() == "text":
                continue  # header row
            try:
                weight = float(raw)
            except ValueError as exc:
                raise ValueError(f"line {lineno + 1}: bad weight {raw!r}") from exc
            rows.append((text, weight))
    return _validate_tags(rows)


def parse_pin(arg: str) -> tuple[str, float, float]:
    """Parse a '--pin text@lon,lat' argument."""
    text, _, coords = arg.rpartition("@")
    if not text:
        raise ValueError(f"bad pin {arg!r}: expected 'text@lon,lat'")
    try:
        lon_s, lat_s = coords.split(",")
        return text, float(lon_s), float(lat_s)
    except ValueError as exc:
        raise ValueError(f"bad pin {arg!r}: expected 'text@lon,lat'") from exc


def parse_fixed_size(arg: str) -> tuple[str, float]:
    """Parse a '--fixed-size text=pt' argument."""
    text, sep, size_s = arg.rpartition("=")
    if not sep or not text:
        raise ValueError(f"bad fixed size {arg!r}: expected 'text=pt'")
    try:
        size = float(size_s)
    except ValueError as exc:
        raise ValueError(f"bad fixed size {arg!r}: expected 'text=pt'") from exc
    if size <= 0:
        raise ValueError(f"fixed size must be positive, got {size}")
    return text, size


def parse_orientation_weight(arg: str) -> tuple[float, float]:
    """Parse a '--weight angle=factor' argument."""
    angle_s, sep, w_s = arg.partition("=")
    if not sep:
        raise ValueError(f"bad orientation weight {arg!r}: expected 'angle=factor'")
    return float(angle_s), float(w_s)
