import json

import pytest

from tagscape.bundle import (BundleFormatError, bundle_from_dict,
                             bundle_to_dict, load_bundle, save_bundle,
                             serialize)
from tagscape.engine import place_all
from tagscape.geometry import RegionError
from tagscape.ingest import (load_region, load_tags, parse_fixed_size,
                             parse_orientation_weight, parse_pin)
from tagscape.svg import export_svg

from test_engine import config as engine_config
from test_engine import corpus
from conftest import square_region


# ---------------------------------------------------------------- load_region

def write_geojson(tmp_path, payload, name="region.geojson"):
    p = tmp_path / name
    p.write_text(json.dumps(payload), encoding="utf-8")
    return p


SQUARE = [[0.0, 0.0], [2.0, 0.0], [2.0, 2.0], [0.0, 2.0], [0.0, 0.0]]


def test_load_polygon(tmp_path):
    path = write_geojson(tmp_path, {"type": "Polygon", "coordinates": [SQUARE]})
    region = load_region(path)
    assert len(region.polygons) == 1
    assert region.polygons[0].holes == []
    assert region.area > 0


def test_load_multipolygon_two_parts(tmp_path):
    far = [[10.0, 10.0], [12.0, 10.0], [12.0, 12.0], [10.0, 12.0], [10.0, 10.0]]
    path = write_geojson(tmp_path, {
        "type": "MultiPolygon", "coordinates": [[SQUARE], [far]]})
    region = load_region(path)
    assert len(region.polygons) == 2


def test_load_feature_collection(tmp_path):
    path = write_geojson(tmp_path, {
        "type": "FeatureCollection",
        "features": [{"type": "Feature", "properties": {},
                      "geometry": {"type": "Polygon", "coordinates": [SQUARE]}}]})
    region = load_region(path)
    assert len(region.polygons) == 1


def test_load_region_unclosed_ring_names_ring(tmp_path):
    open_ring = SQUARE[:-1]
    path = write_geojson(tmp_path, {"type": "Polygon", "coordinates": [open_ring]})
    with pytest.raises(RegionError, match=r"polygon 0 ring 0.*not closed"):
        load_region(path)


def test_load_region_self_intersection_rejected(tmp_path):
    bowtie = [[0.0, 0.0], [2.0, 2.0], [2.0, 0.0], [0.0, 2.0], [0.0, 0.0]]
    path = write_geojson(tmp_path, {"type": "Polygon", "coordinates": [bowtie]})
    with pytest.raises(RegionError, match="self-intersects"):
        load_region(path)


def test_load_region_hole_outside_exterior_rejected(tmp_path):
    hole = [[5.0, 5.0], [6.0, 5.0], [6.0, 6.0], [5.0, 6.0], [5.0, 5.0]]
    path = write_geojson(tmp_path, {"type": "Polygon",
                                    "coordinates": [SQUARE, hole]})
    with pytest.raises(RegionError, match="polygon 0"):
        load_region(path)


def test_load_region_rejects_polar_latitude(tmp_path):
    polar = [[0.0, 80.0], [1.0, 80.0], [1.0, 89.0], [0.0, 89.0], [0.0, 80.0]]
    path = write_geojson(tmp_path, {"type": "Polygon", "coordinates": [polar]})
    with pytest.raises(RegionError, match="polygon 0 ring 0"):
        load_region(path)


def test_load_region_rejects_non_polygonal(tmp_path):
    path = write_geojson(tmp_path, {"type": "Point", "coordinates": [0.0, 0.0]})
    with pytest.raises(RegionError, match="Polygon"):
        load_region(path)


def test_load_region_bad_json(tmp_path):
    p = tmp_path / "broken.geojson"
    p.write_text("{not json", encoding="utf-8")
    with pytest.raises(RegionError, match="JSON"):
        load_region(p)


# ------------------------------------------------------------------ load_tags

def test_load_tags_csv_sorted(tmp_path):
    p = tmp_path / "tags.csv"
    p.write_text("text,weight\nalpha,5\nbeta,1\ngamma,9\n", encoding="utf-8")
    tags = load_tags(p)
    assert [t.text for t in tags] == ["gamma", "alpha", "beta"]


def test_load_tags_stable_on_ties(tmp_path):
    p = tmp_path / "tags.csv"
    p.write_text("a,2\nb,2\nc,2\n", encoding="utf-8")
    assert [t.text for t in load_tags(p)] == ["a", "b", "c"]


def test_load_tags_negative_weight_rejected(tmp_path):
    p = tmp_path / "tags.csv"
    p.write_text("a,-1\n", encoding="utf-8")
    with pytest.raises(ValueError, match="negative"):
        load_tags(p)


def test_load_tags_duplicate_rejected(tmp_path):
    p = tmp_path / "tags.csv"
    p.write_text("a,1\na,2\n", encoding="utf-8")
    with pytest.raises(ValueError, match="duplicate"):
        load_tags(p)


def test_load_tags_json_forms(tmp_path):
    p = tmp_path / "tags.json"
    p.write_text(json.dumps([{"text": "x", "weight": 3},
                             ["y", 7.0]]), encoding="utf-8")
    tags = load_tags(p)
    assert [(t.text, t.weight) for t in tags] == [("y", 7.0), ("x", 3.0)]


def test_load_tags_bad_weight_message(tmp_path):
    p = tmp_path / "tags.csv"
    p.write_text("a,1\nb,oops\n", encoding="utf-8")
    with pytest.raises(ValueError, match="line 2"):
        load_tags(p)


# ----------------------------------------------------------- argument parsing

def test_parse_pin():
    assert parse_pin("coronavirus@-98.5,39.8") == ("coronavirus", -98.5, 39.8)
    with pytest.raises(ValueError):
        parse_pin("missing-coords")


def test_parse_fixed_size():
    assert parse_fixed_size("stock=44") == ("stock", 44.0)
    with pytest.raises(ValueError):
        parse_fixed_size("stock=big")
    with pytest.raises(ValueError):
        parse_fixed_size("stock=-4")


def test_parse_orientation_weight():
    assert parse_orientation_weight("0=2") == (0.0, 2.0)
    with pytest.raises(ValueError):
        parse_orientation_weight("0:2")


# --------------------------------------------------------- bundle round trip

@pytest.fixture(scope="module")
def bundle():
    return place_all(square_region(1000.0), corpus(10), engine_config())


def test_bundle_round_trip_is_lossless(tmp_path, bundle):
    path = tmp_path / "b.json"
    save_bundle(bundle, path)
    loaded = load_bundle(path)
    assert serialize(loaded) == serialize(bundle)
    assert bundle_to_dict(loaded) == bundle_to_dict(bundle)
    # exact float reconstruction, not approximate
    assert loaded.placed[0].box.center.x == bundle.placed[0].box.center.x
    assert loaded.config.scale == bundle.config.scale


def test_bundle_version_check(tmp_path, bundle):
    d = bundle_to_dict(bundle)
    d["format_version"] = "99"
    with pytest.raises(BundleFormatError, match="format_version"):
        bundle_from_dict(d)


def test_load_bundle_rejects_non_bundle(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"hello": 1}', encoding="utf-8")
    with pytest.raises(BundleFormatError):
        load_bundle(p)
    p2 = tmp_path / "y.json"
    p2.write_text("not json at all", encoding="utf-8")
    with pytest.raises(BundleFormatError):
        load_bundle(p2)


# ------------------------------------------------------------------------ svg

def test_svg_empty_layout_has_outline_only():
    empty = place_all(square_region(1000.0), [], engine_config())
    doc = export_svg(empty, 1.0)
    assert "<path" in doc
    assert "<text" not in doc


def test_svg_text_count_matches_visible_level(bundle):
    doc = export_svg(bundle, 1.0)
    assert doc.count("<text") == bundle.levels[0].visible_count
    half = export_svg(bundle, 0.5)
    assert half.count("<text") == bundle.levels[1].visible_count


def test_svg_deterministic(bundle):
    assert export_svg(bundle, 1.0) == export_svg(bundle, 1.0)


def test_svg_unknown_level_rejected(bundle):
    with pytest.raises(ValueError, match="no level"):
        export_svg(bundle, 0.33)


def test_svg_escapes_markup():
    from dataclasses import replace
    b = place_all(square_region(1000.0),
                  [replace(corpus(1)[0], text="a<b&c")], engine_config())
    # the placed tag text must appear escaped
    doc = export_svg(b, 1.0)
    assert "a&lt;b&amp;c" in doc
