import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (boxes_intersect_oracle, region_membership_oracle,
                     sample_box_points)
from tagscape.geometry import (EARTH_RADIUS_M, MERCATOR_MAX_X, ORIENTATIONS,
                               OrientedBox, Point, ProjectionError,
                               RegionError, RegionPolygon, RegionSet,
                               TextMetricsModel, box_in_region,
                               boxes_intersect, build_tin, project,
                               pt_to_ground, text_extent, unproject)

from conftest import square_hole, square_region


# ---------------------------------------------------------------- projection

def test_project_origin():
    p = project(0.0, 0.0)
    assert p.x == 0.0 and p.y == 0.0


def test_project_antimeridian():
    p = project(180.0, 0.0)
    assert p.x == pytest.approx(MERCATOR_MAX_X, abs=1e-6)
    assert p.x == pytest.approx(20037508.342789244, abs=1e-6)
    assert p.y == 0.0


def test_project_lat45_against_log_tan_form():
    # independent formulation: y = R * ln(tan(pi/4 + lat/2))
    expected = EARTH_RADIUS_M * math.log(math.tan(math.pi / 4 + math.radians(45.0) / 2))
    p = project(0.0, 45.0)
    assert p.y == pytest.approx(expected, abs=1e-6)
    assert p.y == pytest.approx(5621521.486, abs=1e-3)


def test_project_rejects_poles():
    with pytest.raises(ProjectionError):
        project(0.0, 85.07)
    with pytest.raises(ProjectionError):
        project(0.0, -90.0)


def test_project_rejects_wild_longitude():
    with pytest.raises(ProjectionError):
        project(180.5, 0.0)


@given(lon=st.floats(-180, 180), lat=st.floats(-85, 85))
@settings(max_examples=200)
def test_projection_round_trip(lon, lat):
    lon2, lat2 = unproject(project(lon, lat))
    assert abs(lon2 - lon) < 1e-9
    assert abs(lat2 - lat) < 1e-9


def test_pt_to_ground():
    # 1 pt at scale 1 is just the physical point size
    assert pt_to_ground(1.0, 1.0) == pytest.approx(0.0254 / 72)
    # at 1:1,000,000 one point covers ~352.8 ground meters
    assert pt_to_ground(1.0, 1e-6) == pytest.approx(352.7777, abs=1e-3)


# --------------------------------------------------------------- text extent

def test_text_extent_empty_string():
    assert text_extent("", 12.0) == (0.0, 12.0)


def test_text_extent_uniform_advance():
    w, h = text_extent("abc", 10.0)
    assert w == pytest.approx(18.0)
    assert h == 10.0


def test_text_extent_additivity():
    w1, _ = text_extent("a", 14.0)
    w2, _ = text_extent("aa", 14.0)
    assert w2 == pytest.approx(2 * w1)


def test_text_extent_custom_table():
    model = TextMetricsModel(advances={"i": 0.3, "w": 0.9})
    w, h = text_extent("iw", 10.0, model)
    assert w == pytest.approx(12.0)
    assert h == 10.0


def test_text_extent_rejects_bad_font():
    with pytest.raises(ValueError):
        text_extent("x", 0.0)


def test_metrics_model_rejects_nonpositive_advance():
    with pytest.raises(ValueError):
        TextMetricsModel(advances={"a": 0.0})


# ------------------------------------------------------------- oriented boxes

def make_box(cx, cy, w, h, angle=0.0):
    return OrientedBox(Point(cx, cy), w, h, angle)


def test_box_angle_restricted():
    with pytest.raises(ValueError):
        make_box(0, 0, 1, 1, angle=17.0)


def test_identical_boxes_intersect():
    a = make_box(3.0, 4.0, 2.0, 1.0, 30.0)
    assert boxes_intersect(a, a)


def test_disjoint_bounding_circles():
    a = make_box(0, 0, 2, 1)
    b = make_box(100, 0, 2, 1)
    assert not boxes_intersect(a, b)


def test_shared_edge_is_not_overlap():
    a = make_box(0, 0, 2, 2)
    b = make_box(2.0, 0, 2, 2)  # touching along x = 1
    assert not boxes_intersect(a, b)
    assert not boxes_intersect(b, a)


def test_tiny_gap_and_tiny_overlap():
    a = make_box(0, 0, 2, 2)
    assert not boxes_intersect(a, make_box(2.0 + 1e-8, 0, 2, 2))
    assert boxes_intersect(a, make_box(2.0 - 1e-6, 0, 2, 2))


def test_rotated_near_contact_matches_clipping_oracle():
    a = make_box(0, 0, 2, 2, 0.0)
    # 45-degree box whose corner approaches the right edge of `a`
    for dx in (2.40, 2.414, 2.4142, 2.41422, 2.5):
        b = make_box(dx, 0, 2, 2, 45.0)
        assert boxes_intersect(a, b) == boxes_intersect_oracle(a.corners, b.corners), dx


def test_sat_agrees_with_clipping_oracle_on_random_pairs():
    rng = random.Random(42)
    disagreements = 0
    for _ in range(1000):
        a = make_box(rng.uniform(-5, 5), rng.uniform(-5, 5),
                     rng.uniform(0.5, 4), rng.uniform(0.5, 4),
                     rng.choice(ORIENTATIONS))
        b = make_box(rng.uniform(-5, 5), rng.uniform(-5, 5),
                     rng.uniform(0.5, 4), rng.uniform(0.5, 4),
                     rng.choice(ORIENTATIONS))
        got = boxes_intersect(a, b)
        assert got == boxes_intersect(b, a)  # symmetry
        if got != boxes_intersect_oracle(a.corners, b.corners):
            disagreements += 1
    assert disagreements == 0


def test_box_contains_points():
    box = make_box(0, 0, 4, 2, 90.0)  # after rotation: 2 wide, 4 tall
    pts = np.array([[0.0, 0.0], [0.9, 1.9], [1.1, 0.0], [0.0, 2.1]])
    assert box.contains_points(pts).tolist() == [True, True, False, False]


# ------------------------------------------------------------- box_in_region

def test_tiny_box_at_centroid(big_square):
    box = make_box(500.0, 500.0, 10.0, 4.0)
    assert box_in_region(box, big_square) == 0


def test_box_straddling_exterior(big_square):
    box = make_box(0.0, 500.0, 10.0, 4.0)
    assert box_in_region(box, big_square) is None


def test_box_outside(big_square):
    box = make_box(-500.0, 500.0, 10.0, 4.0)
    assert box_in_region(box, big_square) is None


def test_box_covering_hole_rejected(holed_square):
    # corners inside the region, no edge crossings, but the hole is swallowed
    box = make_box(5.0, 5.0, 3.0, 3.0)
    assert box_in_region(box, holed_square) is None
    # sampling oracle confirms: some interior points are not in the region
    rng = random.Random(1)
    pts = sample_box_points(box, 2000, rng)
    membership = region_membership_oracle(holed_square, pts)
    assert any(m is None for m in membership)


def test_box_beside_hole_accepted(holed_square):
    box = make_box(2.0, 2.0, 3.0, 1.5)
    assert box_in_region(box, holed_square) == 0


def test_box_straddling_hole_edge_rejected(holed_square):
    box = make_box(4.0, 5.0, 1.0, 1.0)  # straddles the hole's left edge
    assert box_in_region(box, holed_square) is None


def test_multipolygon_indices():
    region = RegionSet([
        square_region(10.0).polygons[0],
        square_region(5.0, origin=(100.0, 0.0)).polygons[0],
    ])
    assert box_in_region(make_box(5, 5, 2, 1), region) == 0
    assert box_in_region(make_box(102.5, 2.5, 2, 1), region) == 1
    assert box_in_region(make_box(50, 5, 2, 1), region) is None


def test_box_in_region_matches_sampling_oracle(holed_square):
    rng = random.Random(7)
    checked_in = 0
    for _ in range(200):
        box = make_box(rng.uniform(0, 10), rng.uniform(0, 10),
                       rng.uniform(0.3, 3), rng.uniform(0.3, 1.5),
                       rng.choice(ORIENTATIONS))
        m = box_in_region(box, holed_square)
        if m is not None:
            pts = sample_box_points(box, 500, rng)
            membership = region_membership_oracle(holed_square, pts)
            assert all(v == m for v in membership)
            checked_in += 1
    assert checked_in > 20  # the sweep actually exercised feasible boxes


# ---------------------------------------------------------------- region set

def test_region_normalizes_orientation():
    cw = [[0, 0], [0, 1], [1, 1], [1, 0], [0, 0]]
    poly = RegionPolygon(exterior=cw)
    # stored counterclockwise
    from tagscape.geometry import ring_signed_area
    assert ring_signed_area(poly.exterior) > 0


def test_region_rejects_open_ring():
    with pytest.raises(RegionError):
        RegionPolygon(exterior=[[0, 0], [1, 0], [1, 1], [0, 1]])


def test_region_rejects_degenerate():
    with pytest.raises(RegionError):
        RegionPolygon(exterior=[[0, 0], [1, 0], [2, 0], [0, 0]])


def test_polygon_indices_vectorized(holed_square):
    pts = np.array([[1.0, 1.0], [5.0, 5.0], [11.0, 5.0]])
    assert holed_square.polygon_indices_of(pts).tolist() == [0, -1, -1]


# ------------------------------------------------------------------ build_tin

def test_tin_unit_square_area(unit_square):
    tin = build_tin(unit_square, [])
    assert tin.total_area == pytest.approx(1.0, abs=1e-9)
    assert len(tin) >= 2


def test_tin_holed_square_area(holed_square):
    tin = build_tin(holed_square, [])
    assert tin.total_area == pytest.approx(100.0 - 4.0, abs=1e-9)


def test_tin_sorted_by_descending_area(holed_square):
    tin = build_tin(holed_square, [])
    areas = tin.areas
    assert all(areas[i] >= areas[i + 1] for i in range(len(areas) - 1))


def test_tin_with_placed_box_keeps_centroids_outside(big_square):
    box = make_box(300.0, 400.0, 120.0, 60.0, 45.0)
    tin = build_tin(big_square, [box])
    inside = box.contains_points(tin.centroids, eps=-1e-9)
    assert not inside.any()
    # area conservation: region minus box, box fully inside
    assert tin.total_area == pytest.approx(
        big_square.area - box.area, rel=1e-6)


def test_tin_area_conservation_many_boxes(holed_square):
    boxes = [make_box(2.0, 2.0, 1.5, 0.8), make_box(8.0, 8.0, 1.0, 1.0),
             make_box(7.5, 2.0, 2.0, 0.5, 90.0)]
    tin = build_tin(holed_square, boxes)
    expected = holed_square.area - sum(b.area for b in boxes)
    assert tin.total_area == pytest.approx(expected, rel=1e-6)


def test_tin_empty_when_region_fully_covered(unit_square):
    box = make_box(0.5, 0.5, 1.0, 1.0)
    tin = build_tin(unit_square, [box])
    assert len(tin) == 0
