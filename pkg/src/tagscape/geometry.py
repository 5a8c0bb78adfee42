"""Geometric substrate for tag placement.

Web Mercator projection, text extents, oriented tag boxes, polygon
containment, and the constrained triangulation whose triangle centroids
serve as candidate tag locations.

All projected coordinates are meters (EPSG:3857-style spherical Mercator).
Font sizes are points; `pt_to_ground` converts them to ground meters at a
given representative-fraction map scale.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import shapely
from shapely.geometry import MultiPolygon, Polygon

EARTH_RADIUS_M = 6378137.0
MERCATOR_MAX_LAT = 85.06
MERCATOR_MAX_X = EARTH_RADIUS_M * math.pi  # 20037508.342789244

# 1 pt on screen, in meters (PostScript point, 72 per inch).
PT_TO_SCREEN_M = 0.0254 / 72.0

# Geometric tolerance: box-box touching within this depth is non-overlapping,
# and a point this close to a segment counts as on it.
GEOM_EPS = 1e-9

# The fixed set of allowed tag orientations, degrees counterclockwise.
ORIENTATIONS = (0.0, 30.0, 45.0, 60.0, 90.0, -30.0, -45.0, -60.0, -90.0)


class ProjectionError(ValueError):
    """Latitude outside the Mercator domain."""


class RegionError(ValueError):
    """Region geometry is malformed or degenerate."""


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


def project(lon: float, lat: float) -> Point:
    """Spherical Web Mercator forward projection (degrees -> meters)."""
    if not (math.isfinite(lon) and math.isfinite(lat)):
        raise ProjectionError(f"non-finite coordinate ({lon}, {lat})")
    if abs(lon) > 180.0:
        raise ProjectionError(f"longitude {lon} outside |lon| <= 180")
    if abs(lat) >= MERCATOR_MAX_LAT:
        raise ProjectionError(f"latitude {lat} outside |lat| < {MERCATOR_MAX_LAT}")
    x = EARTH_RADIUS_M * math.radians(lon)
    # atanh(sin phi) == ln(tan(pi/4 + phi/2)), exact at the equator
    y = EARTH_RADIUS_M * math.atanh(math.sin(math.radians(lat)))
    return Point(x, y)


def unproject(p: Point) -> tuple[float, float]:
    """Inverse of `project`, returning (lon, lat) in degrees."""
    lon = math.degrees(p.x / EARTH_RADIUS_M)
    lat = math.degrees(2.0 * math.atan(math.exp(p.y / EARTH_RADIUS_M)) - math.pi / 2.0)
    return (lon, lat)


def pt_to_ground(value_pt: float, scale: float) -> float:
    """Convert a point size to ground meters at representative fraction `scale`.

    1 pt occupies PT_TO_SCREEN_M meters of screen; dividing by the scale
    (e.g. 1/20921196) yields the ground distance it spans on the map.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return value_pt * PT_TO_SCREEN_M / scale


DEFAULT_ADVANCE_EM = 0.6


@dataclass(frozen=True)
class TextMetricsModel:
    """Width model for tag text: per-character advances in em fractions.

    Characters missing from the table fall back to `default_advance`.
    """

    advances: dict[str, float] = field(default_factory=dict)
    default_advance: float = DEFAULT_ADVANCE_EM

    def __post_init__(self) -> None:
        if self.default_advance <= 0:
            raise ValueError("default advance must be positive")
        for ch, adv in self.advances.items():
            if adv <= 0:
                raise ValueError(f"advance for {ch!r} must be positive, got {adv}")

    @classmethod
    def from_json(cls, path: str | Path) -> "TextMetricsModel":
        with open(path, "r", encoding="utf-8") as fh:
            table = json.load(fh)
        default = table.pop("__default__", DEFAULT_ADVANCE_EM)
        return cls(advances={str(k): float(v) for k, v in table.items()},
                   default_advance=float(default))

    def advance(self, ch: str) -> float:
        return self.advances.get(ch, self.default_advance)


def text_extent(text: str, font_size: float,
                model: TextMetricsModel | None = None) -> tuple[float, float]:
    """(width, height) of `text` in points; height equals the font size."""
    if font_size <= 0:
        raise ValueError(f"font size must be positive, got {font_size}")
    if model is None:
        model = TextMetricsModel()
    width = font_size * sum(model.advance(ch) for ch in text)
    return (width, font_size)


@dataclass(frozen=True)
class OrientedBox:
    """Rectangle centered at `center`, rotated `angle` degrees counterclockwise.

    `width` runs along the text direction, `height` across it. Angles are
    restricted to the nine-orientation set.
    """

    center: Point
    width: float
    height: float
    angle: float = 0.0

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"box dimensions must be positive: {self.width} x {self.height}")
        if self.angle not in ORIENTATIONS:
            raise ValueError(f"angle {self.angle} not in the allowed orientation set")

    @cached_property
    def corners(self) -> np.ndarray:
        """Corner coordinates, shape (4, 2), counterclockwise."""
        return box_corners(self.center.x, self.center.y, self.width, self.height, self.angle)

    @cached_property
    def radius(self) -> float:
        """Circumscribed circle radius."""
        return 0.5 * math.hypot(self.width, self.height)

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains_point(self, x: float, y: float, eps: float = GEOM_EPS) -> bool:
        return bool(self.contains_points(np.array([[x, y]]), eps)[0])

    def contains_points(self, pts: np.ndarray, eps: float = GEOM_EPS) -> np.ndarray:
        """Boundary-inclusive membership test for an (n, 2) array."""
        rad = math.radians(self.angle)
        c, s = math.cos(rad), math.sin(rad)
        dx = pts[:, 0] - self.center.x
        dy = pts[:, 1] - self.center.y
        local_u = dx * c + dy * s
        local_v = -dx * s + dy * c
        return (np.abs(local_u) <= self.width / 2.0 + eps) & \
               (np.abs(local_v) <= self.height / 2.0 + eps)

    def as_shapely(self) -> Polygon:
        return Polygon(self.corners)


def box_corners(cx: float, cy: float, width: float, height: float,
                angle_deg: float) -> np.ndarray:
    rad = math.radians(angle_deg)
    c, s = math.cos(rad), math.sin(rad)
    hw, hh = width / 2.0, height / 2.0
    local = ((-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh))
    return np.array([(cx + u * c - v * s, cy + u * s + v * c) for u, v in local])


def _projection_interval(corners: np.ndarray, ax: float, ay: float) -> tuple[float, float]:
    dots = corners[:, 0] * ax + corners[:, 1] * ay
    return float(dots.min()), float(dots.max())


def boxes_intersect(a: OrientedBox, b: OrientedBox) -> bool:
    """Separating-axis test over both boxes' edge normals.

    Touching within GEOM_EPS of overlap depth counts as non-intersecting, so
    tags may share an edge.
    """
    dx = b.center.x - a.center.x
    dy = b.center.y - a.center.y
    if math.hypot(dx, dy) > a.radius + b.radius + GEOM_EPS:
        return False
    ca, cb = a.corners, b.corners
    for box in (a, b):
        rad = math.radians(box.angle)
        for ax, ay in ((math.cos(rad), math.sin(rad)), (-math.sin(rad), math.cos(rad))):
            amin, amax = _projection_interval(ca, ax, ay)
            bmin, bmax = _projection_interval(cb, ax, ay)
            if min(amax, bmax) - max(amin, bmin) <= GEOM_EPS:
                return False
    return True


def _ring_array(ring: np.ndarray) -> np.ndarray:
    """Normalize a ring to a closed float array of shape (n+1, 2)."""
    arr = np.asarray(ring, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise RegionError("ring must be an (n, 2) coordinate array")
    if arr.shape[0] < 4:
        raise RegionError("ring needs at least 3 distinct vertices plus closure")
    if not np.allclose(arr[0], arr[-1], rtol=0, atol=0):
        raise RegionError("ring is not closed (first vertex != last vertex)")
    if not np.isfinite(arr).all():
        raise RegionError("ring contains non-finite coordinates")
    return arr


def ring_signed_area(ring: np.ndarray) -> float:
    """Shoelace signed area; positive for counterclockwise rings."""
    x, y = ring[:-1, 0], ring[:-1, 1]
    xn, yn = ring[1:, 0], ring[1:, 1]
    return 0.5 * float(np.sum(x * yn - xn * y))


def _edges_of(rings: list[np.ndarray]) -> np.ndarray:
    """Stack ring segments into an (E, 4) array of x1, y1, x2, y2."""
    segs = [np.hstack([r[:-1], r[1:]]) for r in rings]
    return np.vstack(segs)


@dataclass
class RegionPolygon:
    """One polygon of the region: counterclockwise exterior, clockwise holes."""

    exterior: np.ndarray
    holes: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.exterior = _ring_array(self.exterior)
        if ring_signed_area(self.exterior) < 0:
            self.exterior = self.exterior[::-1].copy()
        fixed = []
        for h in self.holes:
            h = _ring_array(h)
            if ring_signed_area(h) > 0:
                h = h[::-1].copy()
            fixed.append(h)
        self.holes = fixed
        self._edges = _edges_of([self.exterior] + self.holes)
        ext = self.exterior
        self.bbox = (float(ext[:, 0].min()), float(ext[:, 1].min()),
                     float(ext[:, 0].max()), float(ext[:, 1].max()))
        self.area = ring_signed_area(self.exterior) + \
            sum(ring_signed_area(h) for h in self.holes)
        if self.area <= 0:
            raise RegionError("polygon area must be positive")

    @property
    def rings(self) -> list[np.ndarray]:
        return [self.exterior] + self.holes

    def contains_points(self, pts: np.ndarray) -> np.ndarray:
        """Even-odd ray cast over all rings; holes are excluded naturally."""
        return _points_in_edges(pts, self._edges)

    def as_shapely(self) -> Polygon:
        return Polygon(self.exterior, [h for h in self.holes])


def _points_in_edges(pts: np.ndarray, edges: np.ndarray) -> np.ndarray:
    px = pts[:, 0:1]
    py = pts[:, 1:2]
    x1, y1, x2, y2 = edges[:, 0], edges[:, 1], edges[:, 2], edges[:, 3]
    straddles = (y1 > py) != (y2 > py)
    dy = y2 - y1
    with np.errstate(divide="ignore", invalid="ignore"):
        x_at = x1 + (py - y1) * (x2 - x1) / dy
    crossings = straddles & (px < x_at)
    return (crossings.sum(axis=1) % 2).astype(bool)


@dataclass
class RegionSet:
    """Projected multi-polygon hosting all placement geometry."""

    polygons: list[RegionPolygon]

    def __post_init__(self) -> None:
        if not self.polygons:
            raise RegionError("region has no polygons")
        xs0 = [p.bbox[0] for p in self.polygons]
        ys0 = [p.bbox[1] for p in self.polygons]
        xs1 = [p.bbox[2] for p in self.polygons]
        ys1 = [p.bbox[3] for p in self.polygons]
        self.bbox = (min(xs0), min(ys0), max(xs1), max(ys1))
        self.area = sum(p.area for p in self.polygons)
        self._shapely: MultiPolygon | None = None

    def as_shapely(self) -> MultiPolygon:
        if self._shapely is None:
            self._shapely = MultiPolygon([p.as_shapely() for p in self.polygons])
        return self._shapely

    def polygon_index_of(self, x: float, y: float) -> int | None:
        pt = np.array([[x, y]])
        for m, poly in enumerate(self.polygons):
            bx0, by0, bx1, by1 = poly.bbox
            if not (bx0 <= x <= bx1 and by0 <= y <= by1):
                continue
            if poly.contains_points(pt)[0]:
                return m
        return None

    def polygon_indices_of(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized polygon assignment; -1 where outside every polygon."""
        out = np.full(len(pts), -1, dtype=int)
        for m, poly in enumerate(self.polygons):
            todo = out == -1
            if not todo.any():
                break
            bx0, by0, bx1, by1 = poly.bbox
            cand = todo & (pts[:, 0] >= bx0) & (pts[:, 0] <= bx1) & \
                (pts[:, 1] >= by0) & (pts[:, 1] <= by1)
            if cand.any():
                inside = poly.contains_points(pts[cand])
                idx = np.flatnonzero(cand)[inside]
                out[idx] = m
        return out


def _segments_properly_cross(box_edges: np.ndarray, ring_edges: np.ndarray) -> bool:
    """True if any box edge transversally crosses any ring edge.

    Endpoint touching and collinear overlap (within GEOM_EPS of perpendicular
    distance) do not count as crossing.
    """
    p1 = box_edges[:, None, 0:2]
    p2 = box_edges[:, None, 2:4]
    q1 = ring_edges[None, :, 0:2]
    q2 = ring_edges[None, :, 2:4]

    def side(a, b, c):
        # perpendicular distance of c from line ab, signed
        ab = b - a
        ln = np.hypot(ab[..., 0], ab[..., 1])
        cross = ab[..., 0] * (c[..., 1] - a[..., 1]) - ab[..., 1] * (c[..., 0] - a[..., 0])
        with np.errstate(divide="ignore", invalid="ignore"):
            d = np.where(ln > 0, cross / np.where(ln > 0, ln, 1.0), 0.0)
        return np.where(np.abs(d) <= GEOM_EPS, 0.0, np.sign(d))

    s1 = side(p1, p2, q1)
    s2 = side(p1, p2, q2)
    s3 = side(q1, q2, p1)
    s4 = side(q1, q2, p2)
    crossing = (s1 * s2 < 0) & (s3 * s4 < 0)
    return bool(crossing.any())


def box_in_region(box: OrientedBox, region: RegionSet) -> int | None:
    """Index of the polygon fully containing `box`, or None.

    The box must have all corners inside one polygon, cross no ring of the
    region, and swallow no hole.
    """
    corners = box.corners
    cx0, cy0 = corners[:, 0].min(), corners[:, 1].min()
    cx1, cy1 = corners[:, 0].max(), corners[:, 1].max()

    host: int | None = None
    for m, poly in enumerate(region.polygons):
        bx0, by0, bx1, by1 = poly.bbox
        if cx0 < bx0 or cy0 < by0 or cx1 > bx1 or cy1 > by1:
            continue
        if poly.contains_points(corners).all():
            host = m
            break
    if host is None:
        return None

    box_edges = np.hstack([corners, np.roll(corners, -1, axis=0)])
    for poly in region.polygons:
        bx0, by0, bx1, by1 = poly.bbox
        if cx1 < bx0 or cx0 > bx1 or cy1 < by0 or cy0 > by1:
            continue
        if _segments_properly_cross(box_edges, poly._edges):
            return None

    # A hole strictly inside the box leaves corners in-region and edges
    # uncrossed, yet the box would cover excluded area.
    for hole in region.polygons[host].holes:
        if box.contains_points(hole[:1], eps=-GEOM_EPS)[0]:
            return None
    return host


@dataclass(frozen=True, slots=True)
class Triangle:
    vertices: np.ndarray  # (3, 2)
    area: float
    centroid: tuple[float, float]


@dataclass
class Tin:
    """Triangulation of the free region, sorted by descending triangle area."""

    vertices: np.ndarray    # (n, 3, 2)
    areas: np.ndarray       # (n,)
    centroids: np.ndarray   # (n, 2)
    constraint_rings: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.areas)

    def triangle(self, i: int) -> Triangle:
        return Triangle(self.vertices[i], float(self.areas[i]),
                        (float(self.centroids[i, 0]), float(self.centroids[i, 1])))

    @property
    def total_area(self) -> float:
        return float(self.areas.sum())


def build_tin(region: RegionSet, placed: list[OrientedBox]) -> Tin:
    """Constrained triangulation of the region minus the placed boxes.

    Region rings and box edges are constraint edges; triangles whose centroid
    falls outside the region or inside a box are discarded; the rest are
    sorted by descending area.
    """
    if region.area <= 0:
        raise RegionError("cannot triangulate a zero-area region")
    free = region.as_shapely()
    if placed:
        occupied = shapely.union_all([b.as_shapely() for b in placed])
        free = free.difference(occupied)
    if free.is_empty:
        return Tin(np.zeros((0, 3, 2)), np.zeros(0), np.zeros((0, 2)))

    collection = shapely.constrained_delaunay_triangles(free)
    tris = []
    for geom in collection.geoms:
        coords = np.asarray(geom.exterior.coords)[:3]
        tris.append(coords)
    if not tris:
        return Tin(np.zeros((0, 3, 2)), np.zeros(0), np.zeros((0, 2)))

    verts = np.stack(tris)
    v0, v1, v2 = verts[:, 0], verts[:, 1], verts[:, 2]
    areas = 0.5 * np.abs((v1[:, 0] - v0[:, 0]) * (v2[:, 1] - v0[:, 1]) -
                         (v2[:, 0] - v0[:, 0]) * (v1[:, 1] - v0[:, 1]))
    centroids = verts.mean(axis=1)

    keep = areas > 0
    inside = np.zeros(len(verts), dtype=bool)
    for poly in region.polygons:
        inside |= poly.contains_points(centroids)
    keep &= inside
    for box in placed:
        keep &= ~box.contains_points(centroids, eps=-GEOM_EPS)

    verts, areas, centroids = verts[keep], areas[keep], centroids[keep]
    order = np.lexsort((centroids[:, 0], centroids[:, 1], -areas))
    rings = [np.asarray(r) for r in _boundary_rings(free)]
    return Tin(verts[order], areas[order], centroids[order], rings)


def _boundary_rings(geom) -> list[np.ndarray]:
    polys = geom.geoms if geom.geom_type == "MultiPolygon" else [geom]
    rings = []
    for p in polys:
        rings.append(np.asarray(p.exterior.coords))
        rings.extend(np.asarray(r.coords) for r in p.interiors)
    return rings
