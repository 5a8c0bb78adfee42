"""Independent reference implementations used only to check the library.

Everything here is deliberately written the slow, obvious way (double
loops, half-plane clipping, point sampling) and shares no code with the
package under test.
"""

from __future__ import annotations

import math

from matplotlib.path import Path as MplPath


def moran_i(points: list[tuple[float, float]], values: list[float]) -> float:
    """Textbook global Moran's I with unnormalized 1/d weights, double loop."""
    n = len(values)
    mean = sum(values) / n
    dev = [v - mean for v in values]
    num = 0.0
    sw = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = math.dist(points[i], points[j])
            w = 1.0 / d
            sw += w
            num += w * dev[i] * dev[j]
    ss = sum(d * d for d in dev)
    return (n / sw) * (num / ss)


def overall_index_oracle(marks) -> float:
    """Weighted-average negated Moran's I across polygons, scaled and clamped.

    `marks` is any iterable with .x, .y, .size, .polygon_index attributes.
    """
    groups: dict[int, list] = {}
    for m in marks:
        groups.setdefault(m.polygon_index, []).append(m)
    weighted = 0.0
    total = 0
    for group in groups.values():
        n = len(group)
        sizes = [g.size for g in group]
        if n < 2 or max(sizes) == min(sizes):
            i_m = 0.0
        else:
            i_m = -moran_i([(g.x, g.y) for g in group], sizes)
        weighted += i_m * n
        total += n
    raw = weighted / total * 10.0
    return max(-10.0, min(10.0, raw))


def clip_polygon(subject: list[tuple[float, float]],
                 clipper: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Sutherland-Hodgman: clip a polygon by a convex clipper (CCW)."""
    output = list(subject)
    k = len(clipper)
    for i in range(k):
        ax, ay = clipper[i]
        bx, by = clipper[(i + 1) % k]
        input_list = output
        output = []
        if not input_list:
            break
        for j in range(len(input_list)):
            px, py = input_list[j]
            qx, qy = input_list[(j + 1) % len(input_list)]
            p_in = (bx - ax) * (py - ay) - (by - ay) * (px - ax) >= 0
            q_in = (bx - ax) * (qy - ay) - (by - ay) * (qx - ax) >= 0
            if p_in:
                output.append((px, py))
            if p_in != q_in:
                denom = (bx - ax) * (qy - py) - (by - ay) * (qx - px)
                if denom != 0:
                    t = -((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / denom
                    output.append((px + t * (qx - px), py + t * (qy - py)))
    return output


def polygon_area(poly: list[tuple[float, float]]) -> float:
    area = 0.0
    for i in range(len(poly)):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % len(poly)]
        area += x1 * y2 - x2 * y1
    return abs(area) / 2.0


def convex_overlap_area(a: list[tuple[float, float]],
                        b: list[tuple[float, float]]) -> float:
    return polygon_area(clip_polygon(a, b))


def boxes_intersect_oracle(corners_a, corners_b) -> bool:
    """Overlap decided by clipped intersection area.

    The cutoff sits far above float noise and far below any real overlap,
    so exact touching reads as non-intersecting.
    """
    a = [tuple(map(float, c)) for c in corners_a]
    b = [tuple(map(float, c)) for c in corners_b]
    return convex_overlap_area(a, b) > 1e-12


def region_membership_oracle(region, points) -> list[int | None]:
    """Polygon index per point via matplotlib even-odd paths."""
    paths = []
    for poly in region.polygons:
        exterior = MplPath(poly.exterior)
        holes = [MplPath(h) for h in poly.holes]
        paths.append((exterior, holes))
    out = []
    for x, y in points:
        found = None
        for m, (exterior, holes) in enumerate(paths):
            if exterior.contains_point((x, y)) and \
                    not any(h.contains_point((x, y)) for h in holes):
                found = m
                break
        out.append(found)
    return out


def sample_box_points(box, count: int, rng) -> list[tuple[float, float]]:
    """Uniform interior samples of an oriented box."""
    rad = math.radians(box.angle)
    c, s = math.cos(rad), math.sin(rad)
    pts = []
    for _ in range(count):
        u = (rng.random() - 0.5) * box.width
        v = (rng.random() - 0.5) * box.height
        pts.append((box.center.x + u * c - v * s, box.center.y + u * s + v * c))
    return pts
