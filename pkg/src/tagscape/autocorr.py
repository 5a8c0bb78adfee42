"""Negative spatial autocorrelation index over sized marks.

The index rewards layouts in which unlike sizes sit next to each other:
per polygon it is the negated global Moran's I of mark sizes under
unnormalized inverse-distance weights, and the overall value is the
tag-count-weighted average across polygons scaled by 10 and clamped to
[-10, 10]. Marks in different polygons are never neighbors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Size given to virtual placeholder marks, in points.
VIRTUAL_SIZE_PT = 0.1

INDEX_SCALE = 10.0
INDEX_RANGE = (-10.0, 10.0)

# Sizes whose spread is below this relative tolerance count as all-equal.
_VARIANCE_RTOL = 1e-12


class CoincidentMarksError(ValueError):
    """Two same-polygon marks share a center; inverse distance is undefined."""


class OrientationWeightError(ValueError):
    """Orientation weights must be positive."""


@dataclass(frozen=True, slots=True)
class SizedMark:
    """A point with a size value: a placed tag center or a virtual filler."""

    x: float
    y: float
    size: float
    polygon_index: int = 0
    is_virtual: bool = False

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise ValueError(f"mark size must be positive, got {self.size}")


@dataclass
class IndexBreakdown:
    """Overall index plus the (count, sub-index) pair for each polygon."""

    per_polygon: dict[int, tuple[int, float]] = field(default_factory=dict)
    overall: float = 0.0

    @property
    def total_marks(self) -> int:
        return sum(n for n, _ in self.per_polygon.values())


def pair_weight(a: SizedMark, b: SizedMark) -> float:
    """Inverse center distance for same-polygon marks, 0 across polygons."""
    if a.polygon_index != b.polygon_index:
        return 0.0
    d = float(np.hypot(a.x - b.x, a.y - b.y))
    if d == 0.0:
        raise CoincidentMarksError(
            f"marks at ({a.x}, {a.y}) coincide within polygon {a.polygon_index}")
    return 1.0 / d


def _sizes_all_equal(sizes: np.ndarray) -> bool:
    spread = float(sizes.max() - sizes.min())
    return spread <= _VARIANCE_RTOL * max(1.0, float(np.abs(sizes).max()))


def sub_index_arrays(xs: np.ndarray, ys: np.ndarray, sizes: np.ndarray) -> float:
    """Negated Moran's I for one polygon's marks (array form).

    Degenerate inputs (fewer than two marks, or zero size variance) score 0:
    a polygon with no size contrast neither helps nor hurts.
    """
    n = len(sizes)
    if n < 2 or _sizes_all_equal(sizes):
        return 0.0
    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    d = np.hypot(dx, dy)
    off_diag = ~np.eye(n, dtype=bool)
    if np.any(d[off_diag] == 0.0):
        raise CoincidentMarksError("coincident mark centers within one polygon")
    w = np.zeros_like(d)
    w[off_diag] = 1.0 / d[off_diag]
    dev = sizes - sizes.mean()
    ss = float(dev @ dev)
    num = float(dev @ w @ dev)          # w has zero diagonal
    sw = float(w.sum())
    moran = (n / sw) * (num / ss)
    return -moran


def sub_index(marks: list[SizedMark]) -> float:
    """Negated Moran's I for marks that all share one polygon."""
    if not marks:
        return 0.0
    if len({m.polygon_index for m in marks}) != 1:
        raise ValueError("sub_index expects marks from a single polygon")
    xs = np.array([m.x for m in marks])
    ys = np.array([m.y for m in marks])
    sizes = np.array([m.size for m in marks])
    return sub_index_arrays(xs, ys, sizes)


def overall_index(marks: list[SizedMark]) -> IndexBreakdown:
    """Count-weighted average of per-polygon sub-indices, scaled and clamped."""
    if not marks:
        raise ValueError("overall_index requires at least one mark")
    by_polygon: dict[int, list[SizedMark]] = {}
    for m in marks:
        by_polygon.setdefault(m.polygon_index, []).append(m)

    breakdown = IndexBreakdown()
    weighted = 0.0
    total = 0
    for poly_idx in sorted(by_polygon):
        group = by_polygon[poly_idx]
        i_m = sub_index(group)
        n_m = len(group)
        breakdown.per_polygon[poly_idx] = (n_m, i_m)
        weighted += i_m * n_m
        total += n_m
    raw = weighted / total * INDEX_SCALE
    breakdown.overall = float(np.clip(raw, *INDEX_RANGE))
    return breakdown


def oriented_score(index_value: float, orientation: float,
                   weights: dict[float, float] | None = None) -> float:
    """Bias an index value by the user's preference weight for an orientation.

    Weights >= 1 never worsen a score: positive values are multiplied,
    negative ones divided.
    """
    w = 1.0 if weights is None else weights.get(orientation, 1.0)
    if w <= 0:
        raise OrientationWeightError(
            f"orientation weight for {orientation} must be positive, got {w}")
    return index_value * w if index_value >= 0 else index_value / w
