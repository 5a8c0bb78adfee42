"""Virtual filler marks.

Empty region space is populated with tiny placeholder marks so the
autocorrelation index is computable from the first placement onward;
placeholders disappear as real tags cover them.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace

import numpy as np

from .autocorr import VIRTUAL_SIZE_PT, SizedMark
from .geometry import OrientedBox, RegionSet

GRID_STRATEGY = "grid"
RANDOM_STRATEGY = "random"
STRATEGIES = (GRID_STRATEGY, RANDOM_STRATEGY)


@dataclass(frozen=True)
class VirtualField:
    marks: tuple[SizedMark, ...]
    strategy: str = GRID_STRATEGY
    pitch_m: float = 0.0
    seed: int = 0

    def __len__(self) -> int:
        return len(self.marks)

    def centers(self) -> np.ndarray:
        if not self.marks:
            return np.zeros((0, 2))
        return np.array([(m.x, m.y) for m in self.marks])


def grid_pitch_pt(f_max: float, f_min: float, mean_len: float) -> float:
    """Pitch of the virtual lattice, in points: (F_max + F_min) * mean_len / 4."""
    if f_min <= 0 or f_max < f_min:
        raise ValueError(f"need F_max >= F_min > 0, got {f_max}, {f_min}")
    if mean_len <= 0:
        raise ValueError(f"mean tag length must be positive, got {mean_len}")
    return (f_max + f_min) * mean_len / 4.0


def mean_tag_length(texts: list[str]) -> float:
    """Average character count; the tag list must be non-empty."""
    if not texts:
        raise ValueError("cannot take the mean length of an empty tag list")
    return sum(len(t) for t in texts) / len(texts)


def _grid_centers(region: RegionSet, pitch_m: float) -> np.ndarray:
    x0, y0, x1, y1 = region.bbox
    nx = math.floor((x1 - x0) / pitch_m)
    ny = math.floor((y1 - y0) / pitch_m)
    if nx < 1 or ny < 1:
        return np.zeros((0, 2))
    xs = x0 + (np.arange(nx) + 0.5) * pitch_m
    ys = y0 + (np.arange(ny) + 0.5) * pitch_m
    gx, gy = np.meshgrid(xs, ys)
    return np.column_stack([gx.ravel(), gy.ravel()])


def _marks_from(centers: np.ndarray, owners: np.ndarray) -> tuple[SizedMark, ...]:
    return tuple(
        SizedMark(float(x), float(y), VIRTUAL_SIZE_PT, int(m), is_virtual=True)
        for (x, y), m in zip(centers, owners))


def generate(region: RegionSet, strategy: str, pitch_m: float,
             seed: int = 0) -> VirtualField:
    """Fill the region with placeholder marks.

    Grid strategy keeps lattice cell centers (pitch `pitch_m`, anchored at the
    bounding-box min corner) that land inside the region. Random strategy
    draws the same number of points uniformly inside the region with the
    given seed. A region smaller than one cell yields an empty field.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown virtual strategy {strategy!r}")
    if pitch_m <= 0:
        raise ValueError(f"pitch must be positive, got {pitch_m}")

    lattice = _grid_centers(region, pitch_m)
    if len(lattice) == 0:
        return VirtualField((), strategy, pitch_m, seed)
    owners = region.polygon_indices_of(lattice)
    inside = owners >= 0
    count = int(inside.sum())

    if strategy == GRID_STRATEGY:
        return VirtualField(_marks_from(lattice[inside], owners[inside]),
                            strategy, pitch_m, seed)

    if count == 0:
        return VirtualField((), strategy, pitch_m, seed)
    rng = random.Random(seed)
    x0, y0, x1, y1 = region.bbox
    centers: list[tuple[float, float]] = []
    owner_list: list[int] = []
    attempts = 0
    limit = 10_000 * count
    while len(centers) < count:
        attempts += 1
        if attempts > limit:
            raise RuntimeError("rejection sampling failed to fill the region")
        x = rng.uniform(x0, x1)
        y = rng.uniform(y0, y1)
        m = region.polygon_index_of(x, y)
        if m is not None:
            centers.append((x, y))
            owner_list.append(m)
    return VirtualField(_marks_from(np.array(centers), np.array(owner_list)),
                        strategy, pitch_m, seed)


def prune(field: VirtualField, placed: list[OrientedBox]) -> VirtualField:
    """Drop every placeholder whose center lies inside a placed box."""
    if not field.marks or not placed:
        return field
    centers = field.centers()
    covered = np.zeros(len(centers), dtype=bool)
    for box in placed:
        covered |= box.contains_points(centers)
    if not covered.any():
        return field
    kept = tuple(m for m, dead in zip(field.marks, covered) if not dead)
    return replace(field, marks=kept)
