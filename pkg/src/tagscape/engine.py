"""Iterative largest-first tag placement.

Tags are placed one at a time into the triangulated free space of the
region. Each iteration rebuilds the triangulation, gathers candidate
locations from the largest triangles, filters candidates that crowd
previously placed tags, and picks the candidate that maximizes the
negative spatial autocorrelation index of the resulting mark set
(or, in baseline mode, simply the largest triangle).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import metrics as metrics_mod
from . import multiscale
from .autocorr import CoincidentMarksError, oriented_score
from .geometry import (ORIENTATIONS, OrientedBox, Point, RegionSet,
                       TextMetricsModel, Tin, box_in_region, boxes_intersect,
                       build_tin, pt_to_ground, text_extent)
from .virtual import (GRID_STRATEGY, STRATEGIES, VirtualField, generate,
                      grid_pitch_pt, mean_tag_length, prune)

INDEX_MODE = "index"
BASELINE_MODE = "baseline"
MODES = (INDEX_MODE, BASELINE_MODE)

FORMAT_VERSION = "1"

# Tolerance guarding the Strategy II mean against round-off when all
# candidate distances are equal.
_DISTANCE_RTOL = 1e-9


class ConfigError(ValueError):
    """Layout configuration violates an invariant."""


class InfeasibleLayoutError(RuntimeError):
    """No feasible placement exists under the given constraints."""


@dataclass(frozen=True)
class TagSpec:
    """One tag to place: text, importance weight, optional user constraints."""

    text: str
    weight: float
    pinned_center: Point | None = None
    fixed_font: float | None = None

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("tag text must be non-empty")
        if self.weight < 0:
            raise ValueError(f"tag weight must be >= 0, got {self.weight}")
        if self.fixed_font is not None and self.fixed_font <= 0:
            raise ValueError("fixed font size must be positive")


@dataclass(frozen=True)
class PlacedTag:
    spec: TagSpec
    font_pt: float
    box: OrientedBox
    polygon_index: int
    rank: int


@dataclass(frozen=True)
class UnplacedTag:
    spec: TagSpec
    font_pt: float
    reason: str


@dataclass(frozen=True)
class LayoutConfig:
    f_max: float = 60.0
    f_min: float = 6.0
    n_t: int = 50
    orientations: tuple[float, ...] = (0.0,)
    orientation_weights: dict[float, float] = field(default_factory=dict)
    strategy1: bool = True
    strategy2: bool = True
    mode: str = INDEX_MODE
    virtual_strategy: str = GRID_STRATEGY
    seed: int = 0
    scale: float | None = None  # representative fraction; None = fit screen
    screen: tuple[int, int, int] = multiscale.DEFAULT_SCREEN

    def __post_init__(self) -> None:
        if not (self.f_max >= self.f_min > 0):
            raise ConfigError(f"need F_max >= F_min > 0, got {self.f_max}, {self.f_min}")
        if self.n_t < 1:
            raise ConfigError(f"N_T must be >= 1, got {self.n_t}")
        if not self.orientations:
            raise ConfigError("at least one orientation is required")
        bad = [o for o in self.orientations if o not in ORIENTATIONS]
        if bad:
            raise ConfigError(f"orientations {bad} outside the allowed set {ORIENTATIONS}")
        for o, w in self.orientation_weights.items():
            if w <= 0:
                raise ConfigError(f"orientation weight for {o} must be positive, got {w}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.virtual_strategy not in STRATEGIES:
            raise ConfigError(f"virtual strategy must be one of {STRATEGIES}")
        if self.scale is not None and self.scale <= 0:
            raise ConfigError("scale must be a positive representative fraction")


@dataclass
class Candidate:
    """A feasible (location, orientation) pair for the current tag."""

    location: tuple[float, float]
    orientation: float
    triangle_area: float
    polygon_index: int
    box: OrientedBox
    font_pt: float
    d_min: float | None = None  # min center distance to placed tags


@dataclass
class RunStats:
    triangles_visited: int = 0
    index_evaluations: int = 0


@dataclass
class LayoutState:
    """Mutable engine state shared by the per-iteration operations."""

    region: RegionSet
    config: LayoutConfig
    scale: float
    text_model: TextMetricsModel = field(default_factory=TextMetricsModel)
    placed: list[PlacedTag] = field(default_factory=list)
    virtual_field: VirtualField = field(default_factory=lambda: VirtualField(()))
    tin: Tin | None = None
    stats: RunStats = field(default_factory=RunStats)

    def placed_boxes(self) -> list[OrientedBox]:
        return [p.box for p in self.placed]

    def placed_centers(self) -> np.ndarray:
        if not self.placed:
            return np.zeros((0, 2))
        return np.array([(p.box.center.x, p.box.center.y) for p in self.placed])


@dataclass(frozen=True)
class VirtualSummary:
    strategy: str
    pitch_m: float
    seed: int
    initial_count: int
    final_count: int


@dataclass
class LayoutBundle:
    """Deterministic output of one layout run."""

    region: RegionSet
    config: LayoutConfig          # scale resolved
    placed: list[PlacedTag]
    unplaced: list[UnplacedTag]
    virtual_summary: VirtualSummary
    metrics: metrics_mod.MetricBlock
    levels: list[multiscale.LevelView]
    warnings: list[str] = field(default_factory=list)
    stats: RunStats = field(default_factory=RunStats)
    f_max_effective: float = 0.0
    run_seconds: float | None = None
    format_version: str = FORMAT_VERSION


def font_size_for_weight(spec: TagSpec, w_max: float, w_min: float,
                         f_max: float, f_min: float) -> float:
    """Linear weight-to-font mapping; a fixed font overrides it."""
    if spec.fixed_font is not None:
        return spec.fixed_font
    if f_max < f_min:
        raise ConfigError(f"need F_max >= F_min, got {f_max} < {f_min}")
    if w_max == w_min:
        return f_max
    return f_min + (spec.weight - w_min) * (f_max - f_min) / (w_max - w_min)


def _box_for(tag: TagSpec, font: float, center: tuple[float, float],
             orientation: float, scale: float, model: TextMetricsModel) -> OrientedBox:
    w_pt, h_pt = text_extent(tag.text, font, model)
    return OrientedBox(Point(center[0], center[1]),
                       pt_to_ground(w_pt, scale), pt_to_ground(h_pt, scale),
                       orientation)


def _overlaps_placed(box: OrientedBox, state: LayoutState) -> bool:
    if not state.placed:
        return False
    centers = state.placed_centers()
    d2 = (centers[:, 0] - box.center.x) ** 2 + (centers[:, 1] - box.center.y) ** 2
    radii = np.array([p.box.radius for p in state.placed])
    near = d2 <= (radii + box.radius) ** 2
    return any(boxes_intersect(box, state.placed[i].box) for i in np.flatnonzero(near))


def _feasible(box: OrientedBox, state: LayoutState) -> int | None:
    m = box_in_region(box, state.region)
    if m is None or _overlaps_placed(box, state):
        return None
    return m


def candidates(state: LayoutState, tag: TagSpec, font: float) -> list[Candidate]:
    """Scan triangles in descending area for feasible placements.

    Gathers every feasible (location, orientation) pair until N_T distinct
    locations are found (all triangles when Strategy I is off).
    """
    if state.tin is None:
        state.tin = build_tin(state.region, state.placed_boxes())
    tin = state.tin
    cfg = state.config
    limit = cfg.n_t if cfg.strategy1 else None

    out: list[Candidate] = []
    locations = 0
    for i in range(len(tin)):
        state.stats.triangles_visited += 1
        loc = (float(tin.centroids[i, 0]), float(tin.centroids[i, 1]))
        found = False
        for theta in cfg.orientations:
            box = _box_for(tag, font, loc, theta, state.scale, state.text_model)
            m = _feasible(box, state)
            if m is None:
                continue
            out.append(Candidate(loc, theta, float(tin.areas[i]), m, box, font))
            found = True
        if found:
            locations += 1
            if limit is not None and locations >= limit:
                break
    return out


def filter_close(cands: list[Candidate], placed: list[PlacedTag],
                 enabled: bool = True) -> list[Candidate]:
    """Strategy II: drop candidates closer to placed tags than the mean.

    D_i is the shortest center distance from the candidate to any placed tag;
    candidates with D_i strictly below the mean over the candidate list are
    removed. No placed tags, or the filter disabled, leaves the list as is.
    """
    if not enabled or not placed or not cands:
        return list(cands)
    centers = np.array([(p.box.center.x, p.box.center.y) for p in placed])
    for c in cands:
        dx = centers[:, 0] - c.location[0]
        dy = centers[:, 1] - c.location[1]
        c.d_min = float(np.min(np.hypot(dx, dy)))
    d = np.array([c.d_min for c in cands])
    mean = float(d.mean())
    tol = _DISTANCE_RTOL * max(1.0, mean)
    return [c for c in cands if (mean - c.d_min) <= tol]


class _MarkGroup:
    """Pair-sum cache for one polygon's marks.

    Stores row sums instead of the n-by-n weight matrix, so hypothetical
    sub-indices cost O(n) per candidate and memory stays O(n) even for
    dense virtual fields. With W the symmetric zero-diagonal inverse
    distance matrix and x the sizes:

        b_i = sum_j w_ij          sw   = sum_ij w_ij
        r_i = sum_j w_ij x_j      swx  = sum_ij w_ij x_i
                                  swxx = sum_ij w_ij x_i x_j
    """

    _BLOCK = 512

    def __init__(self, pos: np.ndarray, sizes: np.ndarray, virtual: np.ndarray):
        self.pos = pos
        self.sizes = sizes
        self.virtual = virtual
        n = len(sizes)
        self.n = n
        self.b = np.zeros(n)
        self.r = np.zeros(n)
        for lo in range(0, n, self._BLOCK):
            hi = min(lo + self._BLOCK, n)
            d = np.hypot(pos[lo:hi, 0:1] - pos[None, :, 0],
                         pos[lo:hi, 1:2] - pos[None, :, 1])
            d[np.arange(lo, hi) - lo, np.arange(lo, hi)] = np.inf
            if np.any(d == 0.0):
                raise CoincidentMarksError(
                    "coincident mark centers within one polygon")
            w = 1.0 / d
            self.b[lo:hi] = w.sum(axis=1)
            self.r[lo:hi] = w @ sizes
        self.sw = float(self.b.sum())
        self.swx = float(self.b @ sizes)
        self.swxx = float(sizes @ self.r)
        self.sx = float(sizes.sum())
        self.sxx = float(sizes @ sizes)

    def base_index(self) -> float:
        return self._index_from_sums(self.n, self.sw, self.swx, self.swxx,
                                     self.sx, self.sxx,
                                     float(self.sizes.min()) if self.n else 0.0,
                                     float(self.sizes.max()) if self.n else 0.0)

    @staticmethod
    def _index_from_sums(n, sw, swx, swxx, sx, sxx, smin, smax) -> float:
        if n < 2 or (smax - smin) <= 1e-12 * max(1.0, abs(smax), abs(smin)):
            return 0.0
        mean = sx / n
        num = swxx - 2.0 * mean * swx + mean * mean * sw
        den = sxx - n * mean * mean
        return -(n / sw) * (num / den)

    def hypothetical(self, box: OrientedBox, size: float) -> tuple[int, float]:
        """(count, sub-index) after adding a mark of `size` at the box center
        and dropping the virtual marks the box covers."""
        killed = self.virtual & box.contains_points(self.pos)
        nk = int(np.count_nonzero(killed))

        sw_a, swx_a, swxx_a = self.sw, self.swx, self.swxx
        sx_a, sxx_a = self.sx, self.sxx
        if nk:
            xk = self.sizes[killed]
            bk = self.b[killed]
            rk = self.r[killed]
            dkk = np.hypot(self.pos[killed, 0:1] - self.pos[killed, 0],
                           self.pos[killed, 1:2] - self.pos[killed, 1])
            np.fill_diagonal(dkk, np.inf)
            wkk = 1.0 / dkk
            w_kk = float(wkk.sum())
            w_kk_x = float(wkk.sum(axis=0) @ xk)
            w_kk_xx = float(xk @ wkk @ xk)
            sw_a = sw_a - 2.0 * float(bk.sum()) + w_kk
            swx_a = swx_a - float(bk @ xk + rk.sum()) + w_kk_x
            swxx_a = swxx_a - 2.0 * float(xk @ rk) + w_kk_xx
            sx_a -= float(xk.sum())
            sxx_a -= float(xk @ xk)

        d_c = np.hypot(self.pos[:, 0] - box.center.x,
                       self.pos[:, 1] - box.center.y)
        if np.any(d_c == 0.0):
            raise CoincidentMarksError(
                "candidate coincides with an existing mark center")
        w_c = 1.0 / d_c
        wx_c = w_c * self.sizes
        if nk:
            wc_sum = float(w_c.sum() - w_c[killed].sum())
            wcx_sum = float(wx_c.sum() - wx_c[killed].sum())
        else:
            wc_sum = float(w_c.sum())
            wcx_sum = float(wx_c.sum())

        n1 = self.n - nk + 1
        sw1 = sw_a + 2.0 * wc_sum
        swx1 = swx_a + size * wc_sum + wcx_sum
        swxx1 = swxx_a + 2.0 * size * wcx_sum
        sx1 = sx_a + size
        sxx1 = sxx_a + size * size

        if nk:
            alive_sizes = np.where(killed, np.nan, self.sizes)
            smin = min(float(np.nanmin(alive_sizes)), size) if n1 > 1 else size
            smax = max(float(np.nanmax(alive_sizes)), size) if n1 > 1 else size
        else:
            smin = min(float(self.sizes.min()), size) if self.n else size
            smax = max(float(self.sizes.max()), size) if self.n else size
        return n1, self._index_from_sums(n1, sw1, swx1, swxx1, sx1, sxx1,
                                         smin, smax)


class _IndexScorer:
    """Scores hypothetical placements against the current mark set.

    Only the candidate's polygon changes per hypothesis; every other
    polygon contributes its cached sub-index.
    """

    def __init__(self, placed: list[PlacedTag], virtual_field: VirtualField,
                 stats: RunStats | None = None):
        self.stats = stats
        rows: dict[int, list] = {}
        for p in placed:
            rows.setdefault(p.polygon_index, []).append(
                (p.box.center.x, p.box.center.y, p.font_pt, False))
        for m in virtual_field.marks:
            rows.setdefault(m.polygon_index, []).append(
                (m.x, m.y, m.size, True))
        self._groups: dict[int, _MarkGroup] = {}
        for poly, items in rows.items():
            arr = np.array([(x, y, s) for x, y, s, _ in items])
            virtual = np.array([v for _, _, _, v in items], dtype=bool)
            self._groups[poly] = _MarkGroup(arr[:, :2], arr[:, 2], virtual)
        self._base: dict[int, tuple[int, float]] = {}

    def _base_pair(self, m: int) -> tuple[int, float]:
        if m not in self._base:
            g = self._groups[m]
            self._base[m] = (g.n, g.base_index())
        return self._base[m]

    def score(self, box: OrientedBox, size: float, m: int) -> float:
        """Overall index after placing a mark of `size` in polygon `m`,
        with virtual marks under `box` removed."""
        if self.stats is not None:
            self.stats.index_evaluations += 1
        weighted = 0.0
        total = 0
        for k in self._groups:
            if k == m:
                continue
            n_k, i_k = self._base_pair(k)
            weighted += n_k * i_k
            total += n_k

        group = self._groups.get(m)
        if group is None or group.n == 0:
            n_m, i_m = 1, 0.0
        else:
            n_m, i_m = group.hypothetical(box, size)
        weighted += n_m * i_m
        total += n_m
        raw = weighted / total * 10.0
        return float(np.clip(raw, -10.0, 10.0))


def select_best(cands: list[Candidate], state: LayoutState,
                config: LayoutConfig) -> Candidate:
    """Pick the winning candidate.

    Index mode maximizes the orientation-weighted hypothetical index; ties
    fall back to larger triangle area, then earlier orientation preference,
    then smaller (y, x). Baseline mode takes the largest-area triangle with
    the earliest-preference orientation.
    """
    if not cands:
        raise ValueError("empty candidate list: skip this tag")
    pref = {theta: i for i, theta in enumerate(config.orientations)}

    if config.mode == BASELINE_MODE:
        return max(cands, key=lambda c: (
            c.triangle_area, -pref[c.orientation],
            -c.location[1], -c.location[0]))

    scorer = _IndexScorer(state.placed, state.virtual_field, state.stats)
    scored = []
    for c in cands:
        raw = scorer.score(c.box, c.font_pt, c.polygon_index)
        weighted = oriented_score(raw, c.orientation, config.orientation_weights)
        # Scores within 1e-9 count as ties, so float summation noise on
        # mirror-image configurations cannot shadow the tie-break chain.
        scored.append((round(weighted * 1e9), c))
    return max(scored, key=lambda sc: (
        sc[0], sc[1].triangle_area, -pref[sc[1].orientation],
        -sc[1].location[1], -sc[1].location[0]))[1]


def _any_feasible(state: LayoutState, tag: TagSpec, font: float) -> bool:
    """True if at least one feasible placement exists for the tag."""
    if tag.pinned_center is not None:
        for theta in state.config.orientations:
            box = _box_for(tag, font, tag.pinned_center.as_tuple(), theta,
                           state.scale, state.text_model)
            if _feasible(box, state) is not None:
                return True
        return False
    if state.tin is None:
        state.tin = build_tin(state.region, state.placed_boxes())
    for i in range(len(state.tin)):
        loc = (float(state.tin.centroids[i, 0]), float(state.tin.centroids[i, 1]))
        for theta in state.config.orientations:
            box = _box_for(tag, font, loc, theta, state.scale, state.text_model)
            if _feasible(box, state) is not None:
                return True
    return False


def shrink_fmax(region: RegionSet, first_tag: TagSpec, config: LayoutConfig,
                text_model: TextMetricsModel | None = None) -> float:
    """Decrease F_max by 1 until the first (largest) tag fits somewhere.

    For a fixed-font first tag the same loop runs on F_user and the adjusted
    F_user is returned. Raises when nothing fits at F_min.
    """
    scale = config.scale or multiscale.initial_scale(region.bbox, config.screen)
    state = LayoutState(region=region, config=config, scale=scale,
                        text_model=text_model or TextMetricsModel())
    f = first_tag.fixed_font if first_tag.fixed_font is not None else config.f_max
    while f >= config.f_min:
        if _any_feasible(state, first_tag, f):
            return f
        f -= 1.0
    raise InfeasibleLayoutError(
        f"region too small: {first_tag.text!r} does not fit at any size >= F_min")


def _order_tags(tags: list[TagSpec]) -> list[TagSpec]:
    # Pinned tags go first; within each class, descending weight, input order
    # breaking ties.
    return [t for _, t in sorted(
        enumerate(tags),
        key=lambda it: (it[1].pinned_center is None, -it[1].weight, it[0]))]


def place_all(region: RegionSet, tags: list[TagSpec], config: LayoutConfig,
              text_model: TextMetricsModel | None = None,
              on_iteration=None) -> LayoutBundle:
    """Run the full layout and return a deterministic bundle.

    `on_iteration(placed, virtual_field)` is invoked after every placement.
    """
    if region.area <= 0:
        raise ConfigError("region must have positive area")
    model = text_model or TextMetricsModel()
    scale = config.scale or multiscale.initial_scale(region.bbox, config.screen)
    config = replace(config, scale=scale)
    state = LayoutState(region=region, config=config, scale=scale, text_model=model)
    warnings: list[str] = []

    if not tags:
        summary = VirtualSummary(config.virtual_strategy, 0.0, config.seed, 0, 0)
        return _assemble(state, [], summary, warnings, config.f_max)

    order = _order_tags(tags)
    w_max = max(t.weight for t in tags)
    w_min = min(t.weight for t in tags)

    pitch_pt = grid_pitch_pt(config.f_max, config.f_min,
                             mean_tag_length([t.text for t in tags]))
    pitch_m = pt_to_ground(pitch_pt, scale)
    state.virtual_field = generate(region, config.virtual_strategy, pitch_m,
                                   config.seed)
    initial_virtual = len(state.virtual_field)

    # F_max (or the first tag's F_user) shrinks until the largest tag fits.
    # Fixed fonts already below F_min are never attempted, so they cannot
    # drive the shrink loop either.
    first = next((t for t in order
                  if t.fixed_font is None or t.fixed_font >= config.f_min), None)
    if first is None:
        summary = VirtualSummary(config.virtual_strategy, pitch_m, config.seed,
                                 initial_virtual, len(state.virtual_field))
        warnings.append("no tag could be placed")
        return _assemble(state, [UnplacedTag(t, t.fixed_font, "font below F_min")
                                 for t in order], summary, warnings, config.f_max)
    adjusted = shrink_fmax(region, first, config, model)
    first_font_override = adjusted if first.fixed_font is not None else None
    f_max_eff = config.f_max if first.fixed_font is not None else adjusted

    unplaced: list[UnplacedTag] = []
    for tag in order:
        if tag is first and first_font_override is not None:
            font = first_font_override
        else:
            font = font_size_for_weight(tag, w_max, w_min, f_max_eff, config.f_min)
        if font < config.f_min:
            unplaced.append(UnplacedTag(tag, font, "font below F_min"))
            continue
        if tag.pinned_center is not None:
            _place_pinned(state, tag, font, on_iteration)
        elif not _place_free(state, tag, font, on_iteration):
            unplaced.append(UnplacedTag(tag, font, "no feasible location"))

    if not state.placed:
        warnings.append("no tag could be placed")
    summary = VirtualSummary(config.virtual_strategy, pitch_m, config.seed,
                             initial_virtual, len(state.virtual_field))
    return _assemble(state, unplaced, summary, warnings, f_max_eff)


def _commit(state: LayoutState, tag: TagSpec, font: float, box: OrientedBox,
            m: int, on_iteration) -> None:
    state.placed.append(PlacedTag(tag, font, box, m, len(state.placed)))
    state.virtual_field = prune(state.virtual_field, [box])
    state.tin = None
    if on_iteration is not None:
        on_iteration(list(state.placed), state.virtual_field)


def _place_pinned(state: LayoutState, tag: TagSpec, font: float,
                  on_iteration) -> None:
    # A pinned center is an explicit user contract: failure aborts the run
    # rather than silently moving the tag. Fixed-font pins may shrink first.
    fonts = [font]
    if tag.fixed_font is not None:
        f = font - 1.0
        while f >= state.config.f_min:
            fonts.append(f)
            f -= 1.0
    for f in fonts:
        for theta in state.config.orientations:
            box = _box_for(tag, f, tag.pinned_center.as_tuple(), theta,
                           state.scale, state.text_model)
            m = _feasible(box, state)
            if m is not None:
                _commit(state, tag, f, box, m, on_iteration)
                return
    raise InfeasibleLayoutError(
        f"pinned tag {tag.text!r} does not fit at its pinned center")


def _place_free(state: LayoutState, tag: TagSpec, font: float,
                on_iteration) -> bool:
    cfg = state.config
    fonts = [font]
    if tag.fixed_font is not None:
        # Fixed-size tags shrink by 1 pt until they fit (or hit F_min).
        f = font - 1.0
        while f >= cfg.f_min:
            fonts.append(f)
            f -= 1.0
    for f in fonts:
        cands = candidates(state, tag, f)
        if not cands:
            continue
        if cfg.mode == INDEX_MODE:
            cands = filter_close(cands, state.placed, enabled=cfg.strategy2)
        best = select_best(cands, state, cfg)
        _commit(state, tag, f, best.box, best.polygon_index, on_iteration)
        return True
    return False


def _assemble(state: LayoutState, unplaced: list[UnplacedTag],
              summary: VirtualSummary, warnings: list[str],
              f_max_eff: float) -> LayoutBundle:
    block = metrics_mod.metric_block(state.placed, state.region)
    bundle = LayoutBundle(
        region=state.region, config=state.config, placed=list(state.placed),
        unplaced=unplaced, virtual_summary=summary, metrics=block,
        levels=[], warnings=warnings, stats=state.stats,
        f_max_effective=f_max_eff)
    bundle.levels = multiscale.level_views(
        bundle, list(multiscale.DEFAULT_LEVEL_RATIOS))
    return bundle
