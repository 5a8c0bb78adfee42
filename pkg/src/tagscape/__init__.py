"""tagscape: deterministic tag-map layouts built for multi-scale viewing.

Places weighted text tags inside geographic region polygons by greedily
maximizing a negative spatial autocorrelation index of tag sizes, so
that hiding small tags at lower zoom levels leaves neither large holes
nor clumps of large tags.
"""

from .autocorr import (IndexBreakdown, SizedMark, oriented_score,
                       overall_index, pair_weight, sub_index)
from .bundle import load_bundle, save_bundle, serialize
from .engine import (BASELINE_MODE, INDEX_MODE, Candidate, ConfigError,
                     InfeasibleLayoutError, LayoutBundle, LayoutConfig,
                     LayoutState, PlacedTag, RunStats, TagSpec, UnplacedTag,
                     candidates, filter_close, font_size_for_weight,
                     place_all, select_best, shrink_fmax)
from .geometry import (ORIENTATIONS, OrientedBox, Point, ProjectionError,
                       RegionError, RegionPolygon, RegionSet,
                       TextMetricsModel, Tin, box_in_region, boxes_intersect,
                       build_tin, project, pt_to_ground, text_extent,
                       unproject)
from .ingest import load_region, load_tags
from .metrics import EvalReport, compactness, compare, evaluate
from .multiscale import (LevelView, ScaleContext, initial_scale, level_views,
                         needs_reconstruction, rescale)
from .svg import export_svg
from .virtual import VirtualField, generate, grid_pitch_pt, prune

__version__ = "0.1.0"
