"""Evaluation metrics and side-by-side comparison reports.

A finished layout is summarized by the placed-tag count N, the
autocorrelation index I over placed tags (virtual marks never count
here), compactness C, wall time t, and the horizontal-tag count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING

from .autocorr import SizedMark, overall_index
from .geometry import RegionSet

if TYPE_CHECKING:  # pragma: no cover
    from .engine import LayoutBundle, PlacedTag


@dataclass(frozen=True)
class MetricBlock:
    n: int
    index: float
    compactness: float
    n_hor: int


@dataclass
class EvalReport:
    n: int
    index: float
    compactness: float
    seconds: float
    n_hor: int
    mode: str
    config: dict = field(default_factory=dict)
    corpus_digest: str = ""
    region_digest: str = ""


def compactness(placed: list["PlacedTag"], region: RegionSet) -> float:
    """Total placed box area over total region area."""
    if region.area <= 0:
        raise ValueError("region area must be positive")
    return sum(p.box.area for p in placed) / region.area


def placed_marks(placed: list["PlacedTag"]) -> list[SizedMark]:
    return [SizedMark(p.box.center.x, p.box.center.y, p.font_pt, p.polygon_index)
            for p in placed]


def layout_index(placed: list["PlacedTag"]) -> float:
    if not placed:
        return 0.0
    return overall_index(placed_marks(placed)).overall


def metric_block(placed: list["PlacedTag"], region: RegionSet) -> MetricBlock:
    return MetricBlock(
        n=len(placed),
        index=layout_index(placed),
        compactness=compactness(placed, region),
        n_hor=sum(1 for p in placed if p.box.angle == 0.0))


def region_digest(region: RegionSet) -> str:
    h = hashlib.sha256()
    for poly in region.polygons:
        for ring in poly.rings:
            h.update(ring.tobytes())
    return h.hexdigest()


def corpus_digest(bundle: "LayoutBundle") -> str:
    specs = [p.spec for p in bundle.placed] + [u.spec for u in bundle.unplaced]
    rows = sorted((s.text, s.weight) for s in specs)
    return hashlib.sha256(json.dumps(rows).encode()).hexdigest()


def evaluate(bundle: "LayoutBundle") -> EvalReport:
    """Metrics of a finished layout; t comes from the bundle's run record."""
    block = metric_block(bundle.placed, bundle.region)
    return EvalReport(
        n=block.n,
        index=block.index,
        compactness=block.compactness,
        seconds=bundle.run_seconds if bundle.run_seconds is not None else 0.0,
        n_hor=block.n_hor,
        mode=bundle.config.mode,
        config=_jsonable(asdict(bundle.config)),
        corpus_digest=corpus_digest(bundle),
        region_digest=region_digest(bundle.region))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def report_to_dict(r: EvalReport) -> dict:
    return {
        "n": r.n, "index": r.index, "compactness": r.compactness,
        "seconds": r.seconds, "n_hor": r.n_hor, "mode": r.mode,
        "config": r.config, "corpus_digest": r.corpus_digest,
        "region_digest": r.region_digest,
    }


def report_from_dict(d: dict) -> EvalReport:
    return EvalReport(
        n=d["n"], index=d["index"], compactness=d["compactness"],
        seconds=d["seconds"], n_hor=d["n_hor"], mode=d["mode"],
        config=d.get("config", {}), corpus_digest=d.get("corpus_digest", ""),
        region_digest=d.get("region_digest", ""))


@dataclass(frozen=True)
class ComparisonRow:
    metric: str
    arrow: str  # which direction is better
    a: float
    b: float
    delta: float  # a - b


def compare(a: EvalReport, b: EvalReport) -> list[ComparisonRow]:
    """Aligned metric rows with deltas (a minus b).

    Both reports must describe the same region and tag corpus.
    """
    if a.region_digest != b.region_digest:
        raise ValueError("reports describe different regions")
    if a.corpus_digest != b.corpus_digest:
        raise ValueError("reports describe different tag corpora")
    rows = [
        ("N", "up", float(a.n), float(b.n)),
        ("I", "up", a.index, b.index),
        ("C", "up", a.compactness, b.compactness),
        ("t", "down", a.seconds, b.seconds),
        ("N_hor", "up", float(a.n_hor), float(b.n_hor)),
    ]
    return [ComparisonRow(m, arrow, x, y, x - y) for m, arrow, x, y in rows]


def format_comparison(rows: list[ComparisonRow], fmt: str = "table",
                      label_a: str = "A", label_b: str = "B") -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in rows], indent=2)
    mark = {"up": "^", "down": "v"}
    widths = (8, 12, 12, 12)
    head = f"{'metric':<{widths[0]}}{label_a:>{widths[1]}}{label_b:>{widths[2]}}{'delta':>{widths[3]}}"
    lines = [head, "-" * len(head)]
    for r in rows:
        name = f"{r.metric}{mark[r.arrow]}"
        lines.append(f"{name:<{widths[0]}}{r.a:>{widths[1]}.3f}{r.b:>{widths[2]}.3f}"
                     f"{r.delta:>+{widths[3]}.3f}")
    return "\n".join(lines)
