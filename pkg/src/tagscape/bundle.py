"""Layout bundle serialization.

Bundles round-trip losslessly through JSON: floats are written with
Python's shortest round-trip representation, and every structural field
is reconstructed exactly on load.
"""

from __future__ import annotations

import json
from pathlib import Path

from .engine import (FORMAT_VERSION, LayoutBundle, LayoutConfig, PlacedTag,
                     RunStats, TagSpec, UnplacedTag, VirtualSummary)
from .geometry import OrientedBox, Point, RegionPolygon, RegionSet
from .metrics import MetricBlock
from .multiscale import LevelEntry, LevelView


class BundleFormatError(ValueError):
    """The file is not a readable layout bundle."""


def _ring_to_list(ring) -> list[list[float]]:
    return [[float(x), float(y)] for x, y in ring]


def region_to_dict(region: RegionSet) -> list[dict]:
    return [{"exterior": _ring_to_list(p.exterior),
             "holes": [_ring_to_list(h) for h in p.holes]}
            for p in region.polygons]


def region_from_dict(data: list[dict]) -> RegionSet:
    return RegionSet([RegionPolygon(exterior=p["exterior"], holes=p.get("holes", []))
                      for p in data])


def config_to_dict(cfg: LayoutConfig) -> dict:
    return {
        "f_max": cfg.f_max, "f_min": cfg.f_min, "n_t": cfg.n_t,
        "orientations": list(cfg.orientations),
        "orientation_weights": {str(k): v for k, v in cfg.orientation_weights.items()},
        "strategy1": cfg.strategy1, "strategy2": cfg.strategy2,
        "mode": cfg.mode, "virtual_strategy": cfg.virtual_strategy,
        "seed": cfg.seed, "scale": cfg.scale,
        "screen": list(cfg.screen),
    }


def config_from_dict(d: dict) -> LayoutConfig:
    return LayoutConfig(
        f_max=d["f_max"], f_min=d["f_min"], n_t=d["n_t"],
        orientations=tuple(d["orientations"]),
        orientation_weights={float(k): float(v)
                             for k, v in d.get("orientation_weights", {}).items()},
        strategy1=d["strategy1"], strategy2=d["strategy2"],
        mode=d["mode"], virtual_strategy=d["virtual_strategy"],
        seed=d["seed"], scale=d["scale"],
        screen=tuple(d["screen"]))


def _spec_to_dict(s: TagSpec) -> dict:
    out: dict = {"text": s.text, "weight": s.weight}
    if s.pinned_center is not None:
        out["pinned_center"] = [s.pinned_center.x, s.pinned_center.y]
    if s.fixed_font is not None:
        out["fixed_font"] = s.fixed_font
    return out


def _spec_from_dict(d: dict) -> TagSpec:
    pin = d.get("pinned_center")
    return TagSpec(text=d["text"], weight=d["weight"],
                   pinned_center=Point(pin[0], pin[1]) if pin else None,
                   fixed_font=d.get("fixed_font"))


def _placed_to_dict(p: PlacedTag) -> dict:
    return {
        **_spec_to_dict(p.spec),
        "font_pt": p.font_pt,
        "center": [p.box.center.x, p.box.center.y],
        "width_m": p.box.width, "height_m": p.box.height,
        "angle": p.box.angle,
        "corners": [[float(x), float(y)] for x, y in p.box.corners],
        "polygon_index": p.polygon_index,
        "rank": p.rank,
    }


def _placed_from_dict(d: dict) -> PlacedTag:
    box = OrientedBox(Point(d["center"][0], d["center"][1]),
                      d["width_m"], d["height_m"], d["angle"])
    return PlacedTag(spec=_spec_from_dict(d), font_pt=d["font_pt"], box=box,
                     polygon_index=d["polygon_index"], rank=d["rank"])


def bundle_to_dict(b: LayoutBundle) -> dict:
    return {
        "format_version": b.format_version,
        "config": config_to_dict(b.config),
        "f_max_effective": b.f_max_effective,
        "region": region_to_dict(b.region),
        "placed": [_placed_to_dict(p) for p in b.placed],
        "unplaced": [{**_spec_to_dict(u.spec), "font_pt": u.font_pt,
                      "reason": u.reason} for u in b.unplaced],
        "virtual_summary": {
            "strategy": b.virtual_summary.strategy,
            "pitch_m": b.virtual_summary.pitch_m,
            "seed": b.virtual_summary.seed,
            "initial_count": b.virtual_summary.initial_count,
            "final_count": b.virtual_summary.final_count,
        },
        "metrics": {"n": b.metrics.n, "index": b.metrics.index,
                    "compactness": b.metrics.compactness,
                    "n_hor": b.metrics.n_hor},
        "levels": [{
            "ratio": lv.ratio, "scale": lv.scale, "empty": lv.empty,
            "entries": [{"text": e.text, "font_pt": e.font_pt,
                         "visible": e.visible} for e in lv.entries],
        } for lv in b.levels],
        "warnings": list(b.warnings),
        "stats": {"triangles_visited": b.stats.triangles_visited,
                  "index_evaluations": b.stats.index_evaluations},
        "run_seconds": b.run_seconds,
    }


def bundle_from_dict(d: dict) -> LayoutBundle:
    version = d.get("format_version")
    if version != FORMAT_VERSION:
        raise BundleFormatError(
            f"unsupported bundle format_version {version!r}, expected {FORMAT_VERSION!r}")
    levels = [LevelView(ratio=lv["ratio"], scale=lv["scale"],
                        entries=[LevelEntry(e["text"], e["font_pt"], e["visible"])
                                 for e in lv["entries"]],
                        empty=lv["empty"]) for lv in d.get("levels", [])]
    vs = d["virtual_summary"]
    mt = d["metrics"]
    st = d.get("stats", {})
    return LayoutBundle(
        region=region_from_dict(d["region"]),
        config=config_from_dict(d["config"]),
        placed=[_placed_from_dict(p) for p in d["placed"]],
        unplaced=[UnplacedTag(_spec_from_dict(u), u["font_pt"], u["reason"])
                  for u in d["unplaced"]],
        virtual_summary=VirtualSummary(vs["strategy"], vs["pitch_m"], vs["seed"],
                                       vs["initial_count"], vs["final_count"]),
        metrics=MetricBlock(mt["n"], mt["index"], mt["compactness"], mt["n_hor"]),
        levels=levels,
        warnings=list(d.get("warnings", [])),
        stats=RunStats(st.get("triangles_visited", 0), st.get("index_evaluations", 0)),
        f_max_effective=d.get("f_max_effective", 0.0),
        run_seconds=d.get("run_seconds"),
        format_version=version)


def serialize(b: LayoutBundle) -> str:
    return json.dumps(bundle_to_dict(b), indent=2, allow_nan=False)


def save_bundle(b: LayoutBundle, path: str | Path) -> None:
    Path(path).write_text(serialize(b), encoding="utf-8")


def load_bundle(path: str | Path) -> LayoutBundle:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise BundleFormatError(f"not a JSON bundle: {exc}") from exc
    if not isinstance(data, dict):
        raise BundleFormatError("bundle root must be a JSON object")
    try:
        return bundle_from_dict(data)
    except (KeyError, TypeError) as exc:
        raise BundleFormatError(f"malformed bundle: missing {exc}") from exc
