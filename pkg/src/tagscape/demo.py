"""Bundled demo assets: a synthetic region (mainland with a lake, plus an
island) and a 100-tag corpus, with a ready-made configuration."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .bundle import save_bundle
from .engine import (BASELINE_MODE, INDEX_MODE, LayoutConfig, TagSpec,
                     place_all)
from .geometry import RegionSet
from .ingest import load_region, load_tags
from .svg import export_svg

DEMO_F_MAX = 72.0
DEMO_F_MIN = 6.0
DEMO_N_T = 60


def _data_path(name: str) -> Path:
    return Path(str(resources.files("tagscape").joinpath("data", name)))


def demo_region() -> RegionSet:
    return load_region(_data_path("demo_region.geojson"))


def demo_tags() -> list[TagSpec]:
    return load_tags(_data_path("demo_tags.csv"))


def demo_config(mode: str = INDEX_MODE, seed: int = 0, **overrides) -> LayoutConfig:
    base = dict(f_max=DEMO_F_MAX, f_min=DEMO_F_MIN, n_t=DEMO_N_T,
                orientations=(0.0,), mode=mode, seed=seed)
    base.update(overrides)
    return LayoutConfig(**base)


def run_demo(out_dir: str | Path, seed: int = 0,
             modes: tuple[str, ...] = (INDEX_MODE, BASELINE_MODE)) -> dict[str, Path]:
    """Lay out the bundled corpus in each mode; write bundles and SVGs.

    Outputs carry no wall-clock record, so repeated runs are byte-identical.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    region = demo_region()
    tags = demo_tags()
    paths: dict[str, Path] = {}
    for mode in modes:
        bundle = place_all(region, tags, demo_config(mode=mode, seed=seed))
        bundle_path = out / f"tagmap_{mode}.json"
        svg_path = out / f"tagmap_{mode}.svg"
        save_bundle(bundle, bundle_path)
        svg_path.write_text(export_svg(bundle, 1.0), encoding="utf-8")
        paths[f"{mode}_bundle"] = bundle_path
        paths[f"{mode}_svg"] = svg_path
    return paths
