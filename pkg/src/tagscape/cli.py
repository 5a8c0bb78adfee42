"""Command-line surface: layout, evaluate, levels, compare, render, demo.

Exit codes: 0 success, 2 input error, 3 infeasible layout. The
TAGSCAPE_SEED environment variable overrides --seed everywhere.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import demo as demo_mod
from .bundle import BundleFormatError, load_bundle, save_bundle
from .engine import (INDEX_MODE, MODES, ConfigError, InfeasibleLayoutError,
                     LayoutConfig, place_all)
from .geometry import Point, RegionError, TextMetricsModel, project
from .ingest import (load_region, load_tags, parse_fixed_size,
                     parse_orientation_weight, parse_pin)
from .metrics import (compare, evaluate, format_comparison, report_from_dict,
                      report_to_dict)
from .multiscale import level_views
from .svg import export_svg
from .virtual import STRATEGIES


def _seed_of(args) -> int:
    env = os.environ.get("TAGSCAPE_SEED")
    if env is not None:
        return int(env)
    return args.seed


def _parse_screen(text: str) -> tuple[int, int, int]:
    size, _, dpi = text.partition("@")
    w, _, h = size.partition("x")
    return (int(w), int(h), int(dpi) if dpi else 96)


def _parse_orientations(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(","))


def cmd_layout(args) -> int:
    region = load_region(args.region)
    tags = load_tags(args.tags)

    by_text = {t.text: i for i, t in enumerate(tags)}
    for raw in args.pin or []:
        text, lon, lat = parse_pin(raw)
        if text not in by_text:
            raise ValueError(f"--pin names unknown tag {text!r}")
        i = by_text[text]
        tags[i] = replace(tags[i], pinned_center=project(lon, lat))
    for raw in args.fixed_size or []:
        text, size = parse_fixed_size(raw)
        if text not in by_text:
            raise ValueError(f"--fixed-size names unknown tag {text!r}")
        i = by_text[text]
        tags[i] = replace(tags[i], fixed_font=size)

    weights = dict(parse_orientation_weight(w) for w in args.weight or [])
    config = LayoutConfig(
        f_max=args.fmax, f_min=args.fmin, n_t=args.nt,
        orientations=_parse_orientations(args.orientations),
        orientation_weights=weights,
        strategy1=not args.no_strategy1, strategy2=not args.no_strategy2,
        mode=args.mode, virtual_strategy=args.virtual, seed=_seed_of(args),
        scale=(1.0 / args.scale_denominator) if args.scale_denominator else None,
        screen=_parse_screen(args.screen))

    model = TextMetricsModel.from_json(args.metrics_model) \
        if args.metrics_model else None
    start = time.perf_counter()
    bundle = place_all(region, tags, config, text_model=model)
    bundle.run_seconds = time.perf_counter() - start
    save_bundle(bundle, args.out)
    print(f"placed {bundle.metrics.n}/{len(tags)} tags, "
          f"I={bundle.metrics.index:.3f}, C={bundle.metrics.compactness:.3f}, "
          f"t={bundle.run_seconds:.2f}s -> {args.out}")
    for w in bundle.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_evaluate(args) -> int:
    bundle = load_bundle(args.bundle)
    report = report_to_dict(evaluate(bundle))
    text = json.dumps(report, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_levels(args) -> int:
    bundle = load_bundle(args.bundle)
    ratios = [float(r) for r in args.ratios.split(",")]
    views = level_views(bundle, ratios)
    payload = {"levels": [{
        "ratio": v.ratio, "scale": v.scale, "empty": v.empty,
        "entries": [{"text": e.text, "font_pt": e.font_pt, "visible": e.visible}
                    for e in v.entries]} for v in views]}
    text = json.dumps(payload, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def cmd_compare(args) -> int:
    rep_a = report_from_dict(json.loads(Path(args.a).read_text(encoding="utf-8")))
    rep_b = report_from_dict(json.loads(Path(args.b).read_text(encoding="utf-8")))
    rows = compare(rep_a, rep_b)
    print(format_comparison(rows, fmt=args.format,
                            label_a=Path(args.a).stem, label_b=Path(args.b).stem))
    return 0


def cmd_render(args) -> int:
    bundle = load_bundle(args.bundle)
    svg = export_svg(bundle, args.ratio)
    Path(args.out).write_text(svg, encoding="utf-8")
    print(f"wrote {args.out}")
    return 0


def cmd_demo(args) -> int:
    paths = demo_mod.run_demo(args.out_dir, seed=_seed_of(args))
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tagscape",
        description="Tag-map layouts that stay even across zoom levels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("layout", help="place a tag corpus inside a region")
    p.add_argument("--region", required=True, help="GeoJSON Polygon/MultiPolygon (WGS84)")
    p.add_argument("--tags", required=True, help="CSV 'text,weight' or JSON list")
    p.add_argument("--fmax", type=float, default=60.0)
    p.add_argument("--fmin", type=float, default=6.0)
    p.add_argument("--nt", type=int, default=50, help="top-N triangles to scan")
    p.add_argument("--orientations", default="0", help="comma list, e.g. 0,90,-45")
    p.add_argument("--weight", action="append", metavar="ANGLE=W",
                   help="orientation preference weight, repeatable")
    p.add_argument("--mode", choices=MODES, default=INDEX_MODE)
    p.add_argument("--virtual", choices=STRATEGIES, default="grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-strategy1", action="store_true")
    p.add_argument("--no-strategy2", action="store_true")
    p.add_argument("--pin", action="append", metavar="TEXT@LON,LAT",
                   help="pin a tag at a location, repeatable")
    p.add_argument("--fixed-size", action="append", metavar="TEXT=PT",
                   help="fix a tag's font size, repeatable")
    p.add_argument("--scale-denominator", type=float, default=None,
                   help="map scale 1:D (default: fit region to screen)")
    p.add_argument("--screen", default="1920x1080@96")
    p.add_argument("--metrics-model", default=None,
                   help="JSON {char: advance_em} text width table")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("evaluate", help="metrics report for a bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("levels", help="per-zoom visibility views")
    p.add_argument("--bundle", required=True)
    p.add_argument("--ratios", default="1,0.5,0.25")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("compare", help="side-by-side report comparison")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("render", help="SVG of one zoom level")
    p.add_argument("--bundle", required=True)
    p.add_argument("--ratio", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("demo", help="lay out the bundled synthetic dataset")
    p.add_argument("--out-dir", default="demo_out")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleLayoutError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except (RegionError, ConfigError, BundleFormatError, ValueError,
            OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
