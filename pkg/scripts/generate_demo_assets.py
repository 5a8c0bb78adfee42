"""Regenerate the bundled demo region and tag corpus.

The region is a seeded radial blob (mainland) with a lake hole and a
separate island; the corpus is 100 synthetic Zipf-weighted words.
Outputs land in src/tagscape/data/ and are committed as stable assets.
"""

from __future__ import annotations

import json
import math
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from tagscape.synth import make_corpus  # noqa: E402

DATA_DIR = ROOT / "src" / "tagscape" / "data"


def radial_blob(cx: float, cy: float, rx: float, ry: float, n: int,
                seed: int, wobble: float = 0.22) -> list[list[float]]:
    """Star-shaped polygon around (cx, cy); star-shaped rings are always simple."""
    rng = random.Random(seed)
    phases = [rng.uniform(0, 2 * math.pi) for _ in range(3)]
    amps = [wobble * rng.uniform(0.5, 1.0) for _ in range(3)]
    ring = []
    for i in range(n):
        t = 2 * math.pi * i / n
        bump = sum(a * math.sin((k + 2) * t + p)
                   for k, (a, p) in enumerate(zip(amps, phases)))
        r = 1.0 + bump + rng.uniform(-0.03, 0.03)
        ring.append([round(cx + rx * r * math.cos(t), 4),
                     round(cy + ry * r * math.sin(t), 4)])
    ring.append(list(ring[0]))
    return ring


def main() -> None:
    mainland = radial_blob(3.0, 45.0, 10.5, 8.5, 28, seed=11)
    lake = radial_blob(0.5, 47.8, 2.0, 1.5, 10, seed=23, wobble=0.15)
    lake.reverse()  # holes wind clockwise in the source file
    island = radial_blob(13.0, 33.2, 2.6, 1.7, 12, seed=37, wobble=0.18)

    geojson = {
        "type": "MultiPolygon",
        "coordinates": [
            [mainland, lake],
            [island],
        ],
    }
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    region_path = DATA_DIR / "demo_region.geojson"
    region_path.write_text(json.dumps(geojson, indent=1) + "\n", encoding="utf-8")

    tags = make_corpus(seed=7, n=100)
    lines = ["text,weight"] + [f"{t.text},{t.weight}" for t in tags]
    tags_path = DATA_DIR / "demo_tags.csv"
    tags_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    print(f"wrote {region_path} ({len(mainland) - 1} mainland vertices)")
    print(f"wrote {tags_path} ({len(tags)} tags)")


if __name__ == "__main__":
    main()
