"""Strategy ablations on the bundled demo dataset.

Reports triangle-visit counts, wall time, index, and minimum pairwise
tag distance with each candidate-filtering strategy toggled off.

Usage: python3 scripts/ablation_study.py [--seed 0] [--tags 100]
"""

from __future__ import annotations

import argparse
import itertools
import math
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tagscape.demo import demo_config, demo_region
from tagscape.engine import place_all
from tagscape.synth import make_corpus


def min_pairwise_km(bundle) -> float:
    centers = [(p.box.center.x, p.box.center.y) for p in bundle.placed]
    if len(centers) < 2:
        return float("nan")
    return min(math.dist(a, b)
               for a, b in itertools.combinations(centers, 2)) / 1000.0


def run(region, tags, label: str, **overrides) -> None:
    t0 = time.perf_counter()
    bundle = place_all(region, tags, demo_config(**overrides))
    dt = time.perf_counter() - t0
    print(f"{label:<16} N={bundle.metrics.n:>3} I={bundle.metrics.index:>7.3f} "
          f"C={bundle.metrics.compactness:>6.3f} t={dt:>6.2f}s "
          f"visits={bundle.stats.triangles_visited:>6} "
          f"evals={bundle.stats.index_evaluations:>6} "
          f"mindist={min_pairwise_km(bundle):>7.1f}km")


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tags", type=int, default=100)
    args = ap.parse_args()

    region = demo_region()
    tags = make_corpus(seed=args.seed, n=args.tags)
    run(region, tags, "full", seed=args.seed)
    run(region, tags, "no strategy 1", seed=args.seed, strategy1=False)
    run(region, tags, "no strategy 2", seed=args.seed, strategy2=False)
    run(region, tags, "baseline mode", seed=args.seed, mode="baseline")
    run(region, tags, "random virtuals", seed=args.seed, virtual_strategy="random")


if __name__ == "__main__":
    main()
