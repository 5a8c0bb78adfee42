"""Effect of the horizontal-orientation preference weight.

Lays out seeded corpora with all nine orientations enabled, comparing
the horizontal-tag count with and without a doubled horizontal weight.

Usage: python3 scripts/orientation_study.py [--seeds 5] [--tags 40]
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tagscape.demo import demo_config, demo_region
from tagscape.engine import place_all
from tagscape.geometry import ORIENTATIONS
from tagscape.synth import make_corpus


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--tags", type=int, default=40)
    args = ap.parse_args()

    region = demo_region()
    print(f"{'seed':>4} {'N_hor(W=1)':>11} {'N_hor(W=2)':>11} "
          f"{'N(W=1)':>7} {'N(W=2)':>7} {'t':>6}")
    for seed in range(args.seeds):
        tags = make_corpus(seed=100 + seed, n=args.tags)
        t0 = time.perf_counter()
        flat = place_all(region, tags,
                         demo_config(seed=seed, orientations=ORIENTATIONS))
        hor = place_all(region, tags,
                        demo_config(seed=seed, orientations=ORIENTATIONS,
                                    orientation_weights={0.0: 2.0}))
        dt = time.perf_counter() - t0
        print(f"{seed:>4} {flat.metrics.n_hor:>11} {hor.metrics.n_hor:>11} "
              f"{flat.metrics.n:>7} {hor.metrics.n:>7} {dt:>6.1f}s")


if __name__ == "__main__":
    main()
