"""Index-vs-baseline comparison across seeded synthetic corpora.

For each corpus seed, lays out the bundled demo region in both selection
modes and reports N / I / C plus the per-seed index delta.

Usage: python3 scripts/improvement_study.py [--seeds 10] [--tags 100]
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from tagscape.demo import demo_config, demo_region
from tagscape.engine import place_all
from tagscape.synth import make_corpus


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--tags", type=int, default=100)
    ap.add_argument("--fmax", type=float, default=None)
    ap.add_argument("--nt", type=int, default=None)
    args = ap.parse_args()

    region = demo_region()
    overrides = {}
    if args.fmax:
        overrides["f_max"] = args.fmax
    if args.nt:
        overrides["n_t"] = args.nt

    deltas = []
    wins = 0
    positive = 0
    print(f"{'seed':>4} {'N_idx':>6} {'N_base':>6} {'I_idx':>8} {'I_base':>8} "
          f"{'dI':>8} {'C_idx':>7} {'C_base':>7} {'t_idx':>6} {'t_base':>6}")
    for seed in range(args.seeds):
        tags = make_corpus(seed=seed, n=args.tags)
        t0 = time.perf_counter()
        ours = place_all(region, tags, demo_config(mode="index", seed=seed, **overrides))
        t1 = time.perf_counter()
        base = place_all(region, tags, demo_config(mode="baseline", seed=seed, **overrides))
        t2 = time.perf_counter()
        d = ours.metrics.index - base.metrics.index
        deltas.append(d)
        wins += d > 0
        positive += ours.metrics.index > 0
        print(f"{seed:>4} {ours.metrics.n:>6} {base.metrics.n:>6} "
              f"{ours.metrics.index:>8.3f} {base.metrics.index:>8.3f} {d:>8.3f} "
              f"{ours.metrics.compactness:>7.3f} {base.metrics.compactness:>7.3f} "
              f"{t1 - t0:>6.2f} {t2 - t1:>6.2f}")
    print(f"\nmedian dI = {statistics.median(deltas):+.3f}   "
          f"index wins {wins}/{args.seeds}   I>0 in {positive}/{args.seeds}")


if __name__ == "__main__":
    main()
