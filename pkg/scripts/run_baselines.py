#!/usr/bin/env python3
"""Sweep the homogeneous bot tables and print the equality/efficiency grid.

Runs K seeded games per bot kind (same population of ten, fresh seed per
game), then reports mean gini, mean earnings fraction, mean length, and
how each game ended.  With --out, per-game event logs and a summary csv
land under the given directory, one subdir per kind.

    python3 scripts/run_baselines.py
    python3 scripts/run_baselines.py --seeds 100 --kinds Smart Smarter
    python3 scripts/run_baselines.py --out results/
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trustya.bots import BOT_KINDS
from trustya.sim import baseline_spec, run_batch


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kinds", nargs="+", default=list(BOT_KINDS),
                    choices=list(BOT_KINDS), metavar="KIND")
    ap.add_argument("--seeds", type=int, default=30,
                    help="games per kind (default 30)")
    ap.add_argument("--out", type=Path, default=None,
                    help="directory for event logs and summary csv")
    args = ap.parse_args()

    rows = []
    for kind in args.kinds:
        out_dir = args.out / kind if args.out else None
        result = run_batch(baseline_spec(kind, seeds=args.seeds), out_dir)
        rows.append((kind, result.agg))

    width = max(len(k) for k, _ in rows)
    print(f"{'kind':<{width}}  {'gini':>7}  {'earnings':>8}  {'rounds':>6}  ends")
    for kind, agg in rows:
        ends = " ".join(f"{r}:{c}" for r, c in sorted(agg.end_reasons.items()))
        print(f"{kind:<{width}}  {agg.mean_gini:>7.4f}  "
              f"{agg.mean_earnings:>8.4f}  {agg.mean_rounds:>6.1f}  {ends}")
    if args.out:
        print(f"\nlogs and per-seed csv under {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
