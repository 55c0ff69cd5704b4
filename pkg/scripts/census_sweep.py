"""Expansivity census over every binary periodic configuration up to a size.

A doubly periodic configuration has no nonexpansive line, so every count
printed here should be 0.

    python3 scripts/census_sweep.py [--max-size 3] [--radius 10]
"""
import argparse
import time
from collections import Counter

from nivat2d.corpus import all_periodic
from nivat2d.expansivity import census


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--radius", type=int, default=10)
    args = ap.parse_args()

    t0 = time.perf_counter()
    tally = Counter()
    bad = []
    for w in range(1, args.max_size + 1):
        for h in range(1, args.max_size + 1):
            for eta in all_periodic(w, h):
                rep = census(eta, args.radius)
                tally[(w, h)] += 1
                if rep.count:
                    bad.append((eta.rows, rep.witnessed_lines))
    for (w, h), c in sorted(tally.items()):
        print(f"{w}x{h}: {c} configurations")
    print(f"witnessed lines found on {len(bad)} configurations ({time.perf_counter() - t0:.1f}s)")
    for rows, lines in bad[:10]:
        print("  ", rows, lines)


if __name__ == "__main__":
    main()
