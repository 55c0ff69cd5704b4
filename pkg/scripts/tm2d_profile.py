"""Rectangular complexity of the 2D Thue-Morse window against the n*k bound.

Counts on a window are lower bounds; the script recounts on the next
iteration to show they have stabilised.

    python3 scripts/tm2d_profile.py [--iterations 8] [--n-max 12] [--k 3]
"""
import argparse

from nivat2d.complexity import complexity_profile
from nivat2d.corpus import tm2d


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--iterations", type=int, default=8)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--k", type=int, default=3)
    args = ap.parse_args()

    eta = tm2d(args.iterations)
    rows = complexity_profile(eta, args.n_max, args.k)
    big = complexity_profile(eta.enlarge(), args.n_max, args.k)
    print(f"window {eta.width}x{eta.height}, recount on {2 * eta.width}x{2 * eta.height}")
    print(f"{'n':>3} {'P':>5} {'P+1':>5} {'n*k':>5}  above")
    for r, s in zip(rows, big):
        print(f"{r.n:>3} {r.P:>5} {s.P:>5} {r.bound:>5}  {r.P > r.bound}")


if __name__ == "__main__":
    main()
