"""Recompute reference values with plain-Python oracles and freeze them.

The oracles share no code with the package: the 2D Thue-Morse window comes
from the closed form t(x, y) = (popcount x + popcount y) mod 2, and factor
counts are read straight off strings.

    python3 scripts/freeze_oracles.py [--out tests/data/oracles.json]
"""
import argparse
import json
from pathlib import Path


def tm2d_grid(size):
    return [[(bin(x).count("1") + bin(y).count("1")) % 2 for x in range(size)] for y in range(size)]


def rect_count(grid, n, k):
    h, w = len(grid), len(grid[0])
    seen = set()
    for y in range(h - k + 1):
        rows = grid[y:y + k]
        for x in range(w - n + 1):
            seen.add(tuple(tuple(r[x:x + n]) for r in rows))
    return len(seen)


def fibonacci(length):
    a, b = "0", "01"
    while len(b) < length:
        a, b = b, b + a
    return b[:length]


def factor_count(word, n):
    return len({word[i:i + n] for i in range(len(word) - n + 1)})


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests/data/oracles.json"))
    args = ap.parse_args()

    out = {"tm2d_k3": {}, "fibonacci": {}}
    for it in (8, 9):
        g = tm2d_grid(2 ** it)
        out["tm2d_k3"][str(it)] = [rect_count(g, n, 3) for n in range(1, 13)]
        print(f"tm2d iterations={it}: {out['tm2d_k3'][str(it)]}")
    fib = fibonacci(100)
    out["fibonacci"] = {"prefix": 100, "factors": [factor_count(fib, n) for n in range(1, 21)]}
    print(f"fibonacci factors n=1..20: {out['fibonacci']['factors']}")
    Path(args.out).write_text(json.dumps(out, indent=1) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
