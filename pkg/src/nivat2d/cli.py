"""Command-line front end: ``nivat <subcommand> ...``.

Exit codes: 0 success, 1 a check failed or nothing was found, 2 usage or
input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as builtin
from .complexity import PROFILE_HEADER, ShapeExceedsDomain, complexity, complexity_profile
from .config_io import ConfigFormatError, dumps, load, save
from .configuration import Periodic, Substitution, WordLift
from .expansivity import (FALLBACK_LINES, census, find_balanced_set,
                          line_nonexpansive_at_scale)
from .extension import RequiresExactCounts, find_generating_set
from .geometry import DirectedLine, parse_shape
from .periodicity import is_periodic_on_region, period_lattice, region_period_lattice
from .verifier import CampaignError, CampaignSpec, emit_report, run_campaign

CONFIG_HELP = """configuration file (text or .json):
  alphabet: <tok> <tok> ...
  kind: periodic|window|wordlift|substitution
  size: W H                     (periodic, window; grid lines follow 'grid:', first line is y=0)
  origin: X Y                   (window, optional)
  word: <tok> ...  rule: x|y|x+y (wordlift)
  block: <sym> + m rows, seed: <sym>, iterations: K (substitution)"""

SHAPE_HELP = "shape file: one 'x y' integer pair per line, '#' comments"


class UsageError(Exception):
    pass


def _pair(text: str, flag: str) -> tuple[int, int]:
    toks = text.replace(",", " ").split()
    try:
        vals = tuple(int(t) for t in toks)
    except ValueError:
        raise UsageError(f"{flag}: expected two integers, got {text!r}") from None
    if len(vals) != 2:
        raise UsageError(f"{flag}: expected two integers, got {text!r}")
    return vals


def _config(path: str):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"--config: no such file {path!r}")
    return load(p)


def _shape(path: str, strict: bool = True):
    p = Path(path)
    if not p.exists():
        raise UsageError(f"--shape: no such file {path!r}")
    return parse_shape(p.read_text(encoding="utf-8"), strict=strict)


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ------------------------------------------------------------ subcommands

def cmd_complexity(a) -> int:
    eta = _config(a.config)
    if a.shape:
        rep = complexity(eta, _shape(a.shape, not a.complete), chunks=a.workers, workers=a.workers)
        kind = "exact" if rep.exhaustive else "lower bound"
        print(f"|S|={rep.size} P={rep.P} D={rep.D} ({kind}, {rep.translate_count} translates)")
        _write(a.out, _json({"size": rep.size, "P": rep.P, "D": rep.D, "exhaustive": rep.exhaustive,
                             "translates": rep.translate_count}))
        return 0
    if a.n is None:
        raise UsageError("complexity: give --n (with --k) or --shape")
    rows = complexity_profile(eta, a.n, a.k, a.n_min)
    print(f"{'n':>3} {'k':>2} {'P':>6} {'bound':>6} {'D':>6}  within  exhaustive")
    for r in rows:
        print(f"{r.n:>3} {r.k:>2} {r.P:>6} {r.bound:>6} {r.D:>6}  {str(r.within_bound).lower():>6}  "
              f"{str(r.exhaustive).lower()}")
    if a.out:
        if a.format == "json":
            _write(a.out, _json([dict(zip(PROFILE_HEADER, r.csv_row())) | {"within_bound": r.within_bound}
                                 for r in rows]))
        else:
            _write(a.out, ",".join(PROFILE_HEADER) + "\n" + "".join(",".join(map(str, r.csv_row())) + "\n"
                                                                     for r in rows))
    return 0


def cmd_generate_set(a) -> int:
    eta = _config(a.config)
    res = find_generating_set(eta, a.n, a.k, mode=a.mode, budget=a.budget)
    if not res:
        print(f"not found: {res.reason}")
        _write(a.out, _json({"found": False, "reason": res.reason}))
        return 1
    pts = " ".join(f"({p.x},{p.y})" for p in res.set.sorted_points)
    dirs = " ".join(f"({d[0]},{d[1]})" for d in (e.direction for e in res.set.edges)) or "none"
    print(f"set: {pts}\nedges: {dirs}\nD={res.discrepancy} mode={res.mode} certified={res.minimality_certified}")
    _write(a.out, _json({"found": True, **res.to_json()}))
    return 0


def _directions(text: str) -> list[tuple[int, int]]:
    return [_pair(chunk, "--directions") for chunk in text.split(";") if chunk.strip()]


def cmd_expansivity(a) -> int:
    eta = _config(a.config)
    extent = a.extent if a.extent is not None else a.radius
    if a.kind == "line":
        dirs = list(FALLBACK_LINES) if a.directions == "auto" else _directions(a.directions)
        verdicts = [line_nonexpansive_at_scale(eta, d, a.radius, extent) for d in dirs]
        out = {"kind": "line", "verdicts": [v.to_json() for v in verdicts]}
    else:
        dirs = None if a.directions == "auto" else _directions(a.directions)
        rep = census(eta, a.radius, extent, a.n_max, directions=dirs)
        verdicts = rep.verdicts
        out = {"kind": "direction", **rep.to_json()}
    for v in verdicts:
        print(f"{v.direction[0]:>3} {v.direction[1]:>3}  {v.verdict}")
    if a.kind == "direction":
        print(f"witnessed lines: {rep.count}")
    _write(a.out, _json(out))
    return 0


def cmd_balanced(a) -> int:
    eta = _config(a.config)
    d = _pair(a.direction, "--direction")
    res = find_balanced_set(eta, DirectedLine(d), a.n)
    if not res:
        print(f"not found: {res.reason}")
        _write(a.out, _json({"found": False, "reason": res.reason}))
        return 1
    pts = " ".join(f"({p.x},{p.y})" for p in res.set.sorted_points)
    print(f"{res.case}: {pts}")
    _write(a.out, _json({"found": True, **res.to_json()}))
    return 0


def cmd_periodicity(a) -> int:
    eta = _config(a.config)
    out: dict = {}
    if a.shape:
        region = _shape(a.shape, strict=False).points
    elif isinstance(eta, Periodic):
        region = [(x, y) for y in range(eta.height) for x in range(eta.width)]
    else:
        region = eta.domain_cells()
        if region is None:
            raise UsageError("periodicity: give --shape for this configuration kind")
    if isinstance(eta, Periodic):
        lat = period_lattice(eta)
    else:
        lat = region_period_lattice(eta, region, a.radius)
    out["lattice"] = lat.to_json()
    print(f"period lattice rank {lat.rank}: {' '.join(str(tuple(g)) for g in lat.generators) or 'none'}")
    if a.vector:
        v = _pair(a.vector, "--vector")
        rep = is_periodic_on_region(eta, region, v)
        out["vector_check"] = rep.to_json()
        print(f"vector {v}: {'holds' if rep.holds else f'fails at {rep.violation}'}")
    _write(a.out, _json(out))
    return 0


def cmd_nivat_check(a) -> int:
    p = Path(a.campaign)
    if not p.exists():
        raise UsageError(f"--campaign: no such file {a.campaign!r}")
    spec = CampaignSpec.load(p)
    report = run_campaign(spec, workers=a.workers)
    formats = [f.strip() for f in a.format.split(",") if f.strip()]
    bad = [f for f in formats if f not in ("csv", "json", "svg")]
    if bad:
        raise UsageError(f"--format: unknown format {bad[0]!r}")
    if a.out:
        emit_report(report, a.out, formats)
    for e in report.entries:
        status = "ok  " if e.passed else "FAIL"
        extra = f" {e.error}" if e.error else ""
        print(f"{status} {e.name}{extra}")
        for c in e.checks:
            if not c.passed:
                print(f"     {c.check}: {c.detail}")
    print(f"{len(report.entries) - len(report.failures)}/{len(report.entries)} entries passed "
          f"in {report.wall_time:.1f}s")
    if any(e.error and e.error.startswith("input") for e in report.entries):
        return 2
    return 0 if report.passed else 1


def cmd_gen(a) -> int:
    if a.what == "substitution":
        if a.rule not in builtin.SUBSTITUTION_RULES:
            raise UsageError(f"--rule: unknown rule {a.rule!r}")
        eta = Substitution.generate(("0", "1"), builtin.SUBSTITUTION_RULES[a.rule], "0", a.iterations)
    elif a.what == "periodic":
        makers = {"constant": builtin.constant, "checkerboard": builtin.checkerboard,
                  "stripes": lambda: builtin.stripes(a.period, not a.horizontal)}
        if a.pattern not in makers:
            raise UsageError(f"--pattern: unknown pattern {a.pattern!r}")
        eta = makers[a.pattern]()
    else:
        words = {"fibonacci": builtin.fibonacci_word, "thue-morse": builtin.thue_morse_word}
        if a.word not in words:
            raise UsageError(f"--word: unknown word {a.word!r}")
        eta = WordLift.from_rule(("0", "1"), words[a.word](a.length), a.lift)
    if a.out:
        save(eta, a.out)
        print(f"wrote {a.out}")
    else:
        sys.stdout.write(dumps(eta))
    return 0


# ------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nivat", description="Exact pattern complexity tools for 2D configurations.",
                                formatter_class=argparse.RawDescriptionHelpFormatter, epilog=CONFIG_HELP)
    sub = p.add_subparsers(dest="cmd", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    def add(name, func, help_text, epilog=CONFIG_HELP):
        sp = sub.add_parser(name, help=help_text, description=help_text, epilog=epilog, formatter_class=fmt)
        sp.set_defaults(func=func)
        return sp

    c = add("complexity", cmd_complexity, "rectangular complexity profile or the complexity of one shape",
            CONFIG_HELP + "\n" + SHAPE_HELP + "\nCSV columns: n,k,P,bound,D,exhaustive")
    c.add_argument("--config", required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--n-min", type=int, default=1)
    c.add_argument("--k", type=int, default=3)
    c.add_argument("--shape")
    c.add_argument("--complete", action="store_true", help="complete a non-convex shape to its hull")
    c.add_argument("--out")
    c.add_argument("--format", choices=("csv", "json"), default="csv")
    c.add_argument("--workers", type=int, default=1)

    g = add("generate-set", cmd_generate_set, "search a generating subset of R_{n,k}")
    g.add_argument("--config", required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--mode", choices=("greedy", "exhaustive"), default="exhaustive")
    g.add_argument("--budget", type=int, default=24)
    g.add_argument("--out")

    e = add("expansivity", cmd_expansivity, "finite-scale nonexpansive direction or line verdicts")
    e.add_argument("--config", required=True)
    e.add_argument("--radius", type=int, required=True)
    e.add_argument("--extent", type=int)
    e.add_argument("--directions", default="auto", help="'auto' or a list like '0 1; 1 1'")
    e.add_argument("--kind", choices=("direction", "line"), default="direction")
    e.add_argument("--n-max", type=int, default=6)
    e.add_argument("--out")

    b = add("balanced", cmd_balanced, "construct a balanced subset of R_{n,3} for a directed line")
    b.add_argument("--config", required=True)
    b.add_argument("--direction", required=True, help="primitive vector 'p q'")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--out")

    r = add("periodicity", cmd_periodicity, "period lattice and single-vector checks",
            CONFIG_HELP + "\n" + SHAPE_HELP)
    r.add_argument("--config", required=True)
    r.add_argument("--vector")
    r.add_argument("--shape", help="region for the checks (default: fundamental domain or window)")
    r.add_argument("--radius", type=int, default=4, help="largest vector coordinate tried on regions")
    r.add_argument("--out")

    n = add("nivat-check", cmd_nivat_check, "run a verification campaign",
            "campaign JSON: {corpus: [...], checks: [...], scales: {...}, seed: N}\n" + CONFIG_HELP)
    n.add_argument("--campaign", required=True)
    n.add_argument("--out")
    n.add_argument("--format", default="csv,json,svg")
    n.add_argument("--workers", type=int)

    gg = add("gen", cmd_gen, "write a built-in corpus configuration")
    gg.add_argument("what", choices=("substitution", "periodic", "wordlift"))
    gg.add_argument("--rule", default="tm2d", help="substitution rule name")
    gg.add_argument("--lift", choices=("x", "y", "x+y"), default="x", help="word lift rule")
    gg.add_argument("--iterations", type=int, default=3)
    gg.add_argument("--pattern", default="checkerboard")
    gg.add_argument("--period", type=int, default=2)
    gg.add_argument("--horizontal", action="store_true")
    gg.add_argument("--word", default="fibonacci")
    gg.add_argument("--length", type=int, default=200)
    gg.add_argument("--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"nivat {args.cmd}: {e}", file=sys.stderr)
        return 2
    except (ConfigFormatError, CampaignError, ShapeExceedsDomain, RequiresExactCounts, ValueError, OSError) as e:
        print(f"nivat {args.cmd}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
