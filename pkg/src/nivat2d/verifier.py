"""Verification campaigns over a corpus of configurations.

A campaign is a JSON document::

    {"corpus": [{"name": "checker", "generator": {"name": "checkerboard"}},
                {"name": "tm", "generator": {"name": "tm2d", "iterations": 8},
                 "aperiodic": true, "note": "..."}],
     "checks": ["profile", "lemma-suite", "expansivity-census", "balanced", "period-bounds"],
     "scales": {"n_max": 6, "radius": 4, "extent": 4},
     "seed": 0}

Corpus entries take a configuration from ``path`` (text or JSON file),
``inline`` (the JSON mirror) or ``generator``.  The generator
``random_periodic`` with ``count`` expands into that many entries.
"""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import corpus as builtin
from .complexity import ShapeExceedsDomain, complexity_profile
from .config_io import ConfigFormatError, dumps, from_dict, load, to_dict
from .configuration import Configuration, Periodic, Substitution
from .expansivity import census, find_balanced_set, is_balanced, minimal_width
from .extension import (RequiresExactCounts, chain_discrepancy, convex_subsets, discrepancy_step,
                        find_generating_set, verify_edge_bound)
from .geometry import ConvexLatticeSet, format_shape, rectangle
from .periodicity import period_lattice, periodic_strip_propagation_check, strip_period_bound_check

CHECKS = ("profile", "lemma-suite", "expansivity-census", "balanced", "period-bounds")
DEFAULT_SCALES = {"n_max": 6, "radius": 4, "extent": None, "profile_n_max": None, "lemma_trials": 40}


class CampaignError(ValueError):
    pass


@dataclass
class CorpusEntry:
    name: str
    source: dict                  # one of path / inline / generator
    aperiodic: bool = False
    note: str = ""
    expect_lines: int | None = None
    stability: bool = False

    def to_json(self) -> dict:
        d = {"name": self.name, **self.source}
        if self.aperiodic:
            d["aperiodic"] = True
        if self.note:
            d["note"] = self.note
        if self.expect_lines is not None:
            d["expect_lines"] = self.expect_lines
        if self.stability:
            d["stability"] = True
        return d


@dataclass
class CampaignSpec:
    corpus: list
    checks: tuple = CHECKS
    scales: dict = field(default_factory=dict)
    seed: int = 0
    base_dir: str = "."

    def scale(self, key):
        v = self.scales.get(key, DEFAULT_SCALES[key])
        if key == "extent" and v is None:
            return self.scale("radius")
        if key == "profile_n_max" and v is None:
            return self.scale("n_max")
        return v

    @classmethod
    def from_json(cls, data: dict, base_dir=".") -> "CampaignSpec":
        if "corpus" not in data:
            raise CampaignError("campaign is missing 'corpus'")
        checks = tuple(data.get("checks", CHECKS))
        unknown = [c for c in checks if c not in CHECKS]
        if unknown:
            raise CampaignError(f"unknown check {unknown[0]!r}")
        seed = int(data.get("seed", 0))
        entries = []
        for i, e in enumerate(data["corpus"]):
            src = {k: e[k] for k in ("path", "inline", "generator") if k in e}
            if len(src) != 1:
                raise CampaignError(f"corpus entry {i} needs exactly one of path, inline, generator")
            name = e.get("name", f"entry{i}")
            meta = dict(aperiodic=bool(e.get("aperiodic", False)), note=e.get("note", ""),
                        expect_lines=e.get("expect_lines"), stability=bool(e.get("stability", False)))
            gen = src.get("generator")
            if gen and gen.get("name") == "random_periodic" and "count" in gen:
                rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i])))
                for j in range(int(gen["count"])):
                    eta = builtin.random_periodic(rng, gen.get("max_width", 4), gen.get("max_height", 4),
                                                  gen.get("symbols", 2))
                    entries.append(CorpusEntry(f"{name}[{j}]", {"inline": to_dict(eta)}, **meta))
            else:
                entries.append(CorpusEntry(name, src, **meta))
        return cls(entries, checks, dict(data.get("scales", {})), seed, str(base_dir))

    @classmethod
    def load(cls, path) -> "CampaignSpec":
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise CampaignError(f"{path}: {e}") from None
        return cls.from_json(data, path.parent)

    def to_json(self) -> dict:
        return {"corpus": [e.to_json() for e in self.corpus], "checks": list(self.checks),
                "scales": self.scales, "seed": self.seed}


GENERATORS = {
    "constant": lambda a: builtin.constant(),
    "checkerboard": lambda a: builtin.checkerboard(),
    "stripes": lambda a: builtin.stripes(a.get("period", 2), a.get("vertical", True)),
    "fibonacci_lift": lambda a: builtin.fibonacci_lift(a.get("length", 200), a.get("rule", "x")),
    "thue_morse_lift": lambda a: builtin.thue_morse_lift(a.get("length", 200), a.get("rule", "x+y")),
    "tm2d": lambda a: builtin.tm2d(a.get("iterations", 8)),
    "random_periodic": lambda a: builtin.random_periodic(
        np.random.Generator(np.random.Philox(a.get("seed", 0))), a.get("max_width", 4), a.get("max_height", 4),
        a.get("symbols", 2)),
}


def build_configuration(entry: CorpusEntry, base_dir=".") -> Configuration:
    src = entry.source
    if "path" in src:
        p = Path(src["path"])
        return load(p if p.is_absolute() else Path(base_dir) / p)
    if "inline" in src:
        return from_dict(src["inline"])
    gen = dict(src["generator"])
    name = gen.pop("name", None)
    if name not in GENERATORS:
        raise CampaignError(f"unknown generator {name!r}")
    return GENERATORS[name](gen)


# ------------------------------------------------------------ results

@dataclass
class CheckResult:
    check: str
    passed: bool
    detail: str
    data: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"check": self.check, "passed": self.passed, "detail": self.detail, "data": self.data,
                "witnesses": self.witnesses}


@dataclass
class EntryResult:
    index: int
    name: str
    kind: str
    checks: list = field(default_factory=list)
    error: str | None = None
    profiles: list = field(default_factory=list)      # ProfileRow
    shapes: list = field(default_factory=list)        # (label, ConvexLatticeSet)
    config: Configuration | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"index": self.index, "name": self.name, "kind": self.kind, "passed": self.passed,
                "error": self.error, "checks": [c.to_json() for c in self.checks],
                "shapes": [{"label": lbl, "points": [list(p) for p in s.sorted_points]} for lbl, s in self.shapes]}


@dataclass
class CampaignReport:
    entries: list
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> list:
        return [e for e in self.entries if not e.passed]

    def to_json(self) -> dict:
        # wall time is left out so repeated runs emit identical bytes
        return {"passed": self.passed, "entries": [e.to_json() for e in self.entries]}


# ------------------------------------------------------------ checks

def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index, 7])))


def _profile_check(eta, entry: CorpusEntry, spec: CampaignSpec, res: EntryResult) -> CheckResult:
    n_max = spec.scale("profile_n_max")
    rows3 = complexity_profile(eta, n_max, 3)
    rows2 = complexity_profile(eta, n_max, 2)
    res.profiles.extend(rows2 + rows3)
    data: dict = {"k3": [r.P for r in rows3], "k2": [r.P for r in rows2]}
    if entry.aperiodic:
        low = [r.n for r in rows3 if r.n >= 2 and r.within_bound]
        data["rows_within_bound"] = low
        passed = not low
        detail = "all rows above 3n" if passed else f"P(n,3) <= 3n at n={low}"
        if entry.stability and isinstance(eta, Substitution):
            bigger = [r.P for r in complexity_profile(eta.enlarge(), n_max, 3)]
            data["stable"] = bigger == data["k3"]
            data["k3_enlarged"] = bigger
            if not data["stable"]:
                detail += "; counts changed on the enlarged window"
        return CheckResult("profile", passed, detail, data)
    if eta.exhaustive:
        hits3 = [r.n for r in rows3 if r.within_bound]
        hits2 = [r.n for r in rows2 if r.within_bound]
        lattice = period_lattice(eta)
        data.update(hits_k3=hits3, hits_k2=hits2, lattice=lattice.to_json()["generators"])
        passed = not (hits3 or hits2) or lattice.periodic
        return CheckResult("profile", passed, "low complexity implies a period" if passed
                           else "low complexity without a period vector", data)
    return CheckResult("profile", True, "lower bounds only", data)


def _random_vertex_step(rng, subsets):
    while True:
        s = ConvexLatticeSet(subsets[int(rng.integers(len(subsets)))])
        if len(s) > 1:
            return s, s.vertices[int(rng.integers(len(s.vertices)))]


def _lemma_check(eta, spec: CampaignSpec, res: EntryResult, subsets) -> CheckResult:
    rng = _rng(spec.seed, res.index)
    trials = spec.scale("lemma_trials")
    bad = []
    counts = {"vertex": 0, "edge": 0, "edge_applicable": 0, "chain": 0}
    for _ in range(trials):
        s, x = _random_vertex_step(rng, subsets)
        r = discrepancy_step(eta, s, x, strict=False)
        counts["vertex"] += 1
        if not r.holds:
            bad.append({"lemma": "vertex", "S": [list(p) for p in s.sorted_points], "x": list(x),
                        "generated": r.generated, "D_before": r.d_before, "D_after": r.d_after})
        s = ConvexLatticeSet(subsets[int(rng.integers(len(subsets)))])
        edges = [e for e in s.edges if len(s) > e.lattice_points]
        if edges:
            w = edges[int(rng.integers(len(edges)))]
            r2 = verify_edge_bound(eta, s, w, strict=False)
            counts["edge"] += 1
            counts["edge_applicable"] += int(r2.applicable)
            if not r2.holds:
                bad.append({"lemma": "edge", "S": [list(p) for p in s.sorted_points],
                            "w": [list(w.start), list(w.end)], "non_unique": r2.non_unique_count})
        chain, cur = [], s
        for _ in range(int(rng.integers(0, 4))):
            if len(cur) == 1:
                break
            v = cur.vertices[int(rng.integers(len(cur.vertices)))]
            chain.append(v)
            cur = ConvexLatticeSet(cur.points - {v})
        ds = chain_discrepancy(eta, s, chain, strict=False)
        counts["chain"] += 1
        if ds[-1] > ds[0] + len(chain):
            bad.append({"lemma": "chain", "S": [list(p) for p in s.sorted_points],
                        "chain": [list(p) for p in chain], "D": ds})
    return CheckResult("lemma-suite", not bad, f"{len(bad)} violations", counts, bad)


def _census_check(eta, entry: CorpusEntry, spec: CampaignSpec, cache: dict) -> CheckResult:
    rep = cache["census"]
    expected = entry.expect_lines
    if expected is None and isinstance(eta, Periodic):
        expected = 0
    replay_ok = all(v.witness.replay(eta) for v in rep.verdicts if v.witnessed)
    data = {"count": rep.count, "expected": expected, "lines": [list(d) for d in rep.witnessed_lines],
            "source": rep.source, "candidates": len(rep.candidates),
            "orientations": rep.pairing.to_json()["lines"], "one_sided_flags": [list(f) for f in rep.pairing.flagged]}
    passed = replay_ok and not rep.pairing.flagged and (expected is None or rep.count == expected)
    detail = f"{rep.count} witnessed lines" + ("" if expected is None else f" (expected {expected})")
    wit = [v.to_json() for v in rep.verdicts if v.witnessed] if not passed else []
    return CheckResult("expansivity-census", passed, detail, data, wit)


def _balanced_search(eta, spec: CampaignSpec, cache: dict):
    if "balanced" in cache:
        return cache["balanced"]
    found, outcomes = [], {}
    n = minimal_width(eta, 3, spec.scale("n_max")) if eta.exhaustive else None
    if n is not None:
        n = max(n, 2)
        for d in cache["census"].candidates:
            r = find_balanced_set(eta, d, n)
            key = r.case if r else r.reason
            outcomes[key] = outcomes.get(key, 0) + 1
            if r:
                found.append((d, r))
    cache["balanced"] = (n, found, outcomes)
    return cache["balanced"]


def _balanced_check(eta, spec, cache, res: EntryResult) -> CheckResult:
    if not eta.exhaustive:
        return CheckResult("balanced", True, "skipped: needs exact counts")
    n, found, outcomes = _balanced_search(eta, spec, cache)
    bad = []
    for d, r in found:
        res.shapes.append((f"balanced {d[0]} {d[1]}", r.set))
        if not is_balanced(eta, r.set, d).valid:
            bad.append({"direction": list(d), "points": [list(p) for p in r.set.sorted_points]})
    data = {"n": n, "found": len(found), "outcomes": dict(sorted(outcomes.items()))}
    return CheckResult("balanced", not bad, f"{len(found)} balanced sets, {len(bad)} failed validation", data, bad)


def _period_bounds_check(eta, spec, cache) -> CheckResult:
    if not isinstance(eta, Periodic):
        return CheckResult("period-bounds", True, "skipped: needs a periodic source")
    _, found, _ = _balanced_search(eta, spec, cache)
    witnessed = {tuple(v.direction) for v in cache["census"].verdicts if v.witnessed}
    bad, rows, props = [], 0, []
    for d, r in found:
        rep = strip_period_bound_check(eta, r.certificate, unique_case_applies=tuple(d) in witnessed)
        rows += len(rep.rows)
        for v in rep.violations:
            bad.append({"direction": list(d), "points": [list(p) for p in r.set.sorted_points], **v.to_json()})
        prop = periodic_strip_propagation_check(eta, d, r.set, r.certificate.edge)
        props.append(prop.holds)
        if not prop.holds:
            bad.append({"direction": list(d), "propagation": prop.to_json()})
    data = {"certificates": len(found), "rows": rows, "propagation_checked": len(props)}
    return CheckResult("period-bounds", not bad, f"{len(bad)} violations over {len(found)} certificates", data, bad)


def run_entry(index: int, entry: CorpusEntry, spec: CampaignSpec, subsets) -> EntryResult:
    res = EntryResult(index, entry.name, "?")
    try:
        eta = build_configuration(entry, spec.base_dir)
    except (OSError, ConfigFormatError, CampaignError, ValueError) as e:
        res.error = f"input: {e}"
        return res
    res.kind, res.config = eta.kind, eta
    cache: dict = {}
    try:
        if "profile" in spec.checks:
            res.checks.append(_profile_check(eta, entry, spec, res))
        if "lemma-suite" in spec.checks:
            res.checks.append(_lemma_check(eta, spec, res, subsets))
        needs_census = {"expansivity-census", "balanced", "period-bounds"} & set(spec.checks)
        if needs_census:
            cache["census"] = census(eta, spec.scale("radius"), spec.scale("extent"), spec.scale("n_max"))
            if eta.exhaustive and cache["census"].n is not None:
                gs = find_generating_set(eta, cache["census"].n, 3)
                if gs:
                    res.shapes.append(("generating set", gs.set))
        if "expansivity-census" in spec.checks:
            res.checks.append(_census_check(eta, entry, spec, cache))
        if "balanced" in spec.checks:
            res.checks.append(_balanced_check(eta, spec, cache, res))
        if "period-bounds" in spec.checks:
            res.checks.append(_period_bounds_check(eta, spec, cache))
    except (ShapeExceedsDomain, RequiresExactCounts) as e:
        res.error = f"scale: {e}"
    return res


def workers_from_env(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get("NIVAT_WORKERS", default)))
    except ValueError:
        return default


def run_campaign(spec: CampaignSpec, workers: int | None = None) -> CampaignReport:
    """Run every selected check on every corpus entry; results keep corpus order."""
    workers = workers_from_env() if workers is None else workers
    subsets = convex_subsets(rectangle(6, 3))
    t0 = time.perf_counter()
    jobs = list(enumerate(spec.corpus))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda ie: run_entry(ie[0], ie[1], spec, subsets), jobs))
    else:
        results = [run_entry(i, e, spec, subsets) for i, e in jobs]
    return CampaignReport(results, time.perf_counter() - t0)


# ------------------------------------------------------------ emission

PROFILE_COLUMNS = ["entry", "n", "k", "P", "bound", "D", "exhaustive"]


def profile_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_COLUMNS)
    for e in report.entries:
        for r in e.profiles:
            w.writerow([e.name] + r.csv_row())
    return buf.getvalue()


def summary_csv(report: CampaignReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["entry", "kind", "check", "passed", "detail"])
    for e in report.entries:
        if e.error:
            w.writerow([e.name, e.kind, "input", "false", e.error])
        for c in e.checks:
            w.writerow([e.name, e.kind, c.check, str(c.passed).lower(), c.detail])
    return buf.getvalue()


def report_json(report: CampaignReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def profile_svg(report: CampaignReport, k: int = 3) -> str:
    """P(n,k) against the bound n*k for each entry."""
    series = [(e.name, [(r.n, r.P) for r in e.profiles if r.k == k]) for e in report.entries]
    series = [(name, pts) for name, pts in series if pts]
    W, H, pad = 640, 400, 50
    n_hi = max([n for _, pts in series for n, _ in pts] + [1])
    p_hi = max([p for _, pts in series for _, p in pts] + [n_hi * k, 1])

    def sx(n):
        return pad + (W - 2 * pad) * (n - 1) / max(n_hi - 1, 1)

    def sy(p):
        return H - pad - (H - 2 * pad) * p / p_hi

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<line x1="{pad}" y1="{H - pad}" x2="{W - pad}" y2="{H - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{H - pad}" stroke="black"/>',
           f'<text x="{W // 2}" y="{H - 12}" text-anchor="middle" font-size="12">n</text>',
           f'<text x="14" y="{H // 2}" font-size="12">P(n,{k})</text>']
    bound = " ".join(f"{sx(n):.2f},{sy(n * k):.2f}" for n in range(1, n_hi + 1))
    out.append(f'<polyline points="{bound}" fill="none" stroke="gray" stroke-dasharray="4 3"/>')
    for i, (name, pts) in enumerate(series[:40]):
        col = _PALETTE[i % len(_PALETTE)]
        poly = " ".join(f"{sx(n):.2f},{sy(p):.2f}" for n, p in pts)
        out.append(f'<polyline points="{poly}" fill="none" stroke="{col}"><title>{_esc(name)}</title></polyline>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def shapes_svg(report: CampaignReport, cell: int = 14) -> str:
    """Generating and balanced sets drawn as filled cells with their hull outline."""
    items = [(e.name, lbl, s) for e in report.entries for lbl, s in e.shapes]
    cols = 6
    box = 9 * cell
    W = cols * box + 20
    H = max(1, (len(items) + cols - 1) // cols) * (box + 20) + 20
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>']
    for i, (name, lbl, s) in enumerate(items):
        ox = 10 + (i % cols) * box
        oy = 10 + (i // cols) * (box + 20)
        x0, y0, _, y1 = s.bbox
        out.append(f'<text x="{ox}" y="{oy + 10}" font-size="9">{_esc(name)}: {_esc(lbl)}</text>')
        for p in s.sorted_points:
            cx = ox + cell * (p.x - x0 + 1)
            cy = oy + 20 + cell * (y1 - p.y)
            out.append(f'<rect x="{cx}" y="{cy}" width="{cell - 2}" height="{cell - 2}" fill="#9ecae1"/>')
        if s.vertices:
            pts = " ".join(f"{ox + cell * (v.x - x0 + 1) + cell / 2 - 1:.1f},"
                           f"{oy + 20 + cell * (y1 - v.y) + cell / 2 - 1:.1f}" for v in s.vertices)
            out.append(f'<polygon points="{pts}" fill="none" stroke="#08519c"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_report(report: CampaignReport, out_dir, formats=("csv", "json", "svg")) -> list[Path]:
    """Write report files; also writes each corpus configuration and every drawn shape."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name, text):
        p = out / name
        p.write_text(text, encoding="utf-8")
        written.append(p)

    formats = set(formats)
    unknown = formats - {"csv", "json", "svg"}
    if unknown:
        raise CampaignError(f"unknown format {sorted(unknown)[0]!r}")
    if "csv" in formats:
        put("profiles.csv", profile_csv(report))
        put("summary.csv", summary_csv(report))
    if "json" in formats:
        put("report.json", report_json(report))
    if "svg" in formats:
        put("profiles.svg", profile_svg(report))
        put("shapes.svg", shapes_svg(report))
    (out / "configs").mkdir(exist_ok=True)
    (out / "shapes").mkdir(exist_ok=True)
    for e in report.entries:
        stem = _safe(f"{e.index:03d}-{e.name}")
        if e.config is not None:
            try:
                put(f"configs/{stem}.cfg", dumps(e.config))
            except ConfigFormatError:
                pass            # views without a file form
        for j, (lbl, s) in enumerate(e.shapes):
            put(f"shapes/{stem}-{j}.shape", f"# {lbl}\n" + format_shape(s))
    return written


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)
