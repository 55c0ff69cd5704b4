"""Finite-scale nonexpansive directions and lines, and balanced sets.

A direction test asks whether the colors on a truncated half-plane force
the color of the nearest cell just outside it.  A line test asks whether the
colors on a strip around the line force the colors on a surrounding box.
Both are decided exactly on the pattern language of the region, so every
positive verdict carries two concrete patterns that can be replayed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .complexity import ShapeExceedsDomain, _ordered, _unique_rows, discrepancy, rect_complexity, sample_rows
from .configuration import Configuration, apply_unimodular
from .extension import (GeneratingSetResult, NotFound, RequiresExactCounts, edge_cells,
                        find_generating_set, is_generated)
from .geometry import ConvexLatticeSet, DirectedLine, Point, line_lattice_count, primitive, rectangle, row_major

WITNESSED = "nonexpansive-witnessed"
EXPANSIVE = "expansive-at-radius"

# used when no generating set is available to propose candidates
FALLBACK_LINES = ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1))


@dataclass(frozen=True)
class StripShape:
    line: DirectedLine
    radius: int
    extent: int

    @property
    def box(self) -> list[Point]:
        L = self.extent
        return [Point(x, y) for y in range(-L, L + 1) for x in range(-L, L + 1)]

    def contains(self, u) -> bool:
        c = self.line.offset(u)
        return c * c < self.radius * self.radius * self.line.norm2

    @property
    def cells(self) -> list[Point]:
        out = [u for u in self.box if self.contains(u)]
        if not out:
            raise ValueError("strip has no cells inside the window")
        return out


@dataclass(frozen=True)
class Witness:
    cells: tuple          # region cells in row-major order
    agree: tuple          # cells on which the two patterns coincide
    target: tuple         # a cell where they differ
    first: tuple          # symbols on ``cells``
    second: tuple

    def to_json(self) -> dict:
        return {"cells": [list(c) for c in self.cells], "agree": [list(c) for c in self.agree],
                "target": list(self.target), "first": list(self.first), "second": list(self.second)}

    @classmethod
    def from_json(cls, d: dict) -> "Witness":
        return cls(tuple(Point(*c) for c in d["cells"]), tuple(Point(*c) for c in d["agree"]),
                   Point(*d["target"]), tuple(d["first"]), tuple(d["second"]))

    def replay(self, eta: Configuration) -> bool:
        """Both patterns occur in eta, agree where declared and differ at the target."""
        _, rows = sample_rows(eta, self.cells)
        lang = {tuple(r) for r in _unique_rows(rows).tolist()}
        enc = eta.alphabet.encode
        if enc(self.first) not in lang or enc(self.second) not in lang:
            return False
        pos = {c: i for i, c in enumerate(self.cells)}
        if any(self.first[pos[c]] != self.second[pos[c]] for c in self.agree):
            return False
        return self.first[pos[self.target]] != self.second[pos[self.target]]


@dataclass(frozen=True)
class ExpansivityVerdict:
    direction: tuple
    kind: str             # "direction" or "line"
    depth: int            # half-plane depth, or strip radius
    extent: int
    verdict: str
    witness: Witness | None = None

    @property
    def witnessed(self) -> bool:
        return self.verdict == WITNESSED

    def to_json(self) -> dict:
        return {"direction": list(self.direction), "kind": self.kind, "depth": self.depth,
                "extent": self.extent, "verdict": self.verdict,
                "witness": self.witness.to_json() if self.witness else None}

    @classmethod
    def from_json(cls, d: dict) -> "ExpansivityVerdict":
        w = Witness.from_json(d["witness"]) if d.get("witness") else None
        return cls(tuple(d["direction"]), d["kind"], d["depth"], d["extent"], d["verdict"], w)


def _fiber_witness(eta: Configuration, cells: list[Point], agree: list[Point]) -> Witness | None:
    """Canonically first pair of region patterns that coincide on ``agree`` but not everywhere."""
    try:
        cells, rows = sample_rows(eta, cells)
    except ShapeExceedsDomain:
        xs = [c.x for c in cells]
        ys = [c.y for c in cells]
        raise ShapeExceedsDomain(
            f"window too small: need at least {max(xs) - min(xs) + 1} x {max(ys) - min(ys) + 1} cells") from None
    uniq = _unique_rows(rows).tolist()      # lexicographic order
    index = {c: i for i, c in enumerate(cells)}
    cols = [index[c] for c in agree]
    seen: dict = {}
    for row in uniq:
        key = tuple(row[i] for i in cols)
        if key in seen:
            a, b = seen[key], row
            first_diff = next(c for c in cells if a[index[c]] != b[index[c]])
            syms = eta.alphabet.symbols
            return Witness(tuple(cells), tuple(agree), first_diff,
                           tuple(syms[i] for i in a), tuple(syms[i] for i in b))
        seen[key] = row
    return None


def half_plane_region(line: DirectedLine, depth: int, extent: int) -> tuple[list[Point], Point]:
    """Truncated half-plane cells and the target cell just outside it."""
    n2 = line.norm2
    R = depth + extent + 1
    inside = []
    for y in range(-R, R + 1):
        for x in range(-R, R + 1):
            u = (x, y)
            c = line.offset(u)
            a = line.along(u)
            if 0 <= c and c * c <= depth * depth * n2 and a * a <= extent * extent * n2:
                inside.append(Point(x, y))
    e = line.unit_offset_vector()
    base = Point(-e[0], -e[1])          # offset -1
    p, q = line.direction
    # cells with offset -1 are base + k*d; take the one closest to the anchor's projection
    k0 = -line.along(base) // n2
    cand = [base + (k * p, k * q) for k in (k0 - 1, k0, k0 + 1, k0 + 2)]
    target = min(cand, key=lambda t: (abs(line.along(t)), line.along(t)))
    return sorted(inside, key=row_major), target


def direction_nonexpansive_at_scale(eta: Configuration, line: DirectedLine | tuple, depth: int,
                                    extent: int) -> ExpansivityVerdict:
    """Does the half-plane to the left of ``line`` fail to force the next cell?"""
    line = line if isinstance(line, DirectedLine) else DirectedLine(tuple(line))
    line = DirectedLine(line.direction)
    inside, target = half_plane_region(line, depth, extent)
    w = _fiber_witness(eta, _ordered(inside + [target]), inside)
    return ExpansivityVerdict(line.direction, "direction", depth, extent,
                              WITNESSED if w else EXPANSIVE, w)


def line_nonexpansive_at_scale(eta: Configuration, line: DirectedLine | tuple, radius: int,
                               extent: int) -> ExpansivityVerdict:
    """Does the strip of the given radius fail to force the surrounding box?"""
    line = line if isinstance(line, DirectedLine) else DirectedLine(tuple(line))
    line = DirectedLine(line.undirected)
    strip = StripShape(line, radius, extent)
    w = _fiber_witness(eta, strip.box, strip.cells)
    return ExpansivityVerdict(line.direction, "line", radius, extent, WITNESSED if w else EXPANSIVE, w)


def candidate_nonexpansive_lines(s: GeneratingSetResult | ConvexLatticeSet) -> list[DirectedLine]:
    """Edge directions of the set, each listed with its antiparallel partner."""
    s = s.set if isinstance(s, GeneratingSetResult) else s
    out: list[tuple] = []
    for e in s.edges:
        for d in (e.direction, (-e.direction[0], -e.direction[1])):
            if d not in out:
                out.append(d)
    return [DirectedLine(d) for d in out]


@dataclass
class PairingReport:
    lines: dict                      # undirected direction -> [orientations witnessed]
    hypothesis_holds: bool
    flagged: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"lines": [{"line": list(k), "witnessed": [list(o) for o in v]} for k, v in sorted(self.lines.items())],
                "hypothesis_holds": self.hypothesis_holds, "flagged": [list(f) for f in self.flagged]}


def antiparallel_pairing_check(verdicts: list[ExpansivityVerdict], hypothesis_holds: bool = False) -> PairingReport:
    """Group witnessed directions by line; flag one-sided lines when exact P(n,3) <= 3n holds."""
    lines: dict = {}
    for v in verdicts:
        if v.kind != "direction" or not v.witnessed:
            continue
        key = DirectedLine(v.direction).undirected
        lines.setdefault(key, [])
        if tuple(v.direction) not in lines[key]:
            lines[key].append(tuple(v.direction))
    flagged = [k for k, o in sorted(lines.items()) if len(o) < 2] if hypothesis_holds else []
    return PairingReport(lines, hypothesis_holds, flagged)


@dataclass
class CensusReport:
    candidates: list                 # directions tested
    source: str                      # where the candidates came from
    n: int | None                    # rectangle width behind the generating set
    verdicts: list
    pairing: PairingReport

    @property
    def witnessed_lines(self) -> list[tuple]:
        return sorted(self.pairing.lines)

    @property
    def count(self) -> int:
        return len(self.pairing.lines)

    def to_json(self) -> dict:
        return {"source": self.source, "n": self.n, "candidates": [list(c) for c in self.candidates],
                "witnessed_lines": [list(c) for c in self.witnessed_lines], "count": self.count,
                "verdicts": [v.to_json() for v in self.verdicts], "pairing": self.pairing.to_json()}


def minimal_width(eta: Configuration, k: int, n_max: int) -> int | None:
    for n in range(1, n_max + 1):
        try:
            if rect_complexity(eta, n, k).P <= n * k:
                return n
        except ShapeExceedsDomain:
            return None
    return None


def census(eta: Configuration, radius: int, extent: int | None = None, n_max: int = 6,
           mode: str = "exhaustive", directions: list | None = None) -> CensusReport:
    """Test both orientations of every candidate line and count the witnessed lines."""
    extent = radius if extent is None else extent
    n = None
    if directions is not None:
        lines = sorted({DirectedLine(tuple(d)).undirected for d in directions})
        source = "list"
    else:
        lines, source = list(FALLBACK_LINES), "fallback"
        if eta.exhaustive:
            n = minimal_width(eta, 3, n_max)
            if n is not None:
                gs = find_generating_set(eta, n, 3, mode=mode)
                if gs and gs.set.edges:
                    lines = sorted({DirectedLine(e.direction).undirected for e in gs.set.edges})
                    source = "generating-set"
                elif gs and len(gs.set) > 1:
                    a, b = gs.set.vertices
                    seg = DirectedLine(primitive(b - a)).undirected
                    lines = sorted(set(FALLBACK_LINES) | {seg})
                    source = "fallback+segment"
    candidates, verdicts = [], []
    for d in lines:
        for o in (d, (-d[0], -d[1])):
            candidates.append(o)
            verdicts.append(direction_nonexpansive_at_scale(eta, o, radius, extent))
    hyp = eta.exhaustive and n is not None
    return CensusReport(candidates, source, n, verdicts, antiparallel_pairing_check(verdicts, hyp))


# ------------------------------------------------------------ balanced sets

@dataclass
class BalancedCertificate:
    set: ConvexLatticeSet
    line: DirectedLine
    edge: object | None
    has_edge: bool
    endpoints_generated: bool
    discrepancy_increase: bool
    lines_full: bool
    evidence: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.has_edge and self.endpoints_generated and self.discrepancy_increase and self.lines_full

    def __bool__(self):
        return self.valid

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.set.sorted_points], "direction": list(self.line.direction),
                "edge": [list(self.edge.start), list(self.edge.end)] if self.edge else None,
                "conditions": [self.has_edge, self.endpoints_generated, self.discrepancy_increase, self.lines_full],
                "valid": self.valid, "evidence": self.evidence}


def is_balanced(eta: Configuration, s: ConvexLatticeSet, line: DirectedLine | tuple) -> BalancedCertificate:
    """Evaluate the four balancedness conditions for S and the directed line."""
    line = line if isinstance(line, DirectedLine) else DirectedLine(tuple(line))
    w = s.edge_parallel_to(line.direction)
    if w is None:
        return BalancedCertificate(s, line, None, False, False, False, False, {"reason": "no edge parallel to the line"})
    ev: dict = {}
    gen = {tuple(p): is_generated(eta, s, p) for p in (w.start, w.end)}
    ev["endpoints"] = [[list(k), v] for k, v in gen.items()]
    on_w = edge_cells(s, w)
    rest = s.points - on_w
    if rest:
        d_rest = discrepancy(eta, rest, anchor=s.points)
        d_full = discrepancy(eta, s.points)
        ev["D_without_edge"], ev["D"] = d_rest, d_full
        increase = d_rest > d_full
    else:
        increase = False
        ev["reason"] = "S minus the edge is empty"
    counts = line_lattice_count(s, line)
    ev["line_counts"] = [list(c) for c in counts]
    need = len(on_w) - 1
    ev["required_per_line"] = need
    return BalancedCertificate(s, line, w, True, all(gen.values()), increase,
                               all(c >= need for _, c in counts), ev)


@dataclass
class BalancedSearch:
    set: ConvexLatticeSet
    certificate: BalancedCertificate
    case: str
    trace: list = field(default_factory=list)   # (label, sorted points) of intermediate sets

    def to_json(self) -> dict:
        return {"case": self.case, "certificate": self.certificate.to_json(),
                "trace": [{"step": lbl, "points": [list(p) for p in pts]} for lbl, pts in self.trace]}


def _top_row(n: int, a: int, b: int, bottom: bool = False) -> frozenset:
    base_rows = (1, 2) if bottom else (0, 1)
    extra = 0 if bottom else 2
    pts = {Point(x, y) for x in range(n) for y in base_rows}
    pts |= {Point(x, extra) for x in range(a, b + 1)}
    return frozenset(pts)


def _horizontal(eta, n: int, bottom: bool, trace: list):
    d_rect = discrepancy(eta, rectangle(n, 3).points)
    best = None
    for width in range(0, n):
        for a in range(0, n - width):
            s = _top_row(n, a, a + width, bottom)
            if discrepancy(eta, s) <= d_rect:
                best = (a, a + width, s)
                break
        if best:
            break
    if best is None:
        return NotFound("construction blocked at step horizontal scan: no set reaches D(R_{n,3})")
    a, b, s = best
    trace.append((f"S[{a},{b}]", sorted(s, key=row_major)))
    if a == b:
        return NotFound(f"construction blocked at step horizontal minimum: single top cell at x={a}")
    return ConvexLatticeSet(s)


def _line_index(p: Point, a: int) -> int:
    # lines through (j,1) with direction (a,1): x - a*(y-1)
    return p.x - a * (p.y - 1)


def _southwest(eta, n: int, a: int, trace: list):
    """Oblique construction in the frame where the line points along (-a, -1)."""
    rect = rectangle(n, 3).points
    t_a = rect | {Point(-i, 0) for i in range(1, a + 1)}
    trace.append((f"T_{a}", sorted(t_a, key=row_major)))
    t_tilde = t_a - {Point(i, 2) for i in range(a)}
    trace.append(("T~", sorted(t_tilde, key=row_major)))
    s0 = t_tilde - {Point(x, 0) for x in range(n - a, n)}
    trace.append(("S_0", sorted(s0, key=row_major)))
    if not s0 or not ConvexLatticeSet(s0).is_convex():
        return NotFound("construction blocked at step S_0: set is empty or not convex")
    if discrepancy(eta, s0) > 0:
        return NotFound("construction blocked at step S_0: D(S_0) > 0")
    u = {i: frozenset(p for p in s0 if _line_index(p, a) >= i) for i in range(n)}
    if discrepancy(eta, u[n - 1]) <= 0:
        return NotFound("construction blocked at step U_{n-1}: D <= 0 on a single line")
    i_max = max(i for i in range(n) if u[i] and discrepancy(eta, u[i]) <= 0)
    ui = u[i_max]
    trace.append((f"U_{i_max}", sorted(ui, key=row_major)))
    on_line = sorted((p for p in ui if _line_index(p, a) == i_max), key=lambda p: p.y)
    q1, q3 = on_line[0], on_line[-1]
    g1, g3 = is_generated(eta, ui, q1), is_generated(eta, ui, q3)
    if g1 and g3:
        return ConvexLatticeSet(ui)
    s1 = ui - {q3 if not g3 else q1}
    trace.append(("S_1", sorted(s1, key=row_major)))
    return ConvexLatticeSet(s1)


def _southwest_frame(direction) -> tuple | None:
    """(a, M) with the line mapped to (-a, -1) by the diagonal sign change M."""
    p, q = direction
    if abs(q) != 1 or p == 0:
        return None
    a = abs(p)
    frames = {
        (-a, -1): ((1, 0), (0, 1)),
        (a, 1): ((-1, 0), (0, -1)),
        (a, -1): ((1, 0), (0, -1)),
        (-a, 1): ((-1, 0), (0, 1)),
    }
    return a, frames[(p, q)]


def find_balanced_set(eta: Configuration, line: DirectedLine | tuple, n: int,
                      try_generating_set: bool = True):
    """Build a balanced subset of R_{n,3} for the directed line, or explain why not."""
    line = line if isinstance(line, DirectedLine) else DirectedLine(tuple(line))
    d = line.direction
    if not eta.exhaustive:
        raise RequiresExactCounts("requires exhaustive counts")
    if n == 1:
        return NotFound("degenerate")
    if rect_complexity(eta, n, 3).P > 3 * n:
        return NotFound("complexity hypothesis")
    trace: list = []

    def done(s, case):
        if isinstance(s, NotFound):
            return s
        cert = is_balanced(eta, s, line)
        if not cert.valid:
            return NotFound(f"construction blocked at step validation ({case})")
        return BalancedSearch(s, cert, case, trace)

    if try_generating_set:
        gs = find_generating_set(eta, n, 3)
        if gs and gs.set.edges:
            w = gs.set.edge_parallel_to(d)
            trace.append(("generating set", list(gs.set.sorted_points)))
            if w is not None and w.lattice_points == 2:
                cert = is_balanced(eta, gs.set, line)
                if cert.valid:
                    return BalancedSearch(gs.set, cert, "generating set", trace)

    if d == (0, -1) or d == (0, 1):
        s = rectangle(n, 3)
        trace.append(("R_{n,3}", list(s.sorted_points)))
        return done(s, "vertical")
    if d == (-1, 0):
        return done(_horizontal(eta, n, False, trace), "horizontal")
    if d == (1, 0):
        return done(_horizontal(eta, n, True, trace), "horizontal")
    frame = _southwest_frame(d)
    if frame is None:
        return NotFound(f"construction blocked at step direction: {d} does not meet R_{{n,3}} in three rows")
    a, m = frame
    if a >= n:
        return NotFound("construction blocked at step T_a: line too steep for the rectangle")
    eta_t = apply_unimodular(eta, m)
    s = _southwest(eta_t, n, a, trace)
    if isinstance(s, NotFound):
        return s
    back = s.transform(m)      # the sign changes are involutions
    trace.append(("mapped back", list(back.sorted_points)))
    return done(back, "oblique")
