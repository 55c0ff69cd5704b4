"""Period vectors of configurations, regions, 1D words and strips."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .configuration import Configuration, Pattern, Periodic, UndefinedCell
from .extension import edge_cells, extension_fan
from .geometry import ConvexLatticeSet, DirectedLine, Point, row_major


@dataclass(frozen=True)
class RegionPeriodicityReport:
    region: str
    vector: tuple
    holds: bool
    violation: tuple | None = None

    def to_json(self) -> dict:
        return {"region": self.region, "vector": list(self.vector), "holds": self.holds,
                "violation": list(self.violation) if self.violation else None}


def is_periodic_on_region(alpha: Configuration | Pattern, region, u) -> RegionPeriodicityReport:
    """alpha(x) == alpha(x + u) for every x in the region with x + u also in it."""
    u = Point(*u)
    cells = sorted({Point(*c) for c in region}, key=row_major)
    if isinstance(alpha, Pattern):
        colors = alpha.as_dict()
        missing = [tuple(c) for c in cells if c not in colors]
        if missing:
            raise UndefinedCell(f"region leaves the pattern's shape at {missing[:5]}")
        value = colors.__getitem__
    else:
        bad = [tuple(c) for c in cells if not alpha.is_defined(c)]
        if bad:
            raise UndefinedCell(f"region leaves the defined domain at {bad[:5]}")
        value = alpha.evaluate
    inside = set(cells)
    desc = f"{len(cells)} cells"
    for x in cells:
        y = x + u
        if y in inside and value(x) != value(y):
            return RegionPeriodicityReport(desc, tuple(u), False, tuple(x))
    return RegionPeriodicityReport(desc, tuple(u), True)


@dataclass(frozen=True)
class PeriodLattice:
    """Period vectors as 0, 1 or 2 generators.

    Two generators are stored in Hermite form ``(a, b), (0, c)`` with
    ``0 <= b < c``; a single generator is primitive-direction-normalized.
    """

    generators: tuple

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def periodic(self) -> bool:
        return self.rank > 0

    def contains(self, v) -> bool:
        v = tuple(v)
        if v == (0, 0):
            return True
        if self.rank == 0:
            return False
        if self.rank == 1:
            g = self.generators[0]
            if g[0] * v[1] - g[1] * v[0] != 0:
                return False
            k = v[0] // g[0] if g[0] else v[1] // g[1]
            return (k * g[0], k * g[1]) == v
        (a, b), (_, c) = self.generators
        if v[0] % a:
            return False
        t = v[0] // a
        return (v[1] - t * b) % c == 0

    def vector_along(self, d) -> tuple | None:
        """Shortest nonzero lattice vector that is a positive multiple of d."""
        if self.rank == 0:
            return None
        d = tuple(d)
        if self.rank == 2:
            (a, _), (_, c) = self.generators
            bound = a * c
        else:
            g = self.generators[0]
            bound = max(abs(g[0]), abs(g[1]))
        for t in range(1, bound + 1):
            if self.contains((t * d[0], t * d[1])):
                return (t * d[0], t * d[1])
        return None

    def to_json(self) -> dict:
        return {"rank": self.rank, "generators": [list(g) for g in self.generators]}


def _hermite(vectors) -> tuple:
    """Hermite basis (a, b), (0, c) of the full-rank lattice spanned by ``vectors``."""
    rows = [list(v) for v in vectors if tuple(v) != (0, 0)]
    c = 0
    pivot = None
    while rows:
        nz = [r for r in rows if r[0] != 0]
        for r in rows:
            if r[0] == 0:
                c = gcd(c, r[1])
        if not nz:
            break
        nz.sort(key=lambda r: abs(r[0]))
        p = nz[0]
        if len(nz) == 1:
            pivot = p
            break
        rows = [p] + [[r[0] - (r[0] // p[0]) * p[0], r[1] - (r[0] // p[0]) * p[1]] for r in nz[1:]]
    if pivot is None or c == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    if pivot[0] < 0:
        pivot = [-pivot[0], -pivot[1]]
    return ((pivot[0], pivot[1] % c), (0, c))


def period_lattice(eta: Periodic) -> PeriodLattice:
    """Every period vector of a periodic configuration, from a scan of its fundamental box."""
    if not isinstance(eta, Periodic):
        raise ValueError("period_lattice needs a periodic source")
    g = eta.grid
    h, w = g.shape
    found = [(w, 0), (0, h)]
    for dy in range(h):
        for dx in range(w):
            if (dx, dy) != (0, 0) and np.array_equal(np.roll(g, (-dy, -dx), axis=(0, 1)), g):
                found.append((dx, dy))
    return PeriodLattice(_hermite(found))


def region_period_lattice(alpha, region, radius: int) -> PeriodLattice:
    """Periods within ``radius`` that hold on a finite region, reduced to 0, 1 or 2 generators."""
    cells = {tuple(c) for c in region}
    vecs = []
    for dy in range(0, radius + 1):
        for dx in range(-radius, radius + 1):
            if (dy, dx) <= (0, 0):
                continue
            # vectors with no overlapping pair hold vacuously and say nothing
            if not any((x + dx, y + dy) in cells for x, y in cells):
                continue
            if is_periodic_on_region(alpha, cells, (dx, dy)).holds:
                vecs.append((dx, dy))
    if not vecs:
        return PeriodLattice(())
    if all(v[0] * vecs[0][1] - v[1] * vecs[0][0] == 0 for v in vecs):
        g = min(vecs, key=lambda v: v[0] * v[0] + v[1] * v[1])
        k = gcd(g[0], g[1])
        step = (g[0] // k, g[1] // k)
        # smallest multiple of the primitive direction that is a period
        for t in range(1, k + 1):
            if (t * step[0], t * step[1]) in vecs:
                return PeriodLattice(((t * step[0], t * step[1]),))
    return PeriodLattice(_hermite(vecs))


# ------------------------------------------------------------ Morse-Hedlund

@dataclass(frozen=True)
class MorseHedlundVerdict:
    treat_as: str
    profile: tuple            # P(1), P(2), ...
    first_low: int | None     # smallest n with P(n) <= n
    period: int | None
    preperiod: int | None
    caveat: str = ""

    def to_json(self) -> dict:
        return {"treat_as": self.treat_as, "profile": list(self.profile), "first_low": self.first_low,
                "period": self.period, "preperiod": self.preperiod, "caveat": self.caveat}


def _factor_count(word: tuple, n: int, cyclic: bool) -> int:
    L = len(word)
    if cyclic:
        doubled = word + word
        return len({doubled[i:i + n] for i in range(L)})
    return len({word[i:i + n] for i in range(L - n + 1)})


def minimal_cyclic_period(word) -> int:
    word = tuple(word)
    L = len(word)
    return next(p for p in range(1, L + 1) if L % p == 0 and word[p:] + word[:p] == word)


def eventual_period(word) -> tuple[int, int] | None:
    """Smallest (preperiod, period) whose repeating part spans at least two periods."""
    word = tuple(word)
    L = len(word)
    for pre in range(L):
        for p in range(1, (L - pre) // 2 + 1):
            if all(word[i] == word[i + p] for i in range(pre, L - p)):
                return pre, p
    return None


def morse_hedlund_1d(word, treat_as: str = "periodic", n_max: int | None = None) -> MorseHedlundVerdict:
    """Factor complexity profile and period data of a word.

    ``periodic`` reads the word as one period of a bi-infinite sequence, so
    factors wrap around and the verdict is exact.  ``onesided`` reads it as a
    prefix of a one-sided sequence; the profile stops at ``n_max`` (default a
    fifth of the length) so that counts are not dominated by truncation.
    """
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    L = len(word)
    if treat_as == "periodic":
        n_max = L if n_max is None else n_max
        prof = tuple(_factor_count(word, n, True) for n in range(1, n_max + 1))
        low = next((i + 1 for i, c in enumerate(prof) if c <= i + 1), None)
        return MorseHedlundVerdict("periodic", prof, low, minimal_cyclic_period(word), 0)
    if treat_as != "onesided":
        raise ValueError(f"treat_as must be 'periodic' or 'onesided', not {treat_as!r}")
    n_max = max(1, L // 5) if n_max is None else n_max
    prof = tuple(_factor_count(word, n, False) for n in range(1, n_max + 1))
    low = next((i + 1 for i, c in enumerate(prof) if c <= i + 1), None)
    ev = eventual_period(word)
    caveat = f"finite prefix of length {L}; counts are lower bounds and periods hold on the prefix only"
    return MorseHedlundVerdict("onesided", prof, low, ev[1] if ev else None, ev[0] if ev else None, caveat)


# ------------------------------------------------------------ strip period bounds

def _strip_offsets(line: DirectedLine, cells) -> tuple[int, int]:
    cs = [line.offset(p) for p in cells]
    return min(cs), max(cs)


def _strip_sequence(eta: Configuration, line: DirectedLine, cmin: int, cmax: int, length: int) -> list[tuple]:
    """Strip content as a sequence indexed by steps along the line."""
    e = line.unit_offset_vector()
    p, q = line.direction
    bases = [Point(c * e[0], c * e[1]) for c in range(cmin, cmax + 1)]
    return [tuple(eta.code_at((b.x + t * p, b.y + t * q)) for b in bases) for t in range(length)]


def _sequence_period(seq: list, max_period: int) -> int | None:
    n = len(seq)
    for t in range(1, min(max_period, n - 1) + 1):
        if all(seq[i] == seq[i + t] for i in range(n - t)):
            return t
    return None


@dataclass
class StripRow:
    translate: int
    case: str                 # "non-unique", "unique" or "mixed"
    period: int | None
    bound: int | None
    applicable: bool
    violation: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass
class StripBoundReport:
    direction: tuple
    edge_points: int
    rows: list = field(default_factory=list)

    @property
    def violations(self) -> list[StripRow]:
        return [r for r in self.rows if r.violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"direction": list(self.direction), "edge_points": self.edge_points,
                "rows": [r.to_json() for r in self.rows], "violations": len(self.violations)}


def _default_scan(eta: Configuration) -> tuple[int, int]:
    if isinstance(eta, Periodic):
        area = eta.width * eta.height
        return area, 2 * area + 2
    raise ValueError("translates and length must be given for non-periodic sources")


def strip_period_bound_check(eta: Configuration, certificate, translates: int | None = None,
                             length: int | None = None, unique_case_applies: bool = False) -> StripBoundReport:
    """Measure strip periods along a balanced set's line and compare with the edge bounds.

    For every perpendicular shift of the strip around S minus w, each step
    along the line is classified by whether the S-minus-w coloring there
    extends uniquely to S.  When no step extends uniquely the period must be
    at most |w|-1; this bound is always enforced.  When every step extends
    uniquely the bound 2|w|-2 is reported, but only counted as a violation
    if ``unique_case_applies`` (the line is known to be nonexpansive).
    """
    if not certificate.valid:
        raise ValueError("strip bounds need a valid balanced certificate")
    s, line, w = certificate.set, DirectedLine(certificate.line.direction), certificate.edge
    if translates is None or length is None:
        k_def, j_def = _default_scan(eta)
        translates = k_def if translates is None else translates
        length = j_def if length is None else length
    on_w = edge_cells(s, w)
    rest = s.points - on_w
    fan = extension_fan(eta, rest, s.points)
    rest_sorted = sorted(rest, key=row_major)
    cmin, cmax = _strip_offsets(line, rest)
    e = line.unit_offset_vector()
    p, q = line.direction
    m = len(on_w)
    report = StripBoundReport(line.direction, m)
    for k in range(translates):
        shift = (k * e[0], k * e[1])
        kinds = set()
        for j in range(length):
            off = (shift[0] + j * p, shift[1] + j * q)
            row = tuple(eta.code_at((c.x + off[0], c.y + off[1])) for c in rest_sorted)
            if -1 in row:
                raise UndefinedCell(f"strip leaves the defined domain at translate {k}, step {j}")
            kinds.add(fan.is_unique(row))
        seq = _strip_sequence(eta, line, cmin + k, cmax + k, length)
        period = _sequence_period(seq, length // 2)
        if kinds == {False}:
            case, bound, applicable = "non-unique", m - 1, True
        elif kinds == {True}:
            case, bound, applicable = "unique", 2 * m - 2, unique_case_applies
        else:
            case, bound, applicable = "mixed", None, False
        bad = applicable and bound is not None and (period is None or period > bound)
        report.rows.append(StripRow(k, case, period, bound, applicable, bad))
    return report


@dataclass(frozen=True)
class PropagationReport:
    direction: tuple
    strip_period: int | None
    global_vector: tuple | None
    holds: bool

    def to_json(self) -> dict:
        return {"direction": list(self.direction), "strip_period": self.strip_period,
                "global_vector": list(self.global_vector) if self.global_vector else None, "holds": self.holds}


def periodic_strip_propagation_check(eta: Periodic, line: DirectedLine | tuple, s: ConvexLatticeSet,
                                     w=None) -> PropagationReport:
    """A periodic strip around S minus w forces a global period parallel to the line."""
    line = line if isinstance(line, DirectedLine) else DirectedLine(tuple(line))
    line = DirectedLine(line.direction)
    if w is None:
        w = s.edge_parallel_to(line.direction)
    rest = s.points - edge_cells(s, w) if w is not None else s.points
    if not rest:
        rest = s.points
    cmin, cmax = _strip_offsets(line, rest)
    _, length = _default_scan(eta)
    period = _sequence_period(_strip_sequence(eta, line, cmin, cmax, length), length // 2)
    vec = period_lattice(eta).vector_along(line.direction)
    holds = period is None or vec is not None
    return PropagationReport(line.direction, period, vec, holds)
