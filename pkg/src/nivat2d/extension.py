"""Unique extensions, generated vertices, generating sets and discrepancy lemmas.

For partial configurations every comparison between a shape and a subshape
is made over the translates admissible for the larger shape, so the
restriction map between the two languages is surjective by construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .complexity import _ordered, _unique_rows, discrepancy, sample_rows
from .configuration import Configuration
from .geometry import ConvexLatticeSet, Edge, Point, rectangle, row_major


class LemmaViolation(AssertionError):
    """A checked inequality failed; ``payload`` carries the replay data."""

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


class RequiresExactCounts(ValueError):
    pass


@dataclass(frozen=True)
class NotFound:
    reason: str

    def __bool__(self):
        return False


@dataclass
class ExtensionFan:
    """Fibers of the restriction map W(S2) -> W(S1)."""

    base: tuple        # ordered cells of S1
    full: tuple        # ordered cells of S2
    fibers: dict       # base code row -> list of full code rows
    alphabet: tuple

    @property
    def fiber_sizes(self) -> list[int]:
        return [len(v) for v in self.fibers.values()]

    @property
    def total(self) -> int:
        return sum(self.fiber_sizes)

    @property
    def non_unique(self) -> list[tuple]:
        return [k for k, v in self.fibers.items() if len(v) > 1]

    def is_unique(self, base_row) -> bool:
        return len(self.fibers[tuple(base_row)]) == 1

    def patterns(self) -> dict:
        """Fibers as (cell, symbol) tuples, cells shifted jointly so S2 starts at the origin."""
        x0 = min(p.x for p in self.full)
        y0 = min(p.y for p in self.full)
        shift = lambda cells: tuple(Point(p.x - x0, p.y - y0) for p in cells)  # noqa: E731
        out = {}
        for b, exts in self.fibers.items():
            key = tuple(zip(shift(self.base), (self.alphabet[c] for c in b)))
            out[key] = [tuple(zip(shift(self.full), (self.alphabet[c] for c in e))) for e in exts]
        return out


def _fan(eta: Configuration, sub: Iterable, full: Iterable) -> ExtensionFan:
    full_cells = _ordered(full)
    sub_cells = _ordered(sub)
    if not set(sub_cells) < set(full_cells):
        raise ValueError("S1 must be a proper subset of S2")
    cells, rows = sample_rows(eta, full_cells)
    uniq = _unique_rows(rows)
    index = {p: i for i, p in enumerate(cells)}
    cols = [index[p] for p in sub_cells]
    fibers: dict = {}
    for row in uniq.tolist():
        fibers.setdefault(tuple(row[c] for c in cols), []).append(tuple(row))
    return ExtensionFan(tuple(sub_cells), tuple(full_cells), fibers, eta.alphabet.symbols)


def extension_fan(eta: Configuration, s1, s2) -> ExtensionFan:
    p1 = s1.points if isinstance(s1, ConvexLatticeSet) else frozenset(Point(*p) for p in s1)
    p2 = s2.points if isinstance(s2, ConvexLatticeSet) else frozenset(Point(*p) for p in s2)
    if not p1 < p2:
        raise ValueError("S1 is not a proper subset of S2")
    return _fan(eta, p1, p2)


def is_generated(eta: Configuration, s, x) -> bool:
    """Every eta-coloring of S minus x extends uniquely to S."""
    x = Point(*x)
    pts = s.points if isinstance(s, ConvexLatticeSet) else frozenset(Point(*p) for p in s)
    if x not in pts:
        raise ValueError(f"{tuple(x)} is not in S")
    if len(pts) == 1:
        # the empty coloring extends uniquely iff only one symbol occurs
        return len(_unique_rows(sample_rows(eta, pts)[1])) == 1
    fan = _fan(eta, pts - {x}, pts)
    return all(len(v) == 1 for v in fan.fibers.values())


@dataclass(frozen=True)
class StepResult:
    generated: bool
    d_before: int
    d_after: int

    @property
    def holds(self) -> bool:
        if self.generated:
            return self.d_after == self.d_before + 1
        return self.d_after <= self.d_before


def discrepancy_step(eta: Configuration, s: ConvexLatticeSet, x, strict: bool = True) -> StepResult:
    """Remove a boundary vertex and compare discrepancies."""
    x = Point(*x)
    if x not in s.vertices:
        raise ValueError(f"not a boundary vertex: {tuple(x)}")
    if len(s) == 1:
        raise ValueError("cannot remove the only point of S")
    rest = s.points - {x}
    fan = _fan(eta, rest, s.points)
    generated = all(len(v) == 1 for v in fan.fibers.values())
    res = StepResult(generated, fan.total - len(s), len(fan.fibers) - len(rest))
    if strict and not res.holds:
        raise LemmaViolation("vertex removal discrepancy lemma failed",
                             {"S": [list(p) for p in s.sorted_points], "x": list(x),
                              "generated": generated, "D_before": res.d_before, "D_after": res.d_after})
    return res


@dataclass(frozen=True)
class EdgeBoundResult:
    d_without: int
    d_full: int
    non_unique_count: int
    edge_points: int

    @property
    def applicable(self) -> bool:
        return self.d_without > self.d_full

    @property
    def bound(self) -> int:
        return self.edge_points - 1

    @property
    def holds(self) -> bool:
        return not self.applicable or self.non_unique_count <= self.bound


def edge_cells(s: ConvexLatticeSet, w: Edge) -> frozenset:
    return frozenset(w.points()) & s.points


def verify_edge_bound(eta: Configuration, s: ConvexLatticeSet, w: Edge, strict: bool = True) -> EdgeBoundResult:
    """D(S minus w) against D(S), and the count of non-uniquely extending colorings."""
    if w not in s.edges:
        raise ValueError("w is not an edge of S")
    on_edge = edge_cells(s, w)
    rest = s.points - on_edge
    if not rest:
        raise ValueError("S minus w is empty")
    fan = _fan(eta, rest, s.points)
    res = EdgeBoundResult(len(fan.fibers) - len(rest), fan.total - len(s), len(fan.non_unique), len(on_edge))
    if strict and not res.holds:
        raise LemmaViolation("non-unique extension bound failed",
                             {"S": [list(p) for p in s.sorted_points], "w": [list(w.start), list(w.end)],
                              "D_without": res.d_without, "D": res.d_full,
                              "non_unique": res.non_unique_count})
    return res


def chain_discrepancy(eta: Configuration, s: ConvexLatticeSet, chain: Iterable, strict: bool = True) -> list[int]:
    """D along successive removals; the final value is at most D(S) + j."""
    chain = [Point(*p) for p in chain]
    current = set(s.points)
    sets = [frozenset(current)]
    for step, p in enumerate(chain, 1):
        if p not in current:
            raise ValueError(f"step {step}: {tuple(p)} is not in the current set")
        current.discard(p)
        if not current:
            raise ValueError(f"step {step}: removal leaves the empty set")
        if not ConvexLatticeSet(frozenset(current)).is_convex():
            raise ValueError(f"step {step}: removing {tuple(p)} leaves a non-convex set")
        sets.append(frozenset(current))
    ds = [discrepancy(eta, t, anchor=s.points) for t in sets]
    if strict and ds[-1] > ds[0] + len(chain):
        raise LemmaViolation("chain discrepancy bound failed",
                             {"S": [list(p) for p in s.sorted_points], "chain": [list(p) for p in chain], "D": ds})
    return ds


# ------------------------------------------------------------ generating sets

@dataclass
class GeneratingSetResult:
    set: ConvexLatticeSet
    mode: str
    discrepancy: int
    minimality_certified: bool
    subsets_checked: int = 0

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.set.sorted_points],
            "edges": [list(e.direction) for e in self.set.edges],
            "D": self.discrepancy,
            "mode": self.mode,
            "minimality_certified": self.minimality_certified,
        }


def _set_key(points: frozenset) -> tuple:
    return (len(points), tuple(sorted((p.y, p.x) for p in points)))


def convex_subsets(seed: ConvexLatticeSet) -> list[frozenset]:
    """Every nonempty convex subset of ``seed`` (all reachable by vertex removals)."""
    return list(_convex_subsets(seed))


@lru_cache(maxsize=32)
def _convex_subsets(seed: ConvexLatticeSet) -> tuple[frozenset, ...]:
    seen = {seed.points}
    stack = [seed]
    while stack:
        s = stack.pop()
        if len(s) == 1:
            continue
        for v in s.vertices:
            t = s.points - {v}
            if t not in seen:
                seen.add(t)
                stack.append(ConvexLatticeSet(t))
    return tuple(sorted(seen, key=_set_key))


def _subset_discrepancy(eta: Configuration, seed: ConvexLatticeSet):
    """D on subsets of ``seed`` from a single scan of its translates."""
    cells, rows = sample_rows(eta, seed.points)
    index = {p: i for i, p in enumerate(cells)}

    def d(t) -> int:
        return len(_unique_rows(rows[:, [index[p] for p in _ordered(t)]])) - len(t)
    return d


def _greedy(eta: Configuration, seed: ConvexLatticeSet) -> ConvexLatticeSet:
    s = seed
    while len(s) > 1:
        for v in sorted(s.vertices, key=row_major):
            t = s.points - {v}
            if discrepancy(eta, t) <= 0:
                s = ConvexLatticeSet(t)
                break
        else:
            break
    return s


def find_generating_set(eta: Configuration, n: int, k: int, mode: str = "exhaustive",
                        budget: int = 24):
    """A convex subset of R_{n,k} with D <= 0 all of whose vertices are generated.

    ``exhaustive`` enumerates every convex subset of the rectangle (when the
    rectangle has at most ``budget`` cells) and returns a minimum-size set with
    D <= 0, ties broken by row-major point order.  ``greedy`` removes the
    row-major smallest removable vertex until none keeps D <= 0.
    """
    if not eta.exhaustive:
        raise RequiresExactCounts("requires exhaustive counts")
    if len(eta.alphabet) < 2:
        raise ValueError("alphabet must have at least two symbols")
    if mode not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown mode {mode!r}")
    seed = rectangle(n, k)
    if discrepancy(eta, seed.points) > 0:
        return NotFound("hypothesis fails: D(R_{n,k}) > 0")
    if mode == "greedy" or len(seed) > budget:
        s = _greedy(eta, seed)
        return GeneratingSetResult(s, "greedy", discrepancy(eta, s.points), False)
    subsets = _convex_subsets(seed)
    d = _subset_discrepancy(eta, seed)
    # sorted by size then row-major, so the first hit is the answer
    checked = 0
    for best in subsets:
        checked += 1
        d_best = d(best)
        if d_best <= 0:
            break
    # every convex proper subset must sit strictly above D(best)
    proper = [t for t in subsets if t < best]
    certified = all(d(t) >= d_best + 1 for t in proper)
    return GeneratingSetResult(ConvexLatticeSet(best), "exhaustive", d_best, certified, checked + len(proper))


def is_generating_set(eta: Configuration, s: ConvexLatticeSet) -> bool:
    return all(is_generated(eta, s, v) for v in s.vertices) if len(s) > 1 else True
