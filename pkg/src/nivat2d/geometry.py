"""Exact geometry of finite convex subsets of Z^2.

Everything here is integer arithmetic: hulls use cross-product orientation
tests, lengths are compared squared, and distances to lines are compared
through the integer offset ``p*y - q*x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, NamedTuple


class Point(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return Point(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return Point(self.x - other[0], self.y - other[1])


def cross(o, a, b) -> int:
    """Twice the signed area of the triangle (o, a, b); > 0 for a left turn."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def primitive(v) -> tuple[int, int]:
    g = gcd(v[0], v[1])
    if g == 0:
        raise ValueError("zero vector has no direction")
    return (v[0] // g, v[1] // g)


def row_major(p) -> tuple[int, int]:
    """Sort key: by y, then by x."""
    return (p[1], p[0])


def _hull_vertices(points: list[Point]) -> list[Point]:
    # Andrew's monotone chain; collinear points are dropped.
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _segment_points(a: Point, b: Point) -> list[Point]:
    dx, dy = b.x - a.x, b.y - a.y
    g = gcd(dx, dy)
    if g == 0:
        return [a]
    sx, sy = dx // g, dy // g
    return [Point(a.x + i * sx, a.y + i * sy) for i in range(g + 1)]


def _lattice_fill(vertices: list[Point]) -> frozenset[Point]:
    """All lattice points of conv(vertices); vertices in ccw order."""
    if len(vertices) == 1:
        return frozenset(vertices)
    if len(vertices) == 2:
        return frozenset(_segment_points(*vertices))
    xs = [v.x for v in vertices]
    ys = [v.y for v in vertices]
    m = len(vertices)
    out = []
    for y in range(min(ys), max(ys) + 1):
        for x in range(min(xs), max(xs) + 1):
            p = (x, y)
            if all(cross(vertices[i], vertices[(i + 1) % m], p) >= 0 for i in range(m)):
                out.append(Point(x, y))
    return frozenset(out)


def _collinear_ends(pts: Iterable[Point]) -> list[Point]:
    s = sorted(pts)
    return [s[0]] if len(s) == 1 else [s[0], s[-1]]


class Edge(NamedTuple):
    start: Point
    end: Point
    direction: tuple[int, int]
    lattice_points: int  # |w ∩ Z^2|, endpoints included

    def points(self) -> list[Point]:
        return _segment_points(self.start, self.end)

    @property
    def squared_length(self) -> int:
        return (self.end.x - self.start.x) ** 2 + (self.end.y - self.start.y) ** 2


@dataclass(frozen=True, eq=False)
class ConvexLatticeSet:
    """A finite set S of lattice points with S = conv(S) ∩ Z^2.

    Construct through :func:`convex_hull` (completes any point set) or
    :meth:`from_points` (rejects non-convex input).
    """

    points: frozenset

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty point set")
        object.__setattr__(self, "points", frozenset(Point(*p) for p in self.points))

    @classmethod
    def from_points(cls, points: Iterable, strict: bool = True) -> "ConvexLatticeSet":
        pts = frozenset(Point(*p) for p in points)
        if not pts:
            raise ValueError("empty point set")
        filled = _lattice_fill(_hull_vertices(list(pts)))
        if filled != pts:
            if strict:
                missing = sorted(filled - pts, key=row_major)
                raise ValueError(f"point set is not convex; missing {[tuple(p) for p in missing[:5]]}")
            pts = filled
        return cls(pts)

    def __eq__(self, other):
        if not isinstance(other, ConvexLatticeSet):
            return NotImplemented
        return self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return Point(*p) in self.points

    def __iter__(self):
        return iter(self.sorted_points)

    def __repr__(self):
        return f"ConvexLatticeSet({[tuple(p) for p in self.sorted_points]})"

    @cached_property
    def sorted_points(self) -> tuple[Point, ...]:
        return tuple(sorted(self.points, key=row_major))

    @cached_property
    def _hull(self) -> list[Point]:
        return _hull_vertices(list(self.points))

    @cached_property
    def has_area(self) -> bool:
        return len(self._hull) >= 3

    @cached_property
    def vertices(self) -> tuple[Point, ...]:
        """V(S), counterclockwise from the row-major smallest vertex."""
        if not self.has_area:
            return tuple(_collinear_ends(self.points))
        hull = self._hull
        i = hull.index(min(hull, key=row_major))
        return tuple(hull[i:] + hull[:i])

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        """E(S) in positive orientation; empty when conv(S) has zero area."""
        if not self.has_area:
            return ()
        vs = self.vertices
        out = []
        for i, a in enumerate(vs):
            b = vs[(i + 1) % len(vs)]
            d = (b.x - a.x, b.y - a.y)
            out.append(Edge(a, b, primitive(d), gcd(d[0], d[1]) + 1))
        return tuple(out)

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)

    def translate(self, v) -> "ConvexLatticeSet":
        return ConvexLatticeSet(frozenset(Point(p.x + v[0], p.y + v[1]) for p in self.points))

    def normalized(self) -> "ConvexLatticeSet":
        x0, y0, _, _ = self.bbox
        return self.translate((-x0, -y0))

    def transform(self, m) -> "ConvexLatticeSet":
        """Image under the integer matrix ``m`` (rows), assumed unimodular."""
        (a, b), (c, d) = m
        return ConvexLatticeSet(frozenset(Point(a * p.x + b * p.y, c * p.x + d * p.y) for p in self.points))

    def is_convex(self) -> bool:
        return _lattice_fill(_hull_vertices(list(self.points))) == self.points

    def without(self, pts: Iterable) -> frozenset:
        return self.points - {Point(*p) for p in pts}

    def edge_parallel_to(self, direction) -> Edge | None:
        d = primitive(direction)
        for e in self.edges:
            if e.direction == d:
                return e
        return None


def convex_hull(points: Iterable) -> ConvexLatticeSet:
    """conv(points) ∩ Z^2."""
    pts = [Point(*p) for p in points]
    if not pts:
        raise ValueError("empty point set")
    return ConvexLatticeSet(_lattice_fill(_hull_vertices(pts)))


def rectangle(n: int, k: int) -> ConvexLatticeSet:
    """R_{n,k} = [0, n-1] x [0, k-1]."""
    if n < 1 or k < 1:
        raise ValueError("rectangle sides must be positive")
    return ConvexLatticeSet(frozenset(Point(x, y) for x in range(n) for y in range(k)))


def boundary_edges(s: ConvexLatticeSet) -> list[Edge]:
    return list(s.edges)


def remove_vertex(s: ConvexLatticeSet, x) -> ConvexLatticeSet:
    x = Point(*x)
    if x not in s.vertices:
        raise ValueError(f"not a boundary vertex: {tuple(x)}")
    if len(s) == 1:
        raise ValueError("removing the only point leaves the empty set")
    return ConvexLatticeSet(s.points - {x})


@dataclass(frozen=True)
class DirectedLine:
    direction: tuple[int, int]
    anchor: Point = Point(0, 0)

    def __post_init__(self):
        p, q = self.direction
        if (p, q) == (0, 0) or gcd(p, q) != 1:
            raise ValueError(f"direction {self.direction} is not primitive")
        object.__setattr__(self, "direction", (int(p), int(q)))
        object.__setattr__(self, "anchor", Point(*self.anchor))

    def antiparallel(self) -> "DirectedLine":
        p, q = self.direction
        return DirectedLine((-p, -q), self.anchor)

    def offset(self, u) -> int:
        """Integer offset p*y - q*x of u relative to the anchor.

        Positive offsets lie to the left of the line, i.e. inside the
        half-plane bounded by the positively oriented line.
        """
        p, q = self.direction
        return p * (u[1] - self.anchor.y) - q * (u[0] - self.anchor.x)

    def along(self, u) -> int:
        """Dot product of u - anchor with the direction (scaled projection)."""
        p, q = self.direction
        return p * (u[0] - self.anchor.x) + q * (u[1] - self.anchor.y)

    @property
    def norm2(self) -> int:
        p, q = self.direction
        return p * p + q * q

    def unit_offset_vector(self) -> tuple[int, int]:
        """A lattice vector e with offset(anchor + e) == 1."""
        p, q = self.direction
        # p*ey - q*ex = 1
        g, s, t = _ext_gcd(p, -q)
        assert g == 1
        return (t, s)

    @property
    def undirected(self) -> tuple[int, int]:
        """Canonical representative of the undirected line's direction."""
        p, q = self.direction
        return (p, q) if p > 0 or (p == 0 and q > 0) else (-p, -q)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def line_lattice_count(s: ConvexLatticeSet, line: DirectedLine) -> list[tuple[int, int]]:
    """(offset, |translate ∩ S|) for every translate of the line meeting S."""
    counts: dict[int, int] = {}
    for p in s.points:
        c = line.offset(p)
        counts[c] = counts.get(c, 0) + 1
    return sorted(counts.items())


def is_enveloped(t: ConvexLatticeSet, s: ConvexLatticeSet) -> bool:
    """Every edge of T is parallel to an edge of S and at least as long."""
    if not t.is_convex():
        return False
    by_dir = {e.direction: e.squared_length for e in s.edges}
    for e in t.edges:
        if e.direction not in by_dir or e.squared_length < by_dir[e.direction]:
            return False
    return True


def parse_shape(text: str, strict: bool = True) -> ConvexLatticeSet:
    """Parse the ``x y`` per line shape format ('#' starts a comment)."""
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ValueError(f"line {lineno}: expected 'x y', got {line!r}")
        try:
            pts.append(Point(int(toks[0]), int(toks[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer token in {line!r}") from None
    if not pts:
        raise ValueError("empty point set")
    return ConvexLatticeSet.from_points(pts, strict=strict)


def format_shape(s: ConvexLatticeSet) -> str:
    return "".join(f"{p.x} {p.y}\n" for p in s.sorted_points)
