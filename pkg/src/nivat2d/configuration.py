"""Configurations eta: Z^2 -> A and their finite pattern languages.

Every source exposes :meth:`Configuration.sample`, which evaluates a list of
cells over a set of translates that represents every translate class of the
source.  Pattern counting is built on top of it.  Partial sources (windows,
word lifts, substitutions) only report translates whose cells are all
defined; cells outside the domain come back as ``-1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .geometry import ConvexLatticeSet, Point

UNDEFINED = -1


class UndefinedCell(ValueError):
    pass


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        syms = tuple(str(s) for s in self.symbols)
        if not syms:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(syms)) != len(syms):
            raise ValueError(f"duplicate symbols in alphabet {syms}")
        object.__setattr__(self, "symbols", syms)

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    @cached_property
    def _index(self) -> dict:
        return {s: i for i, s in enumerate(self.symbols)}

    def code(self, symbol) -> int:
        try:
            return self._index[str(symbol)]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} not in alphabet {self.symbols}") from None

    def encode(self, symbols: Iterable) -> tuple[int, ...]:
        return tuple(self.code(s) for s in symbols)


def _as_alphabet(a) -> Alphabet:
    return a if isinstance(a, Alphabet) else Alphabet(tuple(a))


def _cells_array(cells) -> np.ndarray:
    arr = np.asarray([tuple(c) for c in cells], dtype=np.int64).reshape(-1, 2)
    return arr


class Configuration:
    """Base class.  Subclasses are immutable value objects."""

    alphabet: Alphabet
    exhaustive = False
    kind = "abstract"

    def code_at(self, v) -> int:
        raise NotImplementedError

    def is_defined(self, v) -> bool:
        return self.code_at(v) != UNDEFINED

    def evaluate(self, v) -> str:
        c = self.code_at(v)
        if c == UNDEFINED:
            raise UndefinedCell(f"undefined cell {tuple(v)}")
        return self.alphabet.symbols[c]

    __call__ = evaluate

    def sample(self, cells) -> np.ndarray:
        """Codes of ``cells + u`` for representative translates u, shape (T, k)."""
        raise NotImplementedError

    def domain_cells(self) -> frozenset | None:
        """Explicit finite domain, or None for total or infinite domains."""
        return None


def _roll_index(grid: np.ndarray, cells: np.ndarray, anchors: np.ndarray) -> np.ndarray:
    h, w = grid.shape
    xs = (cells[None, :, 0] + anchors[:, None, 0]) % w
    ys = (cells[None, :, 1] + anchors[:, None, 1]) % h
    return grid[ys, xs]


def _grid_tuple(rows) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(c) for c in r) for r in rows)
    if not out or not out[0]:
        raise ValueError("grid must be nonempty")
    if any(len(r) != len(out[0]) for r in out):
        raise ValueError("grid rows have unequal lengths")
    return out


@dataclass(frozen=True)
class Periodic(Configuration):
    """eta(x, y) = rows[y mod h][x mod w]; periods (w, 0) and (0, h)."""

    alphabet: Alphabet
    rows: tuple
    exhaustive = True
    kind = "periodic"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _as_alphabet(self.alphabet))
        object.__setattr__(self, "rows", _grid_tuple(self.rows))
        if max(max(r) for r in self.rows) >= len(self.alphabet) or min(min(r) for r in self.rows) < 0:
            raise ValueError("grid code outside alphabet")

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)

    @cached_property
    def grid(self) -> np.ndarray:
        g = np.array(self.rows, dtype=np.int16)
        g.setflags(write=False)
        return g

    def code_at(self, v) -> int:
        return self.rows[v[1] % self.height][v[0] % self.width]

    def sample(self, cells) -> np.ndarray:
        cells = _cells_array(cells)
        ax, ay = np.meshgrid(np.arange(self.width), np.arange(self.height))
        anchors = np.stack([ax.ravel(), ay.ravel()], axis=1)
        return _roll_index(self.grid, cells, anchors)


@dataclass(frozen=True)
class Window(Configuration):
    """eta defined on [x0, x0+W) x [y0, y0+H) only."""

    alphabet: Alphabet
    rows: tuple
    origin: tuple = (0, 0)
    kind = "window"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _as_alphabet(self.alphabet))
        object.__setattr__(self, "rows", _grid_tuple(self.rows))
        object.__setattr__(self, "origin", Point(*self.origin))

    @property
    def width(self) -> int:
        return len(self.rows[0])

    @property
    def height(self) -> int:
        return len(self.rows)

    @cached_property
    def grid(self) -> np.ndarray:
        g = np.array(self.rows, dtype=np.int16)
        g.setflags(write=False)
        return g

    def code_at(self, v) -> int:
        x, y = v[0] - self.origin.x, v[1] - self.origin.y
        if 0 <= x < self.width and 0 <= y < self.height:
            return self.rows[y][x]
        return UNDEFINED

    def domain_cells(self):
        x0, y0 = self.origin
        return frozenset(Point(x0 + x, y0 + y) for y in range(self.height) for x in range(self.width))

    def sample(self, cells) -> np.ndarray:
        cells = _cells_array(cells)
        if len(cells) == 0:
            return np.zeros((0, 0), dtype=np.int16)
        lo = cells.min(axis=0)
        hi = cells.max(axis=0)
        nx = self.width - (hi[0] - lo[0])
        ny = self.height - (hi[1] - lo[1])
        if nx <= 0 or ny <= 0:
            return np.zeros((0, len(cells)), dtype=np.int16)
        rel = cells - lo
        # anchors index the placement of the bounding box inside the grid
        cols = [self.grid[ry:ry + ny, rx:rx + nx].ravel() for rx, ry in rel]
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class Substitution(Window):
    """Window obtained by iterating a block substitution from a seed symbol."""

    blocks: tuple = ()
    seed: int = 0
    iterations: int = 0
    kind = "substitution"

    @classmethod
    def generate(cls, alphabet, rule: dict, seed, iterations: int) -> "Substitution":
        alphabet = _as_alphabet(alphabet)
        blocks = []
        for sym in alphabet.symbols:
            if sym not in {str(k) for k in rule}:
                raise ValueError(f"rule missing a block for symbol {sym!r}")
            block = {str(k): v for k, v in rule.items()}[sym]
            blocks.append(tuple(alphabet.encode(r) for r in block))
        return cls.from_blocks(alphabet, tuple(blocks), alphabet.code(seed), iterations)

    @classmethod
    def from_blocks(cls, alphabet, blocks, seed: int, iterations: int) -> "Substitution":
        alphabet = _as_alphabet(alphabet)
        blocks = tuple(_grid_tuple(b) for b in blocks)
        if len(blocks) != len(alphabet):
            raise ValueError("rule must give one block per symbol")
        m = len(blocks[0])
        if m < 2 or any(len(b) != m or len(b[0]) != m for b in blocks):
            raise ValueError("blocks must all be m x m with m >= 2")
        if iterations < 0:
            raise ValueError("iterations must be >= 0")
        grid = np.array([[seed]], dtype=np.int16)
        stack = np.array(blocks, dtype=np.int16)  # (symbols, m, m)
        for _ in range(iterations):
            big = stack[grid]  # (h, w, m, m)
            h, w = grid.shape
            grid = big.transpose(0, 2, 1, 3).reshape(h * m, w * m)
        return cls(alphabet, tuple(map(tuple, grid.tolist())), (0, 0), blocks, seed, iterations)

    def enlarge(self) -> "Substitution":
        return Substitution.from_blocks(self.alphabet, self.blocks, self.seed, self.iterations + 1)


LIFT_RULES = {"x": (1, 0), "y": (0, 1), "x+y": (1, 1)}


@dataclass(frozen=True)
class WordLift(Configuration):
    """eta(v) = word[a*v.x + b*v.y], defined where 0 <= a*x + b*y < len(word)."""

    alphabet: Alphabet
    word: tuple
    form: tuple = (1, 0)
    kind = "wordlift"

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _as_alphabet(self.alphabet))
        object.__setattr__(self, "word", tuple(int(c) for c in self.word))
        if not self.word:
            raise ValueError("word must be nonempty")
        object.__setattr__(self, "form", (int(self.form[0]), int(self.form[1])))
        if self.form == (0, 0):
            raise ValueError("lift form must be nonzero")

    @classmethod
    def from_rule(cls, alphabet, word, rule: str = "x") -> "WordLift":
        alphabet = _as_alphabet(alphabet)
        if rule not in LIFT_RULES:
            raise ValueError(f"unknown lift rule {rule!r}; expected one of {sorted(LIFT_RULES)}")
        return cls(alphabet, alphabet.encode(word), LIFT_RULES[rule])

    @property
    def rule(self) -> str | None:
        for k, v in LIFT_RULES.items():
            if v == self.form:
                return k
        return None

    @cached_property
    def _word_arr(self) -> np.ndarray:
        return np.array(self.word, dtype=np.int16)

    def code_at(self, v) -> int:
        t = self.form[0] * v[0] + self.form[1] * v[1]
        return self.word[t] if 0 <= t < len(self.word) else UNDEFINED

    def sample(self, cells) -> np.ndarray:
        cells = _cells_array(cells)
        phi = cells @ np.array(self.form, dtype=np.int64)
        lo, hi = int(phi.min()), int(phi.max())
        ts = np.arange(-lo, len(self.word) - hi)
        if len(ts) == 0:
            return np.zeros((0, len(cells)), dtype=np.int16)
        return self._word_arr[ts[:, None] + phi[None, :]]


@dataclass(frozen=True)
class Translated(Configuration):
    """Lazy view of T^u eta: value at x is eta(x + u)."""

    base: Configuration
    shift: tuple
    kind = "translated"

    def __post_init__(self):
        object.__setattr__(self, "shift", Point(*self.shift))

    @property
    def alphabet(self):  # type: ignore[override]
        return self.base.alphabet

    @property
    def exhaustive(self):  # type: ignore[override]
        return self.base.exhaustive

    def code_at(self, v) -> int:
        return self.base.code_at((v[0] + self.shift.x, v[1] + self.shift.y))

    def sample(self, cells) -> np.ndarray:
        # the language is translation invariant
        return self.base.sample(cells)

    def domain_cells(self):
        d = self.base.domain_cells()
        if d is None:
            return None
        return frozenset(Point(p.x - self.shift.x, p.y - self.shift.y) for p in d)


def _mat_inv(m) -> tuple[tuple[int, int], tuple[int, int]]:
    (a, b), (c, d) = m
    det = a * d - b * c
    if abs(det) != 1:
        raise ValueError(f"matrix {m} is not unimodular (det = {det})")
    return ((d * det, -b * det), (-c * det, a * det))


def _mat_vec(m, v) -> tuple[int, int]:
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


@dataclass(frozen=True)
class Transformed(Configuration):
    """eta o M^{-1} for a finite partial eta; domain is M(domain of eta)."""

    base: Configuration
    matrix: tuple
    kind = "transformed"

    @property
    def alphabet(self):  # type: ignore[override]
        return self.base.alphabet

    @cached_property
    def inverse(self):
        return _mat_inv(self.matrix)

    def code_at(self, v) -> int:
        return self.base.code_at(_mat_vec(self.inverse, v))

    @cached_property
    def _domain(self) -> frozenset:
        d = self.base.domain_cells()
        if d is None:
            raise ValueError("transformed view needs a finite base domain")
        return frozenset(Point(*_mat_vec(self.matrix, p)) for p in d)

    def domain_cells(self):
        return self._domain

    @cached_property
    def _dense(self) -> tuple[np.ndarray, int, int]:
        dom = self._domain
        xs = [p.x for p in dom]
        ys = [p.y for p in dom]
        x0, y0 = min(xs), min(ys)
        g = np.full((max(ys) - y0 + 1, max(xs) - x0 + 1), UNDEFINED, dtype=np.int16)
        for p in dom:
            g[p.y - y0, p.x - x0] = self.code_at(p)
        return g, x0, y0

    def sample(self, cells) -> np.ndarray:
        cells = _cells_array(cells)
        g, _, _ = self._dense
        lo = cells.min(axis=0)
        hi = cells.max(axis=0)
        nx = g.shape[1] - (hi[0] - lo[0])
        ny = g.shape[0] - (hi[1] - lo[1])
        if nx <= 0 or ny <= 0:
            return np.zeros((0, len(cells)), dtype=np.int16)
        rel = cells - lo
        cols = [g[ry:ry + ny, rx:rx + nx].ravel() for rx, ry in rel]
        return np.stack(cols, axis=1)


@dataclass(frozen=True)
class Pattern:
    """A coloring of a normalized shape; colors follow row-major cell order."""

    shape: ConvexLatticeSet
    colors: tuple

    def __post_init__(self):
        if len(self.colors) != len(self.shape):
            raise ValueError("pattern colors must cover the shape")

    def as_dict(self) -> dict:
        return dict(zip(self.shape.sorted_points, self.colors))

    def __getitem__(self, p):
        return self.as_dict()[Point(*p)]

    def to_json(self) -> dict:
        return {"cells": [list(p) for p in self.shape.sorted_points], "colors": list(self.colors)}


# ---------------------------------------------------------------- operations

def evaluate(eta: Configuration, v) -> str:
    return eta.evaluate(v)


def translate(eta: Configuration, u) -> Configuration:
    u = Point(*u)
    if isinstance(eta, Periodic):
        w, h = eta.width, eta.height
        rows = tuple(
            tuple(eta.rows[(y + u.y) % h][(x + u.x) % w] for x in range(w)) for y in range(h)
        )
        return Periodic(eta.alphabet, rows)
    if isinstance(eta, Translated):
        return Translated(eta.base, eta.shift + u)
    return Translated(eta, u)


def restrict(eta: Configuration, shape: ConvexLatticeSet, u=(0, 0)) -> Pattern:
    cells = [Point(p.x + u[0], p.y + u[1]) for p in shape.sorted_points]
    codes = [eta.code_at(c) for c in cells]
    bad = [tuple(c) for c, k in zip(cells, codes) if k == UNDEFINED]
    if bad:
        raise UndefinedCell(f"undefined cells {bad}")
    return Pattern(shape.normalized(), tuple(eta.alphabet.symbols[k] for k in codes))


def apply_unimodular(eta: Configuration, m) -> Configuration:
    """The configuration eta o M^{-1}."""
    m = ((int(m[0][0]), int(m[0][1])), (int(m[1][0]), int(m[1][1])))
    inv = _mat_inv(m)
    if m == ((1, 0), (0, 1)):
        return eta
    if isinstance(eta, Periodic):
        w, h = eta.width, eta.height

        def in_lattice(v):
            a, b = _mat_vec(inv, v)
            return a % w == 0 and b % h == 0

        nw = next(a for a in range(1, w * h + 1) if in_lattice((a, 0)))
        nh = next(b for b in range(1, w * h + 1) if in_lattice((0, b)))
        rows = tuple(tuple(eta.code_at(_mat_vec(inv, (x, y))) for x in range(nw)) for y in range(nh))
        return Periodic(eta.alphabet, rows)
    if isinstance(eta, WordLift):
        a, b = eta.form
        form = (a * inv[0][0] + b * inv[1][0], a * inv[0][1] + b * inv[1][1])
        return WordLift(eta.alphabet, eta.word, form)
    if isinstance(eta, Transformed):
        (a, b), (c, d) = m
        (e, f), (g, h) = eta.matrix
        prod = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return apply_unimodular(eta.base, prod)
    return Transformed(eta, m)


def generate_substitution(alphabet, rule: dict, seed, iterations: int) -> Substitution:
    return Substitution.generate(alphabet, rule, seed, iterations)


def orbit(eta: Configuration) -> list[Periodic]:
    """The distinct translates of a periodic configuration (equal to X_eta)."""
    if not isinstance(eta, Periodic):
        raise ValueError("orbit closure not finitely computable for a non-periodic source")
    seen = {}
    for y in range(eta.height):
        for x in range(eta.width):
            t = translate(eta, (x, y))
            seen.setdefault(t.rows, t)
    return list(seen.values())
