"""Pattern languages W(S), complexity P(S) and discrepancy D(S) = P(S) - |S|."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .configuration import Configuration, Pattern
from .geometry import ConvexLatticeSet, Point, rectangle, row_major


class ShapeExceedsDomain(ValueError):
    pass


def _ordered(cells: Iterable) -> list[Point]:
    return sorted({Point(*c) for c in cells}, key=row_major)


def _row_keys(rows: np.ndarray) -> np.ndarray:
    """Injective per-row keys: packed integers when they fit, raw bytes otherwise."""
    base = int(rows.max()) + 1 if rows.size else 1
    k = rows.shape[1]
    if base ** k < 2 ** 62:
        weights = np.array([base ** i for i in range(k)], dtype=np.int64)
        return rows.astype(np.int64) @ weights
    contiguous = np.ascontiguousarray(rows)
    return contiguous.view(np.dtype((np.void, contiguous.dtype.itemsize * k))).ravel()


def _dedup(rows: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return rows
    if rows.shape[1] == 0:
        return rows[:1]
    _, idx = np.unique(_row_keys(rows), return_index=True)
    out = rows[idx]
    # canonical order: lexicographic on the code rows
    return out[np.lexsort(out.T[::-1])]


def _unique_rows(rows: np.ndarray, chunks: int = 1, workers: int = 1) -> np.ndarray:
    if chunks <= 1 or len(rows) == 0:
        return _dedup(rows)
    parts = np.array_split(rows, chunks)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            uniq = list(pool.map(_dedup, parts))
    else:
        uniq = [_dedup(p) for p in parts]
    return _dedup(np.concatenate(uniq))


def sample_rows(eta: Configuration, cells: Iterable, anchor: Iterable | None = None) -> tuple[list[Point], np.ndarray]:
    """Rows of codes of ``cells`` over the translates admissible for ``anchor``.

    ``anchor`` defaults to ``cells``; it must contain ``cells``.  Using a common
    anchor for nested shapes keeps the restriction map between their
    languages surjective on partial configurations.
    """
    cells = _ordered(cells)
    if anchor is None:
        full = cells
    else:
        full = _ordered(anchor)
        missing = set(cells) - set(full)
        if missing:
            raise ValueError(f"cells {sorted(missing)} are not in the anchor shape")
    rows = eta.sample(full)
    if rows.size:
        rows = rows[(rows >= 0).all(axis=1)]
    if len(rows) == 0:
        raise ShapeExceedsDomain("shape exceeds domain: no admissible translate")
    if full is not cells:
        index = {p: i for i, p in enumerate(full)}
        rows = rows[:, [index[p] for p in cells]]
    return cells, rows


def language(eta: Configuration, cells: Iterable, anchor: Iterable | None = None,
             chunks: int = 1, workers: int = 1) -> tuple[list[Point], np.ndarray, int]:
    """(ordered cells, distinct code rows, number of translates scanned)."""
    cells, rows = sample_rows(eta, cells, anchor)
    return cells, _unique_rows(rows, chunks, workers), len(rows)


def count(eta: Configuration, cells: Iterable, anchor: Iterable | None = None) -> int:
    return len(language(eta, cells, anchor)[1])


def discrepancy(eta: Configuration, cells: Iterable, anchor: Iterable | None = None) -> int:
    cells = _ordered(cells)
    return count(eta, cells, anchor) - len(cells)


@dataclass(frozen=True)
class PatternSet:
    shape: ConvexLatticeSet
    patterns: frozenset
    translate_count: int
    exhaustive: bool

    def __len__(self):
        return len(self.patterns)

    def sorted(self) -> list[Pattern]:
        return sorted(self.patterns, key=lambda p: p.colors)


def words(eta: Configuration, shape: ConvexLatticeSet, chunks: int = 1, workers: int = 1) -> PatternSet:
    """W_eta(S): the distinct S-patterns over all admissible translates."""
    _, uniq, t = language(eta, shape.sorted_points, chunks=chunks, workers=workers)
    norm = shape.normalized()
    syms = eta.alphabet.symbols
    pats = frozenset(Pattern(norm, tuple(syms[c] for c in row)) for row in uniq.tolist())
    return PatternSet(norm, pats, t, eta.exhaustive)


@dataclass(frozen=True)
class ComplexityReport:
    shape: ConvexLatticeSet
    P: int
    size: int
    exhaustive: bool
    translate_count: int
    n: int | None = None
    k: int | None = None

    @property
    def D(self) -> int:
        return self.P - self.size

    @property
    def descriptor(self) -> str:
        if self.n is not None:
            return f"R_{self.n},{self.k}"
        return f"S[{len(self.shape)} cells]"

    @property
    def lower_bound(self) -> bool:
        return not self.exhaustive


def complexity(eta: Configuration, shape: ConvexLatticeSet, chunks: int = 1, workers: int = 1) -> ComplexityReport:
    _, uniq, t = language(eta, shape.sorted_points, chunks=chunks, workers=workers)
    return ComplexityReport(shape, len(uniq), len(shape), eta.exhaustive, t)


def rect_complexity(eta: Configuration, n: int, k: int, chunks: int = 1, workers: int = 1) -> ComplexityReport:
    r = complexity(eta, rectangle(n, k), chunks, workers)
    return ComplexityReport(r.shape, r.P, r.size, r.exhaustive, r.translate_count, n, k)


@dataclass(frozen=True)
class ProfileRow:
    n: int
    k: int
    P: int
    exhaustive: bool

    @property
    def bound(self) -> int:
        return self.n * self.k

    @property
    def D(self) -> int:
        return self.P - self.n * self.k

    @property
    def within_bound(self) -> bool:
        return self.P <= self.bound

    def csv_row(self) -> list:
        return [self.n, self.k, self.P, self.bound, self.D, str(self.exhaustive).lower()]


PROFILE_HEADER = ["n", "k", "P", "bound", "D", "exhaustive"]


def complexity_profile(eta: Configuration, n_max: int, k: int, n_min: int = 1) -> list[ProfileRow]:
    """Rows n = n_min..n_max of P_eta(R_{n,k}) against the bound n*k."""
    return [ProfileRow(n, k, rect_complexity(eta, n, k).P, eta.exhaustive)
            for n in range(n_min, n_max + 1)]


def first_within_bound(eta: Configuration, k: int, n_max: int, n_min: int = 1) -> int | None:
    """Smallest n in range with P(R_{n,k}) <= n*k, or None."""
    for n in range(n_min, n_max + 1):
        try:
            if rect_complexity(eta, n, k).P <= n * k:
                return n
        except ShapeExceedsDomain:
            return None
    return None
