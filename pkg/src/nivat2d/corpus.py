"""Built-in test configurations and word generators."""
from __future__ import annotations

import numpy as np

from .configuration import Periodic, Substitution, WordLift


def fibonacci_word(length: int) -> str:
    """Prefix of the fixed point of 0 -> 01, 1 -> 0."""
    w = "0"
    while len(w) < length:
        w = "".join("01" if c == "0" else "0" for c in w)
    return w[:length]


def thue_morse_word(length: int) -> str:
    """Prefix of the fixed point of 0 -> 01, 1 -> 10."""
    return "".join(str(bin(i).count("1") % 2) for i in range(length))


TM2D_RULE = {"0": [["0", "1"], ["1", "0"]], "1": [["1", "0"], ["0", "1"]]}
SUBSTITUTION_RULES = {"tm2d": TM2D_RULE}


def constant(alphabet=("0", "1")) -> Periodic:
    return Periodic(alphabet, ((0,),))


def checkerboard(alphabet=("0", "1")) -> Periodic:
    return Periodic(alphabet, ((0, 1), (1, 0)))


def stripes(period: int = 2, vertical: bool = True) -> Periodic:
    """eta(x, y) = x mod period (vertical stripes) or y mod period."""
    alphabet = tuple(str(i) for i in range(period))
    if vertical:
        return Periodic(alphabet, (tuple(range(period)),))
    return Periodic(alphabet, tuple((i,) for i in range(period)))


def fibonacci_lift(length: int = 200, rule: str = "x") -> WordLift:
    return WordLift.from_rule(("0", "1"), fibonacci_word(length), rule)


def thue_morse_lift(length: int = 200, rule: str = "x+y") -> WordLift:
    return WordLift.from_rule(("0", "1"), thue_morse_word(length), rule)


def tm2d(iterations: int) -> Substitution:
    return Substitution.generate(("0", "1"), TM2D_RULE, "0", iterations)


def random_periodic(rng: np.random.Generator, max_width: int, max_height: int, symbols: int) -> Periodic:
    w = int(rng.integers(1, max_width + 1))
    h = int(rng.integers(1, max_height + 1))
    grid = rng.integers(0, symbols, size=(h, w))
    return Periodic(tuple(str(i) for i in range(symbols)), tuple(map(tuple, grid.tolist())))


def all_periodic(width: int, height: int, symbols: int = 2):
    """Every periodic configuration with the given fundamental domain size."""
    alphabet = tuple(str(i) for i in range(symbols))
    cells = width * height
    for code in range(symbols ** cells):
        digits = []
        for _ in range(cells):
            code, r = divmod(code, symbols)
            digits.append(r)
        yield Periodic(alphabet, tuple(tuple(digits[y * width:(y + 1) * width]) for y in range(height)))
