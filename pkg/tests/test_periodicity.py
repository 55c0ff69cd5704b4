from itertools import product
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nivat2d.complexity import rect_complexity
from nivat2d.configuration import UndefinedCell, restrict
from nivat2d.corpus import checkerboard, constant, fibonacci_lift, fibonacci_word, stripes
from nivat2d.expansivity import find_balanced_set, is_balanced
from nivat2d.geometry import rectangle
from nivat2d.periodicity import (PeriodLattice, eventual_period, is_periodic_on_region, minimal_cyclic_period,
                                 morse_hedlund_1d, period_lattice, periodic_strip_propagation_check,
                                 region_period_lattice, strip_period_bound_check)

from conftest import periodic_configs


def box(w, h):
    return [(x, y) for y in range(h) for x in range(w)]


def test_region_examples():
    assert is_periodic_on_region(checkerboard(), box(5, 5), (1, 1)).holds
    r = is_periodic_on_region(checkerboard(), box(3, 3), (1, 0))
    assert not r.holds and r.violation == (0, 0)
    assert is_periodic_on_region(fibonacci_lift(200), box(20, 3), (0, 1)).holds
    pat = restrict(checkerboard(), rectangle(4, 4))
    assert is_periodic_on_region(pat, box(4, 4), (2, 0)).holds
    with pytest.raises(UndefinedCell):
        is_periodic_on_region(pat, box(5, 4), (1, 1))
    with pytest.raises(UndefinedCell):
        is_periodic_on_region(fibonacci_lift(10), box(11, 1), (1, 0))


def test_lattice_examples():
    assert period_lattice(constant()).generators == ((1, 0), (0, 1))
    lat = period_lattice(checkerboard())
    assert lat.contains((1, 1)) and lat.contains((1, -1)) and not lat.contains((1, 0))
    assert lat.generators == ((1, 1), (0, 2))
    assert period_lattice(stripes(3)).generators == ((3, 0), (0, 1))
    with pytest.raises(ValueError):
        period_lattice(fibonacci_lift(20))


def test_region_lattice():
    lat = region_period_lattice(fibonacci_lift(200), box(60, 3), 4)
    assert lat.rank == 1 and lat.generators == ((0, 1),)
    assert region_period_lattice(checkerboard(), box(6, 6), 3).generators == ((1, 1), (0, 2))
    assert region_period_lattice(restrict(checkerboard(), rectangle(1, 1)), box(1, 1), 0).rank == 0


def test_lattice_vector_along():
    lat = period_lattice(stripes(3))
    assert lat.vector_along((1, 0)) == (3, 0)
    assert lat.vector_along((1, 1)) == (3, 3)
    assert PeriodLattice(((0, 1),)).vector_along((1, 0)) is None


def test_morse_hedlund_examples(oracles):
    v = morse_hedlund_1d("01")
    assert v.profile == (2, 2) and v.first_low == 2 and v.period == 2
    v = morse_hedlund_1d("000")
    assert v.profile[0] == 1 and v.first_low == 1 and v.period == 1
    v = morse_hedlund_1d(fibonacci_word(100), "onesided")
    assert list(v.profile) == oracles["fibonacci"]["factors"][:20]
    assert v.first_low is None and v.caveat
    with pytest.raises(ValueError):
        morse_hedlund_1d("01", "twosided")
    with pytest.raises(ValueError):
        morse_hedlund_1d("")


def test_eventual_period():
    assert eventual_period("0111111") == (1, 1)
    assert eventual_period("abcabcab") == (0, 3)
    assert eventual_period("ab") is None
    assert morse_hedlund_1d("1000000000", "onesided", n_max=3).preperiod == 1


def test_morse_hedlund_small_words_exhaustive():
    # the full acceptance sweep runs to length 12; this keeps the unit suite quick
    for L in range(1, 9):
        for bits in product("01", repeat=L):
            w = "".join(bits)
            v = morse_hedlund_1d(w)
            brute = next(p for p in range(1, L + 1) if all(w[i] == w[(i + p) % L] for i in range(L)))
            assert v.period == brute == minimal_cyclic_period(w)
            assert v.first_low is not None and v.period <= v.first_low


def test_strip_bound_examples():
    cert = is_balanced(checkerboard(), rectangle(2, 3), (0, -1))
    rep = strip_period_bound_check(checkerboard(), cert)
    assert rep.edge_points == 3 and rep.ok
    assert {r.period for r in rep.rows} == {2}
    assert all(r.bound == 4 for r in rep.rows if r.case == "unique")
    cert = is_balanced(constant(), rectangle(2, 3), (0, -1))
    assert all(r.period == 1 for r in strip_period_bound_check(constant(), cert).rows)
    cert = is_balanced(stripes(2), rectangle(2, 3), (0, -1))
    assert cert.valid
    assert all(r.period == 1 for r in strip_period_bound_check(stripes(2), cert).rows)


def test_strip_bound_needs_valid_certificate():
    cert = is_balanced(constant(), rectangle(3, 1), (1, 0))
    with pytest.raises(ValueError):
        strip_period_bound_check(constant(), cert)


def test_unique_case_bound_is_opt_in():
    # vertical is an expansive line of horizontal stripes, so the strip may repeat
    # only with the full period 7; the 2|w|-2 bound must not be enforced there
    eta = stripes(7, vertical=False)
    r = find_balanced_set(eta, (0, -1), 3)
    rep = strip_period_bound_check(eta, r.certificate)
    assert rep.ok and {row.period for row in rep.rows} == {7}
    forced = strip_period_bound_check(eta, r.certificate, unique_case_applies=True)
    assert forced.violations and all(row.case == "unique" for row in forced.violations)


def test_propagation_examples():
    s = rectangle(2, 3)
    assert periodic_strip_propagation_check(checkerboard(), (1, 1), s).holds
    rep = periodic_strip_propagation_check(stripes(3), (0, 1), s)
    assert rep.holds and rep.strip_period == 1 and rep.global_vector == (0, 1)
    assert periodic_strip_propagation_check(constant(), (2, 1), s).holds


@given(periodic_configs())
def test_lattice_vectors_are_periods(eta):
    lat = period_lattice(eta)
    assert lat.rank == 2
    region = box(2 * eta.width, 2 * eta.height)
    for g in lat.generators:
        assert is_periodic_on_region(eta, region, g).holds
    # and nothing in the fundamental box is missed
    for v in box(eta.width, eta.height):
        assert lat.contains(v) == is_periodic_on_region(eta, region, v).holds


@given(periodic_configs(max_w=6, max_h=3, max_symbols=2), st.integers(1, 5))
def test_horizontal_period_factorial_bound(eta, n):
    if rect_complexity(eta, n, 1).P <= n:
        t = next(t for t in range(1, eta.width + 1) if period_lattice(eta).contains((t, 0)))
        assert t <= factorial(n)


@given(st.lists(st.sampled_from("ab"), min_size=1, max_size=30))
def test_onesided_period_holds_on_prefix(word):
    ev = eventual_period(word)
    if ev:
        pre, p = ev
        assert all(word[i] == word[i + p] for i in range(pre, len(word) - p))
        assert len(word) - pre >= 2 * p
