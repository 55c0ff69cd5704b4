import pytest
from hypothesis import given
from hypothesis import strategies as st

from nivat2d.complexity import (ShapeExceedsDomain, _unique_rows, complexity, complexity_profile, count,
                                first_within_bound, rect_complexity, sample_rows, words)
from nivat2d.configuration import Window, orbit
from nivat2d.corpus import checkerboard, constant, fibonacci_lift, stripes, tm2d
from nivat2d.extension import convex_subsets
from nivat2d.geometry import rectangle

from conftest import convex_sets, periodic_configs


def brute_count(eta, cells):
    """Distinct colorings of ``cells`` over one fundamental domain of translates."""
    w, h = eta.width, eta.height
    cells = sorted(cells, key=lambda p: (p[1], p[0]))
    return len({tuple(eta.rows[(y + uy) % h][(x + ux) % w] for x, y in cells)
                for ux in range(w) for uy in range(h)})


def test_words_examples():
    assert len(words(constant(), rectangle(3, 2))) == 1
    assert len(words(checkerboard(), rectangle(2, 2))) == 2
    ws = words(fibonacci_lift(100), rectangle(4, 1))
    assert len(ws) == 5 and not ws.exhaustive
    assert ws.translate_count > 0


def test_complexity_examples():
    r = rect_complexity(stripes(2), 2, 3)
    assert (r.P, r.D) == (2, -4)
    r = complexity(checkerboard(), rectangle(1, 1))
    assert (r.P, r.D, r.exhaustive) == (2, 1, True)


def test_fibonacci_rect_counts_match_factor_oracle(oracles):
    fib = fibonacci_lift(100)
    factors = oracles["fibonacci"]["factors"]
    for n in range(1, 11):
        assert rect_complexity(fib, n, 3).P == factors[n - 1] == n + 1


def test_profile_examples(oracles):
    rows = complexity_profile(constant(), 3, 3)
    assert [r.P for r in rows] == [1, 1, 1] and all(r.within_bound for r in rows)
    rows = complexity_profile(fibonacci_lift(200), 10, 3)
    assert all(r.P == r.n + 1 and r.within_bound for r in rows)
    tm = complexity_profile(tm2d(8), 12, 3)
    assert [r.P for r in tm] == oracles["tm2d_k3"]["8"]
    assert not any(r.within_bound for r in tm if r.n >= 2)
    assert all(not r.exhaustive for r in tm)


def test_first_within_bound():
    assert first_within_bound(checkerboard(), 3, 4) == 1
    assert first_within_bound(tm2d(4), 3, 6, n_min=2) is None


def test_shape_exceeds_domain():
    with pytest.raises(ShapeExceedsDomain, match="shape exceeds domain"):
        rect_complexity(tm2d(2), 5, 1)


def test_window_lower_bound_is_labelled():
    r = rect_complexity(tm2d(3), 2, 2)
    assert r.lower_bound and not r.exhaustive
    assert r.translate_count == 7 * 7


def test_anchor_restricts_translates():
    win = Window(("0", "1"), ((0, 1, 1),))
    # alone, the last cell sees symbols 0, 1, 1; anchored to R_{2,1} only 1, 1
    assert count(win, [(0, 0)]) == 2
    assert count(win, [(1, 0)], anchor=[(0, 0), (1, 0)]) == 1
    with pytest.raises(ValueError, match="not in the anchor"):
        count(win, [(5, 0)], anchor=[(0, 0)])


@given(periodic_configs(), convex_sets())
def test_counts_match_brute_force(eta, s):
    assert count(eta, s.points) == brute_count(eta, s.points)


@given(periodic_configs(), convex_sets(min_size=2), st.data())
def test_monotonicity(eta, s, data):
    subs = [t for t in convex_subsets(s) if t < s.points]
    t = data.draw(st.sampled_from(subs))
    assert count(eta, t) <= count(eta, s.points)


@given(periodic_configs(), convex_sets(), st.tuples(st.integers(-7, 7), st.integers(-7, 7)))
def test_translation_invariance(eta, s, v):
    assert complexity(eta, s).P == complexity(eta, s.translate(v)).P


@given(periodic_configs(max_w=3, max_h=3), convex_sets())
def test_orbit_invariance(eta, s):
    p = complexity(eta, s).P
    assert all(complexity(alpha, s).P == p for alpha in orbit(eta))


@given(periodic_configs(), convex_sets())
def test_discrepancy_identity(eta, s):
    r = complexity(eta, s)
    assert r.D == r.P - len(s) and r.size == len(s) and r.P >= 1


@given(st.integers(1, 4), st.integers(1, 3), st.integers(2, 4))
def test_enlarging_window_never_decreases(n, k, it):
    eta = tm2d(it)
    if n > eta.width or k > eta.height:
        return
    assert rect_complexity(eta.enlarge(), n, k).P >= rect_complexity(eta, n, k).P


@given(periodic_configs(max_w=4, max_h=4), convex_sets(), st.integers(1, 5), st.integers(1, 3))
def test_partitioning_does_not_change_counts(eta, s, chunks, workers):
    _, rows = sample_rows(eta, s.points)
    assert len(_unique_rows(rows, chunks, workers)) == len(_unique_rows(rows))


def test_partitioned_window_count():
    eta = tm2d(6)
    base = rect_complexity(eta, 5, 3).P
    assert all(rect_complexity(eta, 5, 3, chunks=c, workers=w).P == base for c, w in [(3, 1), (7, 4), (64, 8)])
