from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nivat2d.complexity import count, discrepancy
from nivat2d.configuration import Periodic, Window, orbit
from nivat2d.corpus import checkerboard, constant, fibonacci_lift
from nivat2d.extension import (LemmaViolation, NotFound, RequiresExactCounts, chain_discrepancy, convex_subsets,
                               discrepancy_step, extension_fan, find_generating_set, is_generated,
                               is_generating_set, verify_edge_bound)
from nivat2d.geometry import ConvexLatticeSet, convex_hull, rectangle

from conftest import convex_sets, periodic_configs

# every 2x1 pattern over {0, 1} occurs in 0011 read cyclically; as a window 00110 suffices
ALL_PAIRS = Window(("0", "1"), ((0, 0, 1, 1, 0),))


def all_patterns_periodic(n, k):
    """A periodic configuration in which every n x k binary pattern occurs (a de Bruijn torus stand-in)."""
    blocks = list(product((0, 1), repeat=n * k))
    width = n * len(blocks)
    rows = [[0] * width for _ in range(k)]
    for i, b in enumerate(blocks):
        for y in range(k):
            for x in range(n):
                rows[y][i * n + x] = b[y * n + x]
    return Periodic(("0", "1"), tuple(map(tuple, rows)))


def right_edge(s):
    return next(e for e in s.edges if e.direction == (0, 1))


def test_fan_examples():
    assert set(extension_fan(constant(), rectangle(1, 2), rectangle(2, 2)).fiber_sizes) == {1}
    assert extension_fan(checkerboard(), [(0, 0)], rectangle(2, 1)).fiber_sizes == [1, 1]
    fan = extension_fan(ALL_PAIRS, [(0, 0)], rectangle(2, 1))
    assert fan.fiber_sizes == [2, 2] and len(fan.non_unique) == 2
    with pytest.raises(ValueError):
        extension_fan(constant(), rectangle(2, 1), rectangle(2, 1))


def test_generated_examples():
    assert is_generated(constant(), rectangle(3, 2), (2, 1))
    assert is_generated(checkerboard(), rectangle(2, 1), (1, 0))
    assert not is_generated(ALL_PAIRS, rectangle(2, 1), (1, 0))


def test_step_examples():
    r = discrepancy_step(checkerboard(), rectangle(2, 2), (0, 0))
    assert (r.generated, r.d_before, r.d_after) == (True, -2, -1)
    r = discrepancy_step(constant(), rectangle(3, 1), (2, 0))
    assert (r.generated, r.d_before, r.d_after) == (True, -2, -1)
    r = discrepancy_step(ALL_PAIRS, rectangle(2, 1), (1, 0))
    assert (r.generated, r.d_before, r.d_after) == (False, 2, 1) and r.holds
    with pytest.raises(ValueError, match="not a boundary vertex"):
        discrepancy_step(constant(), rectangle(3, 3), (1, 1))


def test_generating_set_examples():
    r = find_generating_set(checkerboard(), 2, 3)
    assert r.set == convex_hull([(0, 0), (1, 0)])
    assert r.discrepancy == 0 and r.minimality_certified and r.mode == "exhaustive"
    assert is_generating_set(checkerboard(), r.set)
    r = find_generating_set(constant(), 1, 1)
    assert len(r.set) == 1 and r.discrepancy == 0
    full = all_patterns_periodic(2, 3)
    assert discrepancy(full, rectangle(2, 3).points) == 58
    r = find_generating_set(full, 2, 3)
    assert isinstance(r, NotFound) and not r and "D(R_{n,k}) > 0" in r.reason
    with pytest.raises(RequiresExactCounts):
        find_generating_set(fibonacci_lift(50), 2, 3)
    with pytest.raises(ValueError, match="two symbols"):
        find_generating_set(constant(("0",)), 2, 3)


def test_greedy_mode():
    r = find_generating_set(checkerboard(), 2, 3, mode="greedy")
    assert r.mode == "greedy" and not r.minimality_certified and r.discrepancy <= 0
    assert is_generating_set(checkerboard(), r.set)
    r = find_generating_set(checkerboard(), 5, 5)   # 25 cells exceeds the default budget
    assert r.mode == "greedy"


def test_edge_bound_examples():
    s = rectangle(2, 2)
    r = verify_edge_bound(checkerboard(), s, right_edge(s))
    assert (r.d_without, r.d_full, r.non_unique_count) == (0, -2, 0) and r.applicable and r.holds
    s = rectangle(3, 2)
    assert verify_edge_bound(constant(), s, right_edge(s)).non_unique_count == 0
    s = rectangle(3, 3)
    r = verify_edge_bound(fibonacci_lift(200), s, right_edge(s))
    assert r.holds


def test_chain_examples():
    assert chain_discrepancy(constant(), rectangle(3, 1), [(0, 0), (2, 0)]) == [-2, -1, 0]
    assert chain_discrepancy(checkerboard(), rectangle(2, 2), [(0, 0), (1, 1)]) == [-2, -1, 0]
    assert chain_discrepancy(fibonacci_lift(30), rectangle(3, 2), []) == [discrepancy(fibonacci_lift(30),
                                                                                      rectangle(3, 2).points)]
    with pytest.raises(ValueError, match="non-convex"):
        chain_discrepancy(constant(), rectangle(3, 1), [(1, 0)])


def test_violation_payload():
    err = LemmaViolation("x", {"S": [[0, 0]]})
    assert isinstance(err, AssertionError) and err.payload == {"S": [[0, 0]]}


def test_convex_subsets_of_small_rectangle():
    subs = convex_subsets(rectangle(2, 2))
    # 4 singletons, 4 sides, 2 diagonals, 4 L-shapes, the square
    assert len(subs) == 15
    assert [len(s) for s in subs] == sorted(len(s) for s in subs)


@given(periodic_configs(), convex_sets(min_size=2), st.data())
def test_fiber_sum_conservation(eta, s, data):
    x = data.draw(st.sampled_from(s.vertices))
    fan = extension_fan(eta, s.points - {x}, s)
    assert fan.total == count(eta, s.points)


@given(periodic_configs(max_w=5, max_h=5), convex_sets(min_size=2), st.data())
def test_vertex_removal_lemma(eta, s, data):
    x = data.draw(st.sampled_from(s.vertices))
    r = discrepancy_step(eta, s, x)
    if r.generated:
        assert r.d_after == r.d_before + 1
    else:
        assert r.d_after <= r.d_before


@given(periodic_configs(max_w=5, max_h=5), convex_sets(min_size=3), st.data())
def test_edge_bound_lemma(eta, s, data):
    edges = [e for e in s.edges if e.lattice_points < len(s)]
    if not edges:
        return
    r = verify_edge_bound(eta, s, data.draw(st.sampled_from(edges)))
    if r.applicable:
        assert r.non_unique_count <= r.edge_points - 1


@given(periodic_configs(max_w=5, max_h=5), convex_sets(min_size=2), st.data())
def test_chain_bound(eta, s, data):
    chain, cur = [], s
    for _ in range(data.draw(st.integers(0, 4))):
        if len(cur) == 1:
            break
        v = data.draw(st.sampled_from(cur.vertices))
        chain.append(v)
        cur = ConvexLatticeSet(cur.points - {v})
    ds = chain_discrepancy(eta, s, chain)
    assert ds[-1] <= ds[0] + len(chain)


@given(periodic_configs(max_w=3, max_h=3), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_generating_sets_are_translation_and_orbit_stable(eta, v):
    if len(eta.alphabet) < 2:
        return
    r = find_generating_set(eta, 3, 3)
    if not r:
        return
    assert is_generating_set(eta, r.set.translate(v))
    assert all(is_generating_set(alpha, r.set) for alpha in orbit(eta))


@given(periodic_configs(max_w=4, max_h=4))
def test_exhaustive_result_is_minimal(eta):
    if len(eta.alphabet) < 2:
        return
    r = find_generating_set(eta, 3, 3)
    if not r:
        return
    d = r.discrepancy
    assert d <= 0 and r.minimality_certified
    for t in convex_subsets(rectangle(3, 3)):
        if t < r.set.points:
            assert discrepancy(eta, t) >= d + 1
        if len(t) < len(r.set):
            assert discrepancy(eta, t) > 0
