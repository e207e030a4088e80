import itertools
import random
from fractions import Fraction

import pytest

from orientkit.graph import InfeasibleError, MixedGraph, Orientation, connected_components, satisfied_pairs
from orientkit.oracles import (
    covers_requirement,
    cut_degree,
    cut_requirement,
    is_orientable_exhaustive,
    minimal_deficient_sets,
    steiner_orientation_optimum,
)
from orientkit.steiner import (
    CoverViolation,
    minimal_violated_sets,
    orient_cover,
    steiner_forest_2approx,
    steiner_forest_orientation,
    uncrossable_cover_2approx,
)
from instances import edge_pairs, rand_graph, rand_pairs

TRIANGLE = MixedGraph.build(3, [(0, 1), (0, 2), (2, 1)])  # ab, ac, cb


def _connected_instance(rng, n, m, p, max_cost=5):
    while True:
        g = rand_graph(rng, n, m, max_cost=max_cost)
        pairs = rand_pairs(rng, n, p)
        comp = connected_components(n, edge_pairs(g))
        if all(comp[s] == comp[t] for s, t in pairs):
            return g, pairs


def _mask(S):
    return sum(1 << x for x in S)


def _cheapest(g, candidates, ok):
    best = None
    for r in range(len(candidates) + 1):
        for sub in itertools.combinations(candidates, r):
            c = g.cost(sub)
            if (best is None or c < best) and ok(sub):
                best = c
    return best


# ---------------------------------------------------------------- phase 1

def test_forest_single_pair_on_path():
    g = MixedGraph.build(3, [(0, 1), (1, 2)])
    r = steiner_forest_2approx(g, [(0, 2)])
    assert r.edges == (0, 1) and r.cost == 2


def test_forest_no_pairs():
    r = steiner_forest_2approx(MixedGraph.build(3, [(0, 1)]), [])
    assert r.edges == () and r.cost == 0 and r.dual == 0


def test_forest_disconnected_pair():
    with pytest.raises(InfeasibleError):
        steiner_forest_2approx(MixedGraph.build(4, [(0, 1), (2, 3)]), [(0, 3)])


def test_forest_against_brute_force():
    rng = random.Random(51)
    for _ in range(60):
        n = rng.randint(2, 8)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 10), rng.randint(1, 3))
        r = steiner_forest_2approx(g, pairs)

        def connects(sub):
            comp = connected_components(n, edge_pairs(g, sub))
            return all(comp[s] == comp[t] for s, t in pairs)

        opt = _cheapest(g, list(range(len(g.edges))), connects)
        assert connects(r.edges)
        assert r.dual <= opt and r.cost <= 2 * r.dual <= 2 * opt


def test_phase_one_leaves_deficiency_at_most_one():
    rng = random.Random(52)
    for _ in range(60):
        n = rng.randint(2, 8)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 12), rng.randint(1, 3))
        J = edge_pairs(g, steiner_forest_2approx(g, pairs).edges)
        for X in range(1, (1 << n) - 1):
            assert cut_requirement(pairs, X) - cut_degree(J, X) <= 1


# ---------------------------------------------------------------- violated sets

def test_violated_sets_examples():
    g = MixedGraph.build(2, [(0, 1)])
    assert minimal_violated_sets(g, [0], [(0, 1)]) == []
    assert minimal_violated_sets(g, [0], [(0, 1), (1, 0)]) == [frozenset({0}), frozenset({1})]


def test_violated_sets_match_subset_enumeration():
    rng = random.Random(53)
    for _ in range(80):
        n = rng.randint(2, 8)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 12), rng.randint(1, 3))
        J = steiner_forest_2approx(g, pairs).edges
        rest = [i for i in range(len(g.edges)) if i not in J]
        aug = [i for i in rest if rng.random() < 0.3]
        got = set(minimal_violated_sets(g, J, pairs, aug))
        assert got == set(minimal_deficient_sets(n, edge_pairs(g, list(J) + aug), pairs))


def test_family_is_uncrossable():
    rng = random.Random(54)
    for _ in range(40):
        n = rng.randint(3, 8)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 12), rng.randint(2, 3))
        J = edge_pairs(g, steiner_forest_2approx(g, pairs).edges)

        def member(X):
            return 0 < X < (1 << n) - 1 and cut_degree(J, X) == 1 and cut_requirement(pairs, X) == 2

        fam = [X for X in range(1, (1 << n) - 1) if member(X)]
        for X, Y in itertools.combinations(fam, 2):
            ok1 = member(X & Y) and member(X | Y)
            ok2 = member(X & ~Y) and member(Y & ~X)
            assert ok1 or ok2 or not X & Y


# ---------------------------------------------------------------- phase 2

def test_cover_nothing_to_do():
    g = MixedGraph.build(3, [(0, 1), (1, 2)])
    r = uncrossable_cover_2approx(g, [0, 1], [(0, 2)])
    assert r.edges == () and r.cost == 0


def test_cover_triangle():
    r = uncrossable_cover_2approx(TRIANGLE, [0], [(0, 1), (1, 0)])
    assert r.edges == (1, 2) and r.cost == 2


def test_cover_without_crossing_edge():
    g = MixedGraph.build(2, [(0, 1)])
    with pytest.raises(InfeasibleError):
        uncrossable_cover_2approx(g, [0], [(0, 1), (1, 0)])


def test_cover_against_brute_force_and_minimal():
    rng = random.Random(55)
    for _ in range(60):
        n = rng.randint(2, 7)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 11), rng.randint(1, 3))
        J = list(steiner_forest_2approx(g, pairs).edges)
        rest = [i for i in range(len(g.edges)) if i not in J]

        def covers(sub):
            return covers_requirement(n, edge_pairs(g, J + list(sub)), pairs)

        opt = _cheapest(g, rest, covers)
        try:
            r = uncrossable_cover_2approx(g, J, pairs)
        except InfeasibleError:
            assert opt is None
            continue
        assert covers(r.edges) and r.dual <= opt and r.cost <= 2 * opt
        for e in r.edges:
            assert not covers([x for x in r.edges if x != e])


# ---------------------------------------------------------------- orienting a cover

def test_orient_cover_triangle_all_pairs():
    tri = MixedGraph.build(3, [(0, 1), (1, 2), (2, 0)])
    six = [p for p in itertools.product(range(3), repeat=2) if p[0] != p[1]]
    o = orient_cover(tri, [0, 1, 2], six)
    assert satisfied_pairs(tri, six, Orientation.from_mapping(3, o)) == six


def test_orient_cover_single_edge():
    g = MixedGraph.build(2, [(0, 1)])
    assert orient_cover(g, [0], [(0, 1)]) == {0: True}
    assert orient_cover(g, [0], [(1, 0)]) == {0: False}


def test_orient_cover_reports_violation():
    g = MixedGraph.build(2, [(0, 1)])
    with pytest.raises(CoverViolation) as info:
        orient_cover(g, [0], [(0, 1), (1, 0)])
    assert info.value.witness == frozenset({0})


def test_cover_iff_orientable_on_all_subsets():
    """Covering the cut requirement and being orientable coincide (both directions)."""
    rng = random.Random(56)
    for _ in range(12):
        n = rng.randint(3, 6)
        g = rand_graph(rng, n, rng.randint(n, 8))
        pairs = rand_pairs(rng, n, rng.randint(1, 3))
        for r in range(len(g.edges) + 1):
            for sub in itertools.combinations(range(len(g.edges)), r):
                H, _ = g.edge_subgraph(sub)
                cov = covers_requirement(n, edge_pairs(g, sub), pairs)
                assert cov == is_orientable_exhaustive(H, pairs)
                if cov:
                    o = orient_cover(g, sub, pairs)
                    local = Orientation(tuple(o[e] for e in sub))
                    assert len(satisfied_pairs(H, pairs, local)) == len(pairs)


def test_optimal_solutions_cover():
    rng = random.Random(57)
    for _ in range(30):
        n = rng.randint(2, 7)
        g, pairs = _connected_instance(rng, n, rng.randint(n, 10), rng.randint(1, 3))
        opt = steiner_orientation_optimum(g, pairs)
        if opt is not None:
            assert covers_requirement(n, edge_pairs(g, opt[1]), pairs)


# ---------------------------------------------------------------- end to end

def test_triangle_needs_whole_cycle():
    r = steiner_forest_orientation(TRIANGLE, [(0, 1), (1, 0)])
    assert r.edges == (0, 1, 2) and r.cost == 3
    assert steiner_orientation_optimum(TRIANGLE, [(0, 1), (1, 0)])[0] == 3
    o = r.full_orientation(3)
    assert satisfied_pairs(TRIANGLE, [(0, 1), (1, 0)], o) == [(0, 1), (1, 0)]


def test_single_expensive_edge():
    g = MixedGraph.build(2, [(0, 1, 5)])
    r = steiner_forest_orientation(g, [(0, 1)])
    assert r.edges == (0,) and r.cost == 5


def test_self_pairs_and_duplicates_are_ignored():
    g = MixedGraph.build(3, [(0, 1), (1, 2)])
    r = steiner_forest_orientation(g, [(1, 1), (0, 1), (0, 1)])
    assert r.edges == (0,)


def test_four_approximation_against_oracle():
    rng = random.Random(58)
    ratios = []
    for _ in range(60):
        n = rng.randint(2, 8)
        g, pairs = _connected_instance(rng, n, rng.randint(n - 1, 11), rng.randint(1, 3))
        opt = steiner_orientation_optimum(g, pairs)
        if opt is None:
            with pytest.raises(InfeasibleError):
                steiner_forest_orientation(g, pairs)
            continue
        r = steiner_forest_orientation(g, pairs)
        H, back = g.edge_subgraph(r.edges)
        local = Orientation(tuple(r.orientation[e] for e in back))
        assert len(satisfied_pairs(H, pairs, local)) == len(pairs)
        assert r.cost <= r.dual_bound <= 4 * opt[0]
        ratios.append(Fraction(r.cost) / opt[0])
    assert ratios and max(ratios) <= 4
