import random

import pytest

from orientkit.graph import MixedGraph, satisfied_pairs, topological_order
from orientkit.mixed import component_demand_check, contract_until_dag, decide_mixed_orientable
from orientkit.oracles import CapExceeded, is_orientable_exhaustive
from orientkit.search import decide_undirected_orientable
from instances import rand_graph, rand_mixed, rand_pairs


def test_overlay_merges_undirected_edge():
    # s=0 -> u=1, u - v=2, v -> t=3
    g = MixedGraph.build(4, [(1, 2)], [(0, 1), (2, 3)])
    ov = contract_until_dag(g, [(0, 3)])
    assert len(ov.components) == 3 and not ov.events
    assert ov.overlay_of(1) == ov.overlay_of(2)


def test_directed_two_cycle_contracts():
    g = MixedGraph.build(2, arcs=[(0, 1), (1, 0)])
    ov = contract_until_dag(g, [(0, 1)])
    assert ov.graph.n == 1 and ov.auto_satisfied == (0,)


def test_ori_cycle_through_undirected_path():
    # arc a->b plus undirected b - c - a
    g = MixedGraph.build(3, [(1, 2), (2, 0)], [(0, 1)])
    ov = contract_until_dag(g, [(1, 0), (0, 2)])
    assert ov.graph.n == 1 and len(ov.events) == 1
    assert is_orientable_exhaustive(g, [(x, y) for x in range(3) for y in range(3) if x != y])
    res = decide_mixed_orientable(g, [(1, 0), (2, 1)])
    assert res and satisfied_pairs(g, [(1, 0), (2, 1)], res.orientation) == [(1, 0), (2, 1)]


def test_single_undirected_edge_serves_one_direction():
    g = MixedGraph.build(4, [(1, 2)], [(0, 1), (2, 3)])
    yes = decide_mixed_orientable(g, [(0, 3)])
    assert yes and yes.orientation[0] is True
    assert not decide_mixed_orientable(g, [(0, 3), (3, 0)])


def test_cap_exceeded():
    g = MixedGraph.build(2, [(0, 1)])
    with pytest.raises(CapExceeded):
        decide_mixed_orientable(g, [(0, 1)] * 5)


def test_component_demand_check():
    single = MixedGraph.build(1)
    assert component_demand_check(single, [])
    path = MixedGraph.build(2, [(0, 1)])
    assert not component_demand_check(path, [(0, 1), (1, 0)])
    rng = random.Random(41)
    for _ in range(30):
        g = rand_graph(rng, 8, rng.randint(7, 12), connected=True)
        demands = rand_pairs(rng, 8, 3)
        assert bool(component_demand_check(g, demands)) == is_orientable_exhaustive(g, demands)


def test_undirected_only_agrees():
    rng = random.Random(42)
    for _ in range(60):
        n = rng.randint(2, 7)
        g = rand_graph(rng, n, rng.randint(1, 9))
        pairs = rand_pairs(rng, n, rng.randint(1, 3))
        assert bool(decide_mixed_orientable(g, pairs)) == bool(decide_undirected_orientable(g, pairs))


def test_overlay_is_acyclic_and_shrinks():
    rng = random.Random(43)
    for _ in range(100):
        n = rng.randint(2, 8)
        g = rand_mixed(rng, n, rng.randint(0, 8), rng.randint(0, 8))
        ov = contract_until_dag(g, rand_pairs(rng, n, 2))
        order, cycle = topological_order(len(ov.components), ov.overlay_arcs)
        assert cycle is None
        assert len(ov.events) <= n
        assert ov.graph.n == n - sum(len(ev.nodes) - 1 for ev in ov.events)


def test_mixed_decision_matches_oracle():
    rng = random.Random(44)
    for _ in range(150):
        n = rng.randint(2, 7)
        g = rand_mixed(rng, n, rng.randint(0, 10), rng.randint(0, 6))
        pairs = rand_pairs(rng, n, rng.randint(1, 3), distinct=False)
        want = is_orientable_exhaustive(g, pairs)
        a = decide_mixed_orientable(g, pairs, memo=True)
        b = decide_mixed_orientable(g, pairs, memo=False)
        assert bool(a) == bool(b) == want
        if a:
            assert satisfied_pairs(g, pairs, a.orientation) == list(pairs)


def test_contraction_preserves_answer():
    rng = random.Random(45)
    seen = 0
    for _ in range(200):
        n = rng.randint(3, 7)
        g = rand_mixed(rng, n, rng.randint(1, 6), rng.randint(2, 6))
        pairs = rand_pairs(rng, n, 2)
        ov = contract_until_dag(g, pairs)
        if not ov.events:
            continue
        seen += 1
        assert bool(decide_mixed_orientable(g, pairs)) == bool(decide_mixed_orientable(ov.graph, ov.pairs))
    assert seen > 10
