import itertools
import random

import pytest

from orientkit.graph import GraphError, LCAIndex, MixedGraph, Orientation, satisfied_pairs
from orientkit.oracles import CapExceeded, max_orientation_value
from orientkit.search import (
    Infeasible,
    decide_tree_orientable,
    decide_undirected_orientable,
    oracle_max_orientation,
)
from instances import rand_graph, rand_pairs, rand_tree

PATH = MixedGraph.build(3, [(0, 1), (1, 2)])


def test_tree_single_pair():
    res = decide_tree_orientable(PATH, [(0, 2)])
    assert res == Orientation((True, True))


def test_tree_antiparallel_conflict():
    res = decide_tree_orientable(PATH, [(0, 2), (2, 0)])
    assert isinstance(res, Infeasible) and not res
    assert res.pairs == (0, 1) and res.edge == 0


def test_tree_rejects_arcs():
    with pytest.raises(GraphError):
        decide_tree_orientable(MixedGraph.build(2, arcs=[(0, 1)]), [])


def test_free_edges_stay_forward():
    g = MixedGraph.build(4, [(1, 0), (1, 2), (3, 2)])
    assert decide_tree_orientable(g, [(0, 1)]) == Orientation((False, True, True))


def _conflict_is_real(tree, pairs, res):
    """Witness pairs demand opposite directions on the witness edge."""
    lca = LCAIndex(tree.n, [(e.u, e.v) for e in tree.edges], root=None)
    dirs = [dict(lca.path_edges(*pairs[i])) for i in res.pairs]
    assert res.edge in dirs[0] and res.edge in dirs[1]
    assert dirs[0][res.edge] != dirs[1][res.edge]


def test_tree_decision_matches_oracle():
    rng = random.Random(21)
    for _ in range(150):
        n = rng.randint(2, 12)
        tree = rand_tree(rng, n)
        pairs = rand_pairs(rng, n, rng.randint(1, 6), distinct=False)
        res = decide_tree_orientable(tree, pairs)
        value, _ = max_orientation_value(tree, pairs)
        assert bool(res) == (value == len(pairs))
        if res:
            assert satisfied_pairs(tree, pairs, res) == list(pairs)
        else:
            _conflict_is_real(tree, pairs, res)


def test_undirected_examples():
    sq = MixedGraph.build(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    res = decide_undirected_orientable(sq, [(0, 2), (2, 0)])
    assert res and satisfied_pairs(sq, [(0, 2), (2, 0)], res) == [(0, 2), (2, 0)]
    split = MixedGraph.build(4, [(0, 1), (2, 3)])
    res = decide_undirected_orientable(split, [(0, 3)])
    assert not res and res.reason == "disconnected" and res.pairs == (0,)


def test_undirected_decision_matches_oracle():
    rng = random.Random(22)
    for _ in range(150):
        n = rng.randint(2, 9)
        g = rand_graph(rng, n, rng.randint(1, 14))
        pairs = rand_pairs(rng, n, rng.randint(1, 5), distinct=False)
        res = decide_undirected_orientable(g, pairs)
        value, _ = max_orientation_value(g, pairs)
        assert bool(res) == (value == len(pairs))
        if res:
            assert satisfied_pairs(g, pairs, res) == list(pairs)


def test_oracle_examples():
    star = MixedGraph.build(3, [(0, 2), (2, 1)])
    assert oracle_max_orientation(star, [(0, 1), (1, 0)])[0] == 1
    tri = MixedGraph.build(3, [(0, 1), (1, 2), (2, 0)])
    six = [p for p in itertools.product(range(3), repeat=2) if p[0] != p[1]]
    assert oracle_max_orientation(tri, six)[0] == 6


def test_oracle_tie_break_is_lexicographic():
    # every orientation satisfies nothing: the all-forward vector wins
    g = MixedGraph.build(3, [(0, 1), (1, 2)])
    assert oracle_max_orientation(g, [])[1] == Orientation((True, True))
    # only backward satisfies (1, 0)
    assert oracle_max_orientation(g, [(1, 0)])[1] == Orientation((False, True))


def test_oracle_cap():
    g = MixedGraph.build(2, [(0, 1)] * 5)
    with pytest.raises(CapExceeded):
        oracle_max_orientation(g, [(0, 1)], cap=4)


def test_oracle_thread_count_does_not_matter():
    rng = random.Random(23)
    g = rand_graph(rng, 9, 17)
    pairs = rand_pairs(rng, 9, 6)
    a = oracle_max_orientation(g, pairs, threads=1)
    b = oracle_max_orientation(g, pairs, threads=8)
    assert a == b


def test_oracle_beats_every_sampled_orientation():
    rng = random.Random(24)
    for _ in range(20):
        g = rand_graph(rng, 7, 9)
        pairs = rand_pairs(rng, 7, 5)
        value, best = oracle_max_orientation(g, pairs)
        assert len(satisfied_pairs(g, pairs, best)) == value
        for _ in range(20):
            o = Orientation(tuple(rng.random() < 0.5 for _ in g.edges))
            assert len(satisfied_pairs(g, pairs, o)) <= value
