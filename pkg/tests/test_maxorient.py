import itertools
import math
import random
from fractions import Fraction

import pytest

from orientkit.graph import GraphError, MixedGraph, satisfied_pairs
from orientkit.kernel import kernelize
from orientkit.maxorient import (
    approx_max_orientation,
    centroid_levels,
    certified_bound,
    decide_k_pairs,
    orient_star_level,
)
from orientkit.oracles import max_orientation_value
from instances import rand_graph, rand_pairs, rand_tree


def test_certified_bound_values():
    assert certified_bound(0) == 0
    assert certified_bound(1) == 1
    for p in range(1, 200):
        assert certified_bound(p) == math.ceil(p / (4 * math.log2(3 * p)))


def test_path_single_pair():
    r = approx_max_orientation(MixedGraph.build(3, [(0, 1), (1, 2)]), [(0, 2)])
    assert r.count == 1 and r.certified_bound == 1


def test_star_two_of_four():
    # centre 0; leaves a=1, b=2, d=3, e=4
    star = MixedGraph.build(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    pairs = [(1, 2), (3, 4), (2, 1), (4, 3)]
    r = approx_max_orientation(star, pairs)
    assert r.count >= 2
    assert max_orientation_value(star, pairs)[0] == 2


def test_empty_pairs():
    r = approx_max_orientation(MixedGraph.build(2, [(0, 1)]), [])
    assert r.count == 0 and r.certified_bound == 0


def test_star_level_single_pair():
    lab = orient_star_level(2, [(0, 1)])
    assert lab.satisfied == (0,) and lab.inward == (True, False)


def test_star_level_antiparallel():
    lab = orient_star_level(2, [(0, 1), (1, 0)])
    assert len(lab.satisfied) == 1


def test_star_level_centroid_endpoints():
    lab = orient_star_level(2, [(None, 0), (1, None)])
    assert lab.satisfied == (0, 1) and lab.inward == (False, True)


def test_star_level_rejects_bad_pairs():
    with pytest.raises(GraphError):
        orient_star_level(2, [(0, 0)])
    with pytest.raises(GraphError):
        orient_star_level(2, [(None, None)])
    with pytest.raises(GraphError):
        orient_star_level(2, [(0, 5)])


def test_star_level_derandomisation_against_enumeration():
    rng = random.Random(31)
    for _ in range(100):
        pairs = []
        while len(pairs) < 8:
            a, b = rng.sample([None, 0, 1, 2, 3, 4], 2)
            pairs.append((a, b))
        lab = orient_star_level(5, pairs)
        assert len(lab.satisfied) >= math.ceil(len(pairs) / 4)
        trace = lab.expectations
        assert all(b >= a for a, b in zip(trace, trace[1:]))
        assert trace[-1] == len(lab.satisfied)
        # initial expectation is the average over all labelings
        total = 0
        for labels in itertools.product([True, False], repeat=5):
            total += sum(1 for s, t in pairs
                         if (s is None or labels[s]) and (t is None or not labels[t]))
        assert trace[0] == Fraction(total, 32)
        assert len(lab.satisfied) >= trace[0]


def test_centroid_levels_structure():
    rng = random.Random(32)
    for _ in range(40):
        n = rng.randint(2, 25)
        tree = rand_tree(rng, n)
        pairs = rand_pairs(rng, n, rng.randint(1, 8))
        levels, _ = centroid_levels(tree, pairs)
        assigned = [i for lev in levels for _, _, a in lev.entries for i in a]
        assert sorted(assigned) == list(range(len(pairs)))
        for lev in levels:
            nodes = [comp for _, comp, _ in lev.entries]
            for x, y in itertools.combinations(nodes, 2):
                assert not x & y
        assert len(levels) <= math.ceil(math.log2(n)) + 1


def test_approx_against_oracle():
    rng = random.Random(33)
    for _ in range(120):
        n = rng.randint(2, 9)
        g = rand_graph(rng, n, rng.randint(1, 14))
        pairs = rand_pairs(rng, n, rng.randint(1, 8), distinct=False)
        r = approx_max_orientation(g, pairs)
        opt, _ = max_orientation_value(g, pairs)
        assert r.certified_bound <= r.count <= opt
        assert len(satisfied_pairs(g, pairs, r.orientation)) == r.count


def test_approx_bound_on_large_trees():
    rng = random.Random(34)
    for _ in range(30):
        n = rng.randint(20, 120)
        tree = rand_tree(rng, n)
        pairs = rand_pairs(rng, n, rng.randint(5, 60))
        r = approx_max_orientation(tree, pairs)
        p = len(kernelize(tree, pairs).pairs)
        assert r.count >= certified_bound(p)


def test_k_pairs_examples():
    path = MixedGraph.build(3, [(0, 1), (1, 2)])
    pairs = [(0, 2), (2, 0)]
    assert decide_k_pairs(path, pairs, 0).answer
    assert decide_k_pairs(path, pairs, 1).answer
    assert not decide_k_pairs(path, pairs, 2).answer
    assert not decide_k_pairs(path, pairs, 3).answer
    with pytest.raises(GraphError):
        decide_k_pairs(path, pairs, -1)


def test_k_pairs_against_oracle_and_monotone():
    rng = random.Random(35)
    for _ in range(100):
        n = rng.randint(2, 9)
        g = rand_graph(rng, n, rng.randint(1, 14))
        pairs = rand_pairs(rng, n, rng.randint(1, 8), distinct=False)
        opt, _ = max_orientation_value(g, pairs)
        answers = []
        for k in range(0, 6):
            r = decide_k_pairs(g, pairs, k)
            assert r.answer == (opt >= k)
            if r.answer:
                assert len(satisfied_pairs(g, pairs, r.orientation)) >= k
            answers.append(r.answer)
        assert answers == sorted(answers, reverse=True)


def test_k_pairs_enumeration_threads_agree():
    rng = random.Random(36)
    hits = 0
    for _ in range(60):
        tree = rand_tree(rng, 10)
        pairs = rand_pairs(rng, 10, 8)
        opt, _ = max_orientation_value(tree, pairs)
        k = min(opt + 1, len(pairs))
        a = decide_k_pairs(tree, pairs, k, threads=1)
        b = decide_k_pairs(tree, pairs, k, threads=8, batch=3)
        assert a == b
        hits += a.method == "enumeration"
    assert hits > 0
