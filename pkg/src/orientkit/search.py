"""Exact P-orientability on trees and undirected graphs, plus the exhaustive oracle."""
from __future__ import annotations

import dataclasses
from typing import Sequence

from .graph import GraphError, LCAIndex, MixedGraph, Orientation, Pair, check_pairs
from .kernel import contract_to_tree, lift_orientation
from .oracles import CapExceeded, max_orientation_value

FREE, UP, DOWN = 0, 1, -1


@dataclasses.dataclass(frozen=True)
class Infeasible:
    """Negative answer with a witness.

    ``pairs`` are indices into the caller's pair list; for a direction
    conflict they are the two pairs demanding opposite directions on
    ``edge``.  Falsy, so ``if decide(...)`` reads naturally.
    """

    pairs: tuple[int, ...]
    edge: int | None = None
    reason: str = "conflict"

    def __bool__(self):
        return False


def decide_tree_orientable(tree: MixedGraph, pairs: Sequence[Pair]) -> Orientation | Infeasible:
    """Each pair forces the direction of every edge on its tree path.

    Edges already forced the same way are skipped with one union-find per
    direction, so every edge is visited at most twice overall.  Edges no
    pair uses stay forward.
    """
    if tree.arcs:
        raise GraphError("expected an undirected forest")
    pairs = check_pairs(tree.n, pairs)
    lca = LCAIndex(tree.n, [(e.u, e.v) for e in tree.edges], root=None)
    state = [FREE] * len(tree.edges)
    owner = [-1] * len(tree.edges)
    jumps = {UP: list(range(tree.n)), DOWN: list(range(tree.n))}

    def find(jump, x):
        while jump[x] != x:
            jump[x] = jump[jump[x]]
            x = jump[x]
        return x

    for i, (s, t) in enumerate(pairs):
        if s == t:
            continue
        c = lca.lca(s, t)
        for start, want in ((s, UP), (t, DOWN)):
            jump = jumps[want]
            x = find(jump, start)
            while lca.depth[x] > lca.depth[c]:
                e = lca.parent_edge[x]
                if state[e] == -want:
                    # report the lowest-id clashing edge on this pair's path
                    clash = [f for f, up in lca.path_edges(s, t)
                             if state[f] == (DOWN if up else UP)]
                    e = min(clash)
                    return Infeasible((owner[e], i), e)
                state[e] = want
                owner[e] = i
                jump[x] = lca.parent[x]
                x = find(jump, lca.parent[x])

    forward = []
    for e in tree.edges:
        if state[e.id] == FREE:
            forward.append(True)
            continue
        child = e.u if lca.parent_edge[e.u] == e.id else e.v
        forward.append((e.u == child) == (state[e.id] == UP))
    return Orientation(tuple(forward))


def decide_undirected_orientable(graph: MixedGraph,
                                 pairs: Sequence[Pair]) -> Orientation | Infeasible:
    """Contract 2-edge-connected components, decide on the tree, lift back."""
    if graph.arcs:
        raise GraphError("expected an undirected graph")
    inst = contract_to_tree(graph, pairs)
    if inst.unsatisfiable:
        return Infeasible((inst.unsatisfiable[0],), None, "disconnected")
    res = decide_tree_orientable(inst.tree, inst.pairs)
    if isinstance(res, Infeasible):
        return Infeasible(tuple(inst.pair_index[i] for i in res.pairs),
                          inst.edge_origin[res.edge], res.reason)
    return lift_orientation(res, inst.log)


def oracle_max_orientation(graph: MixedGraph, pairs: Sequence[Pair], cap: int = 20,
                           threads: int | None = None) -> tuple[int, Orientation]:
    """Exhaustive maximum of ``|P[D]|`` over all ``2^|E|`` orientations."""
    return max_orientation_value(graph, pairs, cap=cap, threads=threads)


__all__ = ["Infeasible", "CapExceeded", "decide_tree_orientable",
           "decide_undirected_orientable", "oracle_max_orientation"]
