"""Steiner Forest Orientation, 4-approximation.

Phase 1 buys a Steiner forest ``J`` for the unordered demands (moat growing,
reverse delete).  After that every node set is short of its cut requirement
``f_r`` by at most one, and the deficient sets are exactly the sides of
``J``-bridges that carry demand in both directions.  Phase 2 covers that
uncrossable family with a second primal-dual pass.  Finally 2-edge-connected
pieces are oriented strongly and each bridge follows the demand crossing it.

All dual arithmetic is exact (``Fraction``); ties go to the lowest edge id.
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    GraphError,
    InfeasibleError,
    MixedGraph,
    Orientation,
    Pair,
    bridges_and_2ecc,
    check_pairs,
    connected_components,
    dedupe_pairs,
    satisfied_pairs,
    strong_orientation,
)
from .kernel import _DSU


class CoverViolation(GraphError):
    """The edge set does not cover the cut requirement; ``witness`` is the set."""

    def __init__(self, message, witness):
        super().__init__(message)
        self.witness = witness


@dataclasses.dataclass(frozen=True)
class PrimalDual:
    edges: tuple[int, ...]
    cost: Fraction
    dual: Fraction  # lower bound on the optimum of the covering problem


def _demands(n, pairs):
    return [p for p in dedupe_pairs(check_pairs(n, pairs)) if p[0] != p[1]]


def _connects(n, edges: Iterable[tuple[int, int]], pairs) -> bool:
    comp = connected_components(n, edges)
    return all(comp[s] == comp[t] for s, t in pairs)


def steiner_forest_2approx(graph: MixedGraph, pairs: Sequence[Pair]) -> PrimalDual:
    """Moat-growing primal-dual Steiner forest with reverse delete.

    ``cost <= 2 * dual <= 2 * optimum``.
    """
    if graph.arcs:
        raise GraphError("expected an undirected graph")
    pairs = _demands(graph.n, pairs)
    comp = connected_components(graph.n, ((e.u, e.v) for e in graph.edges))
    for s, t in pairs:
        if comp[s] != comp[t]:
            raise InfeasibleError(f"pair {(s, t)} is disconnected", witness=(s, t))
    dsu = _DSU(graph.n)
    load = [Fraction(0)] * graph.n
    dual = Fraction(0)
    added: list[int] = []
    while True:
        active = {dsu.find(s) for s, t in pairs if dsu.find(s) != dsu.find(t)}
        active |= {dsu.find(t) for s, t in pairs if dsu.find(s) != dsu.find(t)}
        if not active:
            break
        best = None
        for e in graph.edges:
            ru, rv = dsu.find(e.u), dsu.find(e.v)
            if ru == rv:
                continue
            rate = (ru in active) + (rv in active)
            if not rate:
                continue
            eps = (e.cost - load[e.u] - load[e.v]) / rate
            if best is None or eps < best[0]:
                best = (eps, e)
        eps, e = best
        for v in range(graph.n):
            if dsu.find(v) in active:
                load[v] += eps
        dual += eps * len(active)
        added.append(e.id)
        dsu.union(e.u, e.v)
    keep = list(added)
    for eid in reversed(added):
        trial = [i for i in keep if i != eid]
        if _connects(graph.n, ((graph.edges[i].u, graph.edges[i].v) for i in trial), pairs):
            keep = trial
    keep.sort()
    return PrimalDual(tuple(keep), graph.cost(keep), dual)


def minimal_violated_sets(graph: MixedGraph, J: Iterable[int], pairs: Sequence[Pair],
                          augment: Iterable[int] = ()) -> list[frozenset[int]]:
    """Inclusion-minimal node sets crossed by exactly one edge of ``J``, no edge
    of ``augment``, and demand in both directions.

    These are the sides of ``J``-bridges of ``J + augment`` whose two sides
    each send a pair to the other.
    """
    pairs = _demands(graph.n, pairs)
    J = set(J)
    ids = sorted(J | set(augment))
    sub, back = graph.edge_subgraph(ids)
    dec = bridges_and_2ecc(sub)
    found = set()
    for local in dec.bridges:
        if back[local] not in J:
            continue
        X, Y = dec.sides[local]
        fwd = any(s in X and t in Y for s, t in pairs)
        bwd = any(s in Y and t in X for s, t in pairs)
        if fwd and bwd:
            found.add(X)
            found.add(Y)
    minimal = [S for S in found if not any(T < S for T in found)]
    return sorted(minimal, key=lambda S: (len(S), sorted(S)))


def uncrossable_cover_2approx(graph: MixedGraph, J: Iterable[int],
                              pairs: Sequence[Pair]) -> PrimalDual:
    """Primal-dual cover of the deficient sets of ``J`` with edges outside ``J``.

    Duals rise uniformly on the current minimal violated sets; the first edge
    to go tight is bought; a final reverse delete drops redundant edges.
    """
    pairs = _demands(graph.n, pairs)
    J = sorted(set(J))
    comp = connected_components(graph.n, ((graph.edges[i].u, graph.edges[i].v) for i in J))
    if any(comp[s] != comp[t] for s, t in pairs):
        raise GraphError("every pair must be connected by J")
    chosen: list[int] = []
    y: dict[frozenset[int], Fraction] = {}
    jset = set(J)
    while True:
        sets = minimal_violated_sets(graph, J, pairs, chosen)
        if not sets:
            break
        taken = jset | set(chosen)
        best = None
        for e in graph.edges:
            if e.id in taken or e.u == e.v:
                continue
            rate = sum(1 for S in sets if (e.u in S) != (e.v in S))
            if not rate:
                continue
            paid = sum((val for S, val in y.items() if (e.u in S) != (e.v in S)), Fraction(0))
            eps = (e.cost - paid) / rate
            if best is None or eps < best[0]:
                best = (eps, e.id)
        if best is None:
            raise InfeasibleError("a deficient set has no crossing edge", witness=sets[0])
        eps, eid = best
        for S in sets:
            y[S] = y.get(S, Fraction(0)) + eps
        chosen.append(eid)
    keep = list(chosen)
    for eid in reversed(chosen):
        trial = [i for i in keep if i != eid]
        if not minimal_violated_sets(graph, J, pairs, trial):
            keep = trial
    keep.sort()
    return PrimalDual(tuple(keep), graph.cost(keep), sum(y.values(), Fraction(0)))


def orient_cover(graph: MixedGraph, H: Iterable[int], pairs: Sequence[Pair]) -> dict[int, bool]:
    """Orientation of ``H`` satisfying every pair, given that ``H`` covers ``f_r``.

    2-edge-connected components become strongly connected; a bridge points
    from the side holding the sources of the pairs crossing it.
    """
    pairs = _demands(graph.n, pairs)
    sub, back = graph.edge_subgraph(H)
    dec = bridges_and_2ecc(sub)
    out: dict[int, bool] = {}
    for comp in dec.components().values():
        frag = strong_orientation(sub, comp)
        out.update({back[k]: v for k, v in frag.items()})
    for local in sorted(dec.bridges):
        X, Y = dec.sides[local]
        fwd = any(s in X and t in Y for s, t in pairs)
        bwd = any(s in Y and t in X for s, t in pairs)
        if fwd and bwd:
            raise CoverViolation("bridge carries demand both ways", witness=X)
        out[back[local]] = not bwd  # X holds the stored u end
    comp = connected_components(graph.n, ((sub.edges[i].u, sub.edges[i].v) for i in range(len(back))))
    for s, t in pairs:
        if comp[s] != comp[t]:
            raise CoverViolation(f"pair {(s, t)} is not connected",
                                 witness=frozenset(v for v in range(graph.n) if comp[v] == comp[s]))
    return out


@dataclasses.dataclass(frozen=True)
class SteinerResult:
    edges: tuple[int, ...]
    orientation: dict  # edge id -> forward, for edges of H only
    cost: Fraction
    forest: PrimalDual
    augmentation: PrimalDual

    @property
    def dual_bound(self) -> Fraction:
        """``2 * (forest dual + cover dual)``; at most four times the optimum."""
        return 2 * (self.forest.dual + self.augmentation.dual)

    def full_orientation(self, m: int) -> Orientation:
        return Orientation.from_mapping(m, self.orientation)


def steiner_forest_orientation(graph: MixedGraph, pairs: Sequence[Pair]) -> SteinerResult:
    pairs = _demands(graph.n, pairs)
    forest = steiner_forest_2approx(graph, pairs)
    aug = uncrossable_cover_2approx(graph, forest.edges, pairs)
    H = tuple(sorted(set(forest.edges) | set(aug.edges)))
    orient = orient_cover(graph, H, pairs)
    sub, back = graph.edge_subgraph(H)
    local = Orientation(tuple(orient[e] for e in back))
    if len(satisfied_pairs(sub, pairs, local)) != len(pairs):
        raise AssertionError("cover orientation misses a pair")
    return SteinerResult(H, orient, graph.cost(H), forest, aug)
