"""ell Disjoint Paths Orientation via node-capacitated min-cost flow.

A graph has an orientation with ``ell`` internally disjoint paths from ``s``
to ``t`` and ``ell`` from ``t`` to ``s`` iff for every ``C`` of fewer than
``ell`` inner nodes ``lambda_{H-C}(s, t) >= 2(ell - |C|)``.  That condition is
equivalent to ``2 ell`` edge-disjoint ``s-t`` paths using every inner node at
most twice, so the cheapest such subgraph is the support of a min-cost
``2 ell``-flow with unit edge capacities and node capacity 2.

Finding the orientation itself is done by a ladder of attempts, each
verified by a vertex-connectivity flow: strong orientation of the
2-edge-connected pieces, then splitting the flow paths into two groups, then
exhaustive search over all orientations.
"""
from __future__ import annotations

import dataclasses
import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

import numpy as np

from .flow import FlowNetwork, FlowResult, decompose, max_flow, split_network
from .flow import min_cost_k_flow as _min_cost_k_flow
from .graph import (
    GraphError,
    MixedGraph,
    Orientation,
    bridges_and_2ecc,
    strong_orientation,
    vertex_connectivity_value,
)
from .oracles import BLOCK, CapExceeded, default_threads, disjoint_orientations, orientation_from_index

ORIENT_CAP = 20


def build_network(graph: MixedGraph, s: int, t: int, node_caps=2, k: int | None = None) -> FlowNetwork:
    """Split network of an undirected graph: unit antiparallel arcs per edge,
    ``v+ -> v-`` of capacity ``node_caps`` (an int or a per-node list) for
    inner nodes.  Arc origins are ``(edge id, forward)`` and ``("node", v)``.

    ``k`` is accepted for symmetry with the flow call and only validated.
    """
    if graph.arcs:
        raise GraphError("expected an undirected graph")
    if k is not None and k < 0:
        raise GraphError("k must be nonnegative")
    caps = [node_caps] * graph.n if isinstance(node_caps, int) or node_caps is None else list(node_caps)
    return split_network(graph.n, s, t,
                         undirected=[(e.u, e.v, 1, e.cost, e.id) for e in graph.edges],
                         node_caps=caps)


def min_cost_k_flow(net: FlowNetwork, k: int) -> FlowResult:
    """Min-cost integral ``k``-flow with antiparallel flow cancelled."""
    return _min_cost_k_flow(net, k, cancel=True)


def edge_connectivity_without(graph: MixedGraph, s: int, t: int, removed=()) -> int:
    """``lambda(s, t)`` in the graph with the ``removed`` nodes deleted."""
    removed = set(removed)
    keep = [e for e in graph.edges if e.u not in removed and e.v not in removed]
    net = split_network(graph.n, s, t, undirected=[(e.u, e.v, 1, 0, e.id) for e in keep])
    return max_flow(net)


def cut_condition_holds(graph: MixedGraph, s: int, t: int, ell: int) -> bool:
    """Direct test: ``lambda_{H-C}(s,t) >= 2(ell - |C|)`` for all small inner ``C``."""
    inner = [v for v in range(graph.n) if v not in (s, t)]
    for size in range(max(0, ell)):
        need = 2 * (ell - size)
        for C in itertools.combinations(inner, size):
            if edge_connectivity_without(graph, s, t, C) < need:
                return False
    return True


def check_ekm_condition(graph: MixedGraph, s: int, t: int, ell: int,
                        cross_check: bool | None = None) -> bool:
    """Does the flow with node capacity 2 reach ``2 ell``?

    With ``cross_check`` (default: when ``n <= 8``) the cut condition is also
    evaluated directly and a disagreement raises ``AssertionError``.
    """
    if ell <= 0:
        return True
    ok = max_flow(build_network(graph, s, t, 2), limit=2 * ell) >= 2 * ell
    if cross_check is None:
        cross_check = graph.n <= 8
    if cross_check and cut_condition_holds(graph, s, t, ell) != ok:
        raise AssertionError("flow test and cut condition disagree")
    return ok


def kappa_both(graph: MixedGraph, s: int, t: int, orient: Orientation) -> tuple[int, int]:
    return (vertex_connectivity_value(graph, s, t, orient),
            vertex_connectivity_value(graph, t, s, orient))


@dataclasses.dataclass(frozen=True)
class FlowPath:
    """One unit of flow: oriented edges ``(edge id, forward)`` and inner nodes."""

    edges: tuple[tuple[int, bool], ...]
    nodes: tuple[int, ...]


def flow_paths(net: FlowNetwork, flow: Sequence[int]):
    """Decompose into ``FlowPath`` units plus leftover cycles (arc index lists)."""
    paths, cycles = decompose(net, flow)
    out = []
    for walk in paths:
        es, ns = [], []
        for i in walk:
            origin = net.arcs[i].origin
            if origin[0] == "node":
                ns.append(origin[1])
            else:
                es.append(origin)
        out.append(FlowPath(tuple(es), tuple(ns)))
    return out, cycles


def _strong_pieces(graph: MixedGraph, s: int, t: int) -> Orientation:
    dec = bridges_and_2ecc(graph)
    forward = {}
    for comp in dec.components().values():
        forward.update(strong_orientation(graph, comp))
    for b in dec.bridges:
        X, _ = dec.sides[b]
        forward[b] = s in X or t not in X
    return Orientation.from_mapping(len(graph.edges), forward)


def _path_split(graph: MixedGraph, paths: Sequence[FlowPath], ell: int, limit: int = 256):
    """Orientations sending ``ell`` flow paths ``s -> t`` and the rest back."""
    tried = 0
    for group in itertools.combinations(range(len(paths)), ell):
        chosen = set(group)
        ok = True
        for side in (chosen, set(range(len(paths))) - chosen):
            seen = set()
            for j in side:
                if seen & set(paths[j].nodes):
                    ok = False
                seen |= set(paths[j].nodes)
        if not ok:
            continue
        forward = {}
        for j, p in enumerate(paths):
            for eid, fwd in p.edges:
                forward[eid] = fwd if j in chosen else not fwd
        yield Orientation.from_mapping(len(graph.edges), forward)
        tried += 1
        if tried >= limit:
            return


def _exhaustive(graph: MixedGraph, s: int, t: int, ell: int, cap: int, threads: int):
    m = len(graph.edges)
    if m > cap:
        raise CapExceeded(f"{m} edges exceed the orientation cap {cap}")
    total = 1 << m
    blocks = [(a, min(a + BLOCK, total)) for a in range(0, total, BLOCK)]

    def work(block):
        ok = disjoint_orientations(graph, s, t, ell, cap=cap, start=block[0], stop=block[1])
        return block[0] + int(np.argmax(ok)) if ok.any() else None

    pool = ThreadPoolExecutor(threads) if threads > 1 and len(blocks) > 1 else None
    try:
        for i in range(0, len(blocks), max(1, threads)):
            batch = blocks[i:i + max(1, threads)]
            hits = list(pool.map(work, batch)) if pool else [work(b) for b in batch]
            hits = [h for h in hits if h is not None]
            if hits:
                return orientation_from_index(min(hits), m)
    finally:
        if pool:
            pool.shutdown()
    return None


def orient_for_disjoint_paths(graph: MixedGraph, s: int, t: int, ell: int,
                              paths: Sequence[FlowPath] = (), cap: int = ORIENT_CAP,
                              threads: int | None = None) -> tuple[Orientation, str]:
    """Orientation with ``kappa >= ell`` both ways and the name of the rung that found it."""
    if s == t:
        raise GraphError("s and t must differ")

    def good(o):
        a, b = kappa_both(graph, s, t, o)
        return a >= ell and b >= ell

    o = _strong_pieces(graph, s, t)
    if good(o):
        return o, "strong"
    for o in _path_split(graph, paths, ell):
        if good(o):
            return o, "path-split"
    o = _exhaustive(graph, s, t, ell, cap, threads or default_threads())
    if o is None or not good(o):
        raise AssertionError("no orientation found although the cut condition holds")
    return o, "exhaustive"


@dataclasses.dataclass(frozen=True)
class DisjointResult:
    edges: tuple[int, ...]  # H, ids in the input graph
    orientation: dict  # edge id -> forward, for edges of H
    cost: Fraction
    kappa: tuple[int, int]  # (s -> t, t -> s) in the oriented H
    rung: str
    paths: tuple[FlowPath, ...]
    stripped_cycles: int  # zero-cost flow cycles removed from the support

    def full_orientation(self, m: int) -> Orientation:
        return Orientation.from_mapping(m, self.orientation)


def solve_disjoint_paths_orientation(graph: MixedGraph, s: int, t: int, ell: int,
                                     cap: int = ORIENT_CAP,
                                     threads: int | None = None) -> DisjointResult:
    """Cheapest subgraph with an orientation giving ``ell`` internally disjoint
    paths each way, plus that orientation (verified)."""
    if ell < 1:
        raise GraphError("ell must be at least 1")
    if not (0 <= s < graph.n and 0 <= t < graph.n) or s == t:
        raise GraphError("s and t must be distinct nodes")
    net = build_network(graph, s, t, 2)
    res = min_cost_k_flow(net, 2 * ell)
    paths, cycles = flow_paths(net, res.flow)
    for cyc in cycles:
        if any(net.arcs[i].cost for i in cyc):
            raise AssertionError("min-cost flow carries a positive-cost cycle")
    H = sorted({eid for p in paths for eid, _ in p.edges})
    cost = graph.cost(H)
    if cost != res.cost:
        raise AssertionError("support cost differs from flow cost")
    sub, back = graph.edge_subgraph(H)
    local = {eid: j for j, eid in enumerate(back)}
    lpaths = [FlowPath(tuple((local[e], f) for e, f in p.edges), p.nodes) for p in paths]
    if not check_ekm_condition(sub, s, t, ell):
        raise AssertionError("flow support violates the cut condition")
    orient, rung = orient_for_disjoint_paths(sub, s, t, ell, lpaths, cap, threads)
    kappa = kappa_both(sub, s, t, orient)
    return DisjointResult(tuple(H), {back[j]: orient[j] for j in range(len(back))}, cost,
                          kappa, rung, tuple(paths), len(cycles))
