"""Tree kernel for (maximum / k) pairs orientation.

``contract_to_tree`` collapses 2-edge-connected components, ``reduce``
contracts every edge used by at most one pair and suppresses chains of
degree-2 nodes that are not pair endpoints.  The result has at most
``3p' - 1`` nodes for ``p'`` surviving pairs.  Every step is written to a
``ContractionLog`` so an orientation of the kernel lifts back to the input.

Path counts use the subtree-sum identity: for a tree edge from parent ``u``
to child ``v``, the number of pairs routed over it is the sum of
``a(x) = #(x as endpoint) - 2 * #(x as lca)`` over the subtree of ``v``
(the child), not of ``u``.
"""
from __future__ import annotations

import dataclasses
from typing import Sequence

from .graph import (
    GraphError,
    LCAIndex,
    MixedGraph,
    Orientation,
    Pair,
    bridges_and_2ecc,
    check_pairs,
    connected_components,
    strong_orientation,
    Edge,
)


@dataclasses.dataclass(frozen=True)
class MergeComponent:
    survivor: int
    absorbed: tuple[int, ...]
    edges: tuple[int, ...]


@dataclasses.dataclass(frozen=True)
class ContractEdge:
    edge: int
    survivor: int
    absorbed: int
    path_count: int
    forward: bool  # direction given to the edge when lifting


@dataclasses.dataclass(frozen=True)
class SuppressDegree2:
    node: int
    kept: int
    removed: int
    kept_u_at_node: bool
    removed_u_at_node: bool


@dataclasses.dataclass
class ContractionLog:
    """Ordered contraction events in original node / edge ids."""

    graph: MixedGraph
    events: list = dataclasses.field(default_factory=list)
    kernel_edges: tuple[int, ...] = ()

    def to_json(self) -> list[dict]:
        out = []
        for ev in self.events:
            rec = {"type": type(ev).__name__}
            rec.update(dataclasses.asdict(ev))
            for k, v in rec.items():
                if isinstance(v, tuple):
                    rec[k] = list(v)
            out.append(rec)
        return out


@dataclasses.dataclass(frozen=True)
class KernelInstance:
    tree: MixedGraph
    pairs: tuple[Pair, ...]
    pair_index: tuple[int, ...]  # original pair index of each kernel pair
    dropped_pairs: tuple[tuple[int, bool], ...]  # (original index, satisfied)
    node_origin: tuple[int, ...]  # representative original node per kernel node
    log: ContractionLog

    @property
    def edge_origin(self) -> tuple[int, ...]:
        return self.log.kernel_edges

    @property
    def auto_satisfied(self) -> int:
        return sum(1 for _, ok in self.dropped_pairs if ok)

    @property
    def unsatisfiable(self) -> tuple[int, ...]:
        return tuple(i for i, ok in self.dropped_pairs if not ok)


class _DSU:
    """Union-find whose root is always the smallest member."""

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return ra


def _build(group: Sequence[int], keep: set[int], edges: Sequence[tuple[int, int, int]],
           edge_orig: Sequence[int], node_origin: Sequence[int],
           pairs, log: ContractionLog, dropped) -> KernelInstance:
    """Relabel surviving groups densely (ordered by original id).

    ``edges`` are ``(source edge id, end u, end v)`` in source labels with
    ``u`` the end matching the original edge's stored ``u``.
    """
    roots = sorted(keep, key=lambda r: node_origin[r])
    label = {r: i for i, r in enumerate(roots)}
    kedges = []
    korig = []
    for j, (eid, a, b) in enumerate(sorted(edges, key=lambda e: edge_orig[e[0]])):
        orig = edge_orig[eid]
        kedges.append(Edge(j, label[group[a]], label[group[b]], log.graph.edges[orig].cost))
        korig.append(orig)
    tree = MixedGraph(len(roots), tuple(kedges), ())
    kpairs, kidx = [], []
    for idx, (s, t) in pairs:
        kpairs.append((label[group[s]], label[group[t]]))
        kidx.append(idx)
    new_log = ContractionLog(log.graph, list(log.events), tuple(korig))
    return KernelInstance(tree, tuple(kpairs), tuple(kidx), tuple(sorted(dropped)),
                          tuple(node_origin[r] for r in roots), new_log)


def contract_to_tree(graph: MixedGraph, pairs: Sequence[Pair]) -> KernelInstance:
    """Collapse each 2-edge-connected component to a node.

    Pairs inside one component are dropped as satisfied, pairs across
    connected components are dropped as unsatisfiable.
    """
    if graph.arcs:
        raise GraphError("kernelisation needs an undirected graph")
    pairs = check_pairs(graph.n, pairs)
    dec = bridges_and_2ecc(graph)
    group = list(dec.component_of)
    cc = connected_components(graph.n, ((e.u, e.v) for e in graph.edges))
    log = ContractionLog(graph)
    members: dict[int, list[int]] = {}
    for v, c in enumerate(group):
        members.setdefault(c, []).append(v)
    internal: dict[int, list[int]] = {}
    for e in graph.edges:
        if e.id not in dec.bridges:
            internal.setdefault(group[e.u], []).append(e.id)
    for c in sorted(members):
        if len(members[c]) > 1 or c in internal:
            log.events.append(MergeComponent(c, tuple(members[c][1:]), tuple(internal.get(c, ()))))
    live, dropped = [], []
    for i, (s, t) in enumerate(pairs):
        if cc[s] != cc[t]:
            dropped.append((i, False))
        elif group[s] == group[t]:
            dropped.append((i, True))
        else:
            live.append((i, (s, t)))
    edges = [(eid, graph.edges[eid].u, graph.edges[eid].v) for eid in sorted(dec.bridges)]
    return _build(group, set(group), edges, range(len(graph.edges)), range(graph.n),
                  live, log, dropped)


def _directional_counts(tree: MixedGraph, pairs: Sequence[Pair]):
    """Per edge: pairs crossing it upwards and downwards (forest rooted at min nodes)."""
    lca = LCAIndex(tree.n, [(e.u, e.v) for e in tree.edges], root=None)
    up_at = [0] * tree.n
    down_at = [0] * tree.n
    for s, t in pairs:
        c = lca.lca(s, t)
        up_at[s] += 1
        up_at[c] -= 1
        down_at[t] += 1
        down_at[c] -= 1
    for v in reversed(lca.preorder):
        p = lca.parent[v]
        if p != -1:
            up_at[p] += up_at[v]
            down_at[p] += down_at[v]
    up = [0] * len(tree.edges)
    down = [0] * len(tree.edges)
    child = [-1] * len(tree.edges)
    for v in range(tree.n):
        e = lca.parent_edge[v]
        if e != -1:
            up[e], down[e], child[e] = up_at[v], down_at[v], v
    return up, down, child


def path_counts(tree: MixedGraph, pairs: Sequence[Pair]) -> dict[int, int]:
    """Number of pairs whose tree path uses each edge (linear time)."""
    pairs = check_pairs(tree.n, pairs)
    up, down, _ = _directional_counts(tree, pairs)
    return {e.id: up[e.id] + down[e.id] for e in tree.edges}


def reduce(inst: KernelInstance) -> KernelInstance:
    """Contract edges with path count <= 1, then suppress degree-2 chains."""
    tree = inst.tree
    pairs = list(inst.pairs)
    up, down, child = _directional_counts(tree, pairs)
    log = ContractionLog(inst.log.graph, list(inst.log.events), inst.log.kernel_edges)
    orig = inst.log.kernel_edges
    origin = inst.node_origin
    dsu = _DSU(tree.n)
    kept_edges = []
    for e in tree.edges:
        pc = up[e.id] + down[e.id]
        if pc <= 1:
            c = child[e.id]
            if pc == 1:
                # the single pair moves child -> parent when counted upwards
                forward = (e.u == c) == (up[e.id] == 1)
            else:
                forward = True
            ra, rb = dsu.find(e.u), dsu.find(e.v)
            r = dsu.union(ra, rb)
            log.events.append(ContractEdge(orig[e.id], origin[r], origin[rb if r == ra else ra],
                                           pc, forward))
        else:
            kept_edges.append(e)

    live, dropped = [], list(inst.dropped_pairs)
    for idx, (s, t) in zip(inst.pair_index, pairs):
        if dsu.find(s) == dsu.find(t):
            dropped.append((idx, True))
        else:
            live.append((idx, (s, t)))
    endpoints = {dsu.find(x) for _, st in live for x in st}

    inc: dict[int, list] = {}
    for e in kept_edges:
        inc.setdefault(dsu.find(e.u), []).append(e)
        inc.setdefault(dsu.find(e.v), []).append(e)

    def internal(x):
        return len(inc.get(x, ())) == 2 and x not in endpoints

    seen_edges: set[int] = set()
    suppress_events = []
    dropped_edges: set[int] = set()
    for x in sorted(inc, key=lambda r: origin[r]):
        if internal(x):
            continue
        for first in inc[x]:
            if first.id in seen_edges:
                continue
            # walk the chain starting at end x over internal nodes
            chain_edges = [first]
            chain_nodes = []
            seen_edges.add(first.id)
            cur = x
            e = first
            while True:
                a, b = dsu.find(e.u), dsu.find(e.v)
                nxt = b if a == cur else a
                if not internal(nxt):
                    break
                chain_nodes.append(nxt)
                e = inc[nxt][0] if inc[nxt][1].id == e.id else inc[nxt][1]
                chain_edges.append(e)
                seen_edges.add(e.id)
                cur = nxt
            if not chain_nodes:
                continue
            keep = min(range(len(chain_edges)), key=lambda i: orig[chain_edges[i].id])
            evs = []
            # node chain_nodes[j] sits between chain_edges[j] and chain_edges[j+1]
            for j in range(keep):  # left of the kept edge, outermost first
                node = chain_nodes[j]
                kept_e, rem_e = chain_edges[j + 1], chain_edges[j]
                evs.append((node, kept_e, rem_e))
            for j in range(len(chain_nodes) - 1, keep - 1, -1):  # right side, outermost first
                node = chain_nodes[j]
                kept_e, rem_e = chain_edges[j], chain_edges[j + 1]
                evs.append((node, kept_e, rem_e))
            for node, kept_e, rem_e in evs:
                suppress_events.append(SuppressDegree2(
                    origin[node], orig[kept_e.id], orig[rem_e.id],
                    dsu.find(kept_e.u) == node, dsu.find(rem_e.u) == node))
                dropped_edges.add(rem_e.id)
    for e in kept_edges:
        if e.id in dropped_edges:
            dsu.union(e.u, e.v)
    log.events.extend(suppress_events)

    final_edges = [e for e in kept_edges if e.id not in dropped_edges]
    group = [dsu.find(v) for v in range(tree.n)]
    keep_nodes = {group[e.u] for e in final_edges} | {group[e.v] for e in final_edges}
    keep_nodes |= {group[x] for _, st in live for x in st}
    edges = [(e.id, e.u, e.v) for e in final_edges]
    out = _build(group, keep_nodes, edges, orig, origin, live, log, dropped)
    p = len(out.pairs)
    if p and out.tree.n > 3 * p - 1:
        raise AssertionError(f"kernel has {out.tree.n} nodes for {p} pairs")
    return out


def kernelize(graph: MixedGraph, pairs: Sequence[Pair]) -> KernelInstance:
    return reduce(contract_to_tree(graph, pairs))


def lift_orientation(kernel_orient: Orientation, log: ContractionLog) -> Orientation:
    """Orientation of the original graph from one of the kernel tree.

    Every kernel pair satisfied by ``kernel_orient`` stays satisfied, and so
    does every pair dropped as satisfied during contraction.
    """
    if len(kernel_orient) != len(log.kernel_edges):
        raise GraphError("orientation does not match the contraction log")
    g = log.graph
    out: dict[int, bool] = {}
    for j, eid in enumerate(log.kernel_edges):
        out[eid] = kernel_orient[j]
    for ev in reversed(log.events):
        if isinstance(ev, SuppressDegree2):
            if ev.kept not in out:
                raise GraphError("contraction log replays out of order")
            kept_head_at_node = out[ev.kept] != ev.kept_u_at_node
            out[ev.removed] = ev.removed_u_at_node if kept_head_at_node else not ev.removed_u_at_node
        elif isinstance(ev, ContractEdge):
            out[ev.edge] = ev.forward
        elif isinstance(ev, MergeComponent):
            out.update(strong_orientation(g, (ev.survivor,) + ev.absorbed))
    return Orientation.from_mapping(len(g.edges), out)
