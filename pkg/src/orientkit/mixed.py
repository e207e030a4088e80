"""P-orientability of mixed graphs in ``n^O(|P|)`` time.

First every directed cycle of the component overlay is lifted to an
ori-cycle of the mixed graph and contracted, until the overlay (one node per
connected component of the undirected part) is a DAG.  Then components are
scanned in topological order.  Each unfinished pair sits at the node where
it entered the current component; it either ends there (its target lies in
this component) or leaves by some arc.  All choices made at a component must
be jointly realisable by one orientation of the component, which is checked
with the undirected decision procedure.  The scan state is just the tuple of
current positions, so results are memoised on it.
"""
from __future__ import annotations

import dataclasses
import itertools
from collections import deque
from typing import Sequence

from .graph import Arc, Edge, GraphError, MixedGraph, Orientation, Pair, check_pairs, topological_order
from .kernel import _DSU
from .oracles import CapExceeded
from .search import Infeasible, decide_undirected_orientable

DONE = -1


@dataclasses.dataclass(frozen=True)
class CycleContraction:
    nodes: tuple[int, ...]  # original representatives merged into one node
    arcs: tuple[int, ...]  # original arc ids on the ori-cycle
    oriented: tuple[tuple[int, bool], ...]  # original edge id -> forward, cycle path edges


@dataclasses.dataclass(frozen=True)
class DagOverlay:
    """Contracted mixed graph whose component overlay is acyclic."""

    source: MixedGraph
    graph: MixedGraph  # contracted graph, dense labels
    node_of: tuple[int, ...]  # original node -> contracted node
    edge_origin: tuple[int, ...]
    arc_origin: tuple[int, ...]
    comp_of: tuple[int, ...]  # contracted node -> overlay node
    components: tuple[tuple[int, ...], ...]
    overlay_arcs: tuple[tuple[int, int], ...]  # per contracted arc: (tail comp, head comp)
    order: tuple[int, ...]  # topological order of overlay nodes
    events: tuple[CycleContraction, ...]
    pairs: tuple[Pair, ...]  # live pairs, contracted labels
    pair_index: tuple[int, ...]
    auto_satisfied: tuple[int, ...]  # original indices merged into one node

    def overlay_of(self, v: int) -> int:
        return self.comp_of[self.node_of[v]]

    def lift(self, orient: Orientation) -> Orientation:
        out: dict[int, bool] = {}
        for ev in self.events:
            out.update(dict(ev.oriented))
        for j, eid in enumerate(self.edge_origin):
            out[eid] = orient[j]
        return Orientation.from_mapping(len(self.source.edges), out)


def _components(nodes, edges):
    adj = {x: [] for x in nodes}
    for _, a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    comp = {}
    for x in sorted(nodes):
        if x in comp:
            continue
        comp[x] = x
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for z in adj[y]:
                if z not in comp:
                    comp[z] = x
                    queue.append(z)
    return comp


def _undirected_path(edges, start, goal, allowed):
    """BFS over (edge id, a, b) triples; returns [(edge id, tail, head), ...]."""
    adj = {}
    for eid, a, b in edges:
        if a in allowed and b in allowed:
            adj.setdefault(a, []).append((b, eid))
            adj.setdefault(b, []).append((a, eid))
    prev = {start: None}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x == goal:
            break
        for y, eid in sorted(adj.get(x, ()), key=lambda t: t[1]):
            if y not in prev:
                prev[y] = (x, eid)
                queue.append(y)
    if goal not in prev:
        raise GraphError("no undirected path inside a component")
    path = []
    x = goal
    while prev[x] is not None:
        y, eid = prev[x]
        path.append((eid, y, x))
        x = y
    return path[::-1]


def contract_until_dag(graph: MixedGraph, pairs: Sequence[Pair]) -> DagOverlay:
    pairs = check_pairs(graph.n, pairs)
    dsu = _DSU(graph.n)
    events = []
    while True:
        roots = sorted({dsu.find(v) for v in range(graph.n)})
        edges = [(e.id, dsu.find(e.u), dsu.find(e.v)) for e in graph.edges]
        edges = [t for t in edges if t[1] != t[2]]
        arcs = [(a.id, dsu.find(a.tail), dsu.find(a.head)) for a in graph.arcs]
        arcs = [t for t in arcs if t[1] != t[2]]
        comp = _components(roots, edges)
        croots = sorted(set(comp.values()))
        cindex = {c: i for i, c in enumerate(croots)}
        over = [(cindex[comp[a]], cindex[comp[b]]) for _, a, b in arcs]
        order, cycle = topological_order(len(croots), over)
        if cycle is None:
            break
        members = {}
        for x in roots:
            members.setdefault(cindex[comp[x]], set()).add(x)
        cyc_nodes = set()
        oriented = []
        for i, ai in enumerate(cycle):
            nxt = cycle[(i + 1) % len(cycle)]
            entry = arcs[ai][2]
            leave = arcs[nxt][1]
            c = over[ai][1]
            for eid, a, b in _undirected_path(edges, entry, leave, members[c]):
                orig = graph.edges[eid]
                oriented.append((eid, dsu.find(orig.u) == a))
                cyc_nodes.update((a, b))
            cyc_nodes.update((entry, leave))
        merged = sorted(cyc_nodes)
        for x in merged[1:]:
            dsu.union(merged[0], x)
        events.append(CycleContraction(tuple(merged), tuple(arcs[a][0] for a in cycle),
                                       tuple(oriented)))

    label = {r: i for i, r in enumerate(roots)}
    node_of = tuple(label[dsu.find(v)] for v in range(graph.n))
    on_cycle = {eid for ev in events for eid, _ in ev.oriented}
    es, eorig = [], []
    for eid, a, b in edges:
        es.append(Edge(len(es), label[a], label[b], graph.edges[eid].cost))
        eorig.append(eid)
    ars, aorig = [], []
    for aid, a, b in arcs:
        ars.append(Arc(len(ars), label[a], label[b]))
        aorig.append(aid)
    assert not on_cycle & set(eorig)
    g2 = MixedGraph(len(roots), tuple(es), tuple(ars))
    comp_of = tuple(cindex[comp[r]] for r in roots)
    comps: list[list[int]] = [[] for _ in croots]
    for x, c in enumerate(comp_of):
        comps[c].append(x)
    live, idx, auto = [], [], []
    for i, (s, t) in enumerate(pairs):
        if node_of[s] == node_of[t]:
            auto.append(i)
        else:
            live.append((node_of[s], node_of[t]))
            idx.append(i)
    return DagOverlay(graph, g2, node_of, tuple(eorig), tuple(aorig), comp_of,
                      tuple(tuple(c) for c in comps), tuple(over), tuple(order),
                      tuple(events), tuple(live), tuple(idx), tuple(auto))


@dataclasses.dataclass
class SearchStats:
    states: int = 0
    memo_hits: int = 0
    component_checks: int = 0


class _Scanner:
    def __init__(self, ov: DagOverlay, memo: bool):
        self.ov = ov
        self.memo = memo
        g = ov.graph
        self.pos = {c: i for i, c in enumerate(ov.order)}
        ncomp = len(ov.components)
        self.out_arcs: list[list[Arc]] = [[] for _ in range(ncomp)]
        for a in g.arcs:
            self.out_arcs[ov.comp_of[a.tail]].append(a)
        # overlay reachability, processed in reverse topological order
        self.reach = [set() for _ in range(ncomp)]
        for c in reversed(ov.order):
            self.reach[c].add(c)
            for a in self.out_arcs[c]:
                self.reach[c] |= self.reach[ov.comp_of[a.head]]
        self.subgraphs = {}
        self.checks = {}
        self.table = {}
        self.stats = SearchStats()

    def component(self, c):
        if c not in self.subgraphs:
            self.subgraphs[c] = self.ov.graph.induced_undirected(self.ov.components[c])
        return self.subgraphs[c]

    def check(self, c, demands):
        key = (c, tuple(sorted(set(demands))))
        if self.memo and key in self.checks:
            return self.checks[key]
        self.stats.component_checks += 1
        sub, nodes, _ = self.component(c)
        local = {x: i for i, x in enumerate(nodes)}
        res = decide_undirected_orientable(sub, [(local[a], local[b]) for a, b in key[1]])
        res = res if isinstance(res, Orientation) else None
        if self.memo:
            self.checks[key] = res
        return res

    def solve(self, cur: tuple[int, ...]):
        """Plan ``[(component, fragment orientation), ...]`` or ``None``."""
        if self.memo and cur in self.table:
            self.stats.memo_hits += 1
            return self.table[cur]
        self.stats.states += 1
        result = self._solve(cur)
        if self.memo:
            self.table[cur] = result
        return result

    def _solve(self, cur):
        ov = self.ov
        active = [i for i, x in enumerate(cur) if x != DONE]
        if not active:
            return []
        c = min((ov.comp_of[cur[i]] for i in active), key=self.pos.__getitem__)
        here = [i for i in active if ov.comp_of[cur[i]] == c]
        options = []
        for i in here:
            target = ov.pairs[i][1]
            tc = ov.comp_of[target]
            opts = [None] if tc == c else []
            opts.extend(a for a in self.out_arcs[c] if tc in self.reach[ov.comp_of[a.head]])
            if not opts:
                return None
            options.append(opts)
        for choice in itertools.product(*options):
            demands = []
            nxt = list(cur)
            for i, a in zip(here, choice):
                if a is None:
                    demands.append((cur[i], ov.pairs[i][1]))
                    nxt[i] = DONE
                else:
                    demands.append((cur[i], a.tail))
                    nxt[i] = a.head
            frag = self.check(c, demands)
            if frag is None:
                continue
            rest = self.solve(tuple(nxt))
            if rest is not None:
                return [(c, frag)] + rest
        return None


@dataclasses.dataclass(frozen=True)
class MixedResult:
    orientation: Orientation | None
    overlay: DagOverlay
    stats: SearchStats

    def __bool__(self):
        return self.orientation is not None


def decide_mixed_orientable(graph: MixedGraph, pairs: Sequence[Pair], cap: int = 4,
                            memo: bool = True) -> MixedResult:
    """Decide whether some orientation satisfies every pair; witness on YES."""
    pairs = check_pairs(graph.n, pairs)
    if len(pairs) > cap:
        raise CapExceeded(f"{len(pairs)} pairs exceed the cap {cap}")
    ov = contract_until_dag(graph, pairs)
    scan = _Scanner(ov, memo)
    plan = scan.solve(tuple(s for s, _ in ov.pairs))
    if plan is None:
        return MixedResult(None, ov, scan.stats)
    forward = [True] * len(ov.graph.edges)
    for c, frag in plan:
        _, _, edge_ids = scan.component(c)
        for j, eid in enumerate(edge_ids):
            forward[eid] = frag[j]
    return MixedResult(ov.lift(Orientation(tuple(forward))), ov, scan.stats)


def component_demand_check(component: MixedGraph,
                           demands: Sequence[Pair]) -> Orientation | Infeasible:
    """Can a connected undirected component route every (entry, exit) demand?"""
    return decide_undirected_orientable(component, demands)
