"""Core graph types and connectivity primitives.

Nodes are dense integers ``0..n-1``.  Undirected edges and directed arcs
carry dense ids of their own, so an orientation is just one boolean per
undirected edge id (``True`` = stored direction ``u -> v``).
"""
from __future__ import annotations

import dataclasses
from collections import deque
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Pair = tuple[int, int]


class GraphError(ValueError):
    """Raised on malformed instances or violated preconditions."""


class InfeasibleError(ValueError):
    """Raised when an optimisation instance has no feasible solution."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclasses.dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    cost: Fraction = Fraction(1)

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u


@dataclasses.dataclass(frozen=True)
class Arc:
    id: int
    tail: int
    head: int


def _as_cost(c) -> Fraction:
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10**9)
    return Fraction(c)


@dataclasses.dataclass(frozen=True)
class MixedGraph:
    """Undirected costed multigraph plus directed arcs on nodes ``0..n-1``."""

    n: int
    edges: tuple[Edge, ...] = ()
    arcs: tuple[Arc, ...] = ()
    allow_loops: bool = False

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "arcs", tuple(self.arcs))
        if self.n < 0:
            raise GraphError("negative node count")
        for i, e in enumerate(self.edges):
            if e.id != i:
                raise GraphError(f"edge ids must be dense, got {e.id} at {i}")
            if not (0 <= e.u < self.n and 0 <= e.v < self.n):
                raise GraphError(f"edge {e.id} endpoint out of range")
            if e.cost < 0:
                raise GraphError(f"edge {e.id} has negative cost")
            if e.u == e.v and not self.allow_loops:
                raise GraphError(f"edge {e.id} is a self-loop")
        for i, a in enumerate(self.arcs):
            if a.id != i:
                raise GraphError(f"arc ids must be dense, got {a.id} at {i}")
            if not (0 <= a.tail < self.n and 0 <= a.head < self.n):
                raise GraphError(f"arc {a.id} endpoint out of range")
            if a.tail == a.head and not self.allow_loops:
                raise GraphError(f"arc {a.id} is a self-loop")

    @classmethod
    def build(cls, n: int, edges: Iterable = (), arcs: Iterable = (),
              allow_loops: bool = False) -> "MixedGraph":
        """Build from ``(u, v)`` / ``(u, v, cost)`` tuples and ``(tail, head)`` arcs."""
        es = []
        for i, e in enumerate(edges):
            u, v = e[0], e[1]
            cost = _as_cost(e[2]) if len(e) > 2 else Fraction(1)
            es.append(Edge(i, u, v, cost))
        ars = [Arc(i, a[0], a[1]) for i, a in enumerate(arcs)]
        return cls(n, tuple(es), tuple(ars), allow_loops)

    @property
    def is_undirected(self) -> bool:
        return not self.arcs

    def cost(self, edge_ids: Iterable[int] | None = None) -> Fraction:
        ids = range(len(self.edges)) if edge_ids is None else edge_ids
        return sum((self.edges[i].cost for i in ids), Fraction(0))

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Undirected incidence lists: ``adj[x] = [(neighbour, edge id), ...]``."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append((e.v, e.id))
            if e.u != e.v:
                adj[e.v].append((e.u, e.id))
        return adj

    def edge_subgraph(self, edge_ids: Iterable[int]) -> tuple["MixedGraph", list[int]]:
        """Same node set, only the given undirected edges (renumbered).

        Returns the subgraph and the list mapping new edge id -> old edge id.
        """
        ids = sorted(set(edge_ids))
        es = [Edge(j, self.edges[i].u, self.edges[i].v, self.edges[i].cost)
              for j, i in enumerate(ids)]
        return MixedGraph(self.n, tuple(es), (), self.allow_loops), ids

    def induced_undirected(self, nodes: Iterable[int]):
        """Undirected subgraph induced by ``nodes``, relabelled densely.

        Returns ``(sub, node_ids, edge_ids)`` where ``node_ids[i]`` / ``edge_ids[j]``
        give the original id of local node ``i`` / local edge ``j``.
        """
        node_ids = sorted(set(nodes))
        local = {x: i for i, x in enumerate(node_ids)}
        edge_ids = [e.id for e in self.edges if e.u in local and e.v in local]
        es = [Edge(j, local[self.edges[i].u], local[self.edges[i].v], self.edges[i].cost)
              for j, i in enumerate(edge_ids)]
        return MixedGraph(len(node_ids), tuple(es), (), self.allow_loops), node_ids, edge_ids


@dataclasses.dataclass(frozen=True)
class Orientation:
    """Direction per undirected edge id; ``True`` means ``u -> v`` as stored."""

    forward: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "forward", tuple(bool(x) for x in self.forward))

    def __len__(self):
        return len(self.forward)

    def __bool__(self):
        return True

    def __getitem__(self, edge_id: int) -> bool:
        return self.forward[edge_id]

    @classmethod
    def all_forward(cls, m: int) -> "Orientation":
        return cls((True,) * m)

    @classmethod
    def from_mapping(cls, m: int, mapping: Mapping[int, bool], default: bool = True):
        if any(not 0 <= k < m for k in mapping):
            raise GraphError("orientation refers to an unknown edge id")
        return cls(tuple(mapping.get(i, default) for i in range(m)))

    def check(self, graph: MixedGraph) -> None:
        if len(self.forward) != len(graph.edges):
            raise GraphError(
                f"orientation covers {len(self.forward)} edges, graph has {len(graph.edges)}")

    def arcs_of(self, graph: MixedGraph) -> list[tuple[int, int]]:
        """All directed arcs of the oriented graph as ``(tail, head)`` tuples."""
        self.check(graph)
        out = [(e.u, e.v) if self.forward[e.id] else (e.v, e.u) for e in graph.edges]
        out.extend((a.tail, a.head) for a in graph.arcs)
        return out

    def labels(self) -> dict[int, str]:
        return {i: "fwd" if f else "bwd" for i, f in enumerate(self.forward)}


def check_pairs(n: int, pairs: Iterable[Pair]) -> list[Pair]:
    out = []
    for p in pairs:
        s, t = int(p[0]), int(p[1])
        if not (0 <= s < n and 0 <= t < n):
            raise GraphError(f"pair {p} has an endpoint out of range")
        out.append((s, t))
    return out


def dedupe_pairs(pairs: Iterable[Pair]) -> list[Pair]:
    """Drop duplicate pairs, keeping first-occurrence order."""
    return list(dict.fromkeys(tuple(p) for p in pairs))


# ---------------------------------------------------------------- reachability

def _out_lists(n: int, arcs: Iterable[tuple[int, int]]) -> list[list[int]]:
    out: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        out[a].append(b)
    return out


def reachable_from(n: int, arcs: Iterable[tuple[int, int]], source: int) -> list[bool]:
    out = _out_lists(n, arcs)
    seen = [False] * n
    seen[source] = True
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in out[x]:
            if not seen[y]:
                seen[y] = True
                queue.append(y)
    return seen


def satisfied_pairs(graph: MixedGraph, pairs: Sequence[Pair],
                    orientation: Orientation | None = None) -> list[Pair]:
    """Pairs ``(u, v)`` with a directed ``u -> v`` path, multiplicity preserved.

    Without an orientation the graph must be a digraph (no undirected edges).
    """
    pairs = check_pairs(graph.n, pairs)
    if orientation is None:
        if graph.edges:
            raise GraphError("graph has undirected edges; pass an orientation")
        arcs = [(a.tail, a.head) for a in graph.arcs]
    else:
        arcs = orientation.arcs_of(graph)
    out = _out_lists(graph.n, arcs)
    reach: dict[int, set[int]] = {}
    for s in dict.fromkeys(s for s, _ in pairs):
        seen = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in out[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        reach[s] = seen
    return [(s, t) for s, t in pairs if t in reach[s]]


def connected_components(n: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    """Component label per node; a component is labelled by its smallest node."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return [find(x) for x in range(n)]


# ---------------------------------------------------------------- bridges

@dataclasses.dataclass(frozen=True)
class BridgeDecomposition:
    """Bridges, 2-edge-connected components and the two sides of each bridge.

    ``component_of[v]`` is the smallest node of v's 2-edge-connected component.
    ``sides[e] = (X, Y)`` where ``X`` contains ``edges[e].u``; together they
    partition the connected component containing bridge ``e``.
    """

    bridges: frozenset[int]
    component_of: tuple[int, ...]
    sides: Mapping[int, tuple[frozenset[int], frozenset[int]]]

    def components(self) -> dict[int, list[int]]:
        comps: dict[int, list[int]] = {}
        for v, c in enumerate(self.component_of):
            comps.setdefault(c, []).append(v)
        return comps


def _dfs_lowpoints(n: int, adj, roots: Iterable[int] | None = None):
    """Iterative DFS recording discovery order, low points and tree edges.

    Parallel edges are told apart by edge id, so a doubled edge is never a bridge.
    """
    disc = [-1] * n
    low = [0] * n
    parent_edge = [-1] * n
    parent = [-1] * n
    order: list[int] = []
    counter = 0
    for root in (range(n) if roots is None else roots):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = counter
        counter += 1
        order.append(root)
        stack = [(root, iter(adj[root]))]
        while stack:
            x, it = stack[-1]
            advanced = False
            for y, eid in it:
                if eid == parent_edge[x]:
                    continue
                if disc[y] == -1:
                    disc[y] = low[y] = counter
                    counter += 1
                    parent[y] = x
                    parent_edge[y] = eid
                    order.append(y)
                    stack.append((y, iter(adj[y])))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    p = stack[-1][0]
                    low[p] = min(low[p], low[x])
    return disc, low, parent, parent_edge, order


def bridges_and_2ecc(graph: MixedGraph) -> BridgeDecomposition:
    if graph.arcs:
        raise GraphError("bridge decomposition needs an undirected graph")
    n = graph.n
    adj = graph.adjacency()
    disc, low, parent, parent_edge, order = _dfs_lowpoints(n, adj)
    bridges = set()
    for v in range(n):
        if parent_edge[v] != -1 and low[v] > disc[parent[v]]:
            bridges.add(parent_edge[v])

    comp = connected_components(
        n, ((e.u, e.v) for e in graph.edges if e.id not in bridges))
    cc = connected_components(n, ((e.u, e.v) for e in graph.edges))

    # subtree node sets via reverse preorder
    subtree: dict[int, set[int]] = {}
    children: list[list[int]] = [[] for _ in range(n)]
    for v in order:
        if parent[v] != -1:
            children[parent[v]].append(v)
    bridge_child = {parent_edge[v]: v for v in range(n) if parent_edge[v] in bridges}
    need = set(bridge_child.values())
    if need:
        for v in reversed(order):
            s = {v}
            for c in children[v]:
                s |= subtree[c]
            subtree[v] = s
    members: dict[int, set[int]] = {}
    for v in range(n):
        members.setdefault(cc[v], set()).add(v)
    sides = {}
    for eid, child in bridge_child.items():
        below = frozenset(subtree[child])
        above = frozenset(members[cc[child]] - below)
        e = graph.edges[eid]
        sides[eid] = (below, above) if e.u in below else (above, below)
    return BridgeDecomposition(frozenset(bridges), tuple(comp), sides)


def strong_orientation(graph: MixedGraph, component: Iterable[int]) -> dict[int, bool]:
    """Strongly connected orientation of a bridgeless connected node set.

    DFS orientation: tree edges point away from the root, every other edge
    points back towards the ancestor.  Only edges with both ends in the
    component are returned; self-loops are set forward.
    """
    nodes = sorted(set(component))
    if not nodes:
        return {}
    inside = set(nodes)
    adj: dict[int, list[tuple[int, int]]] = {x: [] for x in nodes}
    loops = []
    for e in graph.edges:
        if e.u in inside and e.v in inside:
            if e.u == e.v:
                loops.append(e.id)
                continue
            adj[e.u].append((e.v, e.id))
            adj[e.v].append((e.u, e.id))
    index = {x: i for i, x in enumerate(nodes)}
    ladj = [[(index[y], eid) for y, eid in adj[x]] for x in nodes]
    disc, low, parent, parent_edge, _ = _dfs_lowpoints(len(nodes), ladj, roots=[0])
    if any(d == -1 for d in disc):
        raise GraphError("component is not connected")
    result = {eid: True for eid in loops}
    for i in range(len(nodes)):
        if parent_edge[i] != -1 and low[i] > disc[parent[i]]:
            raise GraphError(f"component contains bridge {parent_edge[i]}")
    for x in nodes:
        i = index[x]
        for y, eid in adj[x]:
            if eid in result:
                continue
            j = index[y]
            if parent_edge[j] == eid and parent[j] == i:
                a, b = x, y  # tree edge, downwards
            elif parent_edge[i] == eid and parent[i] == j:
                a, b = y, x
            elif disc[i] > disc[j]:
                a, b = x, y  # non-tree edge, towards the ancestor
            else:
                a, b = y, x
            result[eid] = graph.edges[eid].u == a
    return result


# ---------------------------------------------------------------- DAGs

def topological_order(n: int, arcs: Sequence[tuple[int, int]]):
    """Kahn's algorithm on ``(tail, head)`` arcs.

    Returns ``(order, None)`` for a DAG or ``(None, cycle)`` where ``cycle``
    is a list of arc indices forming a directed cycle (a self-loop counts).
    Ties among ready nodes resolve to the smallest id.
    """
    import heapq

    indeg = [0] * n
    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, (a, b) in enumerate(arcs):
        out[a].append((b, i))
        indeg[b] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        x = heapq.heappop(ready)
        order.append(x)
        for y, _ in out[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                heapq.heappush(ready, y)
    if len(order) == n:
        return order, None
    # every remaining node has a remaining in-arc: walk backwards until repeat
    left = [indeg[v] > 0 for v in range(n)]
    into: list[int | None] = [None] * n
    for i, (a, b) in enumerate(arcs):
        if left[a] and left[b] and into[b] is None:
            into[b] = i
    start = min(v for v in range(n) if left[v])
    seen: dict[int, int] = {}
    walk = []
    x = start
    while x not in seen:
        seen[x] = len(walk)
        i = into[x]
        walk.append(i)
        x = arcs[i][0]
    cycle = walk[seen[x]:]
    cycle.reverse()
    return None, cycle


# ---------------------------------------------------------------- LCA

class LCAIndex:
    """Lowest common ancestors on a rooted forest (Euler tour + sparse table).

    With ``root`` given the input must be a spanning tree of ``0..n-1``;
    with ``root=None`` every tree of the forest is rooted at its smallest node.
    """

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], root: int | None = 0):
        if root is not None and len(edges) != n - 1:
            raise GraphError("input is not a tree")
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(edges):
            if a == b:
                raise GraphError("input is not a tree")
            adj[a].append((b, i))
            adj[b].append((a, i))
        self.n = n
        self.parent = [-1] * n
        self.parent_edge = [-1] * n
        self.depth = [0] * n
        self.tree_of = [-1] * n
        self.preorder: list[int] = []
        euler: list[int] = []
        first = [-1] * n
        roots = [root] if root is not None else range(n)
        for r in roots:
            if self.tree_of[r] != -1:
                continue
            self.tree_of[r] = r
            first[r] = len(euler)
            euler.append(r)
            self.preorder.append(r)
            stack = [(r, iter(adj[r]))]
            while stack:
                x, it = stack[-1]
                for y, eid in it:
                    if eid == self.parent_edge[x]:
                        continue
                    if self.tree_of[y] != -1:
                        raise GraphError("input is not a tree")
                    self.tree_of[y] = r
                    self.parent[y] = x
                    self.parent_edge[y] = eid
                    self.depth[y] = self.depth[x] + 1
                    first[y] = len(euler)
                    euler.append(y)
                    self.preorder.append(y)
                    stack.append((y, iter(adj[y])))
                    break
                else:
                    stack.pop()
                    if stack:
                        euler.append(stack[-1][0])
        if root is not None and len(self.preorder) != n:
            raise GraphError("input is not a tree")
        self._first = first
        self._euler = euler
        table = [euler[:]]
        span = 1
        while 2 * span <= len(euler):
            prev = table[-1]
            row = []
            for i in range(len(euler) - 2 * span + 1):
                a, b = prev[i], prev[i + span]
                row.append(a if self.depth[a] <= self.depth[b] else b)
            table.append(row)
            span *= 2
        self._table = table

    def lca(self, a: int, b: int) -> int:
        if self.tree_of[a] != self.tree_of[b]:
            raise GraphError(f"nodes {a} and {b} lie in different trees")
        i, j = sorted((self._first[a], self._first[b]))
        k = (j - i + 1).bit_length() - 1
        x, y = self._table[k][i], self._table[k][j - (1 << k) + 1]
        return x if self.depth[x] <= self.depth[y] else y

    def path_edges(self, a: int, b: int) -> list[tuple[int, bool]]:
        """Edges on the tree path from ``a`` to ``b`` as ``(edge index, upward)``."""
        c = self.lca(a, b)
        up = []
        x = a
        while x != c:
            up.append((self.parent_edge[x], True))
            x = self.parent[x]
        down = []
        x = b
        while x != c:
            down.append((self.parent_edge[x], False))
            x = self.parent[x]
        return up + down[::-1]


def lca_preprocess(n: int, edges: Sequence[tuple[int, int]], root: int = 0) -> LCAIndex:
    return LCAIndex(n, edges, root)


# ---------------------------------------------------------------- connectivity

def vertex_connectivity_value(graph: MixedGraph, s: int, t: int,
                              orientation: Orientation | None = None) -> int:
    """Maximum number of internally disjoint directed ``s -> t`` paths.

    Unit capacities on every internal node after node splitting; parallel
    direct ``s -> t`` arcs each count as a separate path.
    """
    from .flow import max_flow, split_network

    if s == t:
        raise GraphError("s and t must differ")
    if orientation is None:
        if graph.edges:
            raise GraphError("graph has undirected edges; pass an orientation")
        arcs = [(a.tail, a.head) for a in graph.arcs]
    else:
        arcs = orientation.arcs_of(graph)
    net = split_network(graph.n, s, t, arcs=[(a, b, 1, 0, None) for a, b in arcs],
                        node_caps=[1] * graph.n)
    return max_flow(net)
