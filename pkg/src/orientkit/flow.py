"""Capacitated flow networks: node splitting, max flow, min-cost k-flow."""
from __future__ import annotations

import dataclasses
import heapq
from collections import deque
from fractions import Fraction
from typing import Sequence

from .graph import GraphError, InfeasibleError


@dataclasses.dataclass(frozen=True)
class FlowArc:
    tail: int
    head: int
    capacity: int
    cost: Fraction = Fraction(0)
    origin: object = None
    twin: int | None = None  # antiparallel partner from the same undirected edge


@dataclasses.dataclass(frozen=True)
class FlowNetwork:
    n: int
    arcs: tuple[FlowArc, ...]
    source: int
    sink: int

    def node_in(self, v: int) -> int:
        return 2 * v

    def node_out(self, v: int) -> int:
        return 2 * v + 1


def split_network(n: int, s: int, t: int, arcs: Sequence = (), undirected: Sequence = (),
                  node_caps: Sequence[int] | None = None) -> FlowNetwork:
    """Node-split network: node ``v`` becomes ``v+ = 2v`` and ``v- = 2v+1``.

    ``arcs`` are ``(tail, head, cap, cost, origin)``; each ``undirected``
    entry ``(u, v, cap, cost, origin)`` becomes two antiparallel arcs whose
    origins are ``(origin, True)`` and ``(origin, False)``.  Internal nodes get
    an arc ``v+ -> v-`` of capacity ``node_caps[v]`` (``None`` = uncapacitated,
    no split).  The source is ``s-`` and the sink is ``t+``, so arcs into
    ``s`` and out of ``t`` are dropped.
    """
    if s == t:
        raise GraphError("s and t must differ")
    out: list[FlowArc] = []
    big = sum(int(a[2]) for a in arcs) + sum(int(e[2]) for e in undirected) + 1

    def add(a, b, cap, cost, origin, twin=None):
        if cost < 0:
            raise GraphError("negative arc cost")
        if a == t or b == s:
            return None
        out.append(FlowArc(2 * a + 1, 2 * b, int(cap), Fraction(cost), origin, twin))
        return len(out) - 1

    for v in range(n):
        if v in (s, t):
            continue
        cap = big if node_caps is None or node_caps[v] is None else int(node_caps[v])
        out.append(FlowArc(2 * v, 2 * v + 1, cap, Fraction(0), ("node", v)))
    for tail, head, cap, cost, origin in arcs:
        if tail != head:
            add(tail, head, cap, cost, origin)
    for u, v, cap, cost, origin in undirected:
        if u == v:
            continue
        i = add(u, v, cap, cost, (origin, True))
        j = add(v, u, cap, cost, (origin, False))
        if i is not None and j is not None:
            out[i] = dataclasses.replace(out[i], twin=j)
            out[j] = dataclasses.replace(out[j], twin=i)
    return FlowNetwork(2 * n, tuple(out), 2 * s + 1, 2 * t)


class _Residual:
    def __init__(self, net: FlowNetwork):
        m = len(net.arcs)
        self.head = [0] * (2 * m)
        self.cap = [0] * (2 * m)
        self.cost: list[Fraction] = [Fraction(0)] * (2 * m)
        self.adj: list[list[int]] = [[] for _ in range(net.n)]
        for i, a in enumerate(net.arcs):
            self.head[2 * i], self.cap[2 * i], self.cost[2 * i] = a.head, a.capacity, a.cost
            self.head[2 * i + 1], self.cost[2 * i + 1] = a.tail, -a.cost
            self.adj[a.tail].append(2 * i)
            self.adj[a.head].append(2 * i + 1)

    def flows(self) -> list[int]:
        return [self.cap[2 * i + 1] for i in range(len(self.cap) // 2)]

    def push(self, r: int, amount: int) -> None:
        self.cap[r] -= amount
        self.cap[r ^ 1] += amount


def max_flow(net: FlowNetwork, limit: int | None = None) -> int:
    """Edmonds-Karp maximum flow value (stops early once ``limit`` is reached)."""
    res = _Residual(net)
    total = 0
    while limit is None or total < limit:
        pred = [-1] * net.n
        pred[net.source] = -2
        queue = deque([net.source])
        while queue and pred[net.sink] == -1:
            x = queue.popleft()
            for r in res.adj[x]:
                y = res.head[r]
                if res.cap[r] > 0 and pred[y] == -1:
                    pred[y] = r
                    queue.append(y)
        if pred[net.sink] == -1:
            break
        amount = None
        y = net.sink
        while y != net.source:
            r = pred[y]
            amount = res.cap[r] if amount is None else min(amount, res.cap[r])
            y = res.head[r ^ 1]
        if limit is not None:
            amount = min(amount, limit - total)
        y = net.sink
        while y != net.source:
            r = pred[y]
            res.push(r, amount)
            y = res.head[r ^ 1]
        total += amount
    return total


@dataclasses.dataclass(frozen=True)
class FlowResult:
    flow: tuple[int, ...]
    cost: Fraction
    value: int


def min_cost_k_flow(net: FlowNetwork, k: int, cancel: bool = True) -> FlowResult:
    """Integral min-cost flow of value ``k`` by successive shortest paths.

    Dijkstra on reduced costs (arc costs must be nonnegative), ties resolved
    by node id and arc order.  With ``cancel`` the flow on antiparallel twin
    arcs is cancelled afterwards, which never raises the cost.
    """
    if k < 0:
        raise GraphError("k must be nonnegative")
    if any(a.cost < 0 for a in net.arcs):
        raise GraphError("negative arc cost")
    res = _Residual(net)
    pot: list[Fraction] = [Fraction(0)] * net.n
    value = 0
    while value < k:
        dist: list[Fraction | None] = [None] * net.n
        pred = [-1] * net.n
        dist[net.source] = Fraction(0)
        heap = [(Fraction(0), net.source)]
        done = [False] * net.n
        while heap:
            d, x = heapq.heappop(heap)
            if done[x]:
                continue
            done[x] = True
            for r in res.adj[x]:
                if res.cap[r] <= 0:
                    continue
                y = res.head[r]
                nd = d + res.cost[r] + pot[x] - pot[y]
                if dist[y] is None or nd < dist[y]:
                    dist[y] = nd
                    pred[y] = r
                    heapq.heappush(heap, (nd, y))
        if dist[net.sink] is None:
            raise InfeasibleError(f"max flow {value} is below the requested {k}", witness=value)
        far = max(d for d in dist if d is not None)
        for v in range(net.n):
            pot[v] += dist[v] if dist[v] is not None else far
        amount = k - value
        y = net.sink
        while y != net.source:
            r = pred[y]
            amount = min(amount, res.cap[r])
            y = res.head[r ^ 1]
        y = net.sink
        while y != net.source:
            r = pred[y]
            res.push(r, amount)
            y = res.head[r ^ 1]
        value += amount
    flow = res.flows()
    if cancel:
        flow = cancel_antiparallel(net, flow)
    cost = sum((a.cost * f for a, f in zip(net.arcs, flow)), Fraction(0))
    return FlowResult(tuple(flow), cost, value)


def cancel_antiparallel(net: FlowNetwork, flow: Sequence[int]) -> list[int]:
    flow = list(flow)
    for i, a in enumerate(net.arcs):
        j = a.twin
        if j is not None and i < j:
            both = min(flow[i], flow[j])
            flow[i] -= both
            flow[j] -= both
    return flow


def decompose(net: FlowNetwork, flow: Sequence[int]):
    """Split an integral flow into unit source-sink paths and leftover cycles.

    Returns ``(paths, cycles)`` as lists of arc-index lists; arcs are taken
    in index order so the decomposition is deterministic.
    """
    left = list(flow)
    out: list[list[int]] = [[] for _ in range(net.n)]
    for i, a in enumerate(net.arcs):
        out[a.tail].append(i)
    paths: list[list[int]] = []
    cycles: list[list[int]] = []

    def next_arc(x):
        for i in out[x]:
            if left[i] > 0:
                return i
        return None

    while True:
        i = next_arc(net.source)
        if i is None:
            break
        walk = []
        seen = {net.source: 0}
        x = net.source
        while x != net.sink:
            i = next_arc(x)
            if i is None:
                raise GraphError("flow is not conserved")
            walk.append(i)
            x = net.arcs[i].head
            if x in seen:
                cyc = walk[seen[x]:]
                for j in cyc:
                    left[j] -= 1
                cycles.append(cyc)
                del walk[seen[x]:]
                seen = {v: k for v, k in seen.items() if k <= seen[x]}
                continue
            seen[x] = len(walk)
        for j in walk:
            left[j] -= 1
        paths.append(walk)
    # circulations not touching the source
    for start in range(net.n):
        while next_arc(start) is not None:
            walk = []
            seen = {start: 0}
            x = start
            while True:
                i = next_arc(x)
                if i is None:
                    raise GraphError("flow is not conserved")
                walk.append(i)
                x = net.arcs[i].head
                if x in seen:
                    cyc = walk[seen[x]:]
                    for j in cyc:
                        left[j] -= 1
                    cycles.append(cyc)
                    break
                seen[x] = len(walk)
    return paths, cycles
