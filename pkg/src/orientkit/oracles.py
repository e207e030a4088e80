"""Exhaustive ground-truth solvers for desk-scale instances.

All orientations of ``m`` undirected edges are indexed ``0..2**m-1``; bit
``m-1-i`` of the index set means edge ``i`` is reversed, so increasing index
is lexicographic order on direction vectors (forward < backward).
Reachability for a whole block of orientations is computed at once with
bit-packed rows (Warshall's algorithm on ``uint64`` masks).
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

import numpy as np

from .graph import GraphError, MixedGraph, Orientation, Pair, check_pairs, connected_components

BLOCK = 1 << 14


class CapExceeded(GraphError):
    """Raised when an exhaustive search would exceed its configured cap."""


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("ORIENTKIT_THREADS", "1")))
    except ValueError:
        return 1


def orientation_from_index(index: int, m: int) -> Orientation:
    return Orientation(tuple(not (index >> (m - 1 - i)) & 1 for i in range(m)))


def _compact(n: int, edges, arcs, extra_nodes):
    used = sorted({x for e in edges for x in e} | {x for a in arcs for x in a} | set(extra_nodes))
    return {x: i for i, x in enumerate(used)}


def reach_block(n: int, edges: Sequence[tuple[int, int]], arcs: Sequence[tuple[int, int]],
                start: int, stop: int, removed: int = 0) -> np.ndarray:
    """Reachability masks for orientations ``start..stop-1``.

    Returns an array of shape ``(stop-start, n)``; bit ``y`` of ``R[c, x]``
    is set iff ``x`` reaches ``y``.  Nodes in the ``removed`` bitmask are
    deleted (they reach only themselves and nothing passes through them).
    """
    if n > 64:
        raise CapExceeded("bit-packed reachability supports at most 64 nodes")
    m = len(edges)
    idx = np.arange(start, stop, dtype=np.int64)
    one = np.uint64(1)
    bits = [np.uint64(1 << x) for x in range(n)]
    R = np.zeros((len(idx), n), dtype=np.uint64)
    for x in range(n):
        R[:, x] = bits[x]
    keep = [not (removed >> x) & 1 for x in range(n)]
    for a, b in arcs:
        if keep[a] and keep[b]:
            R[:, a] |= bits[b]
    for i, (u, v) in enumerate(edges):
        if not (keep[u] and keep[v]):
            continue
        back = ((idx >> (m - 1 - i)) & 1).astype(bool)
        R[:, u] |= np.where(back, np.uint64(0), bits[v])
        R[:, v] |= np.where(back, bits[u], np.uint64(0))
    for k in range(n):
        if not keep[k]:
            continue
        has = (R >> np.uint64(k)) & one
        R |= np.where(has.astype(bool), R[:, k:k + 1], np.uint64(0))
    return R


def pair_hits(R: np.ndarray, pairs: Sequence[Pair]) -> np.ndarray:
    """Number of satisfied pairs per orientation row of ``R``."""
    total = np.zeros(R.shape[0], dtype=np.int64)
    for s, t in pairs:
        total += ((R[:, s] >> np.uint64(t)) & np.uint64(1)).astype(np.int64)
    return total


def _blocks(m: int):
    size = 1 << m
    return [(a, min(a + BLOCK, size)) for a in range(0, size, BLOCK)]


def max_orientation_value(graph: MixedGraph, pairs: Sequence[Pair], cap: int = 20,
                          threads: int | None = None) -> tuple[int, Orientation]:
    """Best ``|P[D]|`` over all orientations; ties go to the lexicographically smallest."""
    pairs = check_pairs(graph.n, pairs)
    m = len(graph.edges)
    if m > cap:
        raise CapExceeded(f"{m} undirected edges exceed the oracle cap {cap}")
    edges = [(e.u, e.v) for e in graph.edges]
    arcs = [(a.tail, a.head) for a in graph.arcs]
    loc = _compact(graph.n, edges, arcs, [x for p in pairs for x in p])
    edges = [(loc[u], loc[v]) for u, v in edges]
    arcs = [(loc[a], loc[b]) for a, b in arcs]
    lp = [(loc[s], loc[t]) for s, t in pairs]
    n = len(loc)

    def work(block):
        R = reach_block(n, edges, arcs, *block)
        hits = pair_hits(R, lp)
        j = int(np.argmax(hits))
        return int(hits[j]), block[0] + j

    threads = threads or default_threads()
    blocks = _blocks(m)
    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]
    best_val, best_idx = max(results, key=lambda r: (r[0], -r[1]))
    return best_val, orientation_from_index(best_idx, m)


def is_orientable_exhaustive(graph: MixedGraph, pairs: Sequence[Pair], cap: int = 20) -> bool:
    value, _ = max_orientation_value(graph, pairs, cap=cap, threads=1)
    return value == len(pairs)


# ------------------------------------------------------------ Steiner orientation

def _subsets_by_cost(graph: MixedGraph, max_edges: int):
    m = len(graph.edges)
    if m > max_edges:
        raise CapExceeded(f"{m} edges exceed the subset-enumeration cap {max_edges}")
    costs = [graph.edges[i].cost for i in range(m)]
    subsets = []
    for mask in range(1 << m):
        ids = [i for i in range(m) if (mask >> i) & 1]
        subsets.append((sum((costs[i] for i in ids), Fraction(0)), len(ids), mask, ids))
    subsets.sort(key=lambda x: (x[0], x[1], x[2]))
    return subsets


def steiner_orientation_optimum(graph: MixedGraph, pairs: Sequence[Pair],
                                max_edges: int = 14):
    """Cheapest edge set admitting an orientation that satisfies every pair.

    Returns ``(cost, edge ids, Orientation of that subgraph)`` or ``None``.
    """
    pairs = [p for p in check_pairs(graph.n, pairs) if p[0] != p[1]]
    for cost, _, _, ids in _subsets_by_cost(graph, max_edges):
        comp = connected_components(graph.n, ((graph.edges[i].u, graph.edges[i].v) for i in ids))
        if any(comp[s] != comp[t] for s, t in pairs):
            continue
        sub, _ = graph.edge_subgraph(ids)
        value, orient = max_orientation_value(sub, pairs, cap=max_edges, threads=1)
        if value == len(pairs):
            return cost, ids, orient
    return None


def cut_requirement(pairs: Sequence[Pair], X: int) -> int:
    """``f_r(X)`` for bitmask ``X``: forward-crossing demand plus backward-crossing demand."""
    fwd = any((X >> s) & 1 and not (X >> t) & 1 for s, t in pairs)
    bwd = any((X >> t) & 1 and not (X >> s) & 1 for s, t in pairs)
    return int(fwd) + int(bwd)


def cut_degree(edges: Sequence[tuple[int, int]], X: int) -> int:
    return sum(1 for u, v in edges if ((X >> u) & 1) != ((X >> v) & 1))


def covers_requirement(n: int, edges: Sequence[tuple[int, int]], pairs: Sequence[Pair]) -> bool:
    """Brute force: ``d_H(X) >= f_r(X)`` for every node set ``X``."""
    full = (1 << n) - 1
    for X in range(1, full):
        if cut_degree(edges, X) < cut_requirement(pairs, X):
            return False
    return True


def minimal_deficient_sets(n: int, edges: Sequence[tuple[int, int]],
                           pairs: Sequence[Pair]) -> list[frozenset[int]]:
    """Inclusion-minimal ``X`` with ``f_r(X) - d_H(X) == 1`` by enumerating all sets."""
    full = (1 << n) - 1
    found = [X for X in range(1, full)
             if cut_requirement(pairs, X) - cut_degree(edges, X) == 1]
    minimal = [X for X in found if not any(Y != X and Y & X == Y for Y in found)]
    return sorted((frozenset(x for x in range(n) if (X >> x) & 1) for X in minimal),
                  key=lambda s: sorted(s))


def min_cover_of_sets(graph: MixedGraph, allowed: Sequence[int],
                      sets: Sequence[frozenset[int]]):
    """Cheapest subset of ``allowed`` edges crossing every given node set."""
    best = None
    allowed = list(allowed)
    for r in range(len(allowed) + 1):
        for combo in itertools.combinations(allowed, r):
            ok = all(any((graph.edges[i].u in S) != (graph.edges[i].v in S) for i in combo)
                     for S in sets)
            if ok:
                c = graph.cost(combo)
                if best is None or c < best[0]:
                    best = (c, list(combo))
    return best


# ------------------------------------------------------------ disjoint paths

def kappa_at_least(R_fn, n: int, s: int, t: int, ell: int, direct: np.ndarray,
                   count: int) -> np.ndarray:
    """Menger test ``kappa(s, t) >= ell`` per orientation via vertex cuts.

    ``R_fn(removed)`` returns reachability masks with the given node set
    deleted and direct ``s -> t`` arcs ignored; ``direct`` counts direct arcs.
    """
    ok = np.ones(count, dtype=bool)
    inner = [x for x in range(n) if x not in (s, t)]
    need = ell - direct  # vertex-cut size required among non-direct paths
    for size in range(0, max(0, ell)):
        for C in itertools.combinations(inner, size):
            rem = sum(1 << x for x in C)
            R = R_fn(rem)
            reach = ((R[:, s] >> np.uint64(t)) & np.uint64(1)).astype(bool)
            # a cut of this size only matters where fewer paths are still required
            ok &= reach | (need <= size)
    return ok


def disjoint_orientations(graph: MixedGraph, s: int, t: int, ell: int,
                          cap: int = 20, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Boolean per orientation index in ``[start, stop)``: ``kappa(s,t) >= ell``
    and ``kappa(t,s) >= ell``."""
    m = len(graph.edges)
    if m > cap:
        raise CapExceeded(f"{m} edges exceed the orientation cap {cap}")
    n = graph.n
    stop = 1 << m if stop is None else stop
    size = stop - start
    idx = np.arange(start, stop, dtype=np.int64)
    st_direct = np.zeros(size, dtype=np.int64)
    ts_direct = np.zeros(size, dtype=np.int64)
    rest = []
    for i, e in enumerate(graph.edges):
        if {e.u, e.v} == {s, t}:
            back = ((idx >> (m - 1 - i)) & 1).astype(bool)
            goes_st = back != (e.u == s)
            st_direct += goes_st
            ts_direct += ~goes_st
            rest.append(None)
        else:
            rest.append((e.u, e.v))
    # direct s-t edges are removed by deleting them from reachability: keep
    # their index bit positions by substituting a harmless self-pair
    edges = [r if r is not None else (s, s) for r in rest]
    cache = {}

    def R_fn(removed):
        if removed not in cache:
            cache[removed] = reach_block(n, edges, [], start, stop, removed)
        return cache[removed]

    a = kappa_at_least(R_fn, n, s, t, ell, st_direct, size)
    b = kappa_at_least(R_fn, n, t, s, ell, ts_direct, size)
    return a & b


def disjoint_paths_optimum(graph: MixedGraph, s: int, t: int, ell: int, max_edges: int = 12):
    """Cheapest subgraph with an orientation having ``ell`` internally disjoint
    paths each way; ``(cost, edge ids, Orientation)`` or ``None``."""
    for cost, _, _, ids in _subsets_by_cost(graph, max_edges):
        comp = connected_components(graph.n, ((graph.edges[i].u, graph.edges[i].v) for i in ids))
        if comp[s] != comp[t]:
            continue
        deg_s = sum(1 for i in ids if s in (graph.edges[i].u, graph.edges[i].v))
        deg_t = sum(1 for i in ids if t in (graph.edges[i].u, graph.edges[i].v))
        if deg_s < 2 * ell or deg_t < 2 * ell:
            continue
        sub, _ = graph.edge_subgraph(ids)
        ok = disjoint_orientations(sub, s, t, ell, cap=max_edges)
        if ok.any():
            return cost, ids, orientation_from_index(int(np.argmax(ok)), len(ids))
    return None
