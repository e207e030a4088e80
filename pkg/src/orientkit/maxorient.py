"""Maximum Pairs Orientation: approximation on the kernel and the FPT k-pairs test.

The approximation works on the tree kernel.  A centroid decomposition splits
the pairs into levels (a pair belongs to the first centroid on its path).  For
one level, every centroid's branches are labelled IN (all edges point to the
centroid) or OUT; a pair is served when its source branch is IN and its
target branch OUT.  A uniformly random labelling serves a quarter of the
level in expectation, and fixing branches one at a time by conditional
expectation does at least as well.  Only nonempty components of size >= 2
host pairs, so at most ``floor(log2 n)`` levels carry pairs, which with
``n <= 3p - 1`` gives ``p / (4 log2(3p))`` satisfied pairs.
"""
from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Sequence

from .graph import GraphError, MixedGraph, Orientation, Pair, check_pairs, satisfied_pairs
from .kernel import KernelInstance, kernelize, lift_orientation
from .oracles import default_threads
from .search import decide_tree_orientable

HALF = Fraction(1, 2)


def certified_bound(p: int) -> int:
    """``ceil(p / (4 log2(3p)))``, zero for ``p = 0``."""
    if p <= 0:
        return 0
    return math.ceil(p / (4 * math.log2(3 * p)))


@dataclasses.dataclass(frozen=True)
class CentroidLevel:
    level: int
    entries: tuple  # (centroid, component nodes, assigned pair indices)


@dataclasses.dataclass(frozen=True)
class StarLabeling:
    inward: tuple[bool, ...]  # per branch: True = IN (edges towards the centroid)
    satisfied: tuple[int, ...]
    expectations: tuple[Fraction, ...]  # conditional expectation before/after each fix


def _pair_prob(bs, bt, fixed):
    prob = Fraction(1)
    for b, want in ((bs, True), (bt, False)):
        if b is None:
            continue
        lab = fixed[b]
        if lab is None:
            prob *= HALF
        elif lab != want:
            return Fraction(0)
    return prob


def orient_star_level(branches: int, pairs: Sequence[tuple[int | None, int | None]]) -> StarLabeling:
    """Label branches of one centroid by conditional expectation.

    ``pairs`` give the branch index of source and target, ``None`` for the
    centroid itself.  Pair ``(a, b)`` is served iff branch ``a`` is IN and
    branch ``b`` is OUT.
    """
    for bs, bt in pairs:
        if bs is None and bt is None:
            raise GraphError("pair starts and ends at the centroid")
        if bs is not None and bs == bt:
            raise GraphError("pair does not pass through the centroid")
        for b in (bs, bt):
            if b is not None and not 0 <= b < branches:
                raise GraphError("branch index out of range")
    touching: list[list[int]] = [[] for _ in range(branches)]
    for i, (bs, bt) in enumerate(pairs):
        for b in {bs, bt} - {None}:
            touching[b].append(i)
    fixed: list[bool | None] = [None] * branches
    expectation = sum((_pair_prob(bs, bt, fixed) for bs, bt in pairs), Fraction(0))
    trace = [expectation]
    for b in range(branches):
        before = sum((_pair_prob(*pairs[i], fixed) for i in touching[b]), Fraction(0))
        fixed[b] = True
        e_in = sum((_pair_prob(*pairs[i], fixed) for i in touching[b]), Fraction(0))
        fixed[b] = False
        e_out = sum((_pair_prob(*pairs[i], fixed) for i in touching[b]), Fraction(0))
        fixed[b] = e_in >= e_out
        expectation += max(e_in, e_out) - before
        trace.append(expectation)
    served = tuple(i for i, (bs, bt) in enumerate(pairs) if _pair_prob(bs, bt, fixed) == 1)
    return StarLabeling(tuple(bool(x) for x in fixed), served, tuple(trace))


def centroid_levels(tree: MixedGraph, pairs: Sequence[Pair]):
    """Centroid decomposition of a forest with pairs assigned to levels.

    Returns ``(levels, info)`` where ``info[(level, centroid)]`` holds the
    branch root per neighbour and the parent pointers inside the component.
    """
    adj = tree.adjacency()
    removed = [False] * tree.n
    unassigned = set(range(len(pairs)))
    where: dict[int, list[int]] = {}
    for i, (s, t) in enumerate(pairs):
        where.setdefault(s, []).append(i)
        where.setdefault(t, []).append(i)

    def component(start):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if not removed[y] and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    comps = []
    done = set()
    for v in range(tree.n):
        if v not in done:
            c = component(v)
            done |= c
            comps.append(c)
    levels = []
    info = {}
    depth = 0
    while comps:
        entries = []
        nxt = []
        for comp in comps:
            root = min(comp)
            order, parent = [root], {root: None}
            for x in order:
                for y, _ in adj[x]:
                    if y in comp and y not in parent:
                        parent[y] = x
                        order.append(y)
            size = {x: 1 for x in comp}
            for x in reversed(order):
                if parent[x] is not None:
                    size[parent[x]] += size[x]
            total = len(comp)

            def worst(x):
                parts = [size[y] for y, _ in adj[x] if y in comp and parent.get(y) == x]
                parts.append(total - size[x])
                return max(parts)

            c = min(sorted(comp), key=worst)
            branch_of = {c: None}
            bparent = {c: None}
            branch_roots = []
            for y, eid in sorted(adj[c], key=lambda t: t[1]):
                if y not in comp or y in branch_of:
                    continue
                b = len(branch_roots)
                branch_roots.append((y, eid))
                branch_of[y] = b
                bparent[y] = (c, eid)
                stack = [y]
                while stack:
                    x = stack.pop()
                    for z, ez in adj[x]:
                        if z in comp and z not in branch_of:
                            branch_of[z] = b
                            bparent[z] = (x, ez)
                            stack.append(z)
            assigned = []
            for x in sorted(comp):
                for i in where.get(x, ()):
                    if i in unassigned:
                        s, t = pairs[i]
                        if s in comp and t in comp and (
                                branch_of[s] is None or branch_of[t] is None
                                or branch_of[s] != branch_of[t]):
                            assigned.append(i)
                            unassigned.discard(i)
            entries.append((c, frozenset(comp), tuple(sorted(assigned))))
            info[(depth, c)] = (branch_of, bparent, len(branch_roots))
            removed[c] = True
            for y, _ in adj[c]:
                if y in comp and not removed[y] and not any(y in k for k in nxt):
                    nxt.append(component(y))
        levels.append(CentroidLevel(depth, tuple(entries)))
        comps = nxt
        depth += 1
    return levels, info


@dataclasses.dataclass(frozen=True)
class ApproxResult:
    orientation: Orientation
    count: int  # satisfied pairs on the input graph
    certified_bound: int  # ceil(p'/(4 log2 3p')) + auto-satisfied
    kernel: KernelInstance
    level: int | None
    expectations: tuple[tuple[Fraction, ...], ...]


def _approx_on_kernel(inst: KernelInstance):
    tree, pairs = inst.tree, list(inst.pairs)
    if not pairs:
        return Orientation.all_forward(len(tree.edges)), None, 0, ()
    levels, info = centroid_levels(tree, pairs)
    best = None
    for lev in levels:
        served = 0
        labels = []
        traces = []
        for c, _, assigned in lev.entries:
            if not assigned:
                continue
            branch_of, _, nb = info[(lev.level, c)]
            star = orient_star_level(nb, [(branch_of[pairs[i][0]], branch_of[pairs[i][1]])
                                          for i in assigned])
            served += len(star.satisfied)
            labels.append((c, star.inward))
            traces.append(star.expectations)
        if best is None or served > best[0]:
            best = (served, lev.level, labels, traces)
    served, level, labels, traces = best
    forward = [True] * len(tree.edges)
    for c, inward in labels:
        branch_of, bparent, _ = info[(level, c)]
        for x, b in branch_of.items():
            if b is None:
                continue
            p, eid = bparent[x]
            e = tree.edges[eid]
            # IN: child -> parent (towards the centroid); OUT: parent -> child
            tail = x if inward[b] else p
            forward[eid] = e.u == tail
    return Orientation(tuple(forward)), level, served, tuple(traces)


def approx_max_orientation(graph: MixedGraph, pairs: Sequence[Pair]) -> ApproxResult:
    pairs = check_pairs(graph.n, pairs)
    inst = kernelize(graph, pairs)
    korient, level, served, traces = _approx_on_kernel(inst)
    orient = lift_orientation(korient, inst.log)
    count = len(satisfied_pairs(graph, pairs, orient))
    bound = certified_bound(len(inst.pairs)) + inst.auto_satisfied
    if count < bound or count < served + inst.auto_satisfied:
        raise AssertionError(f"approximation guarantee violated: {count} < {bound}")
    for tr in traces:
        if any(b < a for a, b in zip(tr, tr[1:])):
            raise AssertionError("conditional expectation decreased")
    return ApproxResult(orient, count, bound, inst, level, traces)


@dataclasses.dataclass(frozen=True)
class KPairsResult:
    answer: bool
    orientation: Orientation | None
    method: str  # "trivial", "approx", "enumeration"
    subsets_checked: int = 0


def decide_k_pairs(graph: MixedGraph, pairs: Sequence[Pair], k: int,
                   threads: int | None = None, batch: int = 64) -> KPairsResult:
    """Is there an orientation satisfying at least ``k`` pairs?"""
    pairs = check_pairs(graph.n, pairs)
    if k < 0:
        raise GraphError("k must be nonnegative")
    if k > len(pairs):
        return KPairsResult(False, None, "trivial")
    approx = approx_max_orientation(graph, pairs)
    inst = approx.kernel
    p = len(inst.pairs)
    if k <= approx.certified_bound or k <= approx.count:
        return KPairsResult(True, approx.orientation, "approx")
    rest = k - inst.auto_satisfied
    if rest > p:
        return KPairsResult(False, None, "enumeration")
    if not rest > p / (4 * math.log2(3 * p)):
        raise AssertionError("enumeration triggered below the approximation threshold")
    if math.comb(p, rest) > (4 * math.e * math.log2(3 * p)) ** rest:
        raise AssertionError("subset count exceeds (4e log2 3p)^k")

    kpairs = list(inst.pairs)

    def test(subset):
        return decide_tree_orientable(inst.tree, [kpairs[i] for i in subset])

    threads = threads or default_threads()
    combos = itertools.combinations(range(p), rest)
    checked = 0
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        while True:
            chunk = list(itertools.islice(combos, batch))
            if not chunk:
                break
            results = list(pool.map(test, chunk)) if pool else [test(c) for c in chunk]
            for res in results:
                checked += 1
                if isinstance(res, Orientation):
                    return KPairsResult(True, lift_orientation(res, inst.log), "enumeration", checked)
    finally:
        if pool:
            pool.shutdown()
    return KPairsResult(False, None, "enumeration", checked)
