"""
Mixed graphs: some streets are already one-way
==============================================

Arcs are fixed.  Cycles that could be oriented into a directed cycle are
contracted first, leaving a DAG of components, and then a scan over pair
positions in topological order decides the rest.
"""

from orientkit import MixedGraph, decide_mixed_orientable, satisfied_pairs

# arc 0 -> 1 closes a cycle with the streets 1 - 2 - 0; arc 2 -> 3 leaves it; street 3 - 4
g = MixedGraph.build(5, edges=[(1, 2), (2, 0), (3, 4)], arcs=[(0, 1), (2, 3)])

for pairs in ([(1, 0), (0, 4)], [(0, 4), (4, 3)], [(3, 0)]):
    r = decide_mixed_orientable(g, pairs)
    print(pairs, "->", "YES" if r else "NO")
    ov = r.overlay
    groups = {}
    for v in range(g.n):
        groups.setdefault(ov.overlay_of(v), []).append(v)
    print("   cycles contracted:", [ev.nodes for ev in ov.events])
    print("   overlay nodes in topological order:", [groups[c] for c in ov.order])
    if r:
        print("   orientation:", r.orientation.forward)
        print("   satisfied:", satisfied_pairs(g, pairs, r.orientation))
