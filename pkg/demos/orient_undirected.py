"""
Orienting an undirected graph for a set of pairs
================================================

Two triangles joined by a single road.  Inside each triangle any pair can
be served both ways; the road between them can carry traffic one way only.
"""

from orientkit import MixedGraph, bridges_and_2ecc, decide_undirected_orientable, satisfied_pairs

# triangles {0,1,2} and {3,4,5}, bridge 2 - 3
g = MixedGraph.build(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])

dec = bridges_and_2ecc(g)
print("bridges:", sorted(dec.bridges))
print("2-edge-connected components:", dec.components())

# every pair travels left to right: orientable
pairs = [(0, 4), (1, 5), (3, 5), (5, 3)]
res = decide_undirected_orientable(g, pairs)
print("left to right:", bool(res))
for e in g.edges:
    tail, head = (e.u, e.v) if res[e.id] else (e.v, e.u)
    print(f"  edge {e.id}: {tail} -> {head}")
print("satisfied:", satisfied_pairs(g, pairs, res))

# one pair going back across the bridge makes it impossible
res = decide_undirected_orientable(g, pairs + [(4, 1)])
print("with (4, 1):", bool(res), "clashing pairs", res.pairs, "on edge", res.edge)
