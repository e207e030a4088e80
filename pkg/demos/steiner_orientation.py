"""
Cheapest subgraph that can be oriented for every pair
=====================================================

Phase one grows moats to buy a Steiner forest.  Phase two adds edges until
every cut with demand in both directions is crossed twice.  The result is
within four times the optimum, and the dual gives a certificate.
"""

from orientkit import MixedGraph, steiner_forest_orientation
from orientkit.oracles import steiner_orientation_optimum

# a cheap path 0 - 1 - 2 and an expensive detour 0 - 3 - 2
g = MixedGraph.build(4, [(0, 1, 1), (1, 2, 1), (0, 3, 4), (3, 2, 4), (1, 3, 1)])

for pairs in ([(0, 2)], [(0, 2), (2, 0)]):
    r = steiner_forest_orientation(g, pairs)
    print("pairs", pairs)
    print("  edges", r.edges, "cost", r.cost)
    print("  forest dual", r.forest.dual, "cover dual", r.augmentation.dual,
          "so the optimum is at least", r.dual_bound / 4)
    for eid in r.edges:
        e = g.edges[eid]
        tail, head = (e.u, e.v) if r.orientation[eid] else (e.v, e.u)
        print(f"  edge {eid}: {tail} -> {head}")
    print("  brute-force optimum", steiner_orientation_optimum(g, pairs)[0])
