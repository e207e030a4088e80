"""
Two disjoint routes each way between s and t
============================================

Minimum-cost flow on a node-split network (every inner node may be used
twice) finds the cheapest subgraph.  That subgraph is then oriented so that
there are ell internally disjoint paths from s to t and from t to s.
"""

from orientkit import InfeasibleError, MixedGraph, solve_disjoint_paths_orientation
from orientkit.disjoint import check_ekm_condition

# s = 0, t = 1, four routes through nodes 2..5
edges = [(0, 2, 1), (2, 1, 1), (0, 3, 1), (3, 1, 1), (0, 4, 2), (4, 1, 2), (0, 5, 3), (5, 1, 3)]
g = MixedGraph.build(6, edges)

for ell in (1, 2, 3):
    print(f"ell = {ell}: cut condition", check_ekm_condition(g, 0, 1, ell))
    try:
        r = solve_disjoint_paths_orientation(g, 0, 1, ell)
    except InfeasibleError as exc:
        print("  infeasible:", exc)
        continue
    print("  edges", r.edges, "cost", r.cost, "kappa", r.kappa, "via", r.rung)
    for p in r.paths:
        print("  flow path through", p.nodes)
