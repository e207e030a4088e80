"""``orientkit`` command line.

Exit codes: 0 success (including a NO answer), 1 malformed input, 2 infeasible
instance, 3 verification failure, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import sys

from . import io
from .disjoint import check_ekm_condition, kappa_both, solve_disjoint_paths_orientation
from .graph import GraphError, InfeasibleError, MixedGraph, Orientation, satisfied_pairs
from .kernel import kernelize
from .maxorient import approx_max_orientation, decide_k_pairs
from .mixed import decide_mixed_orientable
from .oracles import (
    CapExceeded,
    disjoint_paths_optimum,
    is_orientable_exhaustive,
    max_orientation_value,
    steiner_orientation_optimum,
)
from .steiner import steiner_forest_orientation

EXIT_OK, EXIT_MALFORMED, EXIT_INFEASIBLE, EXIT_VERIFY, EXIT_CAP = 0, 1, 2, 3, 4


class VerificationFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_MALFORMED, f"{self.prog}: error: {message}\n")


def _verify(cond, message):
    if not cond:
        raise VerificationFailure(message)


def _sat_indices(graph, pairs, orient):
    hit = set(satisfied_pairs(graph, pairs, orient))
    return [i for i, p in enumerate(pairs) if p in hit]


def _restricted(graph: MixedGraph, H, orient: Orientation):
    sub, back = graph.edge_subgraph(H)
    return sub, Orientation(tuple(orient[e] for e in back))


def _undirected_only(inst, command):
    if inst.graph.arcs:
        raise io.MalformedInput(f"{command} does not accept directed arcs")


def _param(args, inst, key, required=True):
    val = getattr(args, key)
    if val is None:
        val = inst.params.get(key)
    if val is None and required:
        raise io.MalformedInput(f"--{key} is required (flag or instance field)")
    return val


# ------------------------------------------------------------------ commands

def cmd_steiner(args, inst):
    _undirected_only(inst, "steiner-orient")
    g, pairs = inst.graph, list(inst.pairs)
    r = steiner_forest_orientation(g, pairs)
    orient = r.full_orientation(len(g.edges))
    sub, local = _restricted(g, r.edges, orient)
    sat = _sat_indices(sub, pairs, local)
    _verify(len(sat) == len(pairs), "orientation of H misses a pair")
    _verify(g.cost(r.edges) == r.cost, "cost does not match H")
    doc = {"status": "OK", "problem": "steiner-orient", "cost": r.cost,
           "certified_bound": r.dual_bound, "edges": list(r.edges),
           "orientation": io.orientation_to_json(orient), "satisfied_pairs": sat,
           "transcript": {"forest_edges": list(r.forest.edges), "forest_cost": r.forest.cost,
                          "forest_dual": r.forest.dual,
                          "augmentation_edges": list(r.augmentation.edges),
                          "augmentation_cost": r.augmentation.cost,
                          "augmentation_dual": r.augmentation.dual}}
    if args.oracle_check:
        opt = steiner_orientation_optimum(g, pairs, max_edges=args.cap_edges or 14)
        _verify(opt is not None, "oracle finds no feasible subgraph")
        _verify(r.cost <= 4 * opt[0], f"cost {r.cost} exceeds 4 x optimum {opt[0]}")
        doc["oracle"] = {"optimum": opt[0]}
    return doc, (orient, r.edges)


def cmd_max(args, inst):
    _undirected_only(inst, "max-orient")
    g, pairs = inst.graph, list(inst.pairs)
    r = approx_max_orientation(g, pairs)
    sat = _sat_indices(g, pairs, r.orientation)
    _verify(len(sat) == r.count, "reported count differs from recount")
    doc = {"status": "OK", "problem": "max-orient", "value": r.count,
           "certified_bound": r.certified_bound,
           "orientation": io.orientation_to_json(r.orientation), "satisfied_pairs": sat,
           "transcript": {"kernel_pairs": len(r.kernel.pairs),
                          "auto_satisfied": r.kernel.auto_satisfied, "level": r.level}}
    if args.oracle_check:
        opt, _ = max_orientation_value(g, pairs, cap=args.cap_edges or 20)
        _verify(r.count <= opt, "approximation beats the exhaustive optimum")
        doc["oracle"] = {"optimum": opt}
    return doc, (r.orientation, None)


def cmd_k_pairs(args, inst):
    _undirected_only(inst, "k-pairs")
    g, pairs = inst.graph, list(inst.pairs)
    k = _param(args, inst, "k")
    r = decide_k_pairs(g, pairs, k)
    doc = {"status": "YES" if r.answer else "NO", "problem": "k-pairs", "k": k}
    if r.answer:
        sat = _sat_indices(g, pairs, r.orientation)
        _verify(len(sat) >= k, "witness satisfies fewer than k pairs")
        doc.update(value=len(sat), orientation=io.orientation_to_json(r.orientation),
                   satisfied_pairs=sat)
    doc["transcript"] = {"method": r.method, "subsets_checked": r.subsets_checked}
    if args.oracle_check:
        opt, _ = max_orientation_value(g, pairs, cap=args.cap_edges or 20)
        _verify((opt >= k) == r.answer, "decision disagrees with the exhaustive oracle")
        doc["oracle"] = {"optimum": opt}
    return doc, (r.orientation, None)


def cmd_mixed(args, inst):
    g, pairs = inst.graph, list(inst.pairs)
    r = decide_mixed_orientable(g, pairs, cap=args.cap_pairs or 4, memo=not args.no_memo)
    doc = {"status": "YES" if r else "NO", "problem": "mixed-orient"}
    if r:
        sat = _sat_indices(g, pairs, r.orientation)
        _verify(len(sat) == len(pairs), "witness misses a pair")
        doc.update(orientation=io.orientation_to_json(r.orientation), satisfied_pairs=sat)
    doc["transcript"] = {"cycle_contractions": len(r.overlay.events),
                         "overlay_nodes": len(r.overlay.components),
                         "states": r.stats.states, "memo_hits": r.stats.memo_hits,
                         "component_checks": r.stats.component_checks}
    if args.oracle_check:
        ok = is_orientable_exhaustive(g, pairs, cap=args.cap_edges or 20)
        _verify(ok == bool(r), "decision disagrees with the exhaustive oracle")
        doc["oracle"] = {"orientable": ok}
    return doc, (r.orientation, None)


def cmd_disjoint(args, inst):
    _undirected_only(inst, "disjoint-paths")
    g = inst.graph
    s, t, ell = (_param(args, inst, key) for key in ("s", "t", "ell"))
    if s >= g.n or t >= g.n:
        raise io.MalformedInput("s or t is out of range")
    r = solve_disjoint_paths_orientation(g, s, t, ell, cap=args.cap_edges or 20)
    orient = r.full_orientation(len(g.edges))
    sub, local = _restricted(g, r.edges, orient)
    kappa = kappa_both(sub, s, t, local)
    _verify(kappa == r.kappa and min(kappa) >= ell, "connectivity check failed")
    _verify(check_ekm_condition(sub, s, t, ell), "H violates the cut condition")
    doc = {"status": "OK", "problem": "disjoint-paths", "s": s, "t": t, "ell": ell,
           "cost": r.cost, "edges": list(r.edges),
           "orientation": io.orientation_to_json(orient),
           "transcript": {"kappa_st": kappa[0], "kappa_ts": kappa[1], "rung": r.rung,
                          "paths": [[eid for eid, _ in p.edges] for p in r.paths],
                          "stripped_cycles": r.stripped_cycles}}
    if args.oracle_check:
        opt = disjoint_paths_optimum(g, s, t, ell, max_edges=args.cap_edges or 12)
        _verify(opt is not None and opt[0] == r.cost, "cost differs from the exhaustive optimum")
        doc["oracle"] = {"optimum": opt[0]}
    return doc, (orient, r.edges)


def cmd_kernel(args, inst):
    _undirected_only(inst, "kernel")
    g, pairs = inst.graph, list(inst.pairs)
    k = kernelize(g, pairs)
    doc = {"status": "OK", "problem": "kernel",
           "kernel": {"nodes": k.tree.n,
                      "edges": [{"u": e.u, "v": e.v, "origin": k.edge_origin[e.id]}
                                for e in k.tree.edges],
                      "pairs": [list(p) for p in k.pairs],
                      "pair_index": list(k.pair_index),
                      "node_origin": list(k.node_origin)},
           "auto_satisfied": k.auto_satisfied,
           "dropped_pairs": [{"pair": i, "satisfied": ok} for i, ok in k.dropped_pairs],
           "log": k.log.to_json()}
    _verify(k.tree.n <= max(0, 3 * len(k.pairs) - 1), "kernel exceeds 3p'-1 nodes")
    if args.oracle_check:
        cap = args.cap_edges or 20
        a, _ = max_orientation_value(g, pairs, cap=cap)
        b, _ = max_orientation_value(k.tree, list(k.pairs), cap=cap)
        _verify(a == b + k.auto_satisfied, "kernel changes the optimum")
        doc["oracle"] = {"optimum": a, "kernel_optimum": b}
    return doc, (None, None)


def cmd_oracle(args, inst):
    g, pairs = inst.graph, list(inst.pairs)
    value, orient = max_orientation_value(g, pairs, cap=args.cap_edges or 20)
    doc = {"status": "OK", "problem": "oracle", "value": value,
           "orientation": io.orientation_to_json(orient),
           "satisfied_pairs": _sat_indices(g, pairs, orient)}
    k = _param(args, inst, "k", required=False)
    if k is not None:
        doc["k"] = k
        doc["answer"] = "YES" if value >= k else "NO"
    return doc, (orient, None)


COMMANDS = {
    "steiner-orient": cmd_steiner,
    "max-orient": cmd_max,
    "k-pairs": cmd_k_pairs,
    "mixed-orient": cmd_mixed,
    "disjoint-paths": cmd_disjoint,
    "kernel": cmd_kernel,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="PATH")
    common.add_argument("--out", metavar="PATH", help="result file (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--dot", metavar="PATH", help="also write the oriented graph as DOT")
    common.add_argument("--oracle-check", action="store_true",
                        help="cross-check against the brute-force oracle")
    common.add_argument("--cap-edges", type=int, help="edge cap for exhaustive searches")
    common.add_argument("--cap-pairs", type=int, help="pair cap for mixed-orient")

    parser = _Parser(prog="orientkit", description="Graph orientation toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--k", type=int)
        p.add_argument("--ell", type=int)
        p.add_argument("--s", type=int)
        p.add_argument("--t", type=int)
        p.add_argument("--no-memo", action="store_true", help="disable memoisation (mixed-orient)")
    g = sub.add_parser("gen", parents=[common])
    g.add_argument("--family", choices=io.FAMILIES, required=True)
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--m", type=int, help="edge count (random-connected, two-terminal)")
    g.add_argument("--p", type=int, default=3, help="number of pairs")
    g.add_argument("--comps", type=int, default=3)
    g.add_argument("--arcs", type=int, default=4)
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--max-cost", type=int, default=1)
    return parser


def _emit(args, text):
    if args.out:
        io.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "gen":
        try:
            inst = io.gen(args.family, n=args.n, seed=args.seed, m=args.m, p=args.p,
                          comps=args.comps, arcs=args.arcs, ell=args.ell, max_cost=args.max_cost)
        except GraphError as exc:
            print(f"orientkit: {exc}", file=sys.stderr)
            return EXIT_MALFORMED
        _emit(args, io.dumps(io.instance_to_dict(inst)))
        if args.dot:
            io.write_atomic(args.dot, io.export_dot(inst))
        return EXIT_OK

    code, inst, drawing = EXIT_OK, None, (None, None)
    try:
        if not args.input:
            raise io.MalformedInput("--in is required")
        inst = io.load_instance(args.input)
        doc, drawing = COMMANDS[args.command](args, inst)
    except CapExceeded as exc:
        code, doc = EXIT_CAP, {"status": "CAP_EXCEEDED", "message": str(exc)}
    except InfeasibleError as exc:
        code, doc = EXIT_INFEASIBLE, {"status": "INFEASIBLE", "message": str(exc)}
    except (VerificationFailure, AssertionError) as exc:
        code, doc = EXIT_VERIFY, {"status": "VERIFICATION_FAILED", "message": str(exc)}
    except GraphError as exc:
        code, doc = EXIT_MALFORMED, {"status": "MALFORMED", "message": str(exc)}
    if code:
        doc["problem"] = args.command
        print(f"orientkit: {doc['message']}", file=sys.stderr)
    _emit(args, io.dumps(doc))
    if args.dot and inst is not None:
        orient, edges = drawing
        io.write_atomic(args.dot, io.export_dot(inst, orient, edges))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
