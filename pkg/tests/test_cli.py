import json
import os
import subprocess
import sys
from fractions import Fraction

import pydot
import pytest

from orientkit import cli, io
from orientkit.disjoint import check_ekm_condition, kappa_both
from orientkit.graph import GraphError, MixedGraph, Orientation, satisfied_pairs, topological_order
from orientkit.mixed import contract_until_dag


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(argv):
    return cli.run([str(a) for a in argv])


def result(tmp_path, argv, name="out.json"):
    out = tmp_path / name
    code = run(list(argv) + ["--out", out])
    return code, json.loads(out.read_text())


PATH3 = {"nodes": 3, "edges": [{"u": 0, "v": 1}, {"u": 1, "v": 2}], "pairs": [[0, 2], [2, 0]]}
TRIANGLE = {"nodes": 3, "edges": [{"u": 0, "v": 1}, {"u": 0, "v": 2}, {"u": 2, "v": 1}],
            "pairs": [[0, 1], [1, 0]]}


# ---------------------------------------------------------------- instance files

def test_instance_defaults_and_fractions():
    inst = io.instance_from_dict({"nodes": 2, "edges": [{"u": 0, "v": 1}, {"u": 1, "v": 0, "cost": "3/2"}]})
    assert inst.graph.edges[0].cost == 1 and inst.graph.edges[1].cost == Fraction(3, 2)
    doc = io.instance_to_dict(inst)
    assert doc["edges"][1]["cost"] == "3/2"
    assert io.instance_from_dict(doc) == inst


@pytest.mark.parametrize("doc", [
    {"edges": []},
    {"nodes": 2, "edges": [{"u": 0}]},
    {"nodes": 2, "edges": [{"u": 0, "v": 1, "cost": -1}]},
    {"nodes": 2, "pairs": [[0, 1, 2]]},
    {"nodes": 2, "extra": 1},
    {"nodes": 2, "labels": ["a"]},
])
def test_malformed_instances(doc):
    with pytest.raises(GraphError):
        io.instance_from_dict(doc)


def test_out_of_range_pair():
    with pytest.raises(GraphError):
        io.instance_from_dict({"nodes": 2, "pairs": [[0, 3]]})


def test_orientation_json_round_trip():
    o = Orientation((True, False, True))
    assert io.orientation_from_json(3, io.orientation_to_json(o)) == o
    with pytest.raises(GraphError):
        io.orientation_from_json(3, {"0": "fwd"})


# ---------------------------------------------------------------- DOT

def test_dot_empty_graph():
    text = io.export_dot(io.Instance(MixedGraph.build(0)))
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and graphs[0].get_type() == "digraph"


def test_dot_oriented_triangle():
    inst = io.instance_from_dict(TRIANGLE)
    text = io.export_dot(inst, Orientation((True, False, False)))
    g = pydot.graph_from_dot_data(text)[0]
    solid = [e for e in g.get_edges() if e.get("style") is None]
    dashed = [e for e in g.get_edges() if e.get("style") == "dashed"]
    assert len(solid) == 3 and len(dashed) == 2
    assert all(e.get("dir") is None for e in solid)


def test_dot_labels_and_arcs_parse():
    inst = io.instance_from_dict({"nodes": 2, "labels": ['a "quoted"', "b"],
                                  "edges": [{"u": 0, "v": 1}], "arcs": [{"tail": 1, "head": 0}]})
    g = pydot.graph_from_dot_data(io.export_dot(inst))[0]
    assert len(g.get_edges()) == 2


# ---------------------------------------------------------------- generators

def test_gen_families():
    tree = io.gen("tree", n=10, seed=1)
    assert len(tree.graph.edges) == 9 and io.is_connected(tree.graph)
    rc = io.gen("random-connected", n=8, m=12, seed=2)
    assert len(rc.graph.edges) == 12 and io.is_connected(rc.graph)
    for seed in range(20):
        mixed = io.gen("mixed-dag-overlay", n=9, seed=seed, comps=3, arcs=5)
        ov = contract_until_dag(mixed.graph, mixed.pairs)
        assert not ov.events
        assert topological_order(len(ov.components), ov.overlay_arcs)[1] is None
    with pytest.raises(GraphError):
        io.gen("nope")


def test_two_terminal_mix():
    verdicts = set()
    for seed in range(30):
        inst = io.gen("two-terminal", n=7, seed=seed, ell=2)
        verdicts.add(check_ekm_condition(inst.graph, inst.params["s"], inst.params["t"], 2))
    assert verdicts == {True, False}


def test_gen_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "--family", "random-connected", "--seed", 7, "--out", a]) == 0
    assert run(["gen", "--family", "random-connected", "--seed", 7, "--out", b]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(["gen", "--family", "tree", "--n", 1]) == 1


# ---------------------------------------------------------------- subcommands

def test_k_pairs_on_path(tmp_path):
    path = write(tmp_path, "p.json", PATH3)
    code, doc = result(tmp_path, ["k-pairs", "--in", path, "--k", 1, "--oracle-check"])
    assert code == 0 and doc["status"] == "YES"
    code, doc = result(tmp_path, ["k-pairs", "--in", path, "--k", 2, "--oracle-check"])
    assert code == 0 and doc["status"] == "NO"


def test_steiner_triangle(tmp_path):
    path = write(tmp_path, "t.json", TRIANGLE)
    dot = tmp_path / "t.dot"
    code, doc = result(tmp_path, ["steiner-orient", "--in", path, "--oracle-check", "--dot", dot])
    assert code == 0 and doc["cost"] == 3 and doc["edges"] == [0, 1, 2]
    assert doc["oracle"]["optimum"] == 3
    assert pydot.graph_from_dot_data(dot.read_text())


def test_results_are_reverifiable(tmp_path):
    inst = io.gen("random-connected", n=7, m=10, p=4, seed=3)
    path = write(tmp_path, "i.json", io.instance_to_dict(inst))
    g, pairs = inst.graph, list(inst.pairs)
    m = len(g.edges)
    for cmd in ("max-orient", "oracle", "steiner-orient"):
        code, doc = result(tmp_path, [cmd, "--in", path])
        assert code == 0
        o = io.orientation_from_json(m, doc["orientation"])
        if cmd == "steiner-orient":
            sub, back = g.edge_subgraph(doc["edges"])
            local = Orientation(tuple(o[e] for e in back))
            assert len(satisfied_pairs(sub, pairs, local)) == len(pairs)
            assert io.cost_to_json(g.cost(doc["edges"])) == doc["cost"]
        else:
            hit = set(satisfied_pairs(g, pairs, o))
            assert doc["satisfied_pairs"] == [i for i, p in enumerate(pairs) if p in hit]
            assert doc["value"] == len(doc["satisfied_pairs"])


def test_disjoint_paths_command(tmp_path):
    cyc = {"nodes": 4, "edges": [{"u": 0, "v": 2}, {"u": 2, "v": 1}, {"u": 1, "v": 3}, {"u": 3, "v": 0}],
           "s": 0, "t": 1, "ell": 1}
    path = write(tmp_path, "c.json", cyc)
    code, doc = result(tmp_path, ["disjoint-paths", "--in", path, "--oracle-check"])
    assert code == 0 and doc["cost"] == 4
    inst = io.load_instance(path)
    o = io.orientation_from_json(4, doc["orientation"])
    assert kappa_both(inst.graph, 0, 1, o) == (doc["transcript"]["kappa_st"], doc["transcript"]["kappa_ts"])
    code, doc = result(tmp_path, ["disjoint-paths", "--in", path, "--ell", 2])
    assert code == 2 and doc["status"] == "INFEASIBLE"


def test_mixed_and_kernel_commands(tmp_path):
    doc = {"nodes": 4, "edges": [{"u": 1, "v": 2}], "arcs": [{"tail": 0, "head": 1}, {"tail": 2, "head": 3}],
           "pairs": [[0, 3]]}
    path = write(tmp_path, "m.json", doc)
    code, out = result(tmp_path, ["mixed-orient", "--in", path, "--oracle-check"])
    assert code == 0 and out["status"] == "YES" and out["orientation"] == {"0": "fwd"}
    code, out = result(tmp_path, ["mixed-orient", "--in", path, "--no-memo"])
    assert code == 0 and out["status"] == "YES"
    code, out = result(tmp_path, ["kernel", "--in", path])
    assert code == 1 and out["status"] == "MALFORMED"
    path = write(tmp_path, "p.json", PATH3)
    code, out = result(tmp_path, ["kernel", "--in", path, "--oracle-check"])
    assert code == 0 and out["kernel"]["nodes"] == 2 and out["auto_satisfied"] == 0


def test_exit_codes(tmp_path, monkeypatch):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["max-orient", "--in", bad]) == 1
    assert run(["max-orient"]) == 1
    with pytest.raises(SystemExit) as info:
        cli.run(["no-such-command"])
    assert info.value.code == 1
    big = write(tmp_path, "big.json", {"nodes": 2, "edges": [{"u": 0, "v": 1}] * 6, "pairs": [[0, 1]]})
    code, doc = result(tmp_path, ["oracle", "--in", big, "--cap-edges", 5])
    assert code == 4 and doc["status"] == "CAP_EXCEEDED"
    many = write(tmp_path, "many.json", {"nodes": 2, "edges": [{"u": 0, "v": 1}], "pairs": [[0, 1]] * 3})
    assert run(["mixed-orient", "--in", many, "--cap-pairs", 2]) == 4
    # a solver that lies about its count is caught by re-verification
    from orientkit import maxorient
    real = maxorient.approx_max_orientation

    def lying(g, pairs):
        import dataclasses
        return dataclasses.replace(real(g, pairs), count=99)

    monkeypatch.setattr(cli, "approx_max_orientation", lying)
    path = write(tmp_path, "p.json", PATH3)
    code, doc = result(tmp_path, ["max-orient", "--in", path])
    assert code == 3 and doc["status"] == "VERIFICATION_FAILED"


def test_atomic_write_leaves_no_temp_files(tmp_path):
    io.write_atomic(str(tmp_path / "x.json"), "{}\n")
    assert os.listdir(tmp_path) == ["x.json"]


def test_console_entry_point(tmp_path):
    path = write(tmp_path, "p.json", PATH3)
    proc = subprocess.run([sys.executable, "-m", "orientkit.cli", "max-orient", "--in", path],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "OK"
