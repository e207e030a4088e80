"""Instance and result files (JSON), DOT export and seeded instance generators."""
from __future__ import annotations

import dataclasses
import json
import os
import random
import tempfile
from fractions import Fraction
from typing import Any

import jsonschema

from .graph import GraphError, MixedGraph, Orientation, Pair, check_pairs, connected_components

_COST = {"anyOf": [{"type": "integer", "minimum": 0},
                   {"type": "number", "minimum": 0},
                   {"type": "string", "pattern": r"^\s*\d+(\s*/\s*\d+)?\s*$"}]}
_NODE = {"type": "integer", "minimum": 0}

INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["nodes"],
    "properties": {
        "nodes": _NODE,
        "labels": {"type": "array", "items": {"type": "string"}},
        "edges": {"type": "array", "items": {
            "type": "object", "required": ["u", "v"],
            "properties": {"u": _NODE, "v": _NODE, "cost": _COST},
            "additionalProperties": False}},
        "arcs": {"type": "array", "items": {
            "type": "object", "required": ["tail", "head"],
            "properties": {"tail": _NODE, "head": _NODE},
            "additionalProperties": False}},
        "pairs": {"type": "array", "items": {
            "type": "array", "items": _NODE, "minItems": 2, "maxItems": 2}},
        "k": {"type": "integer", "minimum": 0},
        "ell": {"type": "integer", "minimum": 1},
        "s": _NODE,
        "t": _NODE,
    },
    "additionalProperties": False,
}


class MalformedInput(GraphError):
    pass


@dataclasses.dataclass(frozen=True)
class Instance:
    graph: MixedGraph
    pairs: tuple[Pair, ...] = ()
    params: dict = dataclasses.field(default_factory=dict)  # k, ell, s, t when given
    labels: tuple[str, ...] | None = None


def _parse_cost(c) -> Fraction:
    if isinstance(c, str):
        return Fraction(c.replace(" ", ""))
    if isinstance(c, float):
        return Fraction(c).limit_denominator(10 ** 9)
    return Fraction(c)


def cost_to_json(c: Fraction):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def instance_from_dict(doc: dict) -> Instance:
    try:
        jsonschema.validate(doc, INSTANCE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise MalformedInput(f"instance does not match the schema: {exc.message}") from None
    n = doc["nodes"]
    edges = [(e["u"], e["v"], _parse_cost(e.get("cost", 1))) for e in doc.get("edges", [])]
    arcs = [(a["tail"], a["head"]) for a in doc.get("arcs", [])]
    graph = MixedGraph.build(n, edges, arcs)
    pairs = tuple(check_pairs(n, [tuple(p) for p in doc.get("pairs", [])]))
    params = {k: doc[k] for k in ("k", "ell", "s", "t") if k in doc}
    for key in ("s", "t"):
        if key in params and params[key] >= n:
            raise MalformedInput(f"{key} is out of range")
    labels = doc.get("labels")
    if labels is not None and len(labels) != n:
        raise MalformedInput("labels must name every node")
    return Instance(graph, pairs, params, tuple(labels) if labels is not None else None)


def instance_to_dict(inst: Instance) -> dict:
    g = inst.graph
    doc: dict[str, Any] = {"nodes": g.n}
    if inst.labels is not None:
        doc["labels"] = list(inst.labels)
    doc["edges"] = [{"u": e.u, "v": e.v, "cost": cost_to_json(e.cost)} for e in g.edges]
    doc["arcs"] = [{"tail": a.tail, "head": a.head} for a in g.arcs]
    doc["pairs"] = [list(p) for p in inst.pairs]
    for key in ("k", "ell", "s", "t"):
        if key in inst.params:
            doc[key] = inst.params[key]
    return doc


def load_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(f"cannot read instance: {exc}") from None
    return instance_from_dict(doc)


def dumps(doc) -> str:
    """Stable JSON text (insertion order, two-space indent, trailing newline)."""
    return json.dumps(doc, indent=2, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, Fraction):
        return cost_to_json(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def orientation_to_json(orient: Orientation) -> dict[str, str]:
    return {str(i): lab for i, lab in orient.labels().items()}


def orientation_from_json(m: int, doc: dict[str, str]) -> Orientation:
    mapping = {}
    for key, lab in doc.items():
        if lab not in ("fwd", "bwd"):
            raise MalformedInput(f"bad orientation label {lab!r}")
        mapping[int(key)] = lab == "fwd"
    if set(mapping) != set(range(m)):
        raise MalformedInput("orientation must cover every undirected edge")
    return Orientation.from_mapping(m, mapping)


# ------------------------------------------------------------------ DOT

def _dot_id(inst: Instance, v: int) -> str:
    name = inst.labels[v] if inst.labels is not None else str(v)
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(inst: Instance, orientation: Orientation | None = None,
               edges: Any = None) -> str:
    """DOT digraph: oriented edges as arrows, undirected ones with ``dir=none``,
    arcs bold, pairs dashed.  ``edges`` restricts drawing to a subset of edge ids."""
    g = inst.graph
    keep = set(range(len(g.edges))) if edges is None else set(edges)
    lines = ["digraph orientation {"]
    for v in range(g.n):
        lines.append(f"  {_dot_id(inst, v)};")
    for e in g.edges:
        if e.id not in keep:
            continue
        a, b = e.u, e.v
        attrs = f'label="e{e.id}"'
        if orientation is None:
            attrs += ", dir=none"
        elif not orientation[e.id]:
            a, b = b, a
        lines.append(f"  {_dot_id(inst, a)} -> {_dot_id(inst, b)} [{attrs}];")
    for arc in g.arcs:
        lines.append(f'  {_dot_id(inst, arc.tail)} -> {_dot_id(inst, arc.head)} [label="a{arc.id}", style=bold];')
    for i, (s, t) in enumerate(inst.pairs):
        lines.append(f'  {_dot_id(inst, s)} -> {_dot_id(inst, t)} [label="p{i}", style=dashed, constraint=false];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ generators

FAMILIES = ("tree", "random-connected", "mixed-dag-overlay", "two-terminal")


def _random_tree(rng: random.Random, nodes: list[int]) -> list[tuple[int, int]]:
    order = nodes[:]
    rng.shuffle(order)
    return [(order[rng.randrange(i)], order[i]) for i in range(1, len(order))]


def _random_pairs(rng, nodes, p):
    out = []
    for _ in range(p):
        s, t = rng.sample(nodes, 2)
        out.append((s, t))
    return out


def _connected(rng, nodes, extra, max_cost):
    edges = _random_tree(rng, nodes)
    for _ in range(extra):
        a, b = rng.sample(nodes, 2)
        edges.append((a, b))
    return [(a, b, rng.randint(1, max_cost)) for a, b in edges]


def gen(family: str, n: int = 8, seed: int = 0, m: int | None = None, p: int = 3,
        comps: int = 3, arcs: int = 4, ell: int = 2, max_cost: int = 1) -> Instance:
    """Seeded random instance.

    ``tree``: random tree on ``n`` nodes.  ``random-connected``: spanning tree
    plus extra edges up to ``m`` in total.  ``mixed-dag-overlay``: ``comps``
    connected undirected blocks joined by arcs that only run forward in block
    order.  ``two-terminal``: connected graph with ``s = 0``, ``t = 1`` and ``ell``.
    """
    if family not in FAMILIES:
        raise GraphError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if n < 2:
        raise GraphError("need at least two nodes")
    if p < 0 or (m is not None and m < n - 1):
        raise GraphError("invalid size parameters")
    rng = random.Random(seed)
    nodes = list(range(n))
    if family == "tree":
        edges = [(a, b, rng.randint(1, max_cost)) for a, b in _random_tree(rng, nodes)]
        g = MixedGraph.build(n, edges)
        return Instance(g, tuple(_random_pairs(rng, nodes, p)))
    if family == "random-connected":
        extra = (m if m is not None else min(14, n + n // 2)) - (n - 1)
        g = MixedGraph.build(n, _connected(rng, nodes, extra, max_cost))
        return Instance(g, tuple(_random_pairs(rng, nodes, p)))
    if family == "two-terminal":
        extra = (m if m is not None else min(14, 2 * n)) - (n - 1)
        g = MixedGraph.build(n, _connected(rng, nodes, extra, max_cost))
        return Instance(g, (), {"s": 0, "t": 1, "ell": ell})
    comps = max(1, min(comps, n))
    cuts = sorted(rng.sample(range(1, n), comps - 1))
    blocks = [nodes[a:b] for a, b in zip([0] + cuts, cuts + [n])]
    edges = []
    for block in blocks:
        if len(block) > 1:
            extra = rng.randint(0, len(block) // 2)
            edges.extend(_connected(rng, block, extra, max_cost))
    arc_list = []
    if len(blocks) > 1:
        for _ in range(arcs):
            i, j = sorted(rng.sample(range(len(blocks)), 2))
            arc_list.append((rng.choice(blocks[i]), rng.choice(blocks[j])))
    g = MixedGraph.build(n, edges, arc_list)
    return Instance(g, tuple(_random_pairs(rng, nodes, p)))


def is_connected(g: MixedGraph) -> bool:
    comp = connected_components(g.n, [(e.u, e.v) for e in g.edges])
    return len(set(comp)) <= 1
