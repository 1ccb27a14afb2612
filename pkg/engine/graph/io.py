from __future__ import annotations
from typing import Any, Dict, Mapping, Optional, Tuple

from engine.api.errors import SchemaError
from engine.graph.dag import ComputationGraph, build_graph


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {value!r}", path)
    return value


def parse_graph(doc: Mapping[str, Any]) -> Tuple[ComputationGraph, Dict[int, str]]:
    """
    Reads the graph JSON object. Returns the graph and the raw xi strings
    (empty when the document carries none); strings are parsed per semiring later.
    """
    if not isinstance(doc, Mapping):
        raise SchemaError("graph document must be an object")
    nodes_doc = doc.get("nodes")
    if not isinstance(nodes_doc, list):
        raise SchemaError("missing array", "nodes")
    arcs_doc = doc.get("arcs", [])
    if not isinstance(arcs_doc, list):
        raise SchemaError("expected an array", "arcs")

    nodes = []
    op_tags: Dict[int, Optional[str]] = {}
    for i, entry in enumerate(nodes_doc):
        path = f"nodes[{i}]"
        if not isinstance(entry, Mapping):
            raise SchemaError("expected an object", path)
        v = _int(entry.get("id"), f"{path}.id")
        tag = entry.get("op")
        if tag not in (None, "add", "mul"):
            raise SchemaError(f'op must be "add", "mul" or null, got {tag!r}', f"{path}.op")
        nodes.append(v)
        op_tags[v] = tag

    arcs: Dict[int, Tuple[int, int]] = {}
    for i, entry in enumerate(arcs_doc):
        path = f"arcs[{i}]"
        if not isinstance(entry, Mapping):
            raise SchemaError("expected an object", path)
        e = _int(entry.get("id"), f"{path}.id")
        if e in arcs:
            raise SchemaError(f"duplicate arc id {e}", f"{path}.id")
        arcs[e] = (_int(entry.get("tail"), f"{path}.tail"), _int(entry.get("head"), f"{path}.head"))

    order = doc.get("source_order")
    if order is not None:
        if not isinstance(order, list):
            raise SchemaError("expected an array", "source_order")
        order = [_int(v, f"source_order[{i}]") for i, v in enumerate(order)]

    xi_doc = doc.get("xi", {}) or {}
    if not isinstance(xi_doc, Mapping):
        raise SchemaError("expected an object keyed by source id", "xi")
    xi: Dict[int, str] = {}
    for key, value in xi_doc.items():
        try:
            source = int(key)
        except (TypeError, ValueError):
            raise SchemaError(f"xi key {key!r} is not a node id", "xi") from None
        xi[source] = str(value)

    return build_graph(nodes, arcs, op_tags, order), xi


def dump_graph(g: ComputationGraph, xi: Optional[Mapping[int, str]] = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "kind": "graph",
        "nodes": [{"id": v, "op": g.op[v].value if v in g.op else None} for v in g.nodes],
        "arcs": [{"id": e, "tail": t, "head": h} for e, (t, h) in g.arcs.items()],
        "source_order": list(g.source_order),
    }
    if xi:
        doc["xi"] = {str(s): xi[s] for s in g.source_order if s in xi}
    return doc
