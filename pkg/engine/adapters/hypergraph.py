from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Tuple

import networkx as nx

from engine.api.adapter_base import Adapter, BuiltGraph, Features
from engine.api.errors import CyclicHypergraph, InvalidModel, SchemaError, UnderivableVertex
from engine.graph.dag import GraphBuilder, Op

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hyperedge:
    head: str
    tails: Tuple[str, ...]
    weight: float
    label: str = ""


@dataclass
class Hypergraph:
    vertices: Tuple[str, ...]
    edges: List[Hyperedge]
    target: str

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise InvalidModel("vertex names must be distinct")
        if self.target not in known:
            raise InvalidModel(f"target {self.target!r} is not a vertex")
        for i, e in enumerate(self.edges):
            unknown = [v for v in (e.head,) + e.tails if v not in known]
            if unknown:
                raise InvalidModel(f"hyperedge {i} uses unknown vertices {unknown}")

    def name(self, i: int) -> str:
        e = self.edges[i]
        return e.label or f"{e.head} <- {' '.join(e.tails) or '()'}"


def hypergraph_to_cg(h: Hypergraph) -> BuiltGraph:
    """
    Inside values: a vertex is the ADD of its incoming hyperedges, a hyperedge
    the MUL of its weight source and its tail vertices. Only the target and
    the vertices it depends on are kept; the target is the single sink.
    """
    deps = nx.MultiDiGraph()
    deps.add_nodes_from(h.vertices)
    for e in h.edges:
        deps.add_edges_from((t, e.head) for t in e.tails)
    if not nx.is_directed_acyclic_graph(deps):
        raise CyclicHypergraph(f"hypergraph has a cycle: {nx.find_cycle(deps)}")

    keep = nx.ancestors(deps, h.target) | {h.target}
    incoming: Dict[str, List[int]] = {v: [] for v in keep}
    for i, e in enumerate(h.edges):
        if e.head in keep:
            incoming[e.head].append(i)
    underivable = sorted(v for v, edges in incoming.items() if not edges)
    if underivable:
        raise UnderivableVertex(f"no hyperedge derives {underivable}")

    rank = {v: i for i, v in enumerate(h.vertices)}
    order = nx.lexicographical_topological_sort(deps.subgraph(keep), key=rank.__getitem__)

    b = GraphBuilder()
    xi: Dict[int, float] = {}
    legend: Dict[int, str] = {}
    keys: Dict[Tuple[Any, ...], int] = {}
    vertex_node: Dict[str, int] = {}
    for v in order:
        total = b.node(Op.ADD)
        for i in incoming[v]:
            e = h.edges[i]
            w = b.source()
            xi[w] = float(e.weight)
            legend[w] = h.name(i)
            keys[("edge", i)] = w
            val = w
            if e.tails:
                val = b.node(Op.MUL)
                b.arc(w, val)
                for t in e.tails:
                    b.arc(vertex_node[t], val)
            b.arc(val, total)
        vertex_node[v] = total
        keys[("vertex", v)] = total

    g = b.build()
    logger.debug("hypergraph with %d kept vertices -> %r", len(keep), g)
    return BuiltGraph(graph=g, xi=xi, legend=legend, keys=keys, model=h)


def hyperedge_features(built: BuiltGraph) -> Features:
    h: Hypergraph = built.model
    return [(f"edge[{h.name(key[1])}]", {v: 1.0}) for key, v in built.keys.items() if key[0] == "edge"]


class HypergraphAdapter(Adapter):
    kind = "hypergraph"

    def parse(self, doc: Mapping[str, Any]) -> Hypergraph:
        vertices = doc.get("vertices")
        if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
            raise SchemaError("expected an array of vertex names", "vertices")
        edges = []
        for i, entry in enumerate(doc.get("edges") or []):
            path = f"edges[{i}]"
            if not isinstance(entry, Mapping):
                raise SchemaError("expected an object", path)
            tails = entry.get("tails", [])
            if not isinstance(tails, list) or not all(isinstance(t, str) for t in tails):
                raise SchemaError("expected an array of vertex names", f"{path}.tails")
            weight = entry.get("weight", 1.0)
            if isinstance(weight, bool) or not isinstance(weight, (int, float)):
                raise SchemaError("expected a number", f"{path}.weight")
            edges.append(Hyperedge(str(entry.get("head")), tuple(tails), float(weight), str(entry.get("label", ""))))
        target = doc.get("target")
        if not isinstance(target, str):
            raise SchemaError("expected a vertex name", "target")
        return Hypergraph(tuple(vertices), edges, target)

    def build(self, model: Hypergraph) -> BuiltGraph:
        return hypergraph_to_cg(model)

    def default_features(self, built: BuiltGraph) -> Features:
        return hyperedge_features(built)


def get_adapter() -> Adapter:
    return HypergraphAdapter()
