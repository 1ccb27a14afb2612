from __future__ import annotations
from typing import Any, Dict, Mapping, Tuple

from engine.api.adapter_base import Adapter, BuiltGraph
from engine.graph.dag import ComputationGraph
from engine.graph.io import parse_graph


class GraphAdapter(Adapter):
    """Bare computation graphs; xi stays as strings until a semiring is chosen."""
    kind = "graph"

    def parse(self, doc: Mapping[str, Any]) -> Tuple[ComputationGraph, Dict[int, str]]:
        return parse_graph(doc)

    def build(self, model: Tuple[ComputationGraph, Dict[int, str]]) -> BuiltGraph:
        g, raw = model
        legend = {v: f"s{v}" for v in g.sources}
        return BuiltGraph(graph=g, xi=None, legend=legend, raw_xi=dict(raw), model=g)


def get_adapter() -> Adapter:
    return GraphAdapter()
