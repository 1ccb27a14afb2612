from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from engine.algebra.natpoly import NatPoly, natpoly_eval, natpoly_semiring
from engine.algebra.semiring import OpCounter
from engine.api.adapter_base import Adapter, BuiltGraph
from engine.api.errors import InvalidModel, SchemaError
from engine.graph.dag import GraphBuilder, Op
from engine.passes.forward import free_forward

logger = logging.getLogger(__name__)

# a child is a node id or a terminal: False is bottom, True is top
Ref = Union[int, bool]


@dataclass(frozen=True)
class ZddNode:
    var: int
    lo: Ref
    hi: Ref


@dataclass
class Zdd:
    variables: Tuple[str, ...]
    nodes: Dict[int, ZddNode]
    root: Ref
    weights: Optional[Tuple[float, ...]] = None  # per variable, for weighted counting

    def __post_init__(self):
        n = len(self.variables)
        for nid, node in self.nodes.items():
            if not 0 <= node.var < n:
                raise InvalidModel(f"node {nid} tests variable {node.var} outside 0..{n - 1}")
            for child in (node.lo, node.hi):
                if isinstance(child, bool):
                    continue
                if child not in self.nodes:
                    raise InvalidModel(f"node {nid} points at unknown node {child}")
                if self.nodes[child].var <= node.var:
                    raise InvalidModel(f"node {nid} -> {child} does not respect the variable order")
        if not isinstance(self.root, bool) and self.root not in self.nodes:
            raise InvalidModel(f"root {self.root} is not a node")
        if self.weights is not None and len(self.weights) != n:
            raise InvalidModel(f"{len(self.weights)} weights for {n} variables")


def zdd_to_cg(z: Zdd) -> BuiltGraph:
    """
    value(node) = value(lo) + x_var * value(hi), top = 1, bottom = 0.
    Bottom branches are left out of the graph. A source standing for the top
    terminal exists only when some lo-branch (or the root) reaches it.
    """
    b = GraphBuilder()
    legend: Dict[int, str] = {}
    keys: Dict[Tuple[Any, ...], int] = {}
    memo: Dict[int, Optional[int]] = {}

    def var_source(i: int) -> int:
        if ("var", i) not in keys:
            v = b.source()
            keys[("var", i)] = v
            legend[v] = z.variables[i]
        return keys[("var", i)]

    def top_source() -> int:
        if ("top",) not in keys:
            v = b.source()
            keys[("top",)] = v
            legend[v] = "TRUE"
        return keys[("top",)]

    def value(ref: Ref) -> Optional[int]:
        if ref is False:
            return None
        if ref is True:
            return top_source()
        if ref in memo:
            return memo[ref]
        node = z.nodes[ref]
        parts = []
        if node.hi is True:
            parts.append(var_source(node.var))
        else:
            hi = value(node.hi)
            if hi is not None:
                m = b.node(Op.MUL)
                b.arc(var_source(node.var), m)
                b.arc(hi, m)
                parts.append(m)
        lo = value(node.lo)
        if lo is not None:
            parts.append(lo)
        if not parts:
            result = None
        elif len(parts) == 1:
            result = parts[0]
        else:
            result = b.node(Op.ADD)
            for p in parts:
                b.arc(p, result)
        memo[ref] = result
        return result

    value(z.root)
    order = [keys[("var", i)] for i in range(len(z.variables)) if ("var", i) in keys]
    if ("top",) in keys:
        order.append(keys[("top",)])
    g = b.build(order)

    weights = z.weights or (1.0,) * len(z.variables)
    xi = {v: (1.0 if key == ("top",) else float(weights[key[1]])) for key, v in keys.items()}
    logger.debug("zdd with %d nodes -> %r", len(z.nodes), g)
    return BuiltGraph(graph=g, xi=xi, legend=legend, keys=keys, model=z)


def zdd_xi(built: BuiltGraph, weights: Sequence[Any], one: Any = 1.0) -> Dict[int, Any]:
    """Source values for per-variable weights; the top source gets `one`."""
    return {v: (one if key == ("top",) else weights[key[1]]) for key, v in built.keys.items()}


def zdd_polynomial(z: Zdd, built: Optional[BuiltGraph] = None, counter: Optional[OpCounter] = None) -> NatPoly:
    """The Boolean function's polynomial in x0..x{n-1}, one indeterminate per declared variable."""
    built = built or zdd_to_cg(z)
    n = len(z.variables)
    free = free_forward(built.graph, counter=counter).sink_sum
    index = {v: key for key, v in built.keys.items()}
    values: List[NatPoly] = []
    for v in built.graph.source_order:
        key = index[v]
        values.append(NatPoly.one(n) if key == ("top",) else NatPoly.variable(key[1], n))
    return natpoly_eval(free, natpoly_semiring(n), values)


def _ref(value: Any, path: str) -> Ref:
    if isinstance(value, bool) or (isinstance(value, int) and value >= 0):
        return value
    raise SchemaError("expected a node id, true or false", path)


class ZddAdapter(Adapter):
    kind = "zdd"

    def parse(self, doc: Mapping[str, Any]) -> Zdd:
        variables = doc.get("variables")
        if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
            raise SchemaError("expected an array of variable names", "variables")
        nodes: Dict[int, ZddNode] = {}
        for i, entry in enumerate(doc.get("nodes") or []):
            path = f"nodes[{i}]"
            if not isinstance(entry, Mapping):
                raise SchemaError("expected an object", path)
            nid = _ref(entry.get("id"), f"{path}.id")
            if isinstance(nid, bool) or nid in nodes:
                raise SchemaError("node ids must be distinct integers", f"{path}.id")
            var = entry.get("var")
            if isinstance(var, str) and var in variables:
                var = variables.index(var)
            if not isinstance(var, int) or isinstance(var, bool):
                raise SchemaError("expected a variable name or index", f"{path}.var")
            nodes[nid] = ZddNode(var, _ref(entry.get("lo"), f"{path}.lo"), _ref(entry.get("hi"), f"{path}.hi"))
        weights = doc.get("weights")
        if weights is not None:
            if isinstance(weights, Mapping):
                weights = [weights.get(v, 1.0) for v in variables]
            try:
                weights = tuple(float(w) for w in weights)
            except (TypeError, ValueError):
                raise SchemaError("expected numbers", "weights") from None
        return Zdd(tuple(variables), nodes, _ref(doc.get("root"), "root"), weights)

    def build(self, model: Zdd) -> BuiltGraph:
        return zdd_to_cg(model)


def get_adapter() -> Adapter:
    return ZddAdapter()
