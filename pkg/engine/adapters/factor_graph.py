from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from engine.api.adapter_base import Adapter, BuiltGraph, Features
from engine.api.errors import CyclicFactorGraph, InvalidModel, SchemaError
from engine.graph.dag import GraphBuilder, Op

logger = logging.getLogger(__name__)


@dataclass
class FactorTable:
    name: str
    scope: Tuple[str, ...]
    table: np.ndarray  # one axis per scope variable


@dataclass
class FactorGraph:
    variables: Dict[str, int]  # name -> domain size, in declaration order
    factors: List[FactorTable]
    root: Optional[str] = None  # preferred GFB root

    def __post_init__(self):
        if self.root is not None and self.root not in self.variables:
            raise InvalidModel(f"root {self.root!r} is not a variable")
        for name, size in self.variables.items():
            if size < 1:
                raise InvalidModel(f"variable {name} has an empty domain")
        seen = set()
        for f in self.factors:
            if f.name in seen:
                raise InvalidModel(f"duplicate factor name {f.name}")
            seen.add(f.name)
            if not f.scope:
                raise InvalidModel(f"factor {f.name} has an empty scope")
            if len(set(f.scope)) != len(f.scope):
                raise InvalidModel(f"factor {f.name} repeats a variable in its scope")
            unknown = [v for v in f.scope if v not in self.variables]
            if unknown:
                raise InvalidModel(f"factor {f.name} uses undeclared variables {unknown}")
            shape = tuple(self.variables[v] for v in f.scope)
            f.table = np.asarray(f.table, dtype=float)
            if f.table.shape != shape:
                raise InvalidModel(f"factor {f.name} table has shape {f.table.shape}, expected {shape}")
            if (f.table < 0).any():
                raise InvalidModel(f"factor {f.name} has negative entries")

    def structure(self) -> nx.Graph:
        """Bipartite variable/factor graph."""
        g = nx.Graph()
        g.add_nodes_from(("v", v) for v in self.variables)
        g.add_nodes_from(("f", f.name) for f in self.factors)
        for f in self.factors:
            g.add_edges_from((("f", f.name), ("v", v)) for v in f.scope)
        return g

    def factor(self, name: str) -> FactorTable:
        return next(f for f in self.factors if f.name == name)


def factor_graph_to_cg(fg: FactorGraph, root: Optional[str] = None) -> BuiltGraph:
    """
    Unidirectional sum-product messages toward a root variable (the GFB
    schedule). Each component is rooted at `root` when it contains it, else at
    its last-declared variable; several components are joined by a final MUL.
    """
    structure = fg.structure()
    if not nx.is_forest(structure):
        raise CyclicFactorGraph("factor graph has a cycle")
    order = list(fg.variables)
    root = root or fg.root
    if root is None:
        root = order[-1]
    elif root not in fg.variables:
        raise InvalidModel(f"root {root!r} is not a variable")
    factor_rank = {f.name: i for i, f in enumerate(fg.factors)}

    b = GraphBuilder()
    xi: Dict[int, float] = {}
    legend: Dict[int, str] = {}
    keys: Dict[Tuple[Any, ...], int] = {}

    def source(key: Tuple[Any, ...], value: float, text: str) -> int:
        v = b.source()
        xi[v] = float(value)
        legend[v] = text
        keys[key] = v
        return v

    def variable_beliefs(name: str, parent: Optional[str]) -> List[int]:
        children = sorted((f for kind, f in structure.neighbors(("v", name)) if f != parent),
                          key=factor_rank.__getitem__)
        messages = [factor_message(f, name) for f in children]
        out = []
        for x in range(fg.variables[name]):
            a = source(("var", name, x), 1.0, f"{name}={x}")
            if not messages:
                out.append(a)
                continue
            m = b.node(Op.MUL)
            b.arc(a, m)
            for msg in messages:
                b.arc(msg[x], m)
            out.append(m)
        return out

    def factor_message(name: str, parent: str) -> List[int]:
        f = fg.factor(name)
        children = [v for v in f.scope if v != parent]
        beliefs = {v: variable_beliefs(v, name) for v in children}
        axis = f.scope.index(parent)
        sums = [b.node(Op.ADD) for _ in range(fg.variables[parent])]
        for config in np.ndindex(*f.table.shape):
            assignment = ",".join(f"{v}={x}" for v, x in zip(f.scope, config))
            t = source(("factor", name, config), f.table[config], f"{name}({assignment})")
            val = t
            if children:
                val = b.node(Op.MUL)
                b.arc(t, val)
                for v in children:
                    b.arc(beliefs[v][config[f.scope.index(v)]], val)
            b.arc(val, sums[config[axis]])
        return sums

    roots = []
    for comp in nx.connected_components(structure):
        names = [v for kind, v in comp if kind == "v"]
        roots.append(root if root in names else max(names, key=order.index))
    roots.sort(key=order.index)

    totals = []
    for r in roots:
        z = b.node(Op.ADD)
        for belief in variable_beliefs(r, None):
            b.arc(belief, z)
        totals.append(z)
    if len(totals) > 1:
        joint = b.node(Op.MUL)
        for z in totals:
            b.arc(z, joint)

    g = b.build()
    logger.debug("factor graph rooted at %s -> %r", roots, g)
    return BuiltGraph(graph=g, xi=xi, legend=legend, keys=keys, model=fg)


def variable_marginal_features(built: BuiltGraph) -> Features:
    fg: FactorGraph = built.model
    return [(f"marginal[{name}={x}]", {built.source("var", name, x): 1.0})
            for name, size in fg.variables.items() for x in range(size)]


class FactorGraphAdapter(Adapter):
    kind = "factorgraph"

    def parse(self, doc: Mapping[str, Any]) -> FactorGraph:
        variables: Dict[str, int] = {}
        for i, entry in enumerate(doc.get("variables") or []):
            path = f"variables[{i}]"
            if not isinstance(entry, Mapping) or not isinstance(entry.get("name"), str):
                raise SchemaError("expected {name, domain}", path)
            domain = entry.get("domain", 2)
            if not isinstance(domain, int):
                raise SchemaError("expected an integer", f"{path}.domain")
            variables[entry["name"]] = domain
        if not variables:
            raise SchemaError("at least one variable is required", "variables")
        factors = []
        for i, entry in enumerate(doc.get("factors") or []):
            path = f"factors[{i}]"
            if not isinstance(entry, Mapping):
                raise SchemaError("expected an object", path)
            scope = entry.get("scope")
            if not isinstance(scope, list) or not all(isinstance(v, str) for v in scope):
                raise SchemaError("expected an array of variable names", f"{path}.scope")
            try:
                table = np.asarray(entry.get("table"), dtype=float)
            except (TypeError, ValueError):
                raise SchemaError("expected a nested array of numbers", f"{path}.table") from None
            factors.append(FactorTable(str(entry.get("name", f"f{i}")), tuple(scope), table))
        root = doc.get("root", self.option("root"))
        if root is not None and not isinstance(root, str):
            raise SchemaError("expected a variable name", "root")
        return FactorGraph(variables, factors, root)

    def build(self, model: FactorGraph) -> BuiltGraph:
        return factor_graph_to_cg(model)

    def default_features(self, built: BuiltGraph) -> Features:
        return variable_marginal_features(built)


def get_adapter() -> Adapter:
    return FactorGraphAdapter()
