from __future__ import annotations
import logging
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from engine.api.errors import (
    CycleDetected,
    DanglingArc,
    DuplicateId,
    MissingOpTag,
    OpOnSource,
    SourceOrderMismatch,
    UnknownElement,
)

logger = logging.getLogger(__name__)


class Op(Enum):
    ADD = "add"
    MUL = "mul"


class ComputationGraph:
    """
    A validated DAG with parallel arcs and an ADD/MUL tag on every non-source node.

    Nodes and arcs share one id space; a "graph element" is either. The induced
    poset over V u E is kept as a networkx DiGraph of its covering relations
    (node -> out-arc, arc -> head), so reachability there is the partial order.
    Treat instances as immutable.
    """

    def __init__(self, nodes: Sequence[int], arcs: Mapping[int, Tuple[int, int]],
                 op: Mapping[int, Op], source_order: Sequence[int]):
        self.nodes: Tuple[int, ...] = tuple(sorted(nodes))
        self.arcs: Dict[int, Tuple[int, int]] = dict(sorted(arcs.items()))
        self.op: Dict[int, Op] = dict(op)
        self.source_order: Tuple[int, ...] = tuple(source_order)

        self._node_set = frozenset(self.nodes)
        self._in: Dict[int, List[int]] = {v: [] for v in self.nodes}
        self._out: Dict[int, List[int]] = {v: [] for v in self.nodes}
        for e, (tail, head) in self.arcs.items():
            self._out[tail].append(e)
            self._in[head].append(e)

        self.sources: Tuple[int, ...] = self.source_order
        self.sinks: Tuple[int, ...] = tuple(v for v in self.nodes if not self._out[v])

        self.hasse = nx.DiGraph()
        self.hasse.add_nodes_from(self.nodes)
        self.hasse.add_nodes_from(self.arcs)
        for e, (tail, head) in self.arcs.items():
            self.hasse.add_edge(tail, e)
            self.hasse.add_edge(e, head)

        self.schedule: Tuple[int, ...] = tuple(topological_schedule(self))
        self.position: Dict[int, int] = {x: i for i, x in enumerate(self.schedule)}
        self._chains: Dict[object, list] = {}

    # structure
    @property
    def elements(self) -> Tuple[int, ...]:
        return self.schedule

    def is_node(self, x: int) -> bool:
        return x in self._node_set

    def is_arc(self, x: int) -> bool:
        return x in self.arcs

    def __contains__(self, x: int) -> bool:
        return x in self._node_set or x in self.arcs

    def tail(self, e: int) -> int:
        return self.arcs[e][0]

    def head(self, e: int) -> int:
        return self.arcs[e][1]

    def in_arcs(self, v: int) -> List[int]:
        return self._in[v]

    def out_arcs(self, v: int) -> List[int]:
        return self._out[v]

    def is_source(self, v: int) -> bool:
        return v in self._node_set and not self._in[v]

    def is_sink(self, v: int) -> bool:
        return v in self._node_set and not self._out[v]

    def check(self, x: int) -> int:
        if x not in self:
            raise UnknownElement(f"element {x} is not in the graph")
        return x

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComputationGraph):
            return NotImplemented
        return (self.nodes == other.nodes and self.arcs == other.arcs
                and self.op == other.op and self.source_order == other.source_order)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"ComputationGraph(nodes={len(self.nodes)}, arcs={len(self.arcs)}, sources={len(self.sources)})"


OpLike = Union[Op, str, None]


def _as_op(tag: OpLike) -> Optional[Op]:
    if tag is None or isinstance(tag, Op):
        return tag
    return Op(str(tag).lower())


def build_graph(nodes: Iterable[int], arcs: Mapping[int, Tuple[int, int]],
                op_tags: Mapping[int, OpLike], source_order: Optional[Sequence[int]] = None
                ) -> ComputationGraph:
    """Validates and indexes a computation graph. Missing tags in op_tags count as None."""
    node_list = list(nodes)
    node_set = set(node_list)
    if len(node_set) != len(node_list):
        raise DuplicateId("node ids must be distinct")
    for e in arcs:
        if e in node_set:
            raise DuplicateId(f"id {e} is used by both a node and an arc")
    for x in list(node_set) + list(arcs):
        if not isinstance(x, int) or isinstance(x, bool) or x < 0:
            raise DuplicateId(f"element ids must be non-negative integers, got {x!r}")

    dag = nx.MultiDiGraph()
    dag.add_nodes_from(node_list)
    for e, (tail, head) in arcs.items():
        for end in (tail, head):
            if end not in node_set:
                raise DanglingArc(f"arc {e} refers to undeclared node {end}")
        dag.add_edge(tail, head, key=e)
    try:
        cycle = nx.find_cycle(dag)
    except nx.NetworkXNoCycle:
        cycle = None
    if cycle:
        witness = " -> ".join(str(edge[0]) for edge in cycle) + f" -> {cycle[0][0]}"
        raise CycleDetected(f"graph has a cycle: {witness}")

    has_in = {head for (_, head) in arcs.values()}
    op: Dict[int, Op] = {}
    for v in node_list:
        tag = _as_op(op_tags.get(v))
        if v in has_in:
            if tag is None:
                raise MissingOpTag(f"internal node {v} has no op tag")
            op[v] = tag
        elif tag is not None:
            raise OpOnSource(f"source node {v} carries op tag {tag.value!r}")

    sources = sorted(v for v in node_list if v not in has_in)
    if source_order is None:
        source_order = sources
    elif sorted(source_order) != sources:
        raise SourceOrderMismatch(
            f"source_order {list(source_order)} is not a permutation of the sources {sources}")

    g = ComputationGraph(node_list, arcs, op, source_order)
    logger.debug("built %r", g)
    return g


class GraphBuilder:
    """Assigns dense ids from a single counter shared by nodes and arcs."""

    def __init__(self):
        self._next = 0
        self._nodes: List[int] = []
        self._arcs: Dict[int, Tuple[int, int]] = {}
        self._op: Dict[int, Op] = {}
        self._sources: List[int] = []

    def _take(self) -> int:
        i = self._next
        self._next += 1
        return i

    def source(self) -> int:
        v = self._take()
        self._nodes.append(v)
        self._sources.append(v)
        return v

    def node(self, op: Op) -> int:
        v = self._take()
        self._nodes.append(v)
        self._op[v] = op
        return v

    def arc(self, tail: int, head: int) -> int:
        e = self._take()
        self._arcs[e] = (tail, head)
        return e

    def build(self, source_order: Optional[Sequence[int]] = None) -> ComputationGraph:
        """source_order defaults to the order in which sources were created."""
        order = self._sources if source_order is None else source_order
        return build_graph(self._nodes, self._arcs, self._op, order)


def poset_leq(g: ComputationGraph, x: int, y: int) -> bool:
    """x <= y in the order induced on V u E: y is reachable from x."""
    g.check(x)
    g.check(y)
    if x == y:
        return True
    return nx.has_path(g.hasse, x, y)


def topological_schedule(g: ComputationGraph) -> List[int]:
    """
    Linear extension of the element poset. Sources go in source_order;
    every other tie is broken by the smallest id.
    """
    rank = {s: i for i, s in enumerate(g.source_order)}

    def key(x: int):
        if x in rank:
            return (0, rank[x])
        return (1, x)

    return list(nx.lexicographical_topological_sort(g.hasse, key=key))
