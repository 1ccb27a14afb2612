from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Mapping, Optional

from engine.algebra.semiring import SemiringSpec
from engine.api.config import CheckpointPolicy
from engine.api.errors import NotCancellative
from engine.graph.cutset import Direction, cutset_chain
from engine.graph.dag import ComputationGraph, Op
from engine.passes.forward import ForwardResult, check_source_values, forward
from engine.passes.projections import project0, project1
from engine.semialgebra.spec import SemialgebraSpec, bc_semialgebra, tensor_product
from engine.semialgebra.tensor import TensorValue, embed, tensor_add

logger = logging.getLogger(__name__)


@dataclass
class BackwardResult:
    graph: ComputationGraph
    algebra: SemiringSpec       # A as a semiring
    tensor_spec: SemialgebraSpec  # A x bc(S,1)
    alpha0: ForwardResult       # forward over A with the zeroth projections of xi
    beta: Dict[int, Any]        # per node; arc values come from beta_at
    combined: TensorValue

    def beta_at(self, x: int) -> Any:
        """Backward value at a node or an arc."""
        g = self.graph
        g.check(x)
        if g.is_node(x):
            return self.beta[x]
        head = g.head(x)
        if g.op[head] is Op.ADD:
            return self.beta[head]
        ins = g.in_arcs(head)
        rest = _excluded_products(self.algebra, [self.alpha0.alpha(e) for e in ins])[ins.index(x)]
        return self.beta[head] if rest is None else self.algebra.mul(self.beta[head], rest)


def _excluded_products(a: SemiringSpec, values: List[Any]) -> List[Optional[Any]]:
    """For each i, prod_{j != i} values[j] as prefix*suffix; None stands for the empty product."""
    k = len(values)
    prefix: List[Optional[Any]] = [None] * k
    acc = None
    for i in range(k):
        prefix[i] = acc
        acc = values[i] if acc is None else a.mul(acc, values[i])
    suffix: List[Optional[Any]] = [None] * k
    acc = None
    for i in range(k - 1, -1, -1):
        suffix[i] = acc
        acc = values[i] if acc is None else a.mul(values[i], acc)
    out = []
    for p, q in zip(prefix, suffix):
        if p is None:
            out.append(q)
        elif q is None:
            out.append(p)
        else:
            out.append(a.mul(p, q))
    return out


def forward_backward(g: ComputationGraph, a: SemialgebraSpec, xi: Mapping[int, TensorValue],
                     policy: Optional[CheckpointPolicy] = None) -> BackwardResult:
    """
    One forward pass over A with the zeroth projections of xi, then one backward
    pass over A from the sinks. combined = sink sum x e0 + sum_src P1(xi(v)) * beta(v) x e1.
    """
    if not a.scalar.cancellative:
        raise NotCancellative(f"{a.scalar.name} is not cancellative")
    policy = policy or CheckpointPolicy.nodes()
    tspec = tensor_product(a, bc_semialgebra(a.scalar, 1))
    check_source_values(g, tspec.as_semiring(), xi)

    A = a.as_semiring()
    fwd = forward(g, A, {v: project0(xi[v]) for v in g.sources}, policy)

    beta: Dict[int, Any] = {v: A.one for v in g.sinks}
    frontier: Dict[int, Any] = dict(beta)
    for step in cutset_chain(g, Direction.BACKWARD):
        if g.is_node(step.x):
            # node -> its in-arcs
            head = step.x
            b = frontier.pop(head)
            ins = g.in_arcs(head)
            if g.op[head] is Op.ADD:
                for e in ins:
                    frontier[e] = b
            else:
                excluded = _excluded_products(A, [fwd.alpha(e) for e in ins])
                for e, rest in zip(ins, excluded):
                    frontier[e] = b if rest is None else A.mul(b, rest)
        else:
            # complete out-arc group -> its tail
            tail = g.tail(step.x)
            b = A.sum(frontier.pop(e) for e in g.out_arcs(tail))
            frontier[tail] = b
            beta[tail] = b

    sink_part = embed(tspec, fwd.sink_sum, 0)
    terms = []
    for v in g.sources:
        p1 = project1(xi[v])
        if p1.coeffs:
            terms.append(A.mul(p1, beta[v]))
    combined = tensor_add(sink_part, embed(tspec, A.sum(terms), 1))
    logger.debug("forward-backward over %s: %d nodes with beta", a.name, len(beta))
    return BackwardResult(graph=g, algebra=A, tensor_spec=tspec, alpha0=fwd, beta=beta, combined=combined)
