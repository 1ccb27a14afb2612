from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Tuple

from engine.algebra.homs import MonoidHom
from engine.algebra.natpoly import NatPoly, natpoly_semiring
from engine.algebra.semiring import OpCounter, SemiringSpec
from engine.api.config import CheckpointMode, CheckpointPolicy
from engine.api.errors import SemiringMismatch, SourceValueMissing, UnknownElement
from engine.graph.cutset import Direction, cutset_chain
from engine.graph.dag import ComputationGraph
from engine.passes.checkpoint import Checkpoints, apply_forward_step, checkpointed_replay, keeps

logger = logging.getLogger(__name__)


@dataclass
class ForwardResult:
    graph: ComputationGraph
    semiring: SemiringSpec
    policy: CheckpointPolicy
    checkpoints: Checkpoints
    sink_sum: Any

    @property
    def values(self) -> Dict[int, Any]:
        """Stored forward values; complete only under the ALL_ELEMENTS policy."""
        return self.checkpoints.values

    def alpha(self, x: int) -> Any:
        return checkpointed_replay(self.graph, self.semiring, self.policy, self.checkpoints, x)

    def all_values(self) -> Dict[int, Any]:
        return {x: self.alpha(x) for x in self.graph.schedule}

    def sink_values(self) -> Dict[int, Any]:
        return {v: self.checkpoints.values[v] for v in self.graph.sinks}


def check_source_values(g: ComputationGraph, s: SemiringSpec, xi: Mapping[int, Any]) -> None:
    missing = [v for v in g.sources if v not in xi]
    if missing:
        raise SourceValueMissing(f"no source value for {missing}")
    extra = sorted(v for v in xi if not g.is_source(v))
    if extra:
        raise UnknownElement(f"source values given for non-sources {extra}")
    for v in g.sources:
        if not s.accepts(xi[v]):
            raise SemiringMismatch(f"value {xi[v]!r} at source {v} is not a {s.name} value")


def forward(g: ComputationGraph, s: SemiringSpec, xi: Mapping[int, Any],
            policy: Optional[CheckpointPolicy] = None) -> ForwardResult:
    """Forward values, advancing cutset by cutset from the sources to the sinks."""
    policy = policy or CheckpointPolicy.all()
    check_source_values(g, s, xi)

    stored = Checkpoints()
    frontier: Dict[int, Any] = {v: xi[v] for v in g.sources}
    for v in g.sources:
        if keeps(policy, g, v):
            stored.values[v] = frontier[v]
    cutsets = policy.mode is CheckpointMode.CUTSETS
    if cutsets:
        stored.frames[0] = dict(frontier)

    for i, step in enumerate(cutset_chain(g, Direction.FORWARD), start=1):
        apply_forward_step(g, s, frontier, step)
        for y in step.d_new:
            if keeps(policy, g, y):
                stored.values[y] = frontier[y]
        if cutsets and i % policy.stride == 0:
            stored.frames[i] = dict(frontier)

    sink_sum = s.sum(frontier[v] for v in g.sinks)
    logger.debug("forward over %s: %d elements, %d stored, %d frames",
                 s.name, len(g.schedule), len(stored.values), len(stored.frames))
    return ForwardResult(graph=g, semiring=s, policy=policy, checkpoints=stored, sink_sum=sink_sum)


def free_forward(g: ComputationGraph, policy: Optional[CheckpointPolicy] = None,
                 counter: Optional[OpCounter] = None) -> ForwardResult:
    """Forward over natpoly(n), the i-th source in source_order mapped to x_i."""
    n = len(g.source_order)
    s = natpoly_semiring(n)
    if counter is not None:
        s = s.counted(counter)
    xi = {v: NatPoly.variable(i, n) for i, v in enumerate(g.source_order)}
    return forward(g, s, xi, policy)


def parametrized_forward(g: ComputationGraph, hom: MonoidHom, phi: Mapping[int, Any],
                         policy: Optional[CheckpointPolicy] = None) -> ForwardResult:
    missing = [v for v in g.sources if v not in phi]
    if missing:
        raise SourceValueMissing(f"no parameter for sources {missing}")
    return forward(g, hom.target, {v: hom(phi[v]) for v in g.sources}, policy)


def framework_forward(g: ComputationGraph, framework, policy: Optional[CheckpointPolicy] = None
                      ) -> Tuple[ForwardResult, Any]:
    """Runs a composed Framework and applies its extractor to the sink sum."""
    result = forward(g, framework.spec.as_semiring(), framework.xi(), policy)
    return result, framework.extractor(result.sink_sum)
