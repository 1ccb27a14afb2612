from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, MutableMapping

from engine.algebra.semiring import SemiringSpec
from engine.api.config import CheckpointMode, CheckpointPolicy
from engine.api.errors import InsufficientCheckpoints
from engine.graph.cutset import CutsetStep, Direction, cutset_chain, introduced_at
from engine.graph.dag import ComputationGraph, Op

logger = logging.getLogger(__name__)


@dataclass
class Checkpoints:
    """Values kept by a forward run: per element, plus whole cutsets keyed by chain index."""
    values: Dict[int, Any] = field(default_factory=dict)
    frames: Dict[int, Dict[int, Any]] = field(default_factory=dict)


def apply_forward_step(g: ComputationGraph, s: SemiringSpec,
                       frontier: MutableMapping[int, Any], step: CutsetStep) -> None:
    """Evaluates the covering set of one step from the values on the current cutset."""
    for y in step.d_new:
        if g.is_arc(y):
            frontier[y] = frontier[g.tail(y)]
            continue
        ins = g.in_arcs(y)
        assert ins, f"internal node {y} has no in-arcs"
        vals = [frontier[e] for e in ins]
        frontier[y] = s.sum(vals) if g.op[y] is Op.ADD else s.product(vals)
    for x in step.d_old:
        del frontier[x]


def keeps(policy: CheckpointPolicy, g: ComputationGraph, x: int) -> bool:
    """Whether the per-element store holds x under the policy (cutset frames aside)."""
    if policy.mode is CheckpointMode.ALL_ELEMENTS:
        return True
    if policy.mode is CheckpointMode.NODES_ONLY:
        return g.is_node(x)
    return g.is_sink(x)


def checkpointed_replay(g: ComputationGraph, s: SemiringSpec, policy: CheckpointPolicy,
                        stored: Checkpoints, element: int) -> Any:
    """The forward value at element, recomputed from the nearest stored data at or below it."""
    g.check(element)
    if element in stored.values:
        return stored.values[element]

    if policy.mode is CheckpointMode.NODES_ONLY and g.is_arc(element):
        tail = g.tail(element)
        if tail in stored.values:
            return stored.values[tail]

    if policy.mode is CheckpointMode.CUTSETS:
        intro = introduced_at(g, Direction.FORWARD)[element]
        below = [i for i in stored.frames if i <= intro]
        if below:
            start = max(below)
            frontier = dict(stored.frames[start])
            steps = cutset_chain(g, Direction.FORWARD)
            for i in range(start, intro):
                apply_forward_step(g, s, frontier, steps[i])
            logger.debug("replayed %d steps from cutset %d for element %d", intro - start, start, element)
            return frontier[element]

    raise InsufficientCheckpoints(f"no stored value reaches element {element} under policy {policy}")
