from __future__ import annotations
import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import networkx as nx

from engine.api.errors import AtTerminalCutset, GraphError, TooLarge
from engine.graph.dag import ComputationGraph, poset_leq

logger = logging.getLogger(__name__)

DEFAULT_MAX_CHAINS = 10 ** 6


class Direction(Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True)
class Cutset:
    elements: FrozenSet[int]

    @classmethod
    def of(cls, elements: Iterable[int]) -> "Cutset":
        return cls(frozenset(elements))

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.elements))

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class CutsetStep:
    x: int                   # element of the old cutset that gets covered
    d_new: Tuple[int, ...]   # covering set, in schedule order
    d_old: Tuple[int, ...]   # covered set, leaves the cutset
    c_next: Cutset


def initial_cutset(g: ComputationGraph, direction: Direction) -> Cutset:
    return Cutset.of(g.sources if direction is Direction.FORWARD else g.sinks)


def terminal_cutset(g: ComputationGraph, direction: Direction) -> Cutset:
    return Cutset.of(g.sinks if direction is Direction.FORWARD else g.sources)


def _forward_candidates(g: ComputationGraph, c: Cutset):
    seen_heads = set()
    for x in c.elements:
        if g.is_node(x):
            out = g.out_arcs(x)
            if out:
                d_new = tuple(sorted(out, key=g.position.__getitem__))
                yield g.position[d_new[0]], x, d_new, (x,)
        else:
            h = g.head(x)
            if h in seen_heads:
                continue
            seen_heads.add(h)
            group = g.in_arcs(h)
            if all(e in c.elements for e in group):
                d_old = tuple(sorted(group, key=g.position.__getitem__))
                yield g.position[h], d_old[0], (h,), d_old


def _backward_candidates(g: ComputationGraph, c: Cutset):
    seen_tails = set()
    for x in c.elements:
        if g.is_node(x):
            ins = g.in_arcs(x)
            if ins:
                d_new = tuple(sorted(ins, key=g.position.__getitem__, reverse=True))
                yield -g.position[d_new[0]], x, d_new, (x,)
        else:
            t = g.tail(x)
            if t in seen_tails:
                continue
            seen_tails.add(t)
            group = g.out_arcs(t)
            if all(e in c.elements for e in group):
                d_old = tuple(sorted(group, key=g.position.__getitem__, reverse=True))
                yield -g.position[t], d_old[0], (t,), d_old


def advance_cutset(g: ComputationGraph, c: Cutset, direction: Direction) -> CutsetStep:
    """
    Moves one covering step away from c.

    FORWARD: a non-sink node is replaced by its out-arcs, or a complete group
    of in-arcs is replaced by their head. BACKWARD is the order dual. When
    several steps qualify, the one whose new elements come first in the
    topological schedule (last, for BACKWARD) wins.
    """
    if c == terminal_cutset(g, direction):
        raise AtTerminalCutset(f"cutset is already terminal for {direction.value}")

    scan = _forward_candidates if direction is Direction.FORWARD else _backward_candidates
    best = min(scan(g, c), default=None, key=lambda cand: cand[0])
    if best is None:
        raise GraphError(f"no element of {sorted(c.elements)} can be covered; not a cutset")
    _, x, d_new, d_old = best
    c_next = Cutset((c.elements | frozenset(d_new)) - frozenset(d_old))
    return CutsetStep(x=x, d_new=d_new, d_old=d_old, c_next=c_next)


def cutset_chain(g: ComputationGraph, direction: Direction) -> List[CutsetStep]:
    """All steps from the initial to the terminal cutset. Cached on the graph."""
    if direction in g._chains:
        return g._chains[direction]
    steps: List[CutsetStep] = []
    c = initial_cutset(g, direction)
    end = terminal_cutset(g, direction)
    while c != end:
        step = advance_cutset(g, c, direction)
        logger.debug("%s step %d: x=%s |D'|=%d |D|=%d |C'|=%d", direction.value, len(steps),
                     step.x, len(step.d_new), len(step.d_old), len(step.c_next))
        steps.append(step)
        c = step.c_next
    g._chains[direction] = steps
    return steps


def introduced_at(g: ComputationGraph, direction: Direction) -> Dict[int, int]:
    """Index of the first cutset in the chain containing each element (0 = initial cutset)."""
    key = (direction, "introduced")
    if key not in g._chains:
        index = {x: 0 for x in initial_cutset(g, direction)}
        for i, step in enumerate(cutset_chain(g, direction)):
            for y in step.d_new:
                index[y] = i + 1
        g._chains[key] = index
    return g._chains[key]


def maximal_chains(g: ComputationGraph, max_chains: int = DEFAULT_MAX_CHAINS) -> Iterator[List[int]]:
    """Maximal chains of the element poset, i.e. source-to-sink paths of the covering graph."""
    count = 0
    sinks = set(g.sinks)
    for s in g.sources:
        if s in sinks:
            paths: Iterable[List[int]] = [[s]]
        else:
            paths = (p for t in g.sinks for p in nx.all_simple_paths(g.hasse, s, t))
        for path in paths:
            count += 1
            if count > max_chains:
                raise TooLarge(f"more than {max_chains} maximal chains")
            yield path


def is_antichain_cutset(g: ComputationGraph, c: Iterable[int],
                        max_chains: Optional[int] = None) -> bool:
    """Brute-force check for small graphs: pairwise incomparable and meets every maximal chain."""
    elements = frozenset(c)
    for x in elements:
        g.check(x)
    for x, y in combinations(elements, 2):
        if poset_leq(g, x, y) or poset_leq(g, y, x):
            return False
    limit = DEFAULT_MAX_CHAINS if max_chains is None else max_chains
    return all(elements.intersection(chain) for chain in maximal_chains(g, limit))
