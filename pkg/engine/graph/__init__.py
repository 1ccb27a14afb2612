from .dag import ComputationGraph, GraphBuilder, Op, build_graph, poset_leq, topological_schedule
from .cutset import (
    Cutset,
    CutsetStep,
    Direction,
    advance_cutset,
    cutset_chain,
    initial_cutset,
    is_antichain_cutset,
    terminal_cutset,
)

__all__ = [
    "ComputationGraph", "GraphBuilder", "Op", "build_graph", "poset_leq", "topological_schedule",
    "Cutset", "CutsetStep", "Direction", "advance_cutset", "cutset_chain", "initial_cutset",
    "is_antichain_cutset", "terminal_cutset",
]
