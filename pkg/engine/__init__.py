from .api import BuiltGraph, CheckpointPolicy, EngineError, RunConfig, SchemaError  # re-export public API
from .graph import ComputationGraph, GraphBuilder, Op, build_graph

__all__ = [
    "BuiltGraph", "CheckpointPolicy", "ComputationGraph", "EngineError", "GraphBuilder", "Op",
    "RunConfig", "SchemaError", "build_graph",
]
