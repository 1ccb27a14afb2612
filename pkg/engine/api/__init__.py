from .adapter_base import Adapter, BuiltGraph
from .config import CheckpointMode, CheckpointPolicy, RunConfig, Tolerance
from .errors import EngineError, SchemaError

__all__ = [
    "Adapter", "BuiltGraph", "CheckpointMode", "CheckpointPolicy", "RunConfig", "Tolerance",
    "EngineError", "SchemaError",
]
