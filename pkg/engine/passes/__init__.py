from .checkpoint import Checkpoints, checkpointed_replay
from .forward import ForwardResult, forward, framework_forward, free_forward, parametrized_forward
from .projections import join_projections, project0, project1
from .backward import BackwardResult, forward_backward

__all__ = [
    "Checkpoints", "checkpointed_replay",
    "ForwardResult", "forward", "framework_forward", "free_forward", "parametrized_forward",
    "join_projections", "project0", "project1",
    "BackwardResult", "forward_backward",
]
