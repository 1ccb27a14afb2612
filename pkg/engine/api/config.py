from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from engine.api.errors import SchemaError

COMMANDS = ("forward", "free-forward", "fb", "expect", "grad", "second-order", "validate")
FORMATS = ("json", "tsv")


class CheckpointMode(Enum):
    ALL_ELEMENTS = "all"
    NODES_ONLY = "nodes"
    CUTSETS = "cutsets"


@dataclass(frozen=True)
class CheckpointPolicy:
    mode: CheckpointMode = CheckpointMode.ALL_ELEMENTS
    stride: int = 1

    def __post_init__(self):
        if self.stride < 1:
            raise SchemaError(f"cutset stride must be >= 1, got {self.stride}", "checkpoint")

    @classmethod
    def all(cls) -> "CheckpointPolicy":
        return cls(CheckpointMode.ALL_ELEMENTS)

    @classmethod
    def nodes(cls) -> "CheckpointPolicy":
        return cls(CheckpointMode.NODES_ONLY)

    @classmethod
    def cutsets(cls, stride: int) -> "CheckpointPolicy":
        return cls(CheckpointMode.CUTSETS, stride)

    @classmethod
    def parse(cls, text: str) -> "CheckpointPolicy":
        """Accepts `all`, `nodes` or `cutsets:K`."""
        text = text.strip().lower()
        if text == "all":
            return cls.all()
        if text == "nodes":
            return cls.nodes()
        if text.startswith("cutsets:"):
            try:
                return cls.cutsets(int(text.split(":", 1)[1]))
            except ValueError:
                pass
        raise SchemaError(f"expected all | nodes | cutsets:K, got {text!r}", "checkpoint")

    def __str__(self) -> str:
        if self.mode is CheckpointMode.CUTSETS:
            return f"cutsets:{self.stride}"
        return self.mode.value


@dataclass(frozen=True)
class Tolerance:
    abs: float = 1e-9
    rel: float = 1e-9


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    semiring: Optional[str] = None
    checkpoint: CheckpointPolicy = field(default_factory=CheckpointPolicy.all)
    output_format: str = "json"
    tolerance: Tolerance = field(default_factory=Tolerance)
    telemetry: bool = False
    features_path: Optional[str] = None
    point: Optional[Tuple[float, ...]] = None
    emit_graph: bool = False
    forward_mode: bool = False
    # validate only
    cases: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise SchemaError(f"unknown command {self.command!r}", "command")
        if self.output_format not in FORMATS:
            raise SchemaError(f"unknown format {self.output_format!r}", "format")
        if self.command != "validate" and self.input_path is None:
            raise SchemaError("an input file is required", "input")


# keys accepted in a YAML run-configuration file
_YAML_KEYS = {
    "semiring", "checkpoint", "format", "atol", "rtol", "telemetry",
    "features", "point", "emit_graph", "forward_mode", "cases", "seed",
}


def config_from_mapping(command: str, input_path: Optional[str],
                        data: Dict[str, Any]) -> RunConfig:
    """Builds a RunConfig from flat key/value pairs (YAML file merged with CLI flags)."""
    unknown = set(data) - _YAML_KEYS
    if unknown:
        raise SchemaError(f"unknown keys {sorted(unknown)}", "config")

    point = data.get("point")
    if isinstance(point, str):
        point = tuple(float(p) for p in point.split(",") if p.strip())
    elif point is not None:
        point = tuple(float(p) for p in point)

    checkpoint = data.get("checkpoint") or "all"
    return RunConfig(
        command=command,
        input_path=input_path,
        semiring=data.get("semiring"),
        checkpoint=CheckpointPolicy.parse(str(checkpoint)),
        output_format=data.get("format") or "json",
        tolerance=Tolerance(abs=float(data.get("atol", 1e-9)), rel=float(data.get("rtol", 1e-9))),
        telemetry=bool(data.get("telemetry", False)),
        features_path=data.get("features"),
        point=point,
        emit_graph=bool(data.get("emit_graph", False)),
        forward_mode=bool(data.get("forward_mode", False)),
        cases=int(data.get("cases", 1000)),
        seed=int(data.get("seed", 0)),
    )
