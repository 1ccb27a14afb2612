from __future__ import annotations
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Mapping, Optional, Tuple

if TYPE_CHECKING:
    from engine.graph.dag import ComputationGraph

Features = List[Tuple[str, Dict[int, float]]]


@dataclass
class BuiltGraph:
    graph: "ComputationGraph"
    # real source values read from the model tables; None when the model carries none
    xi: Optional[Dict[int, float]]
    # source id -> what the source stands for
    legend: Dict[int, str]
    # semantic role -> source id, e.g. ("res", t, k)
    keys: Dict[Tuple[Any, ...], int] = field(default_factory=dict)
    # unparsed per-semiring strings (graph documents only)
    raw_xi: Dict[int, str] = field(default_factory=dict)
    model: Any = None

    def source(self, *key: Any) -> int:
        return self.keys[tuple(key)]

    def legend_list(self) -> List[str]:
        return [self.legend.get(v, f"s{v}") for v in self.graph.source_order]


class Adapter:
    """
    Base interface input kinds implement. Modules under engine/adapters/ expose
    a get_adapter() -> Adapter factory named by their manifest.
    """
    kind: str = ""
    manifest: Mapping[str, Any] = {}

    def option(self, key: str, default: Any = None) -> Any:
        return (self.manifest.get("options") or {}).get(key, default)

    def on_load(self, manifest: Mapping[str, Any]) -> None:
        """Called once after the adapter module loads."""
        self.manifest = dict(manifest)

    def parse(self, doc: Mapping[str, Any]) -> Any:
        """Turns a decoded JSON document into the model object."""
        raise NotImplementedError

    def build(self, model: Any) -> BuiltGraph:
        """Translates the model into a computation graph."""
        raise NotImplementedError

    def default_features(self, built: BuiltGraph) -> Features:
        """Optional: feature families `expect` uses when no features file is given."""
        return []
