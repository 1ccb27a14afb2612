from __future__ import annotations
from dataclasses import dataclass
from typing import Any, Dict, Optional

from engine.algebra.semiring import OpCounter
from engine.api.adapter_base import Adapter, BuiltGraph
from engine.api.config import RunConfig


@dataclass
class RunContext:
    cfg: RunConfig
    manifest: Dict[str, Any]
    adapter: Adapter
    built: BuiltGraph
    # set when --telemetry is on; every semiring the run builds counts into it
    counter: Optional[OpCounter] = None

    @property
    def kind(self) -> str:
        return self.adapter.kind

    @property
    def semiring_name(self) -> str:
        return self.cfg.semiring or self.manifest.get("default_semiring", "real")

    def semiring_params(self) -> Dict[str, Any]:
        return {"atol": self.cfg.tolerance.abs, "rtol": self.cfg.tolerance.rel}
