from __future__ import annotations
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, TextIO, Tuple

from engine.algebra.semiring import OpCounter


@dataclass
class Report:
    """Ordered result rows; values are already formatted strings."""
    command: str
    semiring: str = ""
    rows: List[Tuple[str, str]] = field(default_factory=list)
    telemetry: Optional[OpCounter] = None
    graph: Optional[Dict[str, Any]] = None

    def add(self, name: str, value: str) -> None:
        self.rows.append((name, value))


def write_json(report: Report, out: TextIO) -> None:
    doc: Dict[str, Any] = {"command": report.command}
    if report.semiring:
        doc["semiring"] = report.semiring
    doc["results"] = dict(report.rows)
    if report.telemetry is not None:
        doc["telemetry"] = {"adds": report.telemetry.adds, "muls": report.telemetry.muls,
                            "total": report.telemetry.total}
    if report.graph is not None:
        doc["graph"] = report.graph
    out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")


def write_tsv(report: Report, out: TextIO) -> None:
    for name, value in report.rows:
        out.write(f"{name}\t{value}\n")
    if report.telemetry is not None:
        out.write(f"telemetry.adds\t{report.telemetry.adds}\n")
        out.write(f"telemetry.muls\t{report.telemetry.muls}\n")
        out.write(f"telemetry.total\t{report.telemetry.total}\n")
    if report.graph is not None:
        out.write(f"graph\t{json.dumps(report.graph, sort_keys=False)}\n")


WRITERS = {"json": write_json, "tsv": write_tsv}
