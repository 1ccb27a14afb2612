from __future__ import annotations
import importlib
import json
import re
from functools import reduce
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from engine.algebra.binomial import bc_semiring
from engine.algebra.instances import parse_semiring, split_args
from engine.algebra.semiring import OpCounter, SemiringSpec
from engine.api.adapter_base import Adapter, BuiltGraph, Features
from engine.api.errors import SchemaError, UnknownInstance
from engine.semialgebra.spec import (
    SemialgebraSpec,
    bc_semialgebra,
    semialgebra_from_semiring,
    tensor_product,
)

MANIFEST_DIR = Path(__file__).resolve().parents[1] / "adapters" / "manifests"

_BC_SHORT = re.compile(r"bc(\d+)")


def load_document(path: Path) -> Dict[str, Any]:
    """Reads a UTF-8 JSON input document; syntax errors carry line and column."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise SchemaError(f"no such file {str(path)!r}", "input") from None
    except json.JSONDecodeError as e:
        raise SchemaError(e.msg, f"{path}:{e.lineno}:{e.colno}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object", str(path))
    return doc


def load_run_config(path: Path) -> Dict[str, Any]:
    """YAML run-configuration file -> flat key/value mapping."""
    if not path.exists():
        raise SchemaError(f"no such file {str(path)!r}", "config")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise SchemaError(str(e), str(path)) from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise SchemaError("top level must be a mapping", str(path))
    return data


def load_adapter_manifest(kind: str) -> Dict[str, Any]:
    manifest = MANIFEST_DIR / f"{kind}.yaml"
    if not manifest.exists():
        known = ", ".join(sorted(p.stem for p in MANIFEST_DIR.glob("*.yaml")))
        raise SchemaError(f"unknown document kind {kind!r}; known: {known}", "kind")
    with open(manifest, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


def load_adapter(manifest: Mapping[str, Any]) -> Adapter:
    """
    Imports the manifest's module and returns its adapter.
    The module must define a get_adapter() -> Adapter factory.
    """
    module = importlib.import_module(manifest["module"])
    if not hasattr(module, "get_adapter"):
        raise AttributeError(f"{manifest['module']} must define get_adapter()")
    adapter = module.get_adapter()
    adapter.on_load(manifest)
    return adapter


def _counted(s: SemiringSpec, counter: Optional[OpCounter]) -> SemiringSpec:
    return s.counted(counter) if counter is not None else s


def resolve_semiring(text: str, params: Optional[Mapping[str, Any]] = None,
                     counter: Optional[OpCounter] = None) -> SemiringSpec:
    """
    Like parse_semiring, plus `tensor(...)` products. With a counter, the
    innermost scalar semiring is the counted one.
    """
    name, args = split_args(text)
    if name == "tensor":
        return resolve_semialgebra(text, params, counter).as_semiring()
    if name == "bc" and len(args) == 2:
        try:
            n = int(args[1])
        except ValueError:
            raise UnknownInstance(f"malformed semiring name {text!r}") from None
        return bc_semiring(resolve_semiring(args[0], params, counter), n)
    return _counted(parse_semiring(text, params), counter)


def resolve_semialgebra(text: str, params: Optional[Mapping[str, Any]] = None,
                        counter: Optional[OpCounter] = None,
                        scalar: Optional[SemiringSpec] = None) -> SemialgebraSpec:
    """
    `real`, `bc(real,2)`, `tensor(real,bc1,bc1)` ... as semialgebras.
    `bcN` inside a tensor means bc(scalar, N) over the tensor's scalar.
    """
    def base(scalar_text: str) -> SemiringSpec:
        s = resolve_semiring(scalar_text, params, counter)
        return scalar if scalar is not None and scalar.name == s.name else s

    name, args = split_args(text)
    short = _BC_SHORT.fullmatch(name)
    if short and not args:
        return bc_semialgebra(scalar or base("real"), int(short.group(1)))
    if name == "bc" and len(args) == 2:
        try:
            n = int(args[1])
        except ValueError:
            raise UnknownInstance(f"malformed semiring name {text!r}") from None
        return bc_semialgebra(base(args[0]), n)
    if name == "tensor":
        if not args:
            raise UnknownInstance("tensor needs at least one factor")
        inner = scalar or resolve_semialgebra(args[0], params, counter).scalar
        return reduce(tensor_product, (resolve_semialgebra(a, params, counter, inner) for a in args))
    return semialgebra_from_semiring(base(text))


def read_features(path: Path, built: BuiltGraph) -> Features:
    """
    Features file: {"features": [{"name": ..., "values": {source id: number}}]}.
    Values for non-sources are rejected.
    """
    doc = load_document(path)
    entries = doc.get("features")
    if not isinstance(entries, list):
        raise SchemaError("expected an array", "features")
    out: Features = []
    for i, entry in enumerate(entries):
        where = f"features[{i}]"
        if not isinstance(entry, Mapping) or not isinstance(entry.get("values"), Mapping):
            raise SchemaError("expected {name, values}", where)
        values: Dict[int, float] = {}
        for key, value in entry["values"].items():
            try:
                v = int(key)
            except ValueError:
                raise SchemaError(f"{key!r} is not a source id", f"{where}.values") from None
            if v not in built.graph or not built.graph.is_source(v):
                raise SchemaError(f"{v} is not a source", f"{where}.values")
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise SchemaError("expected a number", f"{where}.values.{key}")
            values[v] = float(value)
        out.append((str(entry.get("name", f"f{i}")), values))
    return out
