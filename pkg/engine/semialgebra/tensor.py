from __future__ import annotations
from typing import Any, Dict, Mapping, Sequence

from engine.algebra.semiring import SemiringSpec
from engine.api.errors import SchemaError, ShapeMismatch, SpecMismatch
from engine.semialgebra.spec import Key, SemialgebraSpec


class TensorValue:
    """An element of a (tensor product) semialgebra: basis tuple -> scalar, zeros never stored."""
    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: SemialgebraSpec, coeffs: Mapping[Key, Any]):
        zero_check = spec.scalar.is_zero
        self.spec = spec
        self.coeffs: Dict[Key, Any] = {tuple(k): c for k, c in sorted(coeffs.items()) if not zero_check(c)}

    def coefficient(self, u: Sequence[int]) -> Any:
        return self.coeffs.get(tuple(u), self.spec.scalar.zero)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorValue):
            return NotImplemented
        return self.spec == other.spec and self.coeffs == other.coeffs

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        inner = ", ".join(f"{self.spec.label(u)}: {c!r}" for u, c in self.coeffs.items())
        return f"TensorValue({self.spec.name}, {{{inner}}})"


def _same_spec(t1: TensorValue, t2: TensorValue) -> SemialgebraSpec:
    if t1.spec != t2.spec:
        raise SpecMismatch(f"{t1.spec.name} vs {t2.spec.name}")
    return t1.spec


def tensor_add(t1: TensorValue, t2: TensorValue) -> TensorValue:
    spec = _same_spec(t1, t2)
    add = spec.scalar.add
    out = dict(t1.coeffs)
    for u, c in t2.coeffs.items():
        out[u] = add(out[u], c) if u in out else c
    return TensorValue(spec, out)


def tensor_mul(t1: TensorValue, t2: TensorValue) -> TensorValue:
    spec = _same_spec(t1, t2)
    s = spec.scalar
    table = spec.table
    out: Dict[Key, Any] = {}
    for u, cu in t1.coeffs.items():
        for v, cv in t2.coeffs.items():
            entries = table.get((u, v))
            if not entries:
                continue
            prod = s.mul(cu, cv)
            for w, sigma, unit in entries:
                term = prod if unit else s.mul(prod, sigma)
                out[w] = s.add(out[w], term) if w in out else term
    return TensorValue(spec, out)


def tensor_eq(t1: TensorValue, t2: TensorValue) -> bool:
    if t1.spec != t2.spec:
        return False
    s = t1.spec.scalar
    keys = set(t1.coeffs) | set(t2.coeffs)
    return all(s.eq(t1.coeffs.get(u, s.zero), t2.coeffs.get(u, s.zero)) for u in keys)


def outer(spec: SemialgebraSpec, parts: Sequence[Sequence[Any]]) -> TensorValue:
    """Elementary tensor a1 x ... x am from per-factor coefficient vectors."""
    if len(parts) != len(spec.factors):
        raise ShapeMismatch(f"{len(parts)} parts for {len(spec.factors)} factors")
    s = spec.scalar
    coeffs: Dict[Key, Any] = {(): s.one}
    first = True
    for f, vec in zip(spec.factors, parts):
        if len(vec) != f.dim:
            raise ShapeMismatch(f"factor {f.name} needs {f.dim} coefficients, got {len(vec)}")
        nxt: Dict[Key, Any] = {}
        for k, c in coeffs.items():
            for i, ci in enumerate(vec):
                if s.is_zero(ci):
                    continue
                nxt[k + (i,)] = ci if first else s.mul(c, ci)
        coeffs = nxt
        first = False
    return TensorValue(spec, coeffs)


def embed(spec: SemialgebraSpec, a: TensorValue, i: int) -> TensorValue:
    """a x e_i, where a lives in every factor of spec but the last."""
    if a.spec != spec.without_last():
        raise ShapeMismatch(f"{a.spec.name} is not the leading part of {spec.name}")
    if not 0 <= i < spec.factors[-1].dim:
        raise ShapeMismatch(f"basis index {i} outside the last factor")
    return TensorValue(spec, {u + (i,): c for u, c in a.coeffs.items()})


def _parse(spec: SemialgebraSpec, text: str) -> TensorValue:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise SchemaError(f"expected ({';'.join('c' for _ in range(spec.dim))}), got {text!r}")
    parts = [p.strip() for p in body[1:-1].split(";")]
    if spec.scalar.parse is None:
        raise SchemaError(f"{spec.scalar.name} values cannot be parsed")
    if len(parts) != spec.dim:
        raise SchemaError(f"expected {spec.dim} coefficients, got {len(parts)} in {text!r}")
    return spec.element([spec.scalar.parse(p) for p in parts])


def semiring_of(spec: SemialgebraSpec) -> SemiringSpec:
    s = spec.scalar
    unit = spec.unit

    def sample(rng):
        return spec.element([s.sample(rng) for _ in range(spec.dim)])

    lift = None
    if s.lift is not None:
        def lift(x: float) -> TensorValue:
            c = s.lift(x)
            return TensorValue(spec, {u: s.mul(c, v) for u, v in unit.coeffs.items()})

    return SemiringSpec(
        name=spec.name,
        add=tensor_add,
        mul=tensor_mul,
        zero=spec.zero,
        one=unit,
        cancellative=True,
        eq=tensor_eq,
        parse=lambda text: _parse(spec, text),
        fmt=lambda t: "(" + ";".join(s.fmt(c) for c in spec.coordinates(t)) + ")",
        sample=sample if s.sample is not None else None,
        accepts=lambda v: isinstance(v, TensorValue) and v.spec == spec,
        lift=lift,
        base=s,
    )
