from __future__ import annotations
from dataclasses import dataclass
from functools import reduce
from typing import Any, Callable, Dict, Mapping, Optional, Sequence, Tuple

from engine.algebra.homs import MonoidHom
from engine.api.errors import ScalarMismatch, ShapeMismatch, SourceSetMismatch, SpecMismatch
from engine.semialgebra.linear import LinearMap, extend_by_linearity
from engine.semialgebra.spec import SemialgebraSpec, tensor_product
from engine.semialgebra.tensor import TensorValue, outer


@dataclass(frozen=True, eq=False)
class FrameworkPart:
    spec: SemialgebraSpec
    hom: MonoidHom
    phi: Mapping[int, Any]


@dataclass(frozen=True, eq=False)
class Framework:
    """
    Everything a multilinear objective needs: the tensor spec, the product
    homomorphism f1 x ... x fm, the per-source tuples (phi1(v), ..., phim(v)),
    and the linear extractor applied to the sink sum.
    """
    hom: MonoidHom
    source_map: Dict[int, Tuple[Any, ...]]
    spec: SemialgebraSpec
    extractor: LinearMap

    def xi(self) -> Dict[int, TensorValue]:
        return {v: self.hom(m) for v, m in self.source_map.items()}


def compose_framework(parts: Sequence[FrameworkPart], extractors: Sequence[LinearMap],
                      target_mul: Optional[Callable[[Any, Any], Any]] = None) -> Framework:
    if not parts:
        raise ShapeMismatch("a framework needs at least one part")
    if len(extractors) != len(parts):
        raise ShapeMismatch(f"{len(extractors)} extractors for {len(parts)} parts")
    for j, p in enumerate(parts):
        if len(p.spec.factors) != 1:
            raise ShapeMismatch(f"part {j} is over {p.spec.name}; each part needs a single-factor semialgebra")
    scalar = parts[0].spec.scalar
    for p in parts[1:]:
        if p.spec.scalar.name != scalar.name:
            raise ScalarMismatch(f"parts over {scalar.name} and {p.spec.scalar.name}")
    sources = set(parts[0].phi)
    for j, p in enumerate(parts):
        if set(p.phi) != sources:
            raise SourceSetMismatch(f"part {j} is defined on a different source set")
    for j, (p, ext) in enumerate(zip(parts, extractors)):
        if ext.spec != p.spec:
            raise SpecMismatch(f"extractor {j} is defined on {ext.spec.name}, part on {p.spec.name}")

    spec = reduce(tensor_product, (p.spec for p in parts))
    target = spec.as_semiring()

    def combine(m1: Tuple[Any, ...], m2: Tuple[Any, ...]) -> Tuple[Any, ...]:
        return tuple(p.hom.source_combine(a, b) for p, a, b in zip(parts, m1, m2))

    def apply(ms: Tuple[Any, ...]) -> TensorValue:
        vecs = [p.spec.coordinates(p.spec.lift(p.hom(m))) for p, m in zip(parts, ms)]
        return outer(spec, vecs)

    hom = MonoidHom(
        name=" x ".join(p.hom.name for p in parts),
        source_combine=combine,
        source_identity=tuple(p.hom.source_identity for p in parts),
        target=target,
        apply=apply,
    )
    source_map = {v: tuple(p.phi[v] for p in parts) for v in sorted(sources)}

    first = extractors[0]
    mul = target_mul or first.scale
    images = {}
    for u in spec.basis:
        factors = [ext(p.spec.basis_element((ui,))) for p, ext, ui in zip(parts, extractors, u)]
        images[u] = reduce(mul, factors)
    extractor = extend_by_linearity(spec, images, first.add, first.scale, first.zero)
    return Framework(hom=hom, source_map=source_map, spec=spec, extractor=extractor)
