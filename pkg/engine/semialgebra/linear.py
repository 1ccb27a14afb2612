from __future__ import annotations
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from engine.algebra.semiring import SemiringSpec
from engine.api.errors import IncompleteImages, SpecMismatch
from engine.semialgebra.spec import Key, SemialgebraSpec
from engine.semialgebra.tensor import TensorValue


@dataclass(frozen=True, eq=False)
class LinearMap:
    """sum_w c_w w  ->  sum_w scale(c_w, images[w])"""
    spec: SemialgebraSpec
    images: Mapping[Key, Any]
    add: Callable[[Any, Any], Any]
    scale: Callable[[Any, Any], Any]
    zero: Any

    def __call__(self, t: TensorValue) -> Any:
        if t.spec != self.spec:
            raise SpecMismatch(f"map is defined on {self.spec.name}, got {t.spec.name}")
        acc = None
        for w, c in t.coeffs.items():
            term = self.scale(c, self.images[w])
            acc = term if acc is None else self.add(acc, term)
        return self.zero if acc is None else acc


def extend_by_linearity(spec: SemialgebraSpec, images: Mapping[Sequence[int], Any],
                        add: Callable[[Any, Any], Any], scale: Callable[[Any, Any], Any],
                        zero: Any) -> LinearMap:
    imgs = {tuple(k): v for k, v in images.items()}
    missing = [u for u in spec.basis if u not in imgs]
    if missing:
        raise IncompleteImages(f"no image for {', '.join(spec.label(u) for u in missing)}")
    return LinearMap(spec, imgs, add, scale, zero)


def scalar_extractor(spec: SemialgebraSpec, images: Mapping[Sequence[int], Any],
                     target: SemiringSpec | None = None) -> LinearMap:
    """Linear map into the scalar semiring (or another semiring the scalars multiply into)."""
    s = target or spec.scalar
    return extend_by_linearity(spec, images, s.add, s.mul, s.zero)


def component_extractor(spec: SemialgebraSpec, index: int) -> LinearMap:
    """Single-factor map picking one coordinate: e_index -> 1, every other basis element -> 0."""
    s = spec.scalar
    return scalar_extractor(spec, {u: (s.one if u == (index,) else s.zero) for u in spec.basis})
