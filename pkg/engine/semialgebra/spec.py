from __future__ import annotations
import itertools
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from engine.algebra.binomial import MAX_ORDER, BCValue, binomial
from engine.algebra.semiring import SemiringSpec
from engine.api.errors import (
    BasisRequired,
    NotCancellative,
    OrderMismatch,
    ScalarMismatch,
    ShapeMismatch,
)

Key = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Factor:
    """
    One tensor factor: a finite basis and its sparse structure constants.
    constants[(u, v)][w] is the coefficient of basis element w in u*v.
    """
    name: str
    labels: Tuple[str, ...]
    constants: Mapping[Tuple[int, int], Mapping[int, Any]]
    unit: Tuple[Any, ...]
    order: Optional[int] = None  # set for binomial-convolution factors

    @property
    def dim(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class SemialgebraSpec:
    """
    A commutative semialgebra over `scalar`, kept as a flat tuple of factors.
    Nested tensor products flatten, so (A x B) x C and A x (B x C) coincide.
    Basis elements are index tuples, one index per factor.
    """
    scalar: SemiringSpec
    factors: Tuple[Factor, ...]
    table: Dict[Tuple[Key, Key], Tuple[Tuple[Key, Any, bool], ...]] = field(init=False, repr=False)
    unit_coeffs: Dict[Key, Any] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.factors:
            raise ShapeMismatch("a semialgebra needs at least one factor")
        object.__setattr__(self, "table", self._product_table())
        object.__setattr__(self, "unit_coeffs", self._unit())

    @property
    def name(self) -> str:
        if len(self.factors) == 1:
            return self.factors[0].name
        return "tensor(" + ",".join(f.name for f in self.factors) + ")"

    @property
    def key(self) -> Tuple[str, Tuple[str, ...]]:
        return self.scalar.name, tuple(f.name for f in self.factors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemialgebraSpec):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def basis(self) -> List[Key]:
        return list(itertools.product(*(range(f.dim) for f in self.factors)))

    @property
    def dim(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.dim
        return n

    def label(self, u: Key) -> str:
        return "⊗".join(f.labels[i] for f, i in zip(self.factors, u))

    def _is_one(self, c: Any) -> bool:
        return c is self.scalar.one or c == self.scalar.one

    def _product_table(self):
        s = self.scalar
        table = {}
        for u in self.basis:
            for v in self.basis:
                per_factor = []
                for f, ui, vi in zip(self.factors, u, v):
                    entries = f.constants.get((ui, vi))
                    if not entries:
                        break
                    per_factor.append(list(entries.items()))
                else:
                    out = []
                    for combo in itertools.product(*per_factor):
                        w = tuple(wi for wi, _ in combo)
                        coeffs = [c for _, c in combo if not self._is_one(c)]
                        sigma = s.product(coeffs)
                        out.append((w, sigma, not coeffs))
                    table[(u, v)] = tuple(out)
        return table

    def _unit(self) -> Dict[Key, Any]:
        s = self.scalar
        unit = {}
        for u in self.basis:
            coeffs = [f.unit[i] for f, i in zip(self.factors, u)]
            if any(s.is_zero(c) for c in coeffs):
                continue
            unit[u] = s.product(c for c in coeffs if not self._is_one(c))
        return unit

    # values
    def element(self, coords: Sequence[Any]):
        """TensorValue from a flat coefficient list in basis order."""
        from engine.semialgebra.tensor import TensorValue
        basis = self.basis
        if len(coords) != len(basis):
            raise ShapeMismatch(f"{len(coords)} coefficients for a {len(basis)}-dimensional basis")
        return TensorValue(self, dict(zip(basis, coords)))

    def basis_element(self, u: Key):
        from engine.semialgebra.tensor import TensorValue
        return TensorValue(self, {tuple(u): self.scalar.one})

    @property
    def zero(self):
        from engine.semialgebra.tensor import TensorValue
        return TensorValue(self, {})

    @property
    def unit(self):
        from engine.semialgebra.tensor import TensorValue
        return TensorValue(self, self.unit_coeffs)

    def coordinates(self, t) -> List[Any]:
        return [t.coeffs.get(u, self.scalar.zero) for u in self.basis]

    def lift(self, value: Any):
        """Embeds a value of the single factor's own semiring (a scalar, or a BCValue)."""
        if len(self.factors) != 1:
            raise ShapeMismatch(f"{self.name} has {len(self.factors)} factors; lift needs one")
        if isinstance(value, BCValue):
            return self.element(value.components)
        return self.element((value,))

    def without_last(self) -> "SemialgebraSpec":
        return SemialgebraSpec(self.scalar, self.factors[:-1])

    def as_semiring(self) -> SemiringSpec:
        from engine.semialgebra.tensor import semiring_of
        return semiring_of(self)


def semialgebra_from_semiring(s: SemiringSpec) -> SemialgebraSpec:
    """s as a one-dimensional semialgebra over itself, basis {1}."""
    if not s.cancellative:
        raise NotCancellative(f"{s.name} is not cancellative")
    if s.base is not None:
        raise BasisRequired(f"{s.name} is multi-dimensional; build it with an explicit basis")
    return SemialgebraSpec(s, (Factor(s.name, ("1",), {(0, 0): {0: s.one}}, (s.one,)),))


def bc_factor(base: SemiringSpec, n: int) -> Factor:
    if not 0 <= n <= MAX_ORDER:
        raise OrderMismatch(f"binomial convolution order must be in 0..{MAX_ORDER}, got {n}")
    constants = {}
    for i in range(n + 1):
        for j in range(n + 1 - i):
            constants[(i, j)] = {i + j: base.times(binomial(i + j, i), base.one)}
    unit = (base.one,) + (base.zero,) * n
    return Factor(f"bc({base.name},{n})", tuple(f"e{i}" for i in range(n + 1)), constants, unit, order=n)


def bc_semialgebra(base: SemiringSpec, n: int) -> SemialgebraSpec:
    if not base.cancellative:
        raise NotCancellative(f"{base.name} is not cancellative")
    return SemialgebraSpec(base, (bc_factor(base, n),))


def tensor_product(a: SemialgebraSpec, b: SemialgebraSpec) -> SemialgebraSpec:
    if a.scalar.name != b.scalar.name:
        raise ScalarMismatch(f"scalars {a.scalar.name} and {b.scalar.name} differ")
    if not a.scalar.cancellative:
        raise NotCancellative(f"{a.scalar.name} is not cancellative")
    return SemialgebraSpec(a.scalar, a.factors + b.factors)


def structure_violations(spec: SemialgebraSpec) -> List[str]:
    """Checks commutativity and associativity of the structure constants on all basis pairs/triples."""
    s = spec.scalar
    problems: List[str] = []

    def as_map(entries) -> Dict[Key, Any]:
        return {w: (s.one if unit else sigma) for w, sigma, unit in entries}

    def same(x: Dict[Key, Any], y: Dict[Key, Any]) -> bool:
        return all(s.eq(x.get(w, s.zero), y.get(w, s.zero)) for w in set(x) | set(y))

    def expand(coeffs: Dict[Key, Any], pair) -> Dict[Key, Any]:
        out: Dict[Key, Any] = {}
        for w, cw in coeffs.items():
            for w2, sigma in as_map(spec.table.get(pair(w), ())).items():
                term = s.mul(cw, sigma)
                out[w2] = s.add(out[w2], term) if w2 in out else term
        return out

    basis = spec.basis
    for u in basis:
        for v in basis:
            if not same(as_map(spec.table.get((u, v), ())), as_map(spec.table.get((v, u), ()))):
                problems.append(f"not commutative at ({spec.label(u)}, {spec.label(v)})")
    for u, v, w in itertools.product(basis, repeat=3):
        left = expand(as_map(spec.table.get((u, v), ())), lambda k: (k, w))
        right = expand(as_map(spec.table.get((v, w), ())), lambda k: (u, k))
        if not same(left, right):
            problems.append(f"not associative at ({spec.label(u)}, {spec.label(v)}, {spec.label(w)})")
    return problems
