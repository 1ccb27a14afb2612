from __future__ import annotations
import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple

from engine.algebra.semiring import SemiringSpec
from engine.api.errors import OrderMismatch, SchemaError

MAX_ORDER = 64

# exact C(n, k) for n <= 64
_BINOMIAL = [[math.comb(n, k) for k in range(n + 1)] for n in range(MAX_ORDER + 1)]


def binomial(n: int, k: int) -> int:
    return _BINOMIAL[n][k]


@dataclass(frozen=True)
class BCValue:
    components: Tuple[Any, ...]

    @property
    def order(self) -> int:
        return len(self.components) - 1

    def __getitem__(self, i: int) -> Any:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)


def _check_orders(a: BCValue, b: BCValue) -> None:
    if a.order != b.order:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ")


def bc_add(a: BCValue, b: BCValue, base: SemiringSpec) -> BCValue:
    _check_orders(a, b)
    return BCValue(tuple(base.add(x, y) for x, y in zip(a.components, b.components)))


def bc_mul(a: BCValue, b: BCValue, base: SemiringSpec) -> BCValue:
    """Binomial convolution: c_i = sum_j C(i, j) * a_j * b_(i-j)."""
    _check_orders(a, b)
    out = []
    for i in range(a.order + 1):
        row = _BINOMIAL[i]
        out.append(base.sum(base.times(row[j], base.mul(a[j], b[i - j])) for j in range(i + 1)))
    return BCValue(tuple(out))


def _parse(text: str, base: SemiringSpec, n: int) -> BCValue:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise SchemaError(f"expected (c0;...;c{n}), got {text!r}")
    parts = _split_top(body[1:-1])
    if len(parts) != n + 1:
        raise SchemaError(f"expected {n + 1} components, got {len(parts)} in {text!r}")
    if base.parse is None:
        raise SchemaError(f"{base.name} values cannot be parsed")
    return BCValue(tuple(base.parse(p) for p in parts))


def _split_top(body: str) -> Sequence[str]:
    """Splits on ';' outside parentheses so nested bc values parse."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == ";" and depth == 0:
            parts.append(body[start:i])
            start = i + 1
    parts.append(body[start:])
    return [p.strip() for p in parts]


def bc_semiring(base: SemiringSpec, n: int) -> SemiringSpec:
    if not 0 <= n <= MAX_ORDER:
        raise OrderMismatch(f"binomial convolution order must be in 0..{MAX_ORDER}, got {n}")
    zero = BCValue((base.zero,) * (n + 1))
    one = BCValue((base.one,) + (base.zero,) * n)

    def accepts(v: Any) -> bool:
        return isinstance(v, BCValue) and v.order == n and all(base.accepts(c) for c in v)

    sample: Optional[Any] = None
    if base.sample is not None:
        def sample(rng):
            return BCValue(tuple(base.sample(rng) for _ in range(n + 1)))

    lift = None
    if base.lift is not None:
        def lift(x: float) -> BCValue:
            return BCValue((base.lift(x),) + (base.zero,) * n)

    return SemiringSpec(
        name=f"bc({base.name},{n})",
        add=lambda a, b: bc_add(a, b, base),
        mul=lambda a, b: bc_mul(a, b, base),
        zero=zero,
        one=one,
        cancellative=base.cancellative,
        eq=lambda a, b: a.order == b.order and all(base.eq(x, y) for x, y in zip(a, b)),
        parse=lambda text: _parse(text, base, n),
        fmt=lambda v: "(" + ";".join(base.fmt(c) for c in v) + ")",
        sample=sample,
        accepts=accepts,
        lift=lift,
        base=base,
    )
