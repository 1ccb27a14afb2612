from __future__ import annotations
import dataclasses
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Optional

import numpy as np


def _accept_any(value: Any) -> bool:
    return True


@dataclass(frozen=True, eq=False)
class SemiringSpec:
    """
    A commutative semiring given by its operations.

    `sum`/`product` reduce starting from the first element, so an n-term sum
    costs n-1 additions; the empty sum is zero and the empty product is one.
    """
    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    cancellative: bool
    eq: Callable[[Any, Any], bool]
    parse: Optional[Callable[[str], Any]] = None
    fmt: Callable[[Any], str] = str
    sample: Optional[Callable[[np.random.Generator], Any]] = None
    accepts: Callable[[Any], bool] = _accept_any
    lift: Optional[Callable[[float], Any]] = None
    repeat: Optional[Callable[[int, Any], Any]] = None
    base: Optional["SemiringSpec"] = None

    def sum(self, values: Iterable[Any]) -> Any:
        it = iter(values)
        acc = next(it, _EMPTY)
        if acc is _EMPTY:
            return self.zero
        for v in it:
            acc = self.add(acc, v)
        return acc

    def product(self, values: Iterable[Any]) -> Any:
        it = iter(values)
        acc = next(it, _EMPTY)
        if acc is _EMPTY:
            return self.one
        for v in it:
            acc = self.mul(acc, v)
        return acc

    def times(self, n: int, a: Any) -> Any:
        """Repetition n*a = a + ... + a (n terms)."""
        if n < 0:
            raise ValueError("repetition count must be non-negative")
        if n == 0:
            return self.zero
        if n == 1:
            return a
        if self.repeat is not None:
            return self.repeat(n, a)
        acc = None
        step = a
        while n:
            if n & 1:
                acc = step if acc is None else self.add(acc, step)
            n >>= 1
            if n:
                step = self.add(step, step)
        return acc

    def power(self, a: Any, n: int) -> Any:
        if n < 0:
            raise ValueError("exponent must be non-negative")
        if n == 0:
            return self.one
        acc = None
        step = a
        while n:
            if n & 1:
                acc = step if acc is None else self.mul(acc, step)
            n >>= 1
            if n:
                step = self.mul(step, step)
        return acc

    def is_zero(self, a: Any) -> bool:
        return a == self.zero

    def counted(self, counter: "OpCounter") -> "SemiringSpec":
        """Same semiring with every add/mul tallied in counter."""
        add, mul, repeat = self.add, self.mul, self.repeat

        def counted_add(a, b):
            counter.adds += 1
            return add(a, b)

        def counted_mul(a, b):
            counter.muls += 1
            return mul(a, b)

        counted_repeat = None
        if repeat is not None:
            def counted_repeat(n, a):
                counter.muls += 1
                return repeat(n, a)

        return dataclasses.replace(self, add=counted_add, mul=counted_mul, repeat=counted_repeat)

    def __repr__(self) -> str:
        return f"SemiringSpec({self.name})"


_EMPTY = object()


@dataclass
class OpCounter:
    adds: int = 0
    muls: int = 0

    @property
    def total(self) -> int:
        return self.adds + self.muls

    def reset(self) -> None:
        self.adds = 0
        self.muls = 0
