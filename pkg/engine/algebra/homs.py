from __future__ import annotations
import math
import operator
from dataclasses import dataclass
from typing import Any, Callable

from engine.algebra.binomial import BCValue, bc_semiring
from engine.algebra.instances import complex2, real
from engine.algebra.semiring import SemiringSpec


@dataclass(frozen=True, eq=False)
class MonoidHom:
    """
    A monoid homomorphism f: M -> (target, mul, one).

    M is described by `source_combine` and `source_identity`; `target` is the
    semiring whose multiplicative monoid receives the images.
    """
    name: str
    source_combine: Callable[[Any, Any], Any]
    source_identity: Any
    target: SemiringSpec
    apply: Callable[[Any], Any]

    def __call__(self, m: Any) -> Any:
        return self.apply(m)


def identity_hom(s: SemiringSpec) -> MonoidHom:
    return MonoidHom(f"id[{s.name}]", s.mul, s.one, s, lambda a: a)


def exp_hom() -> MonoidHom:
    """(R, +, 0) -> multiplicative reals."""
    return MonoidHom("exp", operator.add, 0.0, real(), math.exp)


def cos_sin_hom() -> MonoidHom:
    """(R, +, 0) -> multiplicative complex2, theta -> (cos theta, sin theta)."""
    return MonoidHom("cos_sin", operator.add, 0.0, complex2(), lambda t: (math.cos(t), math.sin(t)))


def powers_hom(s: SemiringSpec, n: int) -> MonoidHom:
    """(s, +, 0) -> bc(s, n), a -> (a^0, a^1, ..., a^n)."""
    target = bc_semiring(s, n)

    def apply(a: Any) -> BCValue:
        comps = [s.one]
        for _ in range(n):
            comps.append(a if len(comps) == 1 else s.mul(comps[-1], a))
        return BCValue(tuple(comps))

    return MonoidHom(f"powers[{s.name},{n}]", s.add, s.zero, target, apply)
