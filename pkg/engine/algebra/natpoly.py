from __future__ import annotations
from typing import Any, Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from engine.algebra.semiring import SemiringSpec
from engine.api.errors import ArityMismatch, ExponentOverflow

MAX_EXPONENT = 2 ** 32 - 1

Exponents = Tuple[int, ...]


class NatPoly:
    """
    Polynomial in x0..x{n-1} with non-negative integer coefficients.

    Sparse and canonical: `terms` maps exponent vectors to coefficients and
    never stores a zero coefficient, so equality is equality of term maps.
    """
    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[Exponents, int] | None = None):
        self.n_vars = n_vars
        clean: Dict[Exponents, int] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n_vars:
                raise ArityMismatch(f"exponent vector {exps} has length != {n_vars}")
            if any(e < 0 for e in exps) or coef < 0:
                raise ValueError("exponents and coefficients must be non-negative")
            if any(e > MAX_EXPONENT for e in exps):
                raise ExponentOverflow(f"exponent in {exps} exceeds 32 bits")
            if coef:
                clean[exps] = clean.get(exps, 0) + int(coef)
        self.terms = clean

    @classmethod
    def zero(cls, n_vars: int) -> "NatPoly":
        return cls(n_vars)

    @classmethod
    def one(cls, n_vars: int) -> "NatPoly":
        return cls(n_vars, {(0,) * n_vars: 1})

    @classmethod
    def constant(cls, c: int, n_vars: int) -> "NatPoly":
        return cls(n_vars, {(0,) * n_vars: c})

    @classmethod
    def variable(cls, i: int, n_vars: int) -> "NatPoly":
        if not 0 <= i < n_vars:
            raise ArityMismatch(f"variable x{i} outside 0..{n_vars - 1}")
        exps = [0] * n_vars
        exps[i] = 1
        return cls(n_vars, {tuple(exps): 1})

    def __add__(self, other: "NatPoly") -> "NatPoly":
        return natpoly_add(self, other)

    def __mul__(self, other: "NatPoly") -> "NatPoly":
        return natpoly_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NatPoly):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n_vars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self.terms.get(tuple(exps), 0)

    def total(self) -> int:
        """Sum of coefficients (number of monomials counted with multiplicity)."""
        return sum(self.terms.values())

    def derivative(self, k: int) -> "NatPoly":
        """Formal partial derivative by x_k."""
        if not 0 <= k < self.n_vars:
            raise ArityMismatch(f"variable x{k} outside 0..{self.n_vars - 1}")
        out: Dict[Exponents, int] = {}
        for exps, coef in self.terms.items():
            e = exps[k]
            if e:
                lowered = exps[:k] + (e - 1,) + exps[k + 1:]
                out[lowered] = out.get(lowered, 0) + coef * e
        return NatPoly(self.n_vars, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, reverse=True):
            coef = self.terms[exps]
            factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exps) if e]
            if coef != 1 or not factors:
                factors.insert(0, str(coef))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NatPoly({self.n_vars}, {str(self)!r})"


def _same_arity(p: NatPoly, q: NatPoly) -> None:
    if p.n_vars != q.n_vars:
        raise ArityMismatch(f"polynomials in {p.n_vars} and {q.n_vars} indeterminates")


def natpoly_add(p: NatPoly, q: NatPoly) -> NatPoly:
    _same_arity(p, q)
    out = dict(p.terms)
    for exps, coef in q.terms.items():
        out[exps] = out.get(exps, 0) + coef
    return NatPoly(p.n_vars, out)


def natpoly_mul(p: NatPoly, q: NatPoly) -> NatPoly:
    _same_arity(p, q)
    out: Dict[Exponents, int] = {}
    for e1, c1 in p.terms.items():
        for e2, c2 in q.terms.items():
            exps = tuple(a + b for a, b in zip(e1, e2))
            out[exps] = out.get(exps, 0) + c1 * c2
    return NatPoly(p.n_vars, out)


def natpoly_eval(p: NatPoly, s: SemiringSpec, values: Sequence[Any]) -> Any:
    """Substitutes values for x0..x{n-1} and evaluates in s; coefficients act by repetition."""
    if len(values) != p.n_vars:
        raise ArityMismatch(f"{len(values)} values for {p.n_vars} indeterminates")
    terms = []
    for exps in sorted(p.terms):
        monomial = s.product(s.power(values[i], e) for i, e in enumerate(exps) if e)
        terms.append(s.times(p.terms[exps], monomial))
    return s.sum(terms)


def _sample(n_vars: int, rng: np.random.Generator) -> NatPoly:
    terms = {}
    for _ in range(int(rng.integers(0, 4))):
        exps = tuple(int(e) for e in rng.integers(0, 3, size=n_vars))
        terms[exps] = int(rng.integers(1, 4))
    return NatPoly(n_vars, terms)


def natpoly_semiring(n_vars: int) -> SemiringSpec:
    def accepts(v: Any) -> bool:
        return isinstance(v, NatPoly) and v.n_vars == n_vars

    return SemiringSpec(
        name=f"natpoly({n_vars})",
        add=natpoly_add,
        mul=natpoly_mul,
        zero=NatPoly.zero(n_vars),
        one=NatPoly.one(n_vars),
        cancellative=True,
        eq=lambda a, b: a == b,
        fmt=str,
        sample=lambda rng: _sample(n_vars, rng),
        accepts=accepts,
        repeat=lambda n, a: NatPoly(a.n_vars, {e: c * n for e, c in a.terms.items()}),
    )
