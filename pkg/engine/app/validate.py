from __future__ import annotations
import logging
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Tuple

import numpy as np

from engine.algebra.instances import split_args
from engine.algebra.semiring import SemiringSpec
from engine.api.errors import SchemaError
from engine.app.loader import resolve_semialgebra, resolve_semiring
from engine.semialgebra.spec import SemialgebraSpec, structure_violations

logger = logging.getLogger(__name__)

# everything `validate` checks when no semiring is named
DEFAULT_SUITE = (
    "real", "logreal", "maxplus", "complex2", "natpoly(2)",
    "bc(real,1)", "bc(real,2)", "bc(real,3)", "bc(real,4)",
    "tensor(real,bc1)", "tensor(real,bc1,bc1)", "tensor(real,bc3)",
    "tensor(real,bc1,bc1,bc1)", "tensor(bc(real,1),bc(real,3))",
)

Law = Tuple[str, int, Callable[[SemiringSpec, Tuple[Any, ...]], bool]]

LAWS: List[Law] = [
    ("add commutative", 2, lambda s, v: s.eq(s.add(v[0], v[1]), s.add(v[1], v[0]))),
    ("add associative", 3, lambda s, v: s.eq(s.add(s.add(v[0], v[1]), v[2]), s.add(v[0], s.add(v[1], v[2])))),
    ("mul commutative", 2, lambda s, v: s.eq(s.mul(v[0], v[1]), s.mul(v[1], v[0]))),
    ("mul associative", 3, lambda s, v: s.eq(s.mul(s.mul(v[0], v[1]), v[2]), s.mul(v[0], s.mul(v[1], v[2])))),
    ("distributive", 3, lambda s, v: s.eq(s.mul(v[0], s.add(v[1], v[2])),
                                          s.add(s.mul(v[0], v[1]), s.mul(v[0], v[2])))),
    ("zero absorbs", 1, lambda s, v: s.eq(s.mul(v[0], s.zero), s.zero)),
    ("zero is additive identity", 1, lambda s, v: s.eq(s.add(v[0], s.zero), v[0])),
    ("one is multiplicative identity", 1, lambda s, v: s.eq(s.mul(v[0], s.one), v[0])),
]


@dataclass
class LawResult:
    instance: str
    law: str
    cases: int
    failures: int
    example: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0


def check_laws(s: SemiringSpec, cases: int, rng: np.random.Generator) -> List[LawResult]:
    if s.sample is None:
        raise SchemaError(f"{s.name} has no sampler", "semiring")
    results = []
    for name, arity, holds in LAWS:
        failures, example = 0, ""
        for _ in range(cases):
            values = tuple(s.sample(rng) for _ in range(arity))
            if not holds(s, values):
                failures += 1
                if not example:
                    example = ", ".join(s.fmt(v) for v in values)
        results.append(LawResult(s.name, name, cases, failures, example))
    return results


def _semialgebra_of(text: str, params) -> Optional[SemialgebraSpec]:
    name, _ = split_args(text)
    if name in ("bc", "tensor"):
        return resolve_semialgebra(text, params)
    return None


def validate_instance(text: str, cases: int, seed: int, params=None) -> List[LawResult]:
    """Randomized law suite, plus structure-constant checks for bc and tensor instances."""
    s = resolve_semiring(text, params)
    rng = np.random.default_rng(seed)
    results = check_laws(s, cases, rng)
    spec = _semialgebra_of(text, params)
    if spec is not None:
        problems = structure_violations(spec)
        results.append(LawResult(s.name, "structure constants", spec.dim ** 3, len(problems),
                                 problems[0] if problems else ""))
    failed = sum(not r.passed for r in results)
    logger.info("validate %s: %d laws, %d failed", s.name, len(results), failed)
    return results
