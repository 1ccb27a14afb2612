from __future__ import annotations
import math
import numbers
import operator
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from engine.algebra.binomial import bc_semiring
from engine.algebra.natpoly import natpoly_semiring
from engine.algebra.semiring import SemiringSpec
from engine.api.errors import SchemaError, UnknownInstance

NEG_INF = float("-inf")


def _is_real(v: Any) -> bool:
    return isinstance(v, numbers.Real) and not isinstance(v, bool)


def _close(atol: float, rtol: float) -> Callable[[Any, Any], bool]:
    def eq(a, b) -> bool:
        return math.isclose(a, b, rel_tol=rtol, abs_tol=atol)
    return eq


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SchemaError(f"not a decimal literal: {text!r}") from None


def _fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def real(exact: bool = False, atol: float = 1e-9, rtol: float = 1e-9) -> SemiringSpec:
    if exact:
        def parse(text: str) -> Fraction:
            try:
                return Fraction(text.strip())
            except ValueError:
                raise SchemaError(f"not a rational literal: {text!r}") from None

        return SemiringSpec(
            name="real",
            add=operator.add,
            mul=operator.mul,
            zero=Fraction(0),
            one=Fraction(1),
            cancellative=True,
            eq=operator.eq,
            parse=parse,
            fmt=str,
            sample=lambda rng: Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 7))),
            accepts=_is_real,
            lift=Fraction,
            repeat=lambda n, a: n * a,
        )
    return SemiringSpec(
        name="real",
        add=operator.add,
        mul=operator.mul,
        zero=0.0,
        one=1.0,
        cancellative=True,
        eq=_close(atol, rtol),
        parse=_parse_float,
        fmt=_fmt_float,
        sample=lambda rng: float(rng.uniform(-2.0, 2.0)),
        accepts=_is_real,
        lift=float,
        repeat=lambda n, a: n * a,
    )


def _log(x: float) -> float:
    return math.log(x) if x > 0 else NEG_INF


def _sample_log(rng: np.random.Generator) -> float:
    if rng.random() < 0.05:
        return NEG_INF
    return float(rng.uniform(-3.0, 3.0))


def logreal(atol: float = 1e-9, rtol: float = 1e-9) -> SemiringSpec:
    """Log-domain reals: x stands for exp(x); addition is log-sum-exp."""
    return SemiringSpec(
        name="logreal",
        add=lambda a, b: float(np.logaddexp(a, b)),
        mul=operator.add,
        zero=NEG_INF,
        one=0.0,
        cancellative=True,
        eq=_close(atol, rtol),
        parse=_parse_float,
        fmt=_fmt_float,
        sample=_sample_log,
        accepts=_is_real,
        lift=_log,
        repeat=lambda n, a: a + math.log(n) if a != NEG_INF else a,
    )


def maxplus(atol: float = 1e-9, rtol: float = 1e-9) -> SemiringSpec:
    """Tropical (max, +). Forward-only: not cancellative."""
    return SemiringSpec(
        name="maxplus",
        add=max,
        mul=operator.add,
        zero=NEG_INF,
        one=0.0,
        cancellative=False,
        eq=_close(atol, rtol),
        parse=_parse_float,
        fmt=_fmt_float,
        sample=_sample_log,
        accepts=_is_real,
        lift=_log,
        repeat=lambda n, a: a,
    )


def complex2(atol: float = 1e-9, rtol: float = 1e-9) -> SemiringSpec:
    """Pairs (a, b) multiplied like a + bi."""
    close = _close(atol, rtol)

    def parse(text: str) -> Tuple[float, float]:
        parts = text.split(",")
        if len(parts) != 2:
            raise SchemaError(f'expected "a,b", got {text!r}')
        return (_parse_float(parts[0]), _parse_float(parts[1]))

    return SemiringSpec(
        name="complex2",
        add=lambda x, y: (x[0] + y[0], x[1] + y[1]),
        mul=lambda x, y: (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0]),
        zero=(0.0, 0.0),
        one=(1.0, 0.0),
        cancellative=True,
        eq=lambda x, y: close(x[0], y[0]) and close(x[1], y[1]),
        parse=parse,
        fmt=lambda v: f"{_fmt_float(v[0])},{_fmt_float(v[1])}",
        sample=lambda rng: (float(rng.uniform(-2.0, 2.0)), float(rng.uniform(-2.0, 2.0))),
        accepts=lambda v: isinstance(v, tuple) and len(v) == 2 and all(_is_real(c) for c in v),
        lift=lambda x: (float(x), 0.0),
        repeat=lambda n, a: (n * a[0], n * a[1]),
    )


def _float_params(params: Mapping[str, Any]) -> Dict[str, float]:
    return {k: float(params[k]) for k in ("atol", "rtol") if k in params}


def _real(params: Mapping[str, Any]) -> SemiringSpec:
    return real(exact=bool(params.get("exact", False)), **_float_params(params))


def _natpoly(params: Mapping[str, Any]) -> SemiringSpec:
    if "n" not in params:
        raise UnknownInstance("natpoly needs the number of indeterminates n")
    return natpoly_semiring(int(params["n"]))


def _bc(params: Mapping[str, Any]) -> SemiringSpec:
    base = params.get("base", "real")
    if not isinstance(base, SemiringSpec):
        base = parse_semiring(str(base), params)
    return bc_semiring(base, int(params.get("n", 1)))


_REGISTRY: Dict[str, Callable[[Mapping[str, Any]], SemiringSpec]] = {
    "real": _real,
    "logreal": lambda p: logreal(**_float_params(p)),
    "maxplus": lambda p: maxplus(**_float_params(p)),
    "complex2": lambda p: complex2(**_float_params(p)),
    "natpoly": _natpoly,
    "bc": _bc,
}


def registered_names() -> List[str]:
    return sorted(_REGISTRY)


def semiring_instance(name: str, params: Optional[Mapping[str, Any]] = None) -> SemiringSpec:
    factory = _REGISTRY.get(name)
    if factory is None:
        raise UnknownInstance(f"no semiring named {name!r}; known: {', '.join(registered_names())}")
    return factory(params or {})


def split_args(text: str) -> Tuple[str, List[str]]:
    """'bc(real,2)' -> ('bc', ['real', '2']); commas inside nested parentheses are kept."""
    text = text.strip()
    if "(" not in text:
        return text, []
    if not text.endswith(")"):
        raise UnknownInstance(f"malformed semiring name {text!r}")
    name, body = text[:-1].split("(", 1)
    args, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            args.append(body[start:i].strip())
            start = i + 1
    args.append(body[start:].strip())
    return name.strip(), [a for a in args if a]


def parse_semiring(text: str, params: Optional[Mapping[str, Any]] = None) -> SemiringSpec:
    """Parses names such as `real`, `natpoly(3)`, `bc(real,2)` or `bc(bc(real,1),1)`."""
    params = dict(params or {})
    name, args = split_args(text)
    try:
        if name == "natpoly" and args:
            params["n"] = int(args[0])
        elif name == "bc" and args:
            if len(args) != 2:
                raise UnknownInstance(f"bc takes (base, n), got {text!r}")
            params["base"] = parse_semiring(args[0], {k: v for k, v in params.items() if k not in ("base", "n")})
            params["n"] = int(args[1])
        elif args:
            raise UnknownInstance(f"{name} takes no arguments, got {text!r}")
    except ValueError:
        raise UnknownInstance(f"malformed semiring name {text!r}") from None
    return semiring_instance(name, params)
