from __future__ import annotations
import logging
import math
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from engine.algebra.binomial import BCValue, bc_mul, bc_semiring
from engine.algebra.homs import MonoidHom
from engine.algebra.instances import real
from engine.algebra.semiring import SemiringSpec
from engine.api.adapter_base import Adapter, BuiltGraph
from engine.api.config import CheckpointPolicy
from engine.api.errors import InvalidModel, NonDifferentiableTag, SchemaError
from engine.graph.dag import ComputationGraph
from engine.graph.io import parse_graph
from engine.passes.backward import forward_backward
from engine.passes.forward import forward
from engine.semialgebra.spec import bc_semialgebra, semialgebra_from_semiring, tensor_product
from engine.semialgebra.tensor import embed

logger = logging.getLogger(__name__)

FUNCTIONS = ("input", "const", "exp", "sin", "cos", "log", "sqrt", "pow", "product")


@dataclass(frozen=True)
class Tag:
    """
    A source assignment x -> psi(x). Apart from `const` and `product`, psi is
    coef * fn(x[index]); `pow` raises to `power`. `product` multiplies `factors`.
    """
    fn: str
    index: Optional[int] = None
    coef: float = 1.0
    power: Optional[float] = None
    value: Optional[float] = None
    factors: Tuple["Tag", ...] = field(default=())

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise InvalidModel(f"unknown tag function {self.fn!r}")
        if self.fn == "const" and self.value is None:
            raise InvalidModel("const tags need a value")
        if self.fn == "pow" and self.power is None:
            raise InvalidModel("pow tags need a power")
        if self.fn not in ("const", "product") and self.index is None:
            raise InvalidModel(f"{self.fn} tags need an input index")

    @classmethod
    def const(cls, value: float) -> "Tag":
        return cls("const", value=float(value))

    @classmethod
    def input(cls, index: int, coef: float = 1.0) -> "Tag":
        return cls("input", index=index, coef=coef)

    def inputs(self) -> List[int]:
        if self.fn == "product":
            return sorted({i for f in self.factors for i in f.inputs()})
        return [] if self.index is None else [self.index]

    def derivatives(self, point: Sequence[float], k: int, n: int) -> Tuple[float, ...]:
        """(psi, d psi/dx_k, ..., d^n psi/dx_k^n) at point."""
        if self.fn == "product":
            seqs = [BCValue(f.derivatives(point, k, n)) for f in self.factors]
            one = BCValue((1.0,) + (0.0,) * n)
            return reduce(lambda a, b: bc_mul(a, b, _REAL), seqs, one).components
        if self.fn == "const":
            return (float(self.value),) + (0.0,) * n
        seq = _univariate(self.fn, float(point[self.index]), n, self.power)
        if self.index != k:
            seq = (seq[0],) + (0.0,) * n
        return tuple(self.coef * d for d in seq)

    def value_at(self, point: Sequence[float]) -> float:
        return self.derivatives(point, -1, 0)[0]


_REAL = real()


def tag_product(a: Tag, b: Tag) -> Tag:
    left = a.factors if a.fn == "product" else (a,)
    right = b.factors if b.fn == "product" else (b,)
    return Tag("product", factors=left + right)


def _univariate(fn: str, x: float, n: int, power: Optional[float]) -> Tuple[float, ...]:
    """Derivatives 0..n of fn at x."""
    if fn == "input":
        return ((x, 1.0) + (0.0,) * n)[: n + 1]
    if fn == "exp":
        return (math.exp(x),) * (n + 1)
    if fn in ("sin", "cos"):
        s, c = math.sin(x), math.cos(x)
        cycle = (s, c, -s, -c) if fn == "sin" else (c, -s, -c, s)
        return tuple(cycle[j % 4] for j in range(n + 1))
    if fn == "log":
        if x <= 0:
            raise NonDifferentiableTag(f"log at {x!r}")
        return (math.log(x),) + tuple((-1) ** (j - 1) * math.factorial(j - 1) / x ** j for j in range(1, n + 1))
    if fn == "sqrt":
        if x <= 0:
            raise NonDifferentiableTag(f"sqrt at {x!r}")
        power = 0.5
    p = float(power)
    integral = p.is_integer()
    if x < 0 and not integral:
        raise NonDifferentiableTag(f"x^{p} at {x!r}")
    if x == 0 and (p < 0 or not integral and n > 0):
        raise NonDifferentiableTag(f"x^{p} at 0")
    out = []
    falling = 1.0
    for j in range(n + 1):
        out.append(0.0 if falling == 0.0 else falling * x ** (p - j))
        falling *= p - j
    return tuple(out)


def derivative_hom(k: int, point: Sequence[float], n: int, scalar: Optional[SemiringSpec] = None) -> MonoidHom:
    """Tags under pointwise product -> bc(real, n), psi -> its first n derivatives in x_k."""
    target = bc_semiring(scalar or real(), n)
    return MonoidHom(
        name=f"derivative[x{k},{n}]",
        source_combine=tag_product,
        source_identity=Tag.const(1.0),
        target=target,
        apply=lambda tag: BCValue(tag.derivatives(point, k, n)),
    )


@dataclass
class AdTape:
    graph: ComputationGraph
    tags: Dict[int, Tag]
    point: Tuple[float, ...]

    def __post_init__(self):
        self.point = tuple(float(x) for x in self.point)
        missing = [v for v in self.graph.sources if v not in self.tags]
        if missing:
            raise InvalidModel(f"sources {missing} have no tag")
        m = len(self.point)
        for v, tag in self.tags.items():
            if not self.graph.is_source(v):
                raise InvalidModel(f"tag given for non-source {v}")
            bad = [i for i in tag.inputs() if not 0 <= i < m]
            if bad:
                raise InvalidModel(f"tag at source {v} reads inputs {bad} of a {m}-point")

    @property
    def num_inputs(self) -> int:
        return len(self.point)

    def at(self, point: Sequence[float]) -> "AdTape":
        return replace(self, point=tuple(point))


def tape_value(tape: AdTape, scalar: Optional[SemiringSpec] = None) -> float:
    s = scalar or real()
    xi = {v: tape.tags[v].value_at(tape.point) for v in tape.graph.sources}
    return forward(tape.graph, s, xi).sink_sum


def ad_forward_derivatives(tape: AdTape, k: int, n: int, scalar: Optional[SemiringSpec] = None,
                           policy: Optional[CheckpointPolicy] = None) -> Tuple[float, ...]:
    """Sink-sum derivatives 0..n in x_k: one forward pass over bc(real, n)."""
    hom = derivative_hom(k, tape.point, n, scalar)
    xi = {v: hom(tape.tags[v]) for v in tape.graph.sources}
    return forward(tape.graph, hom.target, xi, policy).sink_sum.components


def ad_forward_grad(tape: AdTape, k: int, scalar: Optional[SemiringSpec] = None) -> Tuple[float, float]:
    value, deriv = ad_forward_derivatives(tape, k, 1, scalar)
    return value, deriv


def ad_reverse_grad(tape: AdTape, scalar: Optional[SemiringSpec] = None,
                    policy: Optional[CheckpointPolicy] = None) -> Tuple[float, Tuple[float, ...]]:
    """Value and full gradient from one forward and one backward pass over the reals."""
    s = scalar or real()
    a = semialgebra_from_semiring(s)
    tspec = tensor_product(a, bc_semialgebra(s, 1))
    g = tape.graph
    seqs = {v: [tape.tags[v].derivatives(tape.point, k, 1) for k in range(tape.num_inputs)]
            for v in g.sources}
    values = {v: tape.tags[v].value_at(tape.point) for v in g.sources}
    xi = {v: embed(tspec, a.lift(values[v]), 0) for v in g.sources}
    result = forward_backward(g, a, xi, policy)

    beta = {v: result.beta[v].coefficient((0,)) for v in g.sources}
    grad = []
    for k in range(tape.num_inputs):
        terms = [s.mul(seqs[v][k][1], beta[v]) for v in g.sources if seqs[v][k][1] != 0.0]
        grad.append(s.sum(terms))
    value = result.alpha0.sink_sum.coefficient((0,))
    logger.debug("reverse gradient over %d inputs from %d sources", tape.num_inputs, len(g.sources))
    return value, tuple(grad)


def parse_tag(doc: Any, path: str) -> Tag:
    if not isinstance(doc, Mapping):
        raise SchemaError("expected an object", path)
    fn = doc.get("fn")
    if fn not in FUNCTIONS:
        raise SchemaError(f"fn must be one of {', '.join(FUNCTIONS)}", f"{path}.fn")
    if fn == "product":
        factors = doc.get("factors")
        if not isinstance(factors, list):
            raise SchemaError("expected an array of tags", f"{path}.factors")
        return Tag("product", factors=tuple(parse_tag(f, f"{path}.factors[{i}]") for i, f in enumerate(factors)))
    index = doc.get("index")
    if index is not None and (isinstance(index, bool) or not isinstance(index, int)):
        raise SchemaError("expected an integer input index", f"{path}.index")
    try:
        return Tag(
            fn=fn,
            index=index,
            coef=float(doc.get("coef", 1.0)),
            power=None if doc.get("power") is None else float(doc["power"]),
            value=None if doc.get("value") is None else float(doc["value"]),
        )
    except (TypeError, ValueError):
        raise SchemaError("coef, power and value must be numbers", path) from None
    except InvalidModel as e:
        raise SchemaError(str(e), path) from None


class TapeAdapter(Adapter):
    kind = "tape"

    def parse(self, doc: Mapping[str, Any]) -> AdTape:
        g, _ = parse_graph(doc.get("graph") or {})
        tags_doc = doc.get("tags")
        if not isinstance(tags_doc, Mapping):
            raise SchemaError("expected an object keyed by source id", "tags")
        tags = {}
        for key, entry in tags_doc.items():
            try:
                source = int(key)
            except ValueError:
                raise SchemaError(f"{key!r} is not a node id", "tags") from None
            tags[source] = parse_tag(entry, f"tags.{key}")
        point = doc.get("point")
        if not isinstance(point, list):
            raise SchemaError("expected an array of numbers", "point")
        try:
            coords = tuple(float(x) for x in point)
        except (TypeError, ValueError):
            raise SchemaError("expected an array of numbers", "point") from None
        return AdTape(g, tags, coords)

    def build(self, model: AdTape) -> BuiltGraph:
        xi = {v: model.tags[v].value_at(model.point) for v in model.graph.sources}
        legend = {v: _describe(model.tags[v]) for v in model.graph.sources}
        return BuiltGraph(graph=model.graph, xi=xi, legend=legend, model=model)


def _describe(tag: Tag) -> str:
    if tag.fn == "const":
        return f"const {tag.value:g}"
    if tag.fn == "product":
        return " * ".join(_describe(f) for f in tag.factors)
    arg = f"x{tag.index}"
    body = arg if tag.fn == "input" else (f"{arg}^{tag.power:g}" if tag.fn == "pow" else f"{tag.fn}({arg})")
    return body if tag.coef == 1.0 else f"{tag.coef:g}*{body}"


def get_adapter() -> Adapter:
    return TapeAdapter()
