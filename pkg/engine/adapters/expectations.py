from __future__ import annotations
import logging
from typing import Any, List, Mapping, NamedTuple, Optional

from engine.algebra.homs import identity_hom, powers_hom
from engine.algebra.instances import real
from engine.algebra.semiring import SemiringSpec
from engine.api.adapter_base import Features
from engine.api.config import CheckpointPolicy
from engine.graph.dag import ComputationGraph
from engine.passes.backward import forward_backward
from engine.passes.forward import framework_forward
from engine.semialgebra.framework import FrameworkPart, compose_framework
from engine.semialgebra.linear import component_extractor, scalar_extractor
from engine.semialgebra.spec import bc_semialgebra, semialgebra_from_semiring, tensor_product
from engine.semialgebra.tensor import embed

logger = logging.getLogger(__name__)


class Expectation(NamedTuple):
    name: str
    z: Any       # sink sum of the weights alone
    total: Any   # sum over paths of weight * feature sum

    @property
    def mean(self) -> float:
        return self.total / self.z


def expectations_fb(cg: ComputationGraph, xi0: Mapping[int, Any], features: Features,
                    scalar: Optional[SemiringSpec] = None,
                    policy: Optional[CheckpointPolicy] = None) -> List[Expectation]:
    """
    One forward and one backward pass over the scalars, shared by every feature:
    total_j = sum over sources of psi_j(v) * xi0(v) * beta(v).
    """
    s = scalar or real()
    a = semialgebra_from_semiring(s)
    tspec = tensor_product(a, bc_semialgebra(s, 1))
    xi = {v: embed(tspec, a.lift(xi0[v]), 0) for v in cg.sources}
    result = forward_backward(cg, a, xi, policy)

    z = result.alpha0.sink_sum.coefficient((0,))
    weight = {v: s.mul(xi0[v], result.beta[v].coefficient((0,))) for v in cg.sources}
    out = []
    for name, psi in features:
        terms = [s.mul(c, weight[v]) for v, c in sorted(psi.items()) if not s.is_zero(c)]
        out.append(Expectation(name, z, s.sum(terms)))
    logger.debug("%d expectations from one forward-backward pass", len(out))
    return out


def expectation_framework(xi0: Mapping[int, Any], psi: Mapping[int, Any], sources,
                          scalar: Optional[SemiringSpec] = None):
    """(id, xi0) x (powers, psi) with the extractor picking the 1 x e1 coefficient."""
    s = scalar or real()
    a = semialgebra_from_semiring(s)
    bc = bc_semialgebra(s, 1)
    parts = [
        FrameworkPart(a, identity_hom(s), {v: xi0[v] for v in sources}),
        FrameworkPart(bc, powers_hom(s, 1), {v: psi.get(v, s.zero) for v in sources}),
    ]
    extractors = [scalar_extractor(a, {(0,): s.one}), component_extractor(bc, 1)]
    return compose_framework(parts, extractors)


def expectations_by_forward(cg: ComputationGraph, xi0: Mapping[int, Any], features: Features,
                            scalar: Optional[SemiringSpec] = None) -> List[Expectation]:
    """One forward pass over the scalars tensor bc(., 1) per feature."""
    s = scalar or real()
    out = []
    for name, psi in features:
        fw = expectation_framework(xi0, psi, cg.sources, s)
        result, total = framework_forward(cg, fw)
        z = result.sink_sum.coefficient((0, 0))
        out.append(Expectation(name, z, total))
    return out


def second_order_expectation(cg: ComputationGraph, mu: Mapping[int, Any], phi: Mapping[int, Any],
                             psi: Mapping[int, Any], scalar: Optional[SemiringSpec] = None) -> Any:
    """sum over paths of weight * (sum of phi) * (sum of psi), via weights x bc1 x bc1."""
    s = scalar or real()
    a = semialgebra_from_semiring(s)
    bc = bc_semialgebra(s, 1)
    sources = cg.sources
    parts = [
        FrameworkPart(a, identity_hom(s), {v: mu[v] for v in sources}),
        FrameworkPart(bc, powers_hom(s, 1), {v: phi.get(v, s.zero) for v in sources}),
        FrameworkPart(bc, powers_hom(s, 1), {v: psi.get(v, s.zero) for v in sources}),
    ]
    extractors = [scalar_extractor(a, {(0,): s.one}), component_extractor(bc, 1), component_extractor(bc, 1)]
    _, value = framework_forward(cg, compose_framework(parts, extractors))
    return value
