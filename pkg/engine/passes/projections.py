from __future__ import annotations

from engine.api.errors import ShapeMismatch
from engine.semialgebra.spec import SemialgebraSpec
from engine.semialgebra.tensor import TensorValue, embed, tensor_add


def _check_shape(spec: SemialgebraSpec) -> None:
    last = spec.factors[-1]
    if last.order != 1 or len(spec.factors) < 2:
        raise ShapeMismatch(f"{spec.name} is not of the form A x bc(S,1)")


def _project(t: TensorValue, i: int) -> TensorValue:
    _check_shape(t.spec)
    return TensorValue(t.spec.without_last(), {u[:-1]: c for u, c in t.coeffs.items() if u[-1] == i})


def project0(t: TensorValue) -> TensorValue:
    """Coefficient of e0 in A x bc(S,1), as an A value."""
    return _project(t, 0)


def project1(t: TensorValue) -> TensorValue:
    """Coefficient of e1 in A x bc(S,1), as an A value."""
    return _project(t, 1)


def join_projections(spec: SemialgebraSpec, p0: TensorValue, p1: TensorValue) -> TensorValue:
    """p0 x e0 + p1 x e1."""
    _check_shape(spec)
    return tensor_add(embed(spec, p0, 0), embed(spec, p1, 1))
