from .spec import (
    Factor,
    SemialgebraSpec,
    bc_semialgebra,
    semialgebra_from_semiring,
    structure_violations,
    tensor_product,
)
from .tensor import TensorValue, embed, outer, tensor_add, tensor_eq, tensor_mul
from .linear import LinearMap, component_extractor, extend_by_linearity, scalar_extractor
from .framework import Framework, FrameworkPart, compose_framework

__all__ = [
    "Factor", "SemialgebraSpec", "bc_semialgebra", "semialgebra_from_semiring",
    "structure_violations", "tensor_product",
    "TensorValue", "embed", "outer", "tensor_add", "tensor_eq", "tensor_mul",
    "LinearMap", "component_extractor", "extend_by_linearity", "scalar_extractor",
    "Framework", "FrameworkPart", "compose_framework",
]
