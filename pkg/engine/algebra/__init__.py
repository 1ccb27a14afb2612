from .semiring import OpCounter, SemiringSpec
from .natpoly import NatPoly, natpoly_add, natpoly_eval, natpoly_mul, natpoly_semiring
from .binomial import BCValue, bc_add, bc_mul, bc_semiring, binomial
from .instances import complex2, logreal, maxplus, parse_semiring, real, semiring_instance
from .homs import MonoidHom, cos_sin_hom, exp_hom, identity_hom, powers_hom

__all__ = [
    "OpCounter", "SemiringSpec",
    "NatPoly", "natpoly_add", "natpoly_eval", "natpoly_mul", "natpoly_semiring",
    "BCValue", "bc_add", "bc_mul", "bc_semiring", "binomial",
    "complex2", "logreal", "maxplus", "parse_semiring", "real", "semiring_instance",
    "MonoidHom", "cos_sin_hom", "exp_hom", "identity_hom", "powers_hom",
]
