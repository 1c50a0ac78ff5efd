from .fields import QQ, RationalField, RationalFunctionField, SpecializedField
from .groebner import (GroebnerBasis, GroebnerError, buchberger, colon_ideal, contains,
                       exact_divide, ideal_intersection, is_zero_dimensional, normal_form,
                       quotient_basis, same_ideal, vs_dim)
from .poly import MonomialOrder, Poly, PolyRing, grevlex, initial_form, leading_monomial, weight_order

__all__ = [
    "QQ", "RationalField", "RationalFunctionField", "SpecializedField",
    "GroebnerBasis", "GroebnerError", "buchberger", "colon_ideal", "contains",
    "exact_divide", "ideal_intersection", "is_zero_dimensional", "normal_form",
    "quotient_basis", "same_ideal", "vs_dim",
    "MonomialOrder", "Poly", "PolyRing", "grevlex", "initial_form", "leading_monomial",
    "weight_order",
]
