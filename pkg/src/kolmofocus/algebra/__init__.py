"""Exact coefficient fields, quasi-trigonometric polynomials and truncated series."""

from .exact import (
    ExactScalar,
    FieldMismatchError,
    ResourceLimitError,
    as_exact,
    parse_exact,
    squarefree_part,
)
from .poly2 import Poly2
from .series import PiPolynomial, RSeries, series_compose_inverse
from .trig import QuasiTrigPoly, eval_at_angle, trig_antiderivative, trig_product

__all__ = [
    "ExactScalar",
    "FieldMismatchError",
    "PiPolynomial",
    "Poly2",
    "QuasiTrigPoly",
    "RSeries",
    "ResourceLimitError",
    "as_exact",
    "eval_at_angle",
    "parse_exact",
    "series_compose_inverse",
    "squarefree_part",
    "trig_antiderivative",
    "trig_product",
]
