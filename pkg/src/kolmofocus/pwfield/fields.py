"""Polynomial planar vector fields and the two-zone piecewise system."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..algebra import ExactScalar, Poly2, as_exact


@dataclass(frozen=True)
class PolyVectorField:
    """``x' = P(x, y)``, ``y' = Q(x, y)`` with exact coefficients."""

    P: Poly2
    Q: Poly2
    kolmogorov: bool = False

    def __post_init__(self):
        if self.kolmogorov and not (self.P.divisible_by_x() and self.Q.divisible_by_y()):
            raise ValueError("Kolmogorov field requires x | P and y | Q")

    @classmethod
    def from_kolmogorov(cls, f: Poly2, g: Poly2) -> PolyVectorField:
        return cls(Poly2.x() * f, Poly2.y() * g, kolmogorov=True)

    @property
    def f(self) -> Poly2:
        return self.P.div_x()

    @property
    def g(self) -> Poly2:
        return self.Q.div_y()

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Q.degree)

    @property
    def field_extension(self) -> int:
        d1, d2 = self.P.field_extension(), self.Q.field_extension()
        if d1 and d2 and d1 != d2:
            from ..algebra import FieldMismatchError

            raise FieldMismatchError(f"P uses sqrt({d1}), Q uses sqrt({d2})")
        return d1 or d2

    def __call__(self, x, y):
        return self.P(x, y), self.Q(x, y)

    def jacobian(self, x, y) -> tuple[tuple[ExactScalar, ExactScalar], tuple[ExactScalar, ExactScalar]]:
        x, y = as_exact(x), as_exact(y)
        return (
            (self.P.dx()(x, y), self.P.dy()(x, y)),
            (self.Q.dx()(x, y), self.Q.dy()(x, y)),
        )

    def trace_det(self, x, y) -> tuple[ExactScalar, ExactScalar]:
        (a, b), (c, d) = self.jacobian(x, y)
        return a + d, a * d - b * c

    def translate(self, x0, y0) -> PolyVectorField:
        """Field in coordinates centred at ``(x0, y0)``."""
        x0, y0 = as_exact(x0), as_exact(y0)
        px, py = Poly2.x() + x0, Poly2.y() + y0
        return PolyVectorField(self.P.compose(px, py), self.Q.compose(px, py))

    def numeric(self, x0: float = 0.0, y0: float = 0.0) -> "NumericField":
        """Float evaluator of the field written in coordinates centred at ``(x0, y0)``."""
        return NumericField.from_field(self, x0, y0)


@dataclass(frozen=True)
class PiecewiseKolmogorovSystem:
    """``Z1`` on ``{x < sigma_x}``, ``Z2`` on ``{x > sigma_x}``."""

    Z1: PolyVectorField
    Z2: PolyVectorField
    sigma_x: ExactScalar = field(default_factory=lambda: ExactScalar(1))

    def __post_init__(self):
        object.__setattr__(self, "sigma_x", as_exact(self.sigma_x))

    def zone_of(self, x) -> int:
        s = float(self.sigma_x)
        return 1 if float(x) < s else 2

    def field(self, zone: int) -> PolyVectorField:
        return self.Z1 if zone == 1 else self.Z2

    @property
    def is_continuous(self) -> bool:
        s = self.sigma_x
        return (
            self.Z1.P.restrict_x(s) == self.Z2.P.restrict_x(s)
            and self.Z1.Q.restrict_x(s) == self.Z2.Q.restrict_x(s)
        )


class NumericField:
    """Fast float evaluation of a polynomial field around a base point.

    Coefficients are re-expanded exactly about the base point before the
    float conversion, so small offsets keep full relative precision. When a
    component carries an axis factor (``P = x f`` or ``Q = y g``) it is kept
    as a product, so the coordinate axes stay exactly invariant in floats.
    """

    def __init__(self, P: Poly2, Q: Poly2, origin: tuple[float, float], factors=(None, None)):
        self.origin = origin
        self._fac = factors
        comps = []
        for k, (full, fac) in enumerate(((P, factors[0]), (Q, factors[1]))):
            base = fac if fac is not None else full
            comps.append((base.float_terms(), base.dx().float_terms(), base.dy().float_terms()))
        (self._p, self._px, self._py), (self._q, self._qx, self._qy) = comps
        self._deg = max(P.degree, Q.degree, 1)
        self._ax = None if factors[0] is None else origin[0]
        self._ay = None if factors[1] is None else origin[1]

    @classmethod
    def from_field(cls, fld: PolyVectorField, x0=0.0, y0=0.0) -> NumericField:
        ex0 = _float_to_exact(x0) if isinstance(x0, float) else as_exact(x0)
        ey0 = _float_to_exact(y0) if isinstance(y0, float) else as_exact(y0)
        shift = bool(ex0 or ey0)
        sx, sy = Poly2.x() + ex0, Poly2.y() + ey0

        def moved(p: Poly2) -> Poly2:
            return p.compose(sx, sy) if shift else p

        fp = moved(fld.P.div_x()) if fld.P and fld.P.divisible_by_x() else None
        fq = moved(fld.Q.div_y()) if fld.Q and fld.Q.divisible_by_y() else None
        return cls(moved(fld.P), moved(fld.Q), (float(ex0), float(ey0)), (fp, fq))

    def _powers(self, x, y):
        xp, yp = [1.0], [1.0]
        for _ in range(self._deg):
            xp.append(xp[-1] * x)
            yp.append(yp[-1] * y)
        return xp, yp

    @staticmethod
    def _eval(terms, xp, yp) -> float:
        s = 0.0
        for i, j, c in terms:
            s += c * xp[i] * yp[j]
        return s

    def value(self, x: float, y: float) -> tuple[float, float]:
        xp, yp = self._powers(x, y)
        p = self._eval(self._p, xp, yp)
        q = self._eval(self._q, xp, yp)
        if self._ax is not None:
            p *= x + self._ax
        if self._ay is not None:
            q *= y + self._ay
        return p, q

    def __call__(self, t, z):
        return np.array(self.value(z[0], z[1]))

    def rhs(self, sign: float = 1.0) -> Callable:
        value = self.value
        if sign == 1.0:
            return lambda t, z: np.array(value(z[0], z[1]))
        return lambda t, z: -np.array(value(z[0], z[1]))

    def jac(self, z) -> np.ndarray:
        x, y = z[0], z[1]
        xp, yp = self._powers(x, y)
        ev = self._eval
        px, py = ev(self._px, xp, yp), ev(self._py, xp, yp)
        qx, qy = ev(self._qx, xp, yp), ev(self._qy, xp, yp)
        if self._ax is not None:
            ax = x + self._ax
            px, py = ev(self._p, xp, yp) + ax * px, ax * py
        if self._ay is not None:
            ay = y + self._ay
            qx, qy = ay * qx, ev(self._q, xp, yp) + ay * qy
        return np.array([[px, py], [qx, qy]])


def _float_to_exact(v: float) -> ExactScalar:
    from fractions import Fraction

    return ExactScalar(Fraction(v))
