"""Bivariate polynomials with exact coefficients."""

from __future__ import annotations

from typing import Iterable, Mapping

from .exact import ExactScalar, ZERO, as_exact

Monomial = tuple[int, int]


class Poly2:
    """Immutable polynomial ``sum c_ij x^i y^j`` over ExactScalar."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[Monomial, object] | None = None):
        c: dict[Monomial, ExactScalar] = {}
        for mon, v in (coeffs or {}).items():
            v = as_exact(v)
            if v:
                c[mon] = c.get(mon, ZERO) + v
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def _raw(cls, c: dict[Monomial, ExactScalar]) -> Poly2:
        obj = object.__new__(cls)
        obj._c = {k: v for k, v in c.items() if v}
        return obj

    @classmethod
    def const(cls, v) -> Poly2:
        return cls({(0, 0): v})

    @classmethod
    def x(cls) -> Poly2:
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> Poly2:
        return cls({(0, 1): 1})

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> Poly2:
        """Build from a nested list where ``rows[i][j]`` multiplies ``x^i y^j``."""
        return cls({(i, j): v for i, row in enumerate(rows) for j, v in enumerate(row)})

    @property
    def coeffs(self) -> dict[Monomial, ExactScalar]:
        return dict(self._c)

    def coeff(self, i: int, j: int) -> ExactScalar:
        return self._c.get((i, j), ZERO)

    @property
    def degree(self) -> int:
        return max((i + j for i, j in self._c), default=-1)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, Poly2):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other):
        if not isinstance(other, Poly2):
            try:
                other = Poly2.const(other)
            except TypeError:
                return NotImplemented
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, ZERO) + v
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly2):
            other = Poly2.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly2):
            try:
                c = as_exact(other)
            except TypeError:
                return NotImplemented
            return Poly2._raw({k: v * c for k, v in self._c.items()})
        out: dict[Monomial, ExactScalar] = {}
        for (i1, j1), a in self._c.items():
            for (i2, j2), b in other._c.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, ZERO) + a * b
        return Poly2._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly2.const(1)
        for _ in range(n):
            result = result * self
        return result

    def dx(self) -> Poly2:
        return Poly2._raw({(i - 1, j): v * i for (i, j), v in self._c.items() if i})

    def dy(self) -> Poly2:
        return Poly2._raw({(i, j - 1): v * j for (i, j), v in self._c.items() if j})

    def __call__(self, x, y):
        """Evaluate exactly (ExactScalar inputs) or numerically (float inputs)."""
        if isinstance(x, float) or isinstance(y, float):
            return sum(float(v) * x**i * y**j for (i, j), v in self._c.items())
        x, y = as_exact(x), as_exact(y)
        total = ZERO
        for (i, j), v in self._c.items():
            total = total + v * x**i * y**j
        return total

    def compose(self, px: Poly2, py: Poly2) -> Poly2:
        """Substitute ``x -> px``, ``y -> py``."""
        xp = {0: Poly2.const(1)}
        yp = {0: Poly2.const(1)}
        out = Poly2()
        for (i, j), v in self._c.items():
            if i not in xp:
                xp[i] = px ** i
            if j not in yp:
                yp[j] = py ** j
            out = out + xp[i] * yp[j] * v
        return out

    def homogeneous_part(self, k: int) -> Poly2:
        return Poly2._raw({m: v for m, v in self._c.items() if m[0] + m[1] == k})

    def restrict_x(self, x0) -> Poly2:
        """Univariate polynomial in y obtained by fixing ``x = x0``."""
        x0 = as_exact(x0)
        out: dict[Monomial, ExactScalar] = {}
        for (i, j), v in self._c.items():
            out[(0, j)] = out.get((0, j), ZERO) + v * x0**i
        return Poly2._raw(out)

    def restrict_y(self, y0) -> Poly2:
        y0 = as_exact(y0)
        out: dict[Monomial, ExactScalar] = {}
        for (i, j), v in self._c.items():
            out[(i, 0)] = out.get((i, 0), ZERO) + v * y0**j
        return Poly2._raw(out)

    def divisible_by_x(self) -> bool:
        return all(i >= 1 for i, _ in self._c)

    def divisible_by_y(self) -> bool:
        return all(j >= 1 for _, j in self._c)

    def div_x(self) -> Poly2:
        if not self.divisible_by_x():
            raise ValueError("polynomial is not divisible by x")
        return Poly2._raw({(i - 1, j): v for (i, j), v in self._c.items()})

    def div_y(self) -> Poly2:
        if not self.divisible_by_y():
            raise ValueError("polynomial is not divisible by y")
        return Poly2._raw({(i, j - 1): v for (i, j), v in self._c.items()})

    def field_extension(self) -> int:
        ds = {v.d for v in self._c.values() if v.d}
        if len(ds) > 1:
            from .exact import FieldMismatchError

            raise FieldMismatchError(f"mixed extensions {sorted(ds)}")
        return ds.pop() if ds else 0

    def float_terms(self) -> list[tuple[int, int, float]]:
        return [(i, j, float(v)) for (i, j), v in sorted(self._c.items())]

    def __repr__(self):
        return f"Poly2({self})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for (i, j), v in sorted(self._c.items(), key=lambda t: (t[0][0] + t[0][1], t[0])):
            mon = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if j == 0 else ("y" if j == 1 else f"y^{j}"),
                ) if s
            )
            cs = str(v)
            if v.b and v.a:
                cs = f"({cs})"
            parts.append(cs if not mon else (mon if v == 1 else f"{cs}*{mon}"))
        return " + ".join(parts).replace("+ -", "- ")
