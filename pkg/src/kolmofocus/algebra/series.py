"""Polynomials in pi and truncated power series in a radial variable."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

from .exact import ExactScalar, ZERO, as_exact


class PiPolynomial:
    """Exact value ``sum_i c_i * pi**i`` with pi treated as transcendental."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[object] = ()):
        cs = [as_exact(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[ExactScalar, ...] = tuple(cs)

    @classmethod
    def from_dict(cls, coeffs: dict[int, ExactScalar]) -> PiPolynomial:
        if not coeffs:
            return cls()
        top = max(coeffs)
        return cls([coeffs.get(i, ZERO) for i in range(top + 1)])

    @classmethod
    def pi(cls, c=1, power: int = 1) -> PiPolynomial:
        return cls([0] * power + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_term(self) -> ExactScalar:
        return self.coeffs[0] if self.coeffs else ZERO

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PiPolynomial):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == PiPolynomial([other]).coeffs
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    @staticmethod
    def _lift(v) -> PiPolynomial:
        return v if isinstance(v, PiPolynomial) else PiPolynomial([v])

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = other.coeffs + (ZERO,) * (n - len(other.coeffs))
        return PiPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return PiPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PiPolynomial):
            try:
                c = as_exact(other)
            except TypeError:
                return NotImplemented
            return PiPolynomial([x * c for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return PiPolynomial()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = out[i + j] + x * y
        return PiPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiPolynomial):
            if not other.is_constant() or not other:
                raise ZeroDivisionError("only division by a nonzero constant is exact")
            other = other.coeffs[0]
        inv = as_exact(other).inverse()
        return self * inv

    def __rtruediv__(self, other):
        if not self.is_constant() or not self:
            raise ZeroDivisionError("only nonzero constants are invertible")
        return PiPolynomial([as_exact(other) / self.coeffs[0]])

    def inverse(self) -> PiPolynomial:
        return 1 / self

    def __float__(self):
        return float(sum(float(c) * math.pi**i for i, c in enumerate(self.coeffs)))

    def sign(self) -> int:
        v = float(self)
        return (v > 0) - (v < 0)

    def __repr__(self):
        return f"PiPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = str(c)
            if c.b and c.a:
                cs = f"({cs})"
            if i == 0:
                parts.append(cs)
            else:
                pw = "π" if i == 1 else f"π^{i}"
                parts.append(pw if c == 1 else f"-{pw}" if c == -1 else f"{cs}*{pw}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _lift_scalar(c):
    if isinstance(c, (int, Fraction)):
        return ExactScalar(c)
    return c


def _zero_like(c):
    return c * 0 if not isinstance(c, (int,)) else 0


class RSeries:
    """Truncated power series ``sum_{k=0..K} a_k r^k`` over any commutative coefficient ring.

    Coefficients only need ``+``, ``*`` and truthiness; compositional
    inversion additionally needs the linear coefficient to be invertible.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Sequence[object], order: int, zero=ZERO):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        cs = [_lift_scalar(c) for c in list(coeffs)[: order + 1]]
        cs += [zero] * (order + 1 - len(cs))
        self.coeffs = cs
        self.order = order

    @property
    def zero(self):
        return _zero_like(self.coeffs[0])

    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, RSeries):
            return NotImplemented
        k = min(self.order, other.order)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(k + 1))

    def map(self, fn: Callable) -> RSeries:
        return RSeries([fn(c) for c in self.coeffs], self.order)

    def __add__(self, other):
        if not isinstance(other, RSeries):
            return NotImplemented
        k = min(self.order, other.order)
        return RSeries([self.coeffs[i] + other.coeffs[i] for i in range(k + 1)], k)

    def __sub__(self, other):
        if not isinstance(other, RSeries):
            return NotImplemented
        k = min(self.order, other.order)
        return RSeries([self.coeffs[i] - other.coeffs[i] for i in range(k + 1)], k)

    def __neg__(self):
        return RSeries([-c for c in self.coeffs], self.order)

    def scale(self, c) -> RSeries:
        return RSeries([a * c for a in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, RSeries):
            return self.scale(other)
        k = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for n in range(k + 1):
            acc = None
            for i in range(n + 1):
                if not a[i] or not b[n - i]:
                    continue
                t = a[i] * b[n - i]
                acc = t if acc is None else acc + t
            out.append(acc if acc is not None else self.zero)
        return RSeries(out, k)

    __rmul__ = __mul__

    def reciprocal(self) -> RSeries:
        """Multiplicative inverse; requires an invertible constant term."""
        a0 = self.coeffs[0]
        if not a0:
            raise ZeroDivisionError("constant term is zero")
        inv0 = 1 / a0
        out = [inv0]
        for n in range(1, self.order + 1):
            acc = None
            for i in range(1, n + 1):
                if not self.coeffs[i] or not out[n - i]:
                    continue
                t = self.coeffs[i] * out[n - i]
                acc = t if acc is None else acc + t
            out.append(-(acc * inv0) if acc is not None else self.zero)
        return RSeries(out, self.order)

    def compose(self, inner: RSeries) -> RSeries:
        """Return ``self(inner(r))``; ``inner`` must have zero constant term."""
        if inner.coeffs[0]:
            raise ValueError("inner series must vanish at r = 0")
        k = min(self.order, inner.order)
        result = RSeries([self.coeffs[0]], k)
        power = RSeries([1], k, zero=0)
        for n in range(1, k + 1):
            power = power * inner if n > 1 else inner.truncate(k)
            if self.coeffs[n]:
                result = result + power.scale(self.coeffs[n])
        return result

    def truncate(self, k: int) -> RSeries:
        return RSeries(self.coeffs[: k + 1], k)


def series_compose_inverse(s: RSeries) -> RSeries:
    """Compositional inverse ``t`` of ``s`` (``t(s(r)) = r`` to order K)."""
    if s.coeffs[0]:
        raise ValueError("series must vanish at r = 0 to be inverted")
    a1 = s.coeffs[1] if s.order >= 1 else 0
    if not a1:
        raise ValueError("leading coefficient a1 is zero: map is not invertible")
    inv_a1 = 1 / a1
    zero = _zero_like(a1)
    t = [zero, inv_a1] + [zero] * (s.order - 1)
    for n in range(2, s.order + 1):
        cur = RSeries(t, s.order)
        c = s.compose(cur).coeffs[n]
        t[n] = -(c * inv_a1)
    return RSeries(t, s.order)
