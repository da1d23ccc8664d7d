"""Exact scalars in Q or in a real quadratic field Q(sqrt(d))."""

from __future__ import annotations

import ast
import math
from fractions import Fraction
from numbers import Rational
from typing import Union


class FieldMismatchError(ValueError):
    """Raised when two scalars live in different quadratic extensions."""


class ResourceLimitError(RuntimeError):
    """Raised when an exact computation exceeds its configured size cap."""


Number = Union[int, Fraction, "ExactScalar"]


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(c, d)`` with ``n == c**2 * d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("only nonnegative radicands are supported")
    if n == 0:
        return 0, 0
    c, d = 1, 1
    m = n
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        c *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= m
    return c, d


def _is_square(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


class ExactScalar:
    """The number ``a + b*sqrt(d)`` with rational ``a, b``.

    ``d == 0`` marks a plain rational.  Rationals combine freely with any
    extension; two irrational elements must share ``d``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Number = 0, b: Number = 0, d: int = 0):
        if isinstance(a, ExactScalar):
            if b or d:
                raise TypeError("cannot combine ExactScalar with b/d arguments")
            self.a, self.b, self.d = a.a, a.b, a.d
            return
        a = Fraction(a)
        b = Fraction(b)
        if d < 0:
            raise ValueError("d must be nonnegative")
        if b and d:
            c, sf = squarefree_part(d)
            if sf == 1:
                a, b, d = a + b * c, Fraction(0), 0
            else:
                b, d = b * c, sf
        if not b or d == 0:
            if d == 0 and b:
                raise ValueError("b != 0 requires d > 0")
            b, d = Fraction(0), 0
        self.a, self.b, self.d = a, b, d

    @classmethod
    def sqrt(cls, n: int) -> ExactScalar:
        """Exact square root of a nonnegative integer."""
        c, d = squarefree_part(n)
        if d <= 1:
            return cls(c * d)
        return cls(0, c, d)

    @classmethod
    def coerce(cls, v: object) -> ExactScalar:
        if isinstance(v, ExactScalar):
            return v
        if isinstance(v, (int, Fraction)) or isinstance(v, Rational):
            return cls(Fraction(v))
        if isinstance(v, str):
            return parse_exact(v)
        raise TypeError(f"cannot coerce {type(v).__name__} to ExactScalar")

    # -- field plumbing ---------------------------------------------------
    def _join(self, other: ExactScalar) -> int:
        if self.d == other.d or other.d == 0:
            return self.d
        if self.d == 0:
            return other.d
        raise FieldMismatchError(f"Q(sqrt({self.d})) vs Q(sqrt({other.d}))")

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        d = self._join(other)
        return _mk(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return _mk(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        d = self._join(other)
        return _mk(self.a - other.a, self.b - other.b, d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                return _mk(self.a * other, self.b * other, self.d)
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        d = self._join(other)
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        if not b1:
            return _mk(a1 * a2, a1 * b2, d)
        if not b2:
            return _mk(a1 * a2, b1 * a2, d)
        return _mk(a1 * a2 + b1 * b2 * d, a1 * b2 + a2 * b1, d)

    __rmul__ = __mul__

    def inverse(self) -> ExactScalar:
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.b:
            return _mk(1 / self.a, Fraction(0), 0)
        n = self.norm()
        return _mk(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Fraction)):
                if other == 0:
                    raise ZeroDivisionError("division by zero")
                return _mk(self.a / other, self.b / other, self.d)
            try:
                other = ExactScalar.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ExactScalar(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- order and equality ----------------------------------------------
    def sign(self) -> int:
        a, b = self.a, self.b
        if not b:
            return (a > 0) - (a < 0)
        sa, sb = (a > 0) - (a < 0), (b > 0) - (b < 0)
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: compare a^2 with b^2 d
        diff = a * a - b * b * self.d
        return sa if diff > 0 else sb

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.a == other.a and self.b == other.b and (not self.b or self.d == other.d)
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        if not self.b:
            return float(self.a)
        # conjugate trick keeps precision when a and b*sqrt(d) nearly cancel
        s = float(self.a) + float(self.b) * math.sqrt(self.d)
        c = float(self.a) - float(self.b) * math.sqrt(self.d)
        if abs(s) < 1e-4 * abs(c) and c != 0.0:
            return float(self.norm()) / c
        return s

    def sqrt_exact(self) -> ExactScalar | None:
        """Square root inside the same field, or ``None`` if it leaves it."""
        if self.sign() < 0:
            return None
        if not self.b:
            r = _is_square(self.a)
            if r is not None:
                return ExactScalar(r)
            num, den = self.a.numerator, self.a.denominator
            c, sf = squarefree_part(num * den)
            return ExactScalar(0, Fraction(c, den), sf) if sf > 1 else None
        # (p + q sqrt d)^2 = a + b sqrt d  ->  p^2 + d q^2 = a, 2pq = b
        disc = _is_square(self.norm())
        if disc is None:
            return None
        for p2 in ((self.a + disc) / 2, (self.a - disc) / 2):
            p = _is_square(p2) if p2 > 0 else None
            if p is None:
                continue
            q = self.b / (2 * p)
            cand = ExactScalar(p, q, self.d)
            if cand * cand == self:
                return cand if cand.sign() >= 0 else -cand
        return None

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        return format_exact(self)


def _mk(a: Fraction, b: Fraction, d: int) -> ExactScalar:
    # internal constructor: inputs already normalized
    obj = object.__new__(ExactScalar)
    if b and d:
        obj.a, obj.b, obj.d = a, b, d
    else:
        obj.a, obj.b, obj.d = a, Fraction(0), 0
    return obj


ZERO = ExactScalar(0)
ONE = ExactScalar(1)


def format_exact(x: ExactScalar) -> str:
    a, b, d = x.a, x.b, x.d
    if not b:
        return str(a)
    rad = f"sqrt({d})"
    if b == 1:
        tail = rad
    elif b == -1:
        tail = "-" + rad
    else:
        tail = f"{b}*{rad}"
    if not a:
        return tail
    sep = "" if tail.startswith("-") else "+"
    return f"{a}{sep}{tail}"


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_exact(text: str) -> ExactScalar:
    """Parse strings such as ``"3/4"``, ``"(sqrt(401)-1)/5"`` or ``"1/2+3/4*sqrt(5)"``.

    Decimal literals are read as exact decimals (``"0.05"`` is 1/20).
    """
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError(f"cannot parse exact scalar {text!r}") from exc

    def walk(node) -> ExactScalar:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            if isinstance(node.value, float):
                return ExactScalar(Fraction(ast.get_source_segment(text.strip(), node) or repr(node.value)))
            return ExactScalar(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = walk(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            lhs, rhs = walk(node.left), walk(node.right)
            if isinstance(node.op, ast.Add):
                return lhs + rhs
            if isinstance(node.op, ast.Sub):
                return lhs - rhs
            if isinstance(node.op, ast.Mult):
                return lhs * rhs
            if isinstance(node.op, ast.Div):
                return lhs / rhs
            if not rhs.is_rational or rhs.a.denominator != 1:
                raise ValueError("only integer exponents are supported")
            return lhs ** int(rhs.a)
        if (
            isinstance(node, ast.Call)
            and isinstance(node.func, ast.Name)
            and node.func.id == "sqrt"
            and len(node.args) == 1
        ):
            arg = walk(node.args[0])
            if not arg.is_rational:
                raise ValueError("nested radicals are not supported")
            root = arg.sqrt_exact()
            if root is None:
                raise ValueError(f"sqrt of negative value in {text!r}")
            return root
        raise ValueError(f"unsupported syntax in exact scalar {text!r}")

    return walk(tree)


def as_exact(v: object) -> ExactScalar:
    return ExactScalar.coerce(v)
