"""Quasi-trigonometric polynomials: finite sums of c * theta^m * cos(j theta) / sin(j theta)."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .exact import ExactScalar, ResourceLimitError, ZERO, as_exact
from .series import PiPolynomial

COS = "cos"
SIN = "sin"

#: Default cap on stored terms; exceeding it raises ResourceLimitError.
TERM_CAP = 1_000_000

_HALF = Fraction(1, 2)

Key = tuple[int, int, str]


class QuasiTrigPoly:
    """Immutable element of the ring spanned by theta^m cos(j theta), theta^m sin(j theta).

    Terms are keyed by ``(m, j, kind)`` with ``j >= 0``; ``sin`` with ``j == 0``
    and zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        clean: dict[Key, ExactScalar] = {}
        if terms:
            for (m, j, kind), c in terms.items():
                _accumulate(clean, m, j, kind, as_exact(c))
        self._terms = {k: v for k, v in clean.items() if v}

    @classmethod
    def _wrap(cls, terms: dict[Key, ExactScalar]) -> QuasiTrigPoly:
        if len(terms) > TERM_CAP:
            raise ResourceLimitError(f"quasi-trig polynomial exceeded {TERM_CAP} terms")
        obj = object.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def constant(cls, c) -> QuasiTrigPoly:
        return cls({(0, 0, COS): c})

    @classmethod
    def cos(cls, j: int = 1, coeff=1, power: int = 0) -> QuasiTrigPoly:
        return cls({(power, j, COS): coeff})

    @classmethod
    def sin(cls, j: int = 1, coeff=1, power: int = 0) -> QuasiTrigPoly:
        return cls({(power, j, SIN): coeff})

    @classmethod
    def theta(cls, power: int = 1) -> QuasiTrigPoly:
        return cls({(power, 0, COS): 1})

    @property
    def terms(self) -> dict[Key, ExactScalar]:
        return dict(self._terms)

    def items(self) -> Iterable[tuple[Key, ExactScalar]]:
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, QuasiTrigPoly):
            return self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    @property
    def max_power(self) -> int:
        return max((m for m, _, _ in self._terms), default=0)

    @property
    def is_pure_trig(self) -> bool:
        return all(m == 0 for m, _, _ in self._terms)

    # -- ring operations ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QuasiTrigPoly):
            if other == 0:
                return self
            other = QuasiTrigPoly.constant(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            out[k] = c if v is None else v + c
        return QuasiTrigPoly._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return QuasiTrigPoly._wrap({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, QuasiTrigPoly):
            other = QuasiTrigPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> QuasiTrigPoly:
        c = as_exact(c)
        if not c:
            return QuasiTrigPoly()
        return QuasiTrigPoly._wrap({k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, QuasiTrigPoly):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        return trig_product(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = QuasiTrigPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    # -- calculus ----------------------------------------------------------
    def derivative(self) -> QuasiTrigPoly:
        out: dict[Key, ExactScalar] = {}
        for (m, j, kind), c in self._terms.items():
            if m:
                _accumulate(out, m - 1, j, kind, c * m)
            if j:
                if kind == COS:
                    _accumulate(out, m, j, SIN, -c * j)
                else:
                    _accumulate(out, m, j, COS, c * j)
        return QuasiTrigPoly._wrap(out)

    def antiderivative(self) -> QuasiTrigPoly:
        return trig_antiderivative(self)

    def eval_at_angle(self, multiple: int) -> PiPolynomial:
        return eval_at_angle(self, multiple)

    def shift_by_pi(self) -> QuasiTrigPoly:
        """Return ``p(theta + pi)`` for a pure trigonometric ``p``."""
        if not self.is_pure_trig:
            raise ValueError("shift_by_pi is only exact for pure trigonometric polynomials")
        return QuasiTrigPoly._wrap({k: (-c if k[1] % 2 else c) for k, c in self._terms.items()})

    def evalf(self, theta: float) -> float:
        import math

        total = 0.0
        for (m, j, kind), c in self._terms.items():
            f = math.cos(j * theta) if kind == COS else math.sin(j * theta)
            total += float(c) * theta**m * f
        return total

    def __repr__(self):
        return f"QuasiTrigPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for (m, j, kind), c in sorted(self._terms.items()):
            factors = []
            if m:
                factors.append("θ" if m == 1 else f"θ^{m}")
            if j:
                factors.append(f"{kind}({j if j > 1 else ''}θ)")
            body = "*".join(factors)
            parts.append(f"({c})" + (f"*{body}" if body else ""))
        return " + ".join(parts)


def _accumulate(out: dict[Key, ExactScalar], m: int, j: int, kind: str, c: ExactScalar) -> None:
    if j < 0:
        j = -j
        if kind == SIN:
            c = -c
    if kind == SIN and j == 0:
        return
    key = (m, j, kind)
    v = out.get(key)
    out[key] = c if v is None else v + c


def trig_product(p: QuasiTrigPoly, q: QuasiTrigPoly) -> QuasiTrigPoly:
    """Exact product through the product-to-sum identities."""
    out: dict[Key, ExactScalar] = {}
    qitems = list(q._terms.items())
    for (m1, j1, k1), c1 in p._terms.items():
        for (m2, j2, k2), c2 in qitems:
            c = c1 * c2 * _HALF
            m = m1 + m2
            if k1 == COS and k2 == COS:
                _accumulate(out, m, j1 - j2, COS, c)
                _accumulate(out, m, j1 + j2, COS, c)
            elif k1 == SIN and k2 == SIN:
                _accumulate(out, m, j1 - j2, COS, c)
                _accumulate(out, m, j1 + j2, COS, -c)
            elif k1 == SIN:  # sin a cos b
                _accumulate(out, m, j1 + j2, SIN, c)
                _accumulate(out, m, j1 - j2, SIN, c)
            else:  # cos a sin b
                _accumulate(out, m, j2 + j1, SIN, c)
                _accumulate(out, m, j2 - j1, SIN, c)
    return QuasiTrigPoly._wrap(out)


def _integrate_term(m: int, j: int, kind: str, c: ExactScalar, out: dict[Key, ExactScalar]) -> None:
    # integral of c * theta^m * trig(j theta), without the constant of integration
    if j == 0:
        _accumulate(out, m + 1, 0, COS, c / (m + 1))
        return
    if kind == COS:
        # ∫θ^m cos = θ^m sin/j − (m/j)∫θ^{m−1} sin
        _accumulate(out, m, j, SIN, c / j)
        if m:
            _integrate_term(m - 1, j, SIN, -c * m / j, out)
    else:
        # ∫θ^m sin = −θ^m cos/j + (m/j)∫θ^{m−1} cos
        _accumulate(out, m, j, COS, -c / j)
        if m:
            _integrate_term(m - 1, j, COS, c * m / j, out)


def trig_antiderivative(p: QuasiTrigPoly) -> QuasiTrigPoly:
    """Antiderivative ``F`` with ``F' = p`` and ``F(0) = 0``."""
    out: dict[Key, ExactScalar] = {}
    for (m, j, kind), c in p._terms.items():
        _integrate_term(m, j, kind, c, out)
    at_zero = ZERO
    for (m, j, kind), c in out.items():
        if m == 0 and kind == COS:
            at_zero = at_zero + c
    if at_zero:
        _accumulate(out, 0, 0, COS, -at_zero)
    return QuasiTrigPoly._wrap(out)


def eval_at_angle(p: QuasiTrigPoly, multiple: int) -> PiPolynomial:
    """Evaluate ``p`` at ``theta = multiple * pi`` for ``multiple`` in {1, 2}."""
    if multiple not in (1, 2):
        raise ValueError("only theta = pi and theta = 2*pi are supported exactly")
    coeffs: dict[int, ExactScalar] = {}
    for (m, j, kind), c in p._terms.items():
        if kind == SIN:
            continue
        v = c * (multiple**m)
        if multiple == 1 and j % 2:
            v = -v
        coeffs[m] = coeffs.get(m, ZERO) + v
    return PiPolynomial.from_dict(coeffs)
