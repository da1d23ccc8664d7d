"""Polar series recurrences and Lyapunov quantities at a weak focus."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import PiPolynomial, QuasiTrigPoly, RSeries, series_compose_inverse
from ..pwfield.fields import PiecewiseKolmogorovSystem, PolyVectorField
from ..pwfield.scenarios import MonodromyKnobs
from .normal_form import NormalFormSystem, normalize_at_weak_focus, normalize_piecewise

DEFAULT_ORDER = 7


@dataclass(frozen=True)
class LyapunovExpansion:
    """Coefficients ``V[1..K]`` of the displacement or difference map."""

    V: tuple[PiPolynomial, ...]
    kind: str = "smooth"

    @property
    def order(self) -> int:
        return len(self.V)

    def __getitem__(self, k: int) -> PiPolynomial:
        if not 1 <= k <= len(self.V):
            raise IndexError(f"V_{k} outside 1..{len(self.V)}")
        return self.V[k - 1]

    @property
    def first_nonzero(self) -> int | None:
        """Index of the first nonzero coefficient, ``None`` if all vanish to order K."""
        for i, v in enumerate(self.V, start=1):
            if v:
                return i
        return None


def _trig_monomials(deg: int):
    c, s = QuasiTrigPoly.cos(1), QuasiTrigPoly.sin(1)
    cp = [QuasiTrigPoly.constant(1)]
    sp = [QuasiTrigPoly.constant(1)]
    for _ in range(deg):
        cp.append(cp[-1] * c)
        sp.append(sp[-1] * s)
    cache: dict[tuple[int, int], QuasiTrigPoly] = {}

    def mono(i: int, j: int) -> QuasiTrigPoly:
        if (i, j) not in cache:
            cache[(i, j)] = cp[i] * sp[j]
        return cache[(i, j)]

    return mono


def _hom_on_circle(p, mono, extra: tuple[int, int]) -> QuasiTrigPoly:
    """``cos^a sin^b * p(cos, sin)`` for a homogeneous polynomial ``p``."""
    out = QuasiTrigPoly()
    for (i, j), v in p.coeffs.items():
        out = out + mono(i + extra[0], j + extra[1]).scale(v)
    return out


def polar_expansion(nf: NormalFormSystem, K: int = DEFAULT_ORDER) -> list[QuasiTrigPoly]:
    """``[S_2, ..., S_K]`` with ``dr/dtheta = sum S_k(theta) r^k``."""
    if K < 2:
        raise ValueError("order K must be at least 2")
    if nf.tau:
        raise ValueError("polar recurrence needs tau = 0")
    deg = nf.degree
    mono = _trig_monomials(deg + 1)
    zero = QuasiTrigPoly()
    # r' = sum f_k r^k ; theta' = 1 + sum g_k r^(k-1)
    f = [zero] * (K + 1)
    g = [zero] * (K + 1)
    g[0] = QuasiTrigPoly.constant(1)
    for k in range(2, deg + 1):
        X, Y = nf.X.get(k), nf.Y.get(k)
        fk, gk = zero, zero
        if X:
            fk = fk + _hom_on_circle(X, mono, (1, 0))
            gk = gk - _hom_on_circle(X, mono, (0, 1))
        if Y:
            fk = fk + _hom_on_circle(Y, mono, (0, 1))
            gk = gk + _hom_on_circle(Y, mono, (1, 0))
        if k <= K:
            f[k] = fk
        if k - 1 <= K:
            g[k - 1] = gk
    F = RSeries(f, K, zero=zero)
    # 1/(1 + G1) by the geometric series; G1 has no constant term
    G1 = RSeries([zero] + g[1:], K, zero=zero)
    inv = RSeries([QuasiTrigPoly.constant(1)], K, zero=zero)
    term = inv
    for _ in range(1, K):
        term = term * (-G1)
        if all(not c for c in term.coeffs):
            break
        inv = inv + term
    S = F * inv
    return [S[k] for k in range(2, K + 1)]


def radial_coefficients(S: list[QuasiTrigPoly], K: int) -> list[QuasiTrigPoly]:
    """``u_1..u_K`` of ``r(theta, r0) = sum u_k r0^k`` with ``r(0) = r0``.

    ``u_k' = sum_j S_j [r0^k] r^j`` and ``u_k(0) = 0`` for ``k >= 2``; powers
    ``[r0^k] r^j`` are built column by column so each new ``u_k`` only needs
    lower-order data.
    """
    zero = QuasiTrigPoly()
    Sj = {j: S[j - 2] for j in range(2, K + 1) if j - 2 < len(S) and S[j - 2]}
    u = [zero, QuasiTrigPoly.constant(1)] + [zero] * (K - 1)
    # pw[j][k] = [r0^k] r^j ; pw[1] is u itself
    pw: dict[int, list[QuasiTrigPoly]] = {}
    for k in range(2, K + 1):
        for j in range(2, k + 1):
            row = pw.setdefault(j, [zero] * (K + 1))
            prev = u if j == 2 else pw[j - 1]
            acc = zero
            for i in range(1, k - j + 2):
                if u[i] and prev[k - i]:
                    acc = acc + u[i] * prev[k - i]
            row[k] = acc
        deriv = zero
        for j, s in Sj.items():
            if j <= k and pw[j][k]:
                deriv = deriv + s * pw[j][k]
        u[k] = deriv.antiderivative()
    return u


def _evaluate(u: list[QuasiTrigPoly], multiple: int, K: int) -> RSeries:
    coeffs = [PiPolynomial()] + [u[k].eval_at_angle(multiple) for k in range(1, K + 1)]
    return RSeries(coeffs, K, zero=PiPolynomial())


def smooth_lyapunov(
    fld: PolyVectorField | NormalFormSystem,
    point=(1, 1),
    K: int = DEFAULT_ORDER,
    knobs: MonodromyKnobs | None = None,
) -> LyapunovExpansion:
    """Displacement map ``Pi(r0) - r0 = sum V_k r0^k`` around a weak focus."""
    nf = fld if isinstance(fld, NormalFormSystem) else normalize_at_weak_focus(fld, point, knobs)
    S = polar_expansion(nf, K)
    u = radial_coefficients(S, K)
    pi_map = _evaluate(u, 2, K)
    V = [pi_map[1] - 1] + [pi_map[k] for k in range(2, K + 1)]
    return LyapunovExpansion(tuple(V), kind="smooth")


def half_return_series(upper: NormalFormSystem, lower: NormalFormSystem, K: int) -> tuple[RSeries, RSeries]:
    """``Pi_1`` through ``{y > 0}`` on ``[0, pi]`` and ``Pi_2`` through ``{y < 0}`` on ``[pi, 2 pi]``.

    The second half restarts with ``r(pi) = r0``; shifting its ``S_k`` by
    ``pi`` lets the same recurrence run on ``[0, pi]``.
    """
    S_up = polar_expansion(upper, K)
    S_low = [s.shift_by_pi() for s in polar_expansion(lower, K)]
    pi1 = _evaluate(radial_coefficients(S_up, K), 1, K)
    pi2 = _evaluate(radial_coefficients(S_low, K), 1, K)
    return pi1, pi2


def piecewise_lyapunov(
    sys: PiecewiseKolmogorovSystem | tuple[NormalFormSystem, NormalFormSystem],
    K: int = DEFAULT_ORDER,
    point=None,
    knobs=(None, None),
    start: str = "above",
) -> LyapunovExpansion:
    """Difference map ``Pi_2^{-1}(r0) - Pi_1(r0) = -sum V_k r0^k`` at a Σ focus."""
    if isinstance(sys, tuple):
        upper, lower = sys
    else:
        upper, lower = normalize_piecewise(sys, point, knobs, start)
    pi1, pi2 = half_return_series(upper, lower, K)
    delta = series_compose_inverse(pi2) - pi1
    return LyapunovExpansion(tuple(-delta[k] for k in range(1, K + 1)), kind="piecewise")
