"""Reduction of a weak focus to ``x' = -y + ..., y' = x + ...``."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import ExactScalar, Poly2, as_exact
from ..pwfield.fields import PiecewiseKolmogorovSystem, PolyVectorField
from ..pwfield.scenarios import MonodromyKnobs


class NormalizationError(ValueError):
    """The point is not a nondegenerate weak-focus candidate."""


@dataclass(frozen=True)
class AffineChange:
    """``z = point + T @ xi`` together with the time rescaling ``t_new = omega t``."""

    point: tuple[ExactScalar, ExactScalar]
    T: tuple[tuple[ExactScalar, ExactScalar], tuple[ExactScalar, ExactScalar]]
    omega: ExactScalar

    def to_original(self, xi1, xi2):
        (a, b), (c, d) = self.T
        return self.point[0] + a * xi1 + b * xi2, self.point[1] + c * xi1 + d * xi2

    def to_normal(self, x, y):
        (a, b), (c, d) = self.T
        det = a * d - b * c
        dx, dy = x - self.point[0], y - self.point[1]
        return (d * dx - b * dy) / det, (-c * dx + a * dy) / det


@dataclass(frozen=True)
class NormalFormSystem:
    """``x' = tau x - y + sum X_k``, ``y' = x + tau y + sum Y_k`` (counterclockwise).

    ``upper_zone`` records which original zone occupies ``{y > 0}`` when the
    system comes from a piecewise field (``None`` for smooth input).
    """

    tau: ExactScalar
    X: dict[int, Poly2]
    Y: dict[int, Poly2]
    transform: AffineChange
    upper_zone: int | None = None

    @property
    def degree(self) -> int:
        return max([1, *self.X, *self.Y])

    @property
    def field(self) -> PolyVectorField:
        P = Poly2({(1, 0): self.tau, (0, 1): -1})
        Q = Poly2({(1, 0): 1, (0, 1): self.tau})
        for p in self.X.values():
            P = P + p
        for q in self.Y.values():
            Q = Q + q
        return PolyVectorField(P, Q)


def _omega(det: ExactScalar, knobs: MonodromyKnobs | None) -> ExactScalar:
    if knobs is not None:
        a = knobs.a if knobs.a.sign() > 0 else -knobs.a
        if a * a != det:
            raise NormalizationError(f"knob a^2 = {a * a} does not match det = {det}")
        return a
    root = det.sqrt_exact()
    if root is None:
        raise NormalizationError(f"sqrt(det) = sqrt({det}) is not in the coefficient field")
    return root


def _reduce(fld: PolyVectorField, point, direction: int, knobs: MonodromyKnobs | None, allow_trace: bool):
    x0, y0 = as_exact(point[0]), as_exact(point[1])
    P0, Q0 = fld(x0, y0)
    if P0 or Q0:
        raise NormalizationError(f"({x0}, {y0}) is not an equilibrium")
    (a, b), (c, d) = fld.jacobian(x0, y0)
    tr, det = a + d, a * d - b * c
    if tr and not allow_trace:
        raise NormalizationError(f"trace {tr} != 0: only the first quantity has a closed form off tau = 0")
    if (4 * det - tr * tr).sign() <= 0:
        raise NormalizationError(f"det - trace^2/4 = {det - tr * tr / 4} <= 0: not a monodromic linear part")
    tau = tr / 2
    omega = _omega(det - tau * tau, None if tr else knobs)
    # xi1 axis along +-e_y, the second column is (J - tau I) w / omega
    w = (ExactScalar(0), ExactScalar(direction))
    jw = ((a - tau) * w[0] + b * w[1], c * w[0] + (d - tau) * w[1])
    T = ((w[0], jw[0] / omega), (w[1], jw[1] / omega))
    change = AffineChange((x0, y0), T, omega)
    xi1, xi2 = Poly2.x(), Poly2.y()
    px = xi1 * T[0][0] + xi2 * T[0][1] + x0
    py = xi1 * T[1][0] + xi2 * T[1][1] + y0
    Pn, Qn = fld.P.compose(px, py), fld.Q.compose(px, py)
    det_t = T[0][0] * T[1][1] - T[0][1] * T[1][0]
    inv_scale = 1 / (det_t * omega)
    newP = (Pn * T[1][1] - Qn * T[0][1]) * inv_scale
    newQ = (Qn * T[0][0] - Pn * T[1][0]) * inv_scale
    deg = max(newP.degree, newQ.degree)
    X = {k: newP.homogeneous_part(k) for k in range(2, deg + 1)}
    Y = {k: newQ.homogeneous_part(k) for k in range(2, deg + 1)}
    lin_expected = (
        Poly2({(1, 0): tau / omega, (0, 1): -1}),
        Poly2({(1, 0): 1, (0, 1): tau / omega}),
    )
    if newP.homogeneous_part(1) != lin_expected[0] or newQ.homogeneous_part(1) != lin_expected[1]:
        raise AssertionError("linear part did not reduce to the rotation normal form")
    return NormalFormSystem(tau / omega, X, Y, change), b


def normalize_at_weak_focus(fld: PolyVectorField, point=(1, 1), knobs: MonodromyKnobs | None = None) -> NormalFormSystem:
    """Translate ``point`` to the origin and bring the linear part to a unit rotation.

    The first new axis points along ``+y`` of the original coordinates, time
    is rescaled by ``sqrt(det)``, and the result rotates counterclockwise.
    """
    nf, _ = _reduce(fld, point, 1, knobs, allow_trace=False)
    return nf


def normalize_piecewise(
    sys: PiecewiseKolmogorovSystem,
    point=None,
    knobs: tuple[MonodromyKnobs | None, MonodromyKnobs | None] = (None, None),
    start: str = "above",
) -> tuple[NormalFormSystem, NormalFormSystem]:
    """Twin changes for both zones at a Σ point; returns ``(upper, lower)`` half-plane systems.

    Both zones share the first axis (``+y`` for ``start="above"``, ``-y``
    for ``"below"``), so they agree on Σ, which becomes ``{y = 0}``. The
    zone the counterclockwise flow enters first from the positive axis is
    the upper one.
    """
    if point is None:
        point = (sys.sigma_x, 1)
    if as_exact(point[0]) != sys.sigma_x:
        raise NormalizationError("the focus must lie on Σ")
    direction = 1 if start == "above" else -1
    if start not in ("above", "below"):
        raise ValueError("start must be 'above' or 'below'")
    nf1, b1 = _reduce(sys.Z1, point, direction, knobs[0], allow_trace=False)
    nf2, b2 = _reduce(sys.Z2, point, direction, knobs[1], allow_trace=False)
    if b1.sign() * b2.sign() <= 0:
        raise NormalizationError("inconsistent Σ orientation: the zones rotate in opposite senses")
    # original x - sigma = xi2 * T[0][1]; Z1 (x < sigma) is xi2 > 0 iff T[0][1] < 0
    z1_upper = nf1.transform.T[0][1].sign() < 0
    up, low = (nf1, nf2) if z1_upper else (nf2, nf1)
    tag = 1 if z1_upper else 2
    return (
        NormalFormSystem(up.tau, up.X, up.Y, up.transform, upper_zone=tag),
        NormalFormSystem(low.tau, low.X, low.Y, low.transform, upper_zone=tag),
    )


def linear_trace_det(fld: PolyVectorField, point) -> tuple[ExactScalar, ExactScalar]:
    return fld.trace_det(*point)
