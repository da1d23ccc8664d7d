"""Filippov classification of points on the vertical separation line."""

from __future__ import annotations

from dataclasses import dataclass

from ..algebra import ExactScalar, as_exact
from .fields import PiecewiseKolmogorovSystem

CROSSING = "crossing"
SLIDING = "sliding"
ESCAPING = "escaping"
TANGENTIAL = "tangential"


@dataclass(frozen=True)
class SigmaPointClass:
    """Filippov type of a point on Σ.

    ``z1h``/``z2h`` are the normal components ``<grad h, Z_i>`` with
    ``h = x - sigma_x``. For tangential points ``folds`` maps each tangent
    zone to ``"visible"``, ``"invisible"`` or ``"degenerate tangency"``.
    """

    tag: str
    z1h: object
    z2h: object
    folds: tuple[tuple[int, str], ...] = ()


def _sign(v) -> int:
    if isinstance(v, ExactScalar):
        return v.sign()
    return (v > 0) - (v < 0)


def _normal_components(sys: PiecewiseKolmogorovSystem, y):
    x = sys.sigma_x
    if isinstance(y, float):
        x = float(x)
    else:
        y = as_exact(y)
    return sys.Z1.P(x, y), sys.Z2.P(x, y), x, y


def fold_type(sys: PiecewiseKolmogorovSystem, zone: int, y) -> str:
    """Visibility of a tangency of ``Z_zone`` at ``(sigma_x, y)``.

    At a tangency ``(Z_i)^2 h = P_y * Q``. The Z_i orbit stays on its own
    side (visible) when the curvature points into the zone: negative for
    Z1 (left of Σ), positive for Z2.
    """
    fld = sys.field(zone)
    x = sys.sigma_x if not isinstance(y, float) else float(sys.sigma_x)
    if not isinstance(y, float):
        y = as_exact(y)
    second = fld.P.dy()(x, y) * fld.Q(x, y)
    s = _sign(second)
    if s == 0:
        return "degenerate tangency"
    into_zone = s < 0 if zone == 1 else s > 0
    return "visible" if into_zone else "invisible"


def classify_sigma_point(sys: PiecewiseKolmogorovSystem, y) -> SigmaPointClass:
    """Classify ``(sigma_x, y)``; exact when ``y`` is exact, float otherwise."""
    z1h, z2h, _, y = _normal_components(sys, y)
    s1, s2 = _sign(z1h), _sign(z2h)
    if s1 * s2 > 0:
        return SigmaPointClass(CROSSING, z1h, z2h)
    if s1 * s2 < 0:
        # Z1 lives on the left: pointing inward means moving right
        tag = SLIDING if s1 > 0 else ESCAPING
        return SigmaPointClass(tag, z1h, z2h)
    folds = tuple((zone, fold_type(sys, zone, y)) for zone, s in ((1, s1), (2, s2)) if s == 0)
    return SigmaPointClass(TANGENTIAL, z1h, z2h, folds)


def sliding_vector_field(sys: PiecewiseKolmogorovSystem, y):
    """Filippov convex combination at a sliding or escaping point.

    Returns ``(velocity, lam)`` with ``velocity = lam*Z1 + (1-lam)*Z2`` and
    ``lam = z2h / (z2h - z1h)``; the x-component is zero.
    """
    cls = classify_sigma_point(sys, y)
    if cls.tag not in (SLIDING, ESCAPING):
        raise ValueError(f"not a sliding/escaping point: {cls.tag}")
    z1h, z2h = cls.z1h, cls.z2h
    lam = z2h / (z2h - z1h)
    x = sys.sigma_x if not isinstance(y, float) else float(sys.sigma_x)
    if not isinstance(y, float):
        y = as_exact(y)
    q1, q2 = sys.Z1.Q(x, y), sys.Z2.Q(x, y)
    vy = lam * q1 + (1 - lam) * q2
    vx = z1h * 0
    return (vx, vy), lam


def sliding_velocity_from_vectors(z1, z2):
    """Convex combination for explicit vectors ``z1``, ``z2`` at a Σ point."""
    z1h, z2h = z1[0], z2[0]
    if _sign(z1h) * _sign(z2h) >= 0:
        raise ValueError("not a sliding/escaping configuration")
    lam = z2h / (z2h - z1h)
    return (z1h * 0, lam * z1[1] + (1 - lam) * z2[1]), lam


def satisfies_no_sliding_set(p1, p2) -> list[str]:
    """Equations of the set k(1-n)-e-w = e p - s - h = 0 that fail, per zone."""
    failed = []
    for i, p in ((1, p1), (2, p2)):
        if p.k * (1 - p.n) - p.e - p.w:
            failed.append(f"k{i}(1-n{i})-e{i}-w{i} = {p.k * (1 - p.n) - p.e - p.w}")
        if p.e * p.p - p.s - p.h:
            failed.append(f"e{i}p{i}-s{i}-h{i} = {p.e * p.p - p.s - p.h}")
    return failed
