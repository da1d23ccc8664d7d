"""Competition / facilitation resource-consumer fields and their parameter conditions."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from ..algebra import ExactScalar, Poly2, as_exact
from .fields import PolyVectorField

_PARAM_NAMES = ("k", "n", "e", "p", "s", "w", "h")


@dataclass(frozen=True)
class ScenarioParams:
    """Parameters of one zone.

    k growth rate, n intraspecific competition, e consumption rate,
    p reproduction fraction, s consumer self-interaction, w resource
    mortality, h consumer mortality.
    """

    k: ExactScalar
    n: ExactScalar
    e: ExactScalar
    p: ExactScalar
    s: ExactScalar
    w: ExactScalar
    h: ExactScalar

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, as_exact(getattr(self, f.name)))

    @classmethod
    def from_mapping(cls, m) -> ScenarioParams:
        return cls(**{name: as_exact(m[name]) for name in _PARAM_NAMES})

    def as_dict(self) -> dict[str, ExactScalar]:
        return {name: getattr(self, name) for name in _PARAM_NAMES}

    def with_(self, **changes) -> ScenarioParams:
        return replace(self, **{k: as_exact(v) for k, v in changes.items()})

    def admissibility_issues(self) -> list[str]:
        """Biological admissibility diagnostics (never enforced)."""
        issues = []
        for name in ("k", "n", "e", "h"):
            if getattr(self, name).sign() <= 0:
                issues.append(f"{name} must be > 0")
        if self.w.sign() < 0:
            issues.append("w must be >= 0")
        if not (self.p.sign() > 0 and (self.p - 1).sign() < 0):
            issues.append("p must lie in (0, 1)")
        return issues

    def is_admissible(self) -> bool:
        return not self.admissibility_issues()


@dataclass(frozen=True)
class MonodromyKnobs:
    """Target trace ``t`` and determinant ``a**2`` of the Jacobian at (1, 1)."""

    t: ExactScalar = ExactScalar(0)
    a: ExactScalar = ExactScalar(1)

    def __post_init__(self):
        object.__setattr__(self, "t", as_exact(self.t))
        object.__setattr__(self, "a", as_exact(self.a))
        if not self.a:
            raise ValueError("a = 0 gives a degenerate (non-focus) linear part")


def build_competition(params: ScenarioParams) -> PolyVectorField:
    """x' = x(k(1 - n x) - e y - w),  y' = y(e p x - s y - h)."""
    k, n, e, p, s, w, h = (params.k, params.n, params.e, params.p, params.s, params.w, params.h)
    f = Poly2({(0, 0): k - w, (1, 0): -k * n, (0, 1): -e})
    g = Poly2({(0, 0): -h, (1, 0): e * p, (0, 1): -s})
    return PolyVectorField.from_kolmogorov(f, g)


def build_facilitation(params: ScenarioParams) -> PolyVectorField:
    """x' = x(k x(1 - n x) - e y - w),  y' = y(e p x - s y - h)."""
    k, n, e, p, s, w, h = (params.k, params.n, params.e, params.p, params.s, params.w, params.h)
    f = Poly2({(0, 0): -w, (1, 0): k, (2, 0): -k * n, (0, 1): -e})
    g = Poly2({(0, 0): -h, (1, 0): e * p, (0, 1): -s})
    return PolyVectorField.from_kolmogorov(f, g)


def monodromy_conditions_competition(k, n, e, knobs: MonodromyKnobs = MonodromyKnobs()) -> ScenarioParams:
    """Competition parameters with an equilibrium at (1, 1) of trace ``t`` and det ``a**2``."""
    k, n, e = as_exact(k), as_exact(n), as_exact(e)
    if not e:
        raise ZeroDivisionError("e must be nonzero")
    t, a2 = knobs.t, knobs.a * knobs.a
    kn = k * n
    h = (kn * kn + e * kn + kn * t + a2 + e * t) / e
    p = (kn * kn + kn * t + a2) / (e * e)
    s = -kn - t
    w = -kn - e + k
    return ScenarioParams(k=k, n=n, e=e, p=p, s=s, w=w, h=h)


def monodromy_conditions_facilitation(k, n, e, knobs: MonodromyKnobs = MonodromyKnobs()) -> ScenarioParams:
    """Facilitation parameters with an equilibrium at (1, 1) of trace ``t`` and det ``a**2``."""
    k, n, e = as_exact(k), as_exact(n), as_exact(e)
    if not e:
        raise ZeroDivisionError("e must be nonzero")
    t, a2 = knobs.t, knobs.a * knobs.a
    kn = k * n
    h = (4 * kn * kn + 2 * e * kn - 4 * k * kn + 2 * kn * t + a2 - e * k + e * t + k * k - k * t) / e
    p = (4 * kn * kn - 4 * k * kn + 2 * kn * t + a2 + k * k - k * t) / (e * e)
    s = -2 * kn + k - t
    w = -kn - e + k
    return ScenarioParams(k=k, n=n, e=e, p=p, s=s, w=w, h=h)


def saddle_node_threshold(n2, w2) -> ExactScalar:
    """Growth rate at which the two boundary equilibria of the facilitation field merge."""
    return 4 * as_exact(n2) * as_exact(w2)


def facilitation_boundary_roots(k2, n2, w2) -> tuple[ExactScalar, ExactScalar] | tuple[float, float] | None:
    """Abscissae ``x_{r+}, x_{r-}`` of the facilitation equilibria on ``y = 0``.

    Exact when the discriminant is a square in the coefficient field, floats
    otherwise, ``None`` when the roots are complex.
    """
    k2, n2, w2 = as_exact(k2), as_exact(n2), as_exact(w2)
    disc = k2 * k2 - 4 * k2 * n2 * w2
    if disc.sign() < 0:
        return None
    root = disc.sqrt_exact()
    if root is None:
        import math

        r = math.sqrt(float(disc))
        kf, nf = float(k2), float(n2)
        return (1 + r / kf) / (2 * nf), (1 - r / kf) / (2 * nf)
    return (1 + root / k2) / (2 * n2), (1 - root / k2) / (2 * n2)


def facilitation_center_from_roots(x0, x1) -> ScenarioParams:
    """Facilitation center at (1, 1) whose boundary equilibria sit at ``x0`` and ``x1``.

    Uses the center condition that the facilitation certificate actually
    satisfies; ``k`` generally lands in a quadratic extension.
    """
    from ..lyapunov.closed_forms import center_e2

    x0, x1 = as_exact(x0), as_exact(x1)
    n = 1 / (x0 + x1)
    num = 2 * (n * x0 - 1) * x0 + 1
    den = -((8 * n * n - 6 * n + 1) * (n * x0 - 1) * x0 + 2 * n * n - n)
    k_sq = num / den
    k = k_sq.sqrt_exact()
    if k is None:
        raise ValueError(f"k^2 = {k_sq} has no real square root in the field")
    e = center_e2(k, n)
    return monodromy_conditions_facilitation(k, n, e)


def continuity_failures(p1: ScenarioParams, p2: ScenarioParams) -> list[str]:
    """Equations of the continuity set that fail for the pair, one string each.

    The set makes both zones agree on ``x = 1`` and share the equilibrium
    (1, 1): e1 = e2 = (1-n2)k2 - w2, w1 = (1-n1)k1 - e2,
    s1 = s2 = e2 p2 - h2 and h1 = h2 + e2 (p1 - p2).
    """
    checks = [
        ("e1 = e2", p1.e - p2.e),
        ("e2 = (1-n2)k2 - w2", p2.e - ((1 - p2.n) * p2.k - p2.w)),
        ("w1 = (1-n1)k1 - e2", p1.w - ((1 - p1.n) * p1.k - p2.e)),
        ("s1 = s2", p1.s - p2.s),
        ("s2 = e2 p2 - h2", p2.s - (p2.e * p2.p - p2.h)),
        ("h1 = h2 + e2(p1 - p2)", p1.h - (p2.h + p2.e * (p1.p - p2.p))),
    ]
    return [f"{name} (residual {res})" for name, res in checks if res]


def continuous_params(k1, n1, k2, n2, w2, p1, p2, h2) -> tuple[ScenarioParams, ScenarioParams]:
    """Complete a free choice of (k1, n1, k2, n2, w2, p1, p2, h2) to a continuous pair."""
    k1, n1, k2, n2, w2, p1, p2, h2 = map(as_exact, (k1, n1, k2, n2, w2, p1, p2, h2))
    e = (1 - n2) * k2 - w2
    s = e * p2 - h2
    zone1 = ScenarioParams(k=k1, n=n1, e=e, p=p1, s=s, w=(1 - n1) * k1 - e, h=h2 + e * (p1 - p2))
    zone2 = ScenarioParams(k=k2, n=n2, e=e, p=p2, s=s, w=w2, h=h2)
    return zone1, zone2


def build_continuous_system(p1: ScenarioParams, p2: ScenarioParams):
    """Competition/facilitation pair that is continuous across ``x = 1``.

    Raises ``ValueError`` naming every failed continuity equation.
    """
    from .fields import PiecewiseKolmogorovSystem

    failed = continuity_failures(p1, p2)
    if failed:
        raise ValueError("continuity set violated: " + "; ".join(failed))
    return PiecewiseKolmogorovSystem(build_competition(p1), build_facilitation(p2))


def continuous_weak_focus_params(k1, k2, n2, e, trace=0) -> tuple[ScenarioParams, ScenarioParams]:
    """Continuous pair with a monodromic equilibrium at (1, 1) of trace ``trace`` in both zones.

    Continuity together with both monodromy conditions forces
    ``k1 n1 = 2 k2 n2 - k2`` and equal knobs in the two zones.
    """
    k1, k2, n2, e = map(as_exact, (k1, k2, n2, e))
    n1 = (2 * k2 * n2 - k2) / k1
    knobs = MonodromyKnobs(t=trace)
    return monodromy_conditions_competition(k1, n1, e, knobs), monodromy_conditions_facilitation(k2, n2, e, knobs)
