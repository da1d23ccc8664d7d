"""Named parameter sets used by the tests, the experiments and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction as F

from ..algebra import ExactScalar, as_exact, parse_exact
from .fields import PiecewiseKolmogorovSystem, PolyVectorField
from .scenarios import (
    ScenarioParams,
    build_competition,
    build_continuous_system,
    build_facilitation,
    continuous_weak_focus_params,
    monodromy_conditions_competition,
    monodromy_conditions_facilitation,
)


@dataclass(frozen=True)
class Preset:
    """A named system: either smooth (``params2`` is None) or two-zone.

    ``focus`` is the monodromic point of interest, ``None`` when the preset
    is only meant for simulation.
    """

    name: str
    description: str
    params1: ScenarioParams
    params2: ScenarioParams | None
    focus: tuple[ExactScalar, ExactScalar] | None
    shape1: str = "competition"
    shape2: str = "facilitation"
    extra: dict = field(default_factory=dict)

    @property
    def is_piecewise(self) -> bool:
        return self.params2 is not None

    @property
    def zone1(self) -> PolyVectorField:
        return _build(self.shape1, self.params1)

    @property
    def zone2(self) -> PolyVectorField | None:
        return None if self.params2 is None else _build(self.shape2, self.params2)

    def system(self) -> PiecewiseKolmogorovSystem | PolyVectorField:
        if self.params2 is None:
            return self.zone1
        return PiecewiseKolmogorovSystem(self.zone1, self.zone2)

    def as_piecewise(self) -> PiecewiseKolmogorovSystem:
        """Two-zone view; a smooth preset uses the same field on both sides."""
        z1 = self.zone1
        return PiecewiseKolmogorovSystem(z1, self.zone2 if self.params2 is not None else z1)


def _build(shape: str, params: ScenarioParams) -> PolyVectorField:
    return build_competition(params) if shape == "competition" else build_facilitation(params)


ONE = (ExactScalar(1), ExactScalar(1))

# k1 = (sqrt(401) - 1)/5, n1 = 1/4, e1 = 2, k2 = 5/2 shared by both order-three foci
_K1_ORDER3 = "(sqrt(401)-1)/5"


def _order_three(n2, e2) -> tuple[ScenarioParams, ScenarioParams]:
    return (
        monodromy_conditions_competition(parse_exact(_K1_ORDER3), F(1, 4), 2),
        monodromy_conditions_facilitation(F(5, 2), n2, e2),
    )


def _make() -> dict[str, Preset]:
    out: dict[str, Preset] = {}

    out["competition-eq9"] = Preset(
        "competition-eq9",
        "competition field, center at (1, 1) with k = n = e = 1",
        monodromy_conditions_competition(1, 1, 1),
        None,
        ONE,
    )
    out["facilitation-eq12"] = Preset(
        "facilitation-eq12",
        "facilitation field, weak focus at (1, 1) with k = 1, n = 1/2, e = 1",
        monodromy_conditions_facilitation(1, F(1, 2), 1),
        None,
        ONE,
        shape1="facilitation",
    )
    out["fig5c"] = Preset(
        "fig5c",
        "facilitation field oscillating around an unstable coexistence focus",
        ScenarioParams(
            k=F(92, 225), n=F(100, 207), e=F(266, 2025), p=1, s=0, w=F(2, 25), h=F(266, 2025)
        ),
        None,
        None,
        shape1="facilitation",
    )
    out["fig3a"] = Preset(
        "fig3a",
        "competition field with a stable coexistence node",
        ScenarioParams(k=1, n=1, e=F(1, 5), p=F(4, 5), s=F(1, 20), w=F(1, 20), h=F(1, 20)),
        None,
        None,
    )
    p1, p2 = _order_three(F(1, 10), parse_exact("(619-19*sqrt(401))/300"))
    out["Tu-eq19"] = Preset("Tu-eq19", "two-zone weak focus of order three, unstable", p1, p2, ONE)
    p1, p2 = _order_three(F(501, 1000), parse_exact("36199/100400+19*sqrt(401)/502"))
    out["Ts-eq20"] = Preset("Ts-eq20", "two-zone weak focus of order three, stable", p1, p2, ONE)
    out["center-thm32"] = Preset(
        "center-thm32",
        "two-zone center: both closed-form center conditions vanish",
        monodromy_conditions_competition(F(8, 3), F(1, 4), 2),
        monodromy_conditions_facilitation(F(8, 3), F(1, 4), F(50, 27)),
        ONE,
    )
    c1, c2 = continuous_weak_focus_params(1, 6, 0, 1)
    build_continuous_system(c1, c2)
    out["continuous-C"] = Preset(
        "continuous-C",
        "continuous two-zone system with a center at (1, 1) (n2 = 0)",
        c1,
        c2,
        ONE,
        extra={"k1": as_exact(1), "k2": as_exact(6), "n2": as_exact(0), "e": as_exact(1)},
    )
    return out


PRESETS: dict[str, Preset] = _make()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(sorted(PRESETS))}") from None
