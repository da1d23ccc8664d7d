import random
from fractions import Fraction as F

import pytest

from kolmofocus.algebra import ExactScalar, Poly2, parse_exact
from kolmofocus.pwfield import (
    PRESETS,
    MonodromyKnobs,
    PiecewiseKolmogorovSystem,
    PolyVectorField,
    ScenarioParams,
    build_competition,
    build_continuous_system,
    build_facilitation,
    classify_sigma_point,
    continuity_failures,
    continuous_params,
    continuous_weak_focus_params,
    equilibria,
    facilitation_boundary_roots,
    facilitation_coexistence_equilibria,
    fold_type,
    get_preset,
    monodromy_conditions_competition,
    monodromy_conditions_facilitation,
    saddle_node_threshold,
    satisfies_no_sliding_set,
    sliding_vector_field,
)
from kolmofocus.pwfield.sigma import sliding_velocity_from_vectors

x, y = Poly2.x(), Poly2.y()


def rand_q(rng, lo=1, hi=40, den=12):
    return F(rng.randint(lo, hi), rng.randint(1, den))


def const_field(a, b):
    return PolyVectorField(Poly2.const(a), Poly2.const(b))


# -- builders --------------------------------------------------------------------


def test_competition_with_unit_parameters():
    fld = build_competition(ScenarioParams(1, 1, 1, 1, 1, 1, 1))
    assert fld.P == x * (1 - x - y - 1)
    assert fld.Q == y * (x - y - 1)
    assert fld.kolmogorov


def test_competition_center_parameters():
    p = monodromy_conditions_competition(1, 1, 1)
    assert (p.h, p.p, p.s, p.w) == (3, 2, -1, -1)
    P, Q = build_competition(p)(1, 1)
    assert P == 0 and Q == 0


def test_facilitation_center_parameters():
    p = monodromy_conditions_facilitation(1, F(1, 2), 1)
    assert (p.h, p.s, p.p, p.w) == (1, 0, 1, F(-1, 2))
    fld = build_facilitation(p)
    assert fld(1, 1) == (0, 0)
    assert fld.P == x * (x * (1 - x * F(1, 2)) - y + F(1, 2))


def test_fig5c_field_is_valid():
    fld = get_preset("fig5c").zone1
    assert fld.kolmogorov and fld.degree == 3
    assert fld.P.coeff(3, 0) == -F(92, 225) * F(100, 207)


def test_monodromy_knobs_give_requested_trace_and_det():
    rng = random.Random(11)
    for _ in range(25):
        k, n, e = rand_q(rng), rand_q(rng), rand_q(rng)
        t, a = F(rng.randint(-9, 9), 7), rand_q(rng)
        knobs = MonodromyKnobs(t, a)
        pc = monodromy_conditions_competition(k, n, e, knobs)
        pf = monodromy_conditions_facilitation(k, n, e, knobs)
        assert pc.s == -k * n - t
        assert pf.s == -2 * k * n + k - t
        for fld in (build_competition(pc), build_facilitation(pf)):
            assert fld(1, 1) == (0, 0)
            assert fld.trace_det(1, 1) == (t, a * a)


def test_monodromy_rejects_zero_consumption():
    with pytest.raises(ZeroDivisionError):
        monodromy_conditions_competition(1, 1, 0)
    with pytest.raises(ZeroDivisionError):
        monodromy_conditions_facilitation(1, 1, 0)
    with pytest.raises(ValueError):
        MonodromyKnobs(0, 0)


def test_admissibility_is_diagnostic_only():
    p = monodromy_conditions_competition(1, 1, 1)
    assert not p.is_admissible()
    assert "p must lie in (0, 1)" in p.admissibility_issues()


def test_kolmogorov_axes_invariant_exactly():
    for name, pre in PRESETS.items():
        for fld in filter(None, (pre.zone1, pre.zone2)):
            assert not fld.P.restrict_x(0), name
            assert not fld.Q.restrict_y(0), name


def test_kolmogorov_flag_checked():
    with pytest.raises(ValueError):
        PolyVectorField(Poly2.const(1), y, kolmogorov=True)


# -- equilibria --------------------------------------------------------------------


def test_competition_origin_eigenvalues():
    rng = random.Random(3)
    for _ in range(10):
        p = ScenarioParams(*(rand_q(rng) for _ in range(7)))
        fld = build_competition(p)
        origin = [e for e in equilibria(fld) if e.point == (0, 0)][0]
        # hand Jacobian at the origin is diag(k - w, -h)
        assert origin.trace == (p.k - p.w) - p.h
        assert origin.det == -(p.k - p.w) * p.h
        assert sorted(origin.exact_eigenvalues) == sorted([p.k - p.w, -p.h])


def test_facilitation_origin_is_stable():
    p = ScenarioParams(k=2, n=F(1, 3), e=1, p=F(1, 2), s=F(1, 5), w=F(1, 4), h=F(1, 3))
    origin = [e for e in equilibria(build_facilitation(p)) if e.point == (0, 0)][0]
    assert sorted(origin.exact_eigenvalues) == sorted([-p.w, -p.h])
    assert origin.tag == "stable node"


def test_every_equilibrium_is_exact_zero():
    for name in ("competition-eq9", "facilitation-eq12", "fig5c", "fig3a"):
        fld = get_preset(name).zone1
        for eq in equilibria(fld):
            if eq.exact:
                assert fld(*eq.point) == (0, 0), name


def test_fig3a_has_stable_coexistence_node():
    eqs = equilibria(get_preset("fig3a").zone1)
    inner = [e for e in eqs if float(e.point[0]) > 0 and float(e.point[1]) > 0]
    assert len(inner) == 1
    e = inner[0]
    # Cramer's rule on k(1 - n x) - e y - w = 0, e p x - s y - h = 0
    k, n, ee, p, s, w, h = 1, 1, F(1, 5), F(4, 5), F(1, 20), F(1, 20), F(1, 20)
    det = (-k * n) * (-s) - (-ee) * (ee * p)
    xs = ((-(k - w)) * (-s) - (-ee) * h) / det
    ys = ((-k * n) * h - (ee * p) * (-(k - w))) / det
    assert e.point == (xs, ys)
    assert e.tag == "stable node"


def test_center_candidate_at_weak_focus():
    eqs = equilibria(get_preset("facilitation-eq12").zone1)
    at_one = [e for e in eqs if e.point == (1, 1)]
    assert at_one and at_one[0].tag == "center candidate"


def test_facilitation_closed_form_equilibria():
    eq = facilitation_coexistence_equilibria(F(1, 3), F(7, 4))
    assert eq["c"] == (0, F(-14, 11))


def test_numeric_fallback_for_generic_fields():
    # not Kolmogorov: a rotated saddle at (1, 2)
    fld = PolyVectorField((x - 1) * (y - 2) + (y - 2), (x - 1) + (x - 1) * (x - 1))
    eqs = equilibria(fld)
    assert any(abs(float(e.point[0]) - 1) < 1e-10 and abs(float(e.point[1]) - 2) < 1e-10 for e in eqs)


# -- saddle-node threshold -------------------------------------------------------


def test_saddle_node_threshold_examples():
    assert saddle_node_threshold(1, 1) == 4
    assert saddle_node_threshold(0, 5) == 0


def test_boundary_roots_merge_at_threshold():
    rng = random.Random(5)
    for _ in range(10):
        n2, w2 = rand_q(rng), rand_q(rng)
        kc = saddle_node_threshold(n2, w2)
        a, b = facilitation_boundary_roots(kc, n2, w2)
        assert isinstance(a, ExactScalar) and a == b == 1 / (2 * n2)
        fld = build_facilitation(ScenarioParams(k=kc, n=n2, e=1, p=F(1, 2), s=1, w=w2, h=1))
        assert fld.f(a, 0) == 0


# -- Σ classification -------------------------------------------------------------


def test_sigma_classification_table():
    cross = PiecewiseKolmogorovSystem(const_field(1, 0), const_field(1, 0))
    slide = PiecewiseKolmogorovSystem(const_field(1, 0), const_field(-1, 0))
    escape = PiecewiseKolmogorovSystem(const_field(-1, 0), const_field(1, 0))
    tangent = PiecewiseKolmogorovSystem(const_field(0, 1), const_field(1, 0))
    assert classify_sigma_point(cross, 0).tag == "crossing"
    assert classify_sigma_point(slide, 0).tag == "sliding"
    assert classify_sigma_point(escape, 0).tag == "escaping"
    t = classify_sigma_point(tangent, 0)
    assert t.tag == "tangential" and t.folds[0][0] == 1


def test_zone_swap_exchanges_sliding_and_escaping():
    rng = random.Random(9)
    swap = {"sliding": "escaping", "escaping": "sliding"}
    for _ in range(40):
        a, b, c, d = (F(rng.randint(-5, 5)) for _ in range(4))
        sys = PiecewiseKolmogorovSystem(const_field(a, b), const_field(c, d), 0)
        swapped = PiecewiseKolmogorovSystem(const_field(c, d), const_field(a, b), 0)
        mirror = PiecewiseKolmogorovSystem(const_field(-c, d), const_field(-a, b), 0)
        t = classify_sigma_point(sys, 0).tag
        assert classify_sigma_point(swapped, 0).tag == swap.get(t, t)
        # reflecting x as well maps an attracting segment onto an attracting one
        assert classify_sigma_point(mirror, 0).tag == t


def test_fold_visibility_follows_curvature():
    # Z1 = (y, 1) on x < 0: x'' = 1 > 0 pushes the orbit into x > 0, so invisible for Z1
    sys = PiecewiseKolmogorovSystem(PolyVectorField(y, Poly2.const(1)), PolyVectorField(y, Poly2.const(1)), 0)
    assert fold_type(sys, 1, 0) == "invisible"
    assert fold_type(sys, 2, 0) == "visible"
    flat = PiecewiseKolmogorovSystem(PolyVectorField(y * y, Poly2.const(1)), const_field(1, 0), 0)
    assert fold_type(flat, 1, 0) == "degenerate tangency"


def test_sliding_vector_examples():
    (vx, vy), lam = sliding_velocity_from_vectors((1, 1), (-1, 1))
    assert (vx, vy, lam) == (0, 1, F(1, 2))
    (vx, vy), lam = sliding_velocity_from_vectors((ExactScalar(2), ExactScalar(0)), (ExactScalar(-1), ExactScalar(3)))
    assert lam == F(1, 3) and vx == 0 and vy == 2
    with pytest.raises(ValueError):
        sliding_velocity_from_vectors((1, 0), (1, 0))


def test_sliding_vector_on_system_has_zero_normal_part():
    sys = PiecewiseKolmogorovSystem(PolyVectorField(Poly2.const(2) + y, x + y), PolyVectorField(Poly2.const(-1), y * 3))
    (vx, vy), lam = sliding_vector_field(sys, F(1, 2))
    assert vx == 0
    z1h, z2h = F(5, 2), -1
    assert lam == F(-1) / (z2h - z1h)
    assert vy == lam * F(3, 2) + (1 - lam) * F(3, 2)
    with pytest.raises(ValueError):
        sliding_vector_field(PiecewiseKolmogorovSystem(const_field(1, 0), const_field(1, 0)), 0)


def test_no_sliding_set_holds_at_weak_focus_presets():
    for name in ("Tu-eq19", "Ts-eq20", "center-thm32"):
        pre = get_preset(name)
        assert satisfies_no_sliding_set(pre.params1, pre.params2) == []
    bad = get_preset("Tu-eq19").params1.with_(w=0)
    assert satisfies_no_sliding_set(bad, get_preset("Tu-eq19").params2)


# -- continuity ---------------------------------------------------------------------


def test_continuity_identity_on_sigma():
    rng = random.Random(13)
    for _ in range(20):
        p1, p2 = continuous_params(*(rand_q(rng) for _ in range(8)))
        sys = build_continuous_system(p1, p2)
        assert not (sys.Z1.P.restrict_x(1) - sys.Z2.P.restrict_x(1))
        assert not (sys.Z1.Q.restrict_x(1) - sys.Z2.Q.restrict_x(1))


def test_continuity_violation_is_named():
    p1, p2 = continuous_params(1, 2, 3, F(1, 4), F(1, 2), F(1, 3), F(1, 5), 1)
    bad = p1.with_(e=p1.e + F(1, 1000))
    fails = continuity_failures(bad, p2)
    assert any(f.startswith("e1 = e2") for f in fails)
    with pytest.raises(ValueError, match="continuity set violated"):
        build_continuous_system(bad, p2)
    sys = PiecewiseKolmogorovSystem(build_competition(bad), build_facilitation(p2))
    assert not sys.is_continuous


def test_continuous_weak_focus_is_monodromic_in_both_zones():
    for n2 in (F(0), F(1, 100), F(-1, 7)):
        a, b = continuous_weak_focus_params(1, 6, n2, 1, F(1, 10))
        sys = build_continuous_system(a, b)
        for fld in (sys.Z1, sys.Z2):
            assert fld(1, 1) == (0, 0)
            assert fld.trace_det(1, 1) == (F(1, 10), 1)


# -- presets -------------------------------------------------------------------------


def test_presets_known_names():
    for name in ("competition-eq9", "facilitation-eq12", "fig5c", "Tu-eq19", "Ts-eq20", "center-thm32", "continuous-C"):
        assert name in PRESETS
    with pytest.raises(KeyError, match="known"):
        get_preset("nope")


def test_order_three_presets_live_in_sqrt401():
    for name in ("Tu-eq19", "Ts-eq20"):
        pre = get_preset(name)
        assert pre.params1.k == parse_exact("(sqrt(401)-1)/5")
        assert pre.zone1.field_extension == 401
        sys = pre.system()
        assert sys.Z1(1, 1) == (0, 0) and sys.Z2(1, 1) == (0, 0)
