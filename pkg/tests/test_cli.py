import re
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from kolmofocus.cli.main import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main
from kolmofocus.cli.portrait import _Frame, trajectories_for
from kolmofocus.pwfield import get_preset


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write_yaml(path, text):
    path.write_text(text)
    return path


# -- exit codes --------------------------------------------------------------------


def test_unknown_scenario_is_config_error(capsys, tmp_path):
    code, _, err = run(capsys, "lyapunov", "--scenario", "nope", "--out", tmp_path)
    assert code == EXIT_CONFIG and "unknown scenario" in err


@pytest.mark.parametrize("flag", ["--tol-int", "--tol-loc", "--tol-cycle"])
def test_nonpositive_tolerance_is_config_error(capsys, tmp_path, flag):
    code, _, err = run(capsys, "lyapunov", "--scenario", "Tu-eq19", flag, "0", "--out", tmp_path)
    assert code == EXIT_CONFIG and "positive" in err


def test_order_below_two_is_config_error(capsys, tmp_path):
    assert run(capsys, "lyapunov", "--scenario", "Tu-eq19", "--order", "1", "--out", tmp_path)[0] == EXIT_CONFIG


def test_unknown_subcommand_and_missing_scenario(capsys, tmp_path):
    assert run(capsys, "frobnicate")[0] == EXIT_CONFIG
    assert run(capsys, "lyapunov", "--out", tmp_path)[0] == EXIT_CONFIG


def test_unknown_config_key_and_bad_yaml(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: Tu-eq19\nmystery: 1\n")
    code, _, err = run(capsys, "lyapunov", "--config", cfg, "--out", tmp_path)
    assert code == EXIT_CONFIG and "mystery" in err
    cfg = write_yaml(tmp_path / "d.yaml", "scenario: [unclosed\n")
    assert run(capsys, "lyapunov", "--config", cfg, "--out", tmp_path)[0] == EXIT_CONFIG
    assert run(capsys, "lyapunov", "--config", tmp_path / "missing.yaml", "--out", tmp_path)[0] == EXIT_CONFIG


# -- lyapunov ------------------------------------------------------------------------


def _v_lines(out):
    return {m.group(1): m.group(2) for m in re.finditer(r"^V(\d+) = (.*?)  ~", out, re.M)}


def test_lyapunov_tu_prints_exact_v3(capsys, tmp_path):
    code, out, _ = run(capsys, "lyapunov", "--scenario", "Tu-eq19", "--order", "3", "--out", tmp_path)
    assert code == EXIT_OK
    v = _v_lines(out)
    assert v["1"] == "0" and v["2"] == "0"
    # 19(319 sqrt401 - 4119)/288000 = -26087/96000 + 6061/288000 sqrt401
    assert F(19 * 319, 288000) == F(6061, 288000) and F(-19 * 4119, 288000) == F(-26087, 96000)
    assert v["3"] == "(-26087/96000+6061/288000*sqrt(401))*π"
    assert "first nonzero: V3" in out


def test_lyapunov_ts_prints_exact_negative_v3(capsys, tmp_path):
    code, out, _ = run(capsys, "lyapunov", "--scenario", "Ts-eq20", "--order", "3", "--out", tmp_path)
    assert code == EXIT_OK
    assert 501 * 1430890268969 == 716876024753469 and 501 * 55558510831 == 27834813926331
    assert _v_lines(out)["3"] == "(-716876024753469/3225651200000000-27834813926331/3225651200000000*sqrt(401))*π"
    approx = float(re.search(r"^V3 = .*~ (\S+)", out, re.M).group(1))
    assert approx == pytest.approx(-501 * np.pi * (1430890268969 + 55558510831 * np.sqrt(401)) / 3225651200000000, rel=1e-14)


def test_lyapunov_center_vanishes(capsys, tmp_path):
    code, out, _ = run(capsys, "lyapunov", "--scenario", "center-thm32", "--order", "5", "--out", tmp_path)
    assert code == EXIT_OK
    assert set(_v_lines(out).values()) == {"0"} and len(_v_lines(out)) == 5
    assert "all quantities vanish" in out


def test_lyapunov_report_is_deterministic(capsys, tmp_path):
    a = run(capsys, "lyapunov", "--scenario", "Ts-eq20", "--order", "4", "--out", tmp_path)
    b = run(capsys, "lyapunov", "--scenario", "Ts-eq20", "--order", "4", "--out", tmp_path)
    assert a == b


# -- config --------------------------------------------------------------------------


def test_flags_override_config(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: Tu-eq19\norder: 5\n")
    _, out, _ = run(capsys, "lyapunov", "--config", cfg, "--out", tmp_path)
    assert len(_v_lines(out)) == 5
    _, out, _ = run(capsys, "lyapunov", "--config", cfg, "--order", "3", "--out", tmp_path)
    assert len(_v_lines(out)) == 3
    _, out, _ = run(capsys, "lyapunov", "--config", cfg, "--scenario", "center-thm32", "--order", "3", "--out", tmp_path)
    assert out.startswith("center-thm32:")


def test_field_extension_mismatch(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: Tu-eq19\nfield_extension: 5\n")
    code, _, err = run(capsys, "lyapunov", "--config", cfg, "--out", tmp_path)
    assert code == EXIT_CONFIG and "field-extension mismatch" in err
    cfg = write_yaml(tmp_path / "ok.yaml", "scenario: Tu-eq19\nfield_extension: 401\n")
    assert run(capsys, "lyapunov", "--config", cfg, "--order", "3", "--out", tmp_path)[0] == EXIT_OK


def test_inline_system_matches_preset(capsys, tmp_path):
    # facilitation with k = 1, n = 1/2, e = p = h = 1, s = 0, w = -1/2:
    # x' = x/2 - x y + x^2 - x^3/2,  y' = -y + x y
    text = (
        "system:\n  name: mine\n  focus: ['1', '1']\n"
        "  P: [['0'], ['1/2', '-1'], ['1'], ['-1/2']]\n"
        "  Q: [['0', '-1'], ['0', '1']]\n"
    )
    cfg = write_yaml(tmp_path / "c.yaml", text)
    code, inline, _ = run(capsys, "lyapunov", "--config", cfg, "--order", "3", "--out", tmp_path)
    assert code == EXIT_OK and inline.startswith("mine:")
    _, preset, _ = run(capsys, "lyapunov", "--scenario", "facilitation-eq12", "--order", "3", "--out", tmp_path)
    assert _v_lines(inline) == _v_lines(preset)
    assert _v_lines(inline)["3"] != "0"


def test_lyapunov_off_zero_trace_is_computation_failure(capsys, tmp_path):
    code, _, err = run(capsys, "lyapunov", "--scenario", "fig5c", "--out", tmp_path)
    assert code == EXIT_FAIL and "trace" in err


def test_inline_zone_mismatch_in_extension(capsys, tmp_path):
    text = (
        "system:\n  sigma_x: '1'\n"
        "  Z1: {P: [['0'], ['1', 'sqrt(2)']], Q: [['0', '1']]}\n"
        "  Z2: {P: [['0'], ['1', 'sqrt(3)']], Q: [['0', '1']]}\n"
    )
    cfg = write_yaml(tmp_path / "c.yaml", text)
    code, _, err = run(capsys, "lyapunov", "--config", cfg, "--out", tmp_path)
    assert code == EXIT_CONFIG and "mismatch" in err


# -- cycles --------------------------------------------------------------------------


def test_cycles_center_finds_none(capsys, tmp_path):
    code, out, _ = run(capsys, "cycles", "--scenario", "center-thm32", "--out", tmp_path)
    assert code == EXIT_OK and out.strip().endswith("0 crossing limit cycles found")
    assert (tmp_path / "cycles-center-thm32.csv").read_text() == "u_star,period,residual,stability,amplitude\n"


def test_cycles_unfold_three_and_byte_identical_csv(capsys, tmp_path):
    outs = []
    for sub in ("a", "b"):
        code, out, _ = run(capsys, "cycles", "--scenario", "Tu-eq19", "--unfold", "3", "--out", tmp_path / sub)
        assert code == EXIT_OK
        assert out.strip().endswith("3 crossing limit cycles found")
        outs.append(out)
    a = (tmp_path / "a" / "cycles-Tu-eq19.csv").read_bytes()
    assert a == (tmp_path / "b" / "cycles-Tu-eq19.csv").read_bytes()
    assert outs[0] == outs[1]
    rows = a.decode().strip().splitlines()
    assert len(rows) == 4
    assert [r.split(",")[3] for r in rows[1:]] == ["unstable", "stable", "unstable"]


def test_cycles_ts_unfold_two(capsys, tmp_path):
    code, out, _ = run(capsys, "cycles", "--scenario", "Ts-eq20", "--unfold", "2", "--out", tmp_path)
    assert code == EXIT_OK and out.strip().endswith("2 crossing limit cycles found")


def test_unfold_needs_two_zone_preset(capsys, tmp_path):
    assert run(capsys, "cycles", "--scenario", "fig5c", "--unfold", "1", "--out", tmp_path)[0] == EXIT_CONFIG


def test_stage_failure_is_computation_failure(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: Tu-eq19\nexperiment:\n  eps: [1.0e-12, 1.0e-4, 1.0e-6]\n  unfold: 1\n")
    code, _, err = run(capsys, "cycles", "--config", cfg, "--out", tmp_path)
    assert code == EXIT_FAIL and "stage 1" in err


# -- portrait ------------------------------------------------------------------------


def test_portrait_fig3a_has_stable_node(capsys, tmp_path):
    code, out, _ = run(capsys, "portrait", "--scenario", "fig3a", "--out", tmp_path)
    assert code == EXIT_OK
    svg = (tmp_path / "portrait-fig3a.svg").read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'xlink:href' not in svg and "<image" not in svg
    # coexistence equilibrium from the linear system k(1 - n x) - e y = w, e p x - s y = h
    k, n, e, p, s, w, h = 1, 1, F(1, 5), F(4, 5), F(1, 20), F(1, 20), F(1, 20)
    det = (-k * n) * (-s) - (-e) * (e * p)
    x = ((w - k) * (-s) - (-e) * h) / det
    y = ((-k * n) * h - (e * p) * (w - k)) / det
    m = re.search(r"<title>stable node at \(([^,]+), ([^)]+)\)</title>", svg)
    assert m is not None
    assert float(m.group(1)) == pytest.approx(float(x), abs=1e-5)
    assert float(m.group(2)) == pytest.approx(float(y), abs=1e-4)
    assert '<g id="orbits">' in svg and '<g id="nullclines"' in svg


def _fig5c_cycle_oracle():
    k, n, e, w, h = 92 / 225, 100 / 207, 266 / 2025, 2 / 25, 266 / 2025

    def f(t, z):
        x, y = z
        return [x * (k * x * (1 - n * x) - e * y - w), y * (e * x - h)]

    def sec(t, z):
        return z[0] - 1

    sec.direction = -1

    def ret(y0):
        r = solve_ivp(f, (0, 500), [1.0, y0], rtol=1e-11, atol=1e-13, events=sec, dense_output=True)
        t = [t for t in r.t_events[0] if t > 1e-6][0]
        return r.sol(t)[1]

    return brentq(lambda y: ret(y) - y, 1.1, 1.5, xtol=1e-12)


def _downward_crossings(tr, x0=1.0):
    ys = []
    for i in range(1, len(tr)):
        if tr.x[i - 1] > x0 >= tr.x[i] and tr.y[i] > 1:
            lam = (tr.x[i - 1] - x0) / (tr.x[i - 1] - tr.x[i])
            ys.append(tr.y[i - 1] + lam * (tr.y[i] - tr.y[i - 1]))
    return ys


def test_fig5c_orbits_close_up_around_unstable_focus(capsys, tmp_path):
    y_star = _fig5c_cycle_oracle()
    sys = get_preset("fig5c").system()
    inner, outer = trajectories_for(sys, [(1.0, 1.2), (1.0, 1.4)], 400.0, _Frame(0.0, 2.5, 0.0, 2.5))
    a, b = _downward_crossings(inner), _downward_crossings(outer)
    assert len(a) > 5 and len(b) > 5
    # approached from both sides; chords between samples limit accuracy to ~1e-3
    assert a[0] < y_star - 0.02 and b[0] > y_star + 0.01
    assert abs(a[-1] - y_star) < 3e-3 and abs(b[-1] - y_star) < 3e-3
    code, _, _ = run(capsys, "portrait", "--scenario", "fig5c", "--out", tmp_path)
    assert code == EXIT_OK
    svg = (tmp_path / "portrait-fig5c.svg").read_text()
    assert re.search(r"<title>unstable focus at \(1, 1\)</title>", svg)


def test_portrait_is_deterministic_up_to_banner(capsys, tmp_path):
    for sub in ("a", "b"):
        assert run(capsys, "portrait", "--scenario", "Tu-eq19", "--out", tmp_path / sub)[0] == EXIT_OK

    def body(sub):
        return [ln for ln in (tmp_path / sub / "portrait-Tu-eq19.svg").read_text().splitlines() if "kolmofocus " not in ln]

    assert body("a") == body("b")


def test_portrait_empty_seed_list_fails_without_writing(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: fig3a\nseeds: []\n")
    out = tmp_path / "out"
    code, _, err = run(capsys, "portrait", "--config", cfg, "--out", out)
    assert code == EXIT_FAIL and "no trajectories" in err
    assert not (out / "portrait-fig3a.svg").exists()


def _sliding_strokes(svg):
    return re.findall(r'<polyline [^>]*stroke="(#27ae60|#8e44ad)" stroke-width="4.0"', svg)


def test_portrait_weak_focus_draws_no_sliding_segment(capsys, tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", "scenario: Tu-eq19\nbbox: [0.5, 1.5, 0.5, 1.5]\n")
    assert run(capsys, "portrait", "--config", cfg, "--out", tmp_path)[0] == EXIT_OK
    svg = (tmp_path / "portrait-Tu-eq19.svg").read_text()
    assert '<g id="sigma">' in svg and _sliding_strokes(svg) == []


def test_portrait_highlights_sliding_segment(capsys, tmp_path):
    # x' = 1 on the left, x' = -1 on the right: Σ is attracting everywhere
    text = (
        "system:\n  name: slide\n  sigma_x: '1'\n"
        "  Z1: {P: [['1']], Q: [['1']]}\n"
        "  Z2: {P: [['-1']], Q: [['1']]}\n"
        "bbox: [0, 2, 0, 2]\nseeds: [[0.5, 0.5]]\nduration: 1.0\n"
    )
    cfg = write_yaml(tmp_path / "c.yaml", text)
    assert run(capsys, "portrait", "--config", cfg, "--out", tmp_path)[0] == EXIT_OK
    assert _sliding_strokes((tmp_path / "portrait-slide.svg").read_text()) == ["#27ae60"]


# -- verify --------------------------------------------------------------------------


def test_verify_center_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--scenario", "center-thm32", "--out", tmp_path)
    assert code == EXIT_OK
    assert "sigma-center certificate: PASS" in out and "FAIL" not in out


def test_verify_continuous_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--scenario", "continuous-C", "--out", tmp_path)
    assert code == EXIT_OK
    assert "continuity identity Z1(1, y) = Z2(1, y): PASS" in out


def test_verify_competition_center(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--scenario", "competition-eq9", "--out", tmp_path)
    assert code == EXIT_OK and "competition Darboux certificate: PASS" in out


@pytest.mark.parametrize("part", ["A", "B", "C", "D", "E"])
def test_verify_corrupted_certificate_fails_with_residual(capsys, tmp_path, part):
    cfg = write_yaml(tmp_path / "c.yaml", f"scenario: center-thm32\ncorrupt:\n  field: {part}\n  by: 1/1000\n")
    code, out, _ = run(capsys, "verify", "--config", cfg, "--out", tmp_path)
    assert code == EXIT_FAIL
    assert "zone 1 Darboux certificate: FAIL" in out and "sigma-center certificate: FAIL" in out
    assert re.search(r"identity residual: .*[xy]", out)


# -- simulate ------------------------------------------------------------------------


def test_simulate_writes_trajectory_csv(capsys, tmp_path):
    args = ("simulate", "--scenario", "Tu-eq19", "--duration", "15", "--start", "1,1.05")
    code, out, _ = run(capsys, *args, "--out", tmp_path / "a")
    assert code == EXIT_OK
    text = (tmp_path / "a" / "trajectory-Tu-eq19.csv").read_text()
    rows = text.strip().splitlines()
    assert rows[0] == "t,x,y,zone"
    assert {r.split(",")[3] for r in rows[1:]} == {"Z1", "Z2"}
    assert re.search(r"crossing: \d+", out)
    run(capsys, *args, "--out", tmp_path / "b")
    assert (tmp_path / "b" / "trajectory-Tu-eq19.csv").read_text() == text


def test_simulate_bad_start_is_config_error(capsys, tmp_path):
    assert run(capsys, "simulate", "--scenario", "Tu-eq19", "--start", "1", "--out", tmp_path)[0] == EXIT_CONFIG
