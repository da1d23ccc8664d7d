"""``kolmofocus`` command line: lyapunov, cycles, portrait, verify, simulate."""

from __future__ import annotations

import argparse
import sys as _sys
from dataclasses import replace
from pathlib import Path
from typing import Callable

from ..algebra import ExactScalar, parse_exact
from ..flow import (
    IntegrationError,
    StageFailure,
    cycles_csv,
    default_u_grid,
    family_for,
    find_crossing_cycles,
    integrate,
    staged_unfolding,
    trajectory_csv,
    verify_no_sliding_near,
)
from ..lyapunov import (
    DarbouxCertificate,
    NormalizationError,
    SigmaCenterCertificate,
    competition_certificate,
    darboux_residuals,
    facilitation_certificate,
    hat_v2,
    hat_v3,
    piecewise_center_certificate,
    piecewise_lyapunov,
    sigma_restriction_mismatches,
    smooth_lyapunov,
)
from ..pwfield import PiecewiseKolmogorovSystem, continuity_failures
from .config import ConfigError, RunConfig, config_from, load_config_file, resolve_system
from .portrait import PortraitError, _Frame, default_bbox, default_seeds, render_portrait, trajectories_for

EXIT_OK, EXIT_CONFIG, EXIT_FAIL = 0, 2, 3


class ComputationFailure(RuntimeError):
    """Maps to exit code 3."""


def _out_dir(cfg: RunConfig) -> Path:
    p = Path(cfg.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


# -- lyapunov --------------------------------------------------------------------


def cmd_lyapunov(cfg: RunConfig, emit: Callable[[str], None] = print) -> list:
    rs = resolve_system(cfg)
    try:
        if isinstance(rs.system, PiecewiseKolmogorovSystem):
            exp = piecewise_lyapunov(rs.system, K=cfg.order, point=rs.focus)
        else:
            exp = smooth_lyapunov(rs.system, rs.focus or (1, 1), K=cfg.order)
    except NormalizationError as exc:
        raise ComputationFailure(str(exc)) from None
    emit(f"{rs.name}: {exp.kind} Lyapunov quantities at {_pt(rs.focus)}, order {cfg.order}")
    for k, v in enumerate(exp.V, start=1):
        emit(f"V{k} = {v}  ~ {float(v):.17g}")
    first = exp.first_nonzero
    emit("all quantities vanish to this order" if first is None else f"first nonzero: V{first}")
    return list(exp.V)


def _pt(p) -> str:
    return "(1, 1)" if p is None else f"({p[0]}, {p[1]})"


# -- cycles ----------------------------------------------------------------------


def cmd_cycles(cfg: RunConfig, emit: Callable[[str], None] = print) -> list:
    rs = resolve_system(cfg)
    opts = cfg.flow_options
    fy = float(rs.focus[1]) if rs.focus is not None else 1.0
    if cfg.unfold:
        if rs.preset is None or not rs.preset.is_piecewise:
            raise ConfigError("--unfold needs a two-zone scenario preset")
        try:
            res = staged_unfolding(
                family_for(rs.preset), cfg.unfold, cfg.eps, opts=opts, grid_n=cfg.grid_n, r_range=cfg.r_range
            )
        except StageFailure as exc:
            raise ComputationFailure(str(exc)) from None
        for st in res.stages:
            emit(f"stage {st.stage}: {st.note} (magnitudes tried: {', '.join(f'{m:.0e}' for m in st.tried)}) -> {len(st.cycles)} cycles")
        cycles = res.cycles
    else:
        grid = default_u_grid(fy, cfg.r_range[0], cfg.r_range[1], cfg.grid_n)
        cycles = find_crossing_cycles(rs.system, grid=grid, opts=opts, focus=(float(rs.focus[0]) if rs.focus else 1.0, fy))
    text = cycles_csv(cycles)
    (_out_dir(cfg) / f"cycles-{rs.name}.csv").write_text(text)
    for c in cycles:
        emit(f"  u* = {c.u_star:.15g}  amplitude = {c.amplitude:.6g}  {c.stability}  residual = {c.residual:.2e}")
    emit(f"{len(cycles)} crossing limit cycles found")
    return cycles


# -- portrait --------------------------------------------------------------------


def cmd_portrait(cfg: RunConfig, emit: Callable[[str], None] = print, seeds=None) -> Path:
    rs = resolve_system(cfg)
    bbox = cfg.bbox or default_bbox(rs.system)
    frame = _Frame(*bbox)
    if seeds is None:
        seeds = list(cfg.seeds) if cfg.seeds is not None else default_seeds(rs.system, frame, rs.focus)
    trajs = trajectories_for(rs.system, seeds, cfg.duration, frame)
    svg = render_portrait(rs.system, trajs, bbox, title=rs.name)
    path = _out_dir(cfg) / f"portrait-{rs.name}.svg"
    path.write_text(svg)
    emit(f"wrote {path} ({len(trajs)} orbits)")
    return path


# -- verify ----------------------------------------------------------------------


def _corrupted(cert: DarbouxCertificate, spec: dict | None) -> DarbouxCertificate:
    if not spec:
        return cert
    part = str(spec.get("field", "B"))
    by = parse_exact(str(spec.get("by", "1/1000")))
    if part == "A":
        mono = tuple(spec.get("monomial", (0, 0)))
        from ..algebra import Poly2

        return DarbouxCertificate(cert.A + Poly2({mono: by}), cert.B, cert.C, cert.D, cert.E)
    if part not in "BCDE":
        raise ConfigError(f"corrupt.field must be one of A, B, C, D, E (got {part})")
    vals = {k: getattr(cert, k) for k in "BCDE"}
    vals[part] = vals[part] + by
    return DarbouxCertificate(cert.A, **vals)


def _check_darboux(label, fld, cert, emit) -> bool:
    log_res, div_res = darboux_residuals(fld, cert)
    ok = not log_res and not div_res
    emit(f"{label}: {'PASS' if ok else 'FAIL'}")
    if log_res:
        emit(f"  flow identity residual: {log_res}")
    if div_res:
        emit(f"  divergence identity residual: {div_res}")
    return ok


def cmd_verify(cfg: RunConfig, emit: Callable[[str], None] = print) -> bool:
    rs = resolve_system(cfg)
    sys, p = rs.system, rs.preset
    results = []
    if p is None:
        raise ConfigError("verify needs a scenario preset (certificates are attached to the scenario families)")
    zero = ExactScalar(0)
    if not p.is_piecewise:
        a = p.params1
        if p.shape1 == "competition":
            cert = _corrupted(competition_certificate(a.k, a.n, a.e), cfg.corrupt)
            results.append(_check_darboux("competition Darboux certificate", sys, cert, emit))
        else:
            hv3 = hat_v3(a.k, a.n, a.e)
            if hv3 != zero:
                emit(f"facilitation center certificate: not applicable (HatV3 = {hv3} != 0, weak focus)")
            else:
                cert = _corrupted(facilitation_certificate(a.k, a.n), cfg.corrupt)
                results.append(_check_darboux("facilitation Darboux certificate", sys, cert, emit))
    else:
        a, b = p.params1, p.params2
        if p.name == "continuous-C":
            failed = continuity_failures(a, b)
            diffP = sys.Z1.P.restrict_x(1) - sys.Z2.P.restrict_x(1)
            diffQ = sys.Z1.Q.restrict_x(1) - sys.Z2.Q.restrict_x(1)
            ok = not failed and not diffP and not diffQ
            emit(f"continuity identity Z1(1, y) = Z2(1, y): {'PASS' if ok else 'FAIL'}")
            for f in failed:
                emit(f"  failed: {f}")
            if diffP or diffQ:
                emit(f"  P difference on x = 1: {diffP}; Q difference: {diffQ}")
            results.append(ok)
        hv2, hv3 = hat_v2(a.k, a.n, a.e, b.k, b.n, b.e), hat_v3(b.k, b.n, b.e)
        if hv2 == zero and hv3 == zero:
            cert = piecewise_center_certificate(a.k, a.n, b.k, b.n)
            cert = SigmaCenterCertificate(
                _corrupted(cert.zone1, cfg.corrupt), cert.zone2, cert.gamma1, cert.gamma2, cert.hhat_poly, cert.hhat_exp
            )
            ok1 = _check_darboux("zone 1 Darboux certificate", sys.Z1, cert.zone1, emit)
            ok2 = _check_darboux("zone 2 Darboux certificate", sys.Z2, cert.zone2, emit)
            mism = sigma_restriction_mismatches(sys, cert)
            for m in mism:
                emit(f"  Σ restriction: {m}")
            ok = ok1 and ok2 and not mism
            emit(f"sigma-center certificate: {'PASS' if ok else 'FAIL'}")
            results.append(ok)
        elif p.name != "continuous-C":
            emit(f"sigma-center certificate: not applicable (HatV2 = {hv2}, HatV3 = {hv3})")
        ok = verify_no_sliding_near(sys, (1, 1), 0.1)
        emit(f"no sliding or escaping segment near (1, 1): {'PASS' if ok else 'FAIL'}")
        results.append(ok)
    return all(results)


# -- simulate --------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig, emit: Callable[[str], None] = print):
    rs = resolve_system(cfg)
    start = cfg.start
    if start is None:
        fy = float(rs.focus[1]) if rs.focus else 1.0
        fx = float(rs.focus[0]) if rs.focus else 1.0
        start = (fx, fy + 0.05)
    try:
        traj = integrate(rs.system, start, cfg.duration, replace(cfg.flow_options, max_step=0.05), box=cfg.bbox)
    except IntegrationError as exc:
        raise ComputationFailure(str(exc)) from None
    path = _out_dir(cfg) / f"trajectory-{rs.name}.csv"
    path.write_text(trajectory_csv(traj))
    emit(f"wrote {path}: {len(traj)} samples, {len(traj.events)} Σ events")
    kinds: dict[str, int] = {}
    for e in traj.events:
        kinds[e.kind] = kinds.get(e.kind, 0) + 1
    for k in sorted(kinds):
        emit(f"  {k}: {kinds[k]}")
    if traj.left_first_quadrant:
        emit("warning: the orbit left the closed first quadrant")
    return traj


# -- entry point -----------------------------------------------------------------

COMMANDS = {
    "lyapunov": cmd_lyapunov,
    "cycles": cmd_cycles,
    "portrait": cmd_portrait,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kolmofocus", description="Weak foci and crossing limit cycles of piecewise Kolmogorov systems.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--scenario")
        sp.add_argument("--config")
        sp.add_argument("--order", type=int)
        sp.add_argument("--tol-int", dest="int_tol", type=float)
        sp.add_argument("--tol-loc", dest="loc_tol", type=float)
        sp.add_argument("--tol-cycle", dest="cycle_tol", type=float)
        sp.add_argument("--unfold", type=int)
        sp.add_argument("--eps1", type=float)
        sp.add_argument("--eps2", type=float)
        sp.add_argument("--eps3", type=float)
        sp.add_argument("--out")
        sp.add_argument("--bbox", help="x0,x1,y0,y1")
        if name in ("simulate", "portrait"):
            sp.add_argument("--duration", type=float)
        if name == "simulate":
            sp.add_argument("--start", help="x,y")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    ov = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        data = load_config_file(args.config) if args.config else {}
        cfg = config_from(data, ov)
        result = COMMANDS[args.command](cfg)
    except (ConfigError, KeyError) as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return EXIT_CONFIG
    except (ComputationFailure, PortraitError, IntegrationError) as exc:
        print(f"computation failed: {exc}", file=_sys.stderr)
        return EXIT_FAIL
    if args.command == "verify" and not result:
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
