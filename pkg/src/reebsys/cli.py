"""Command-line front end.

Subcommands mirror the library: toric-analyze, systole,
verify-action-linking, equidistribute, diskmap-calabi, diskmap-dictionary,
linking.  Each reads a JSON input file, writes a schema-validated JSON
report (plus CSV dumps) into the output directory, and prints a one-line
summary.  Exit codes: 0 success, 2 validation error, 3 numerical error,
4 statistical inconsistency.  Diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import diskmap as dm
from . import flows as fl
from . import reports as rp
from . import systolic as sy
from . import topology as tp
from .errors import (NumericalError, ReebsysError, StatisticalError,
                     ValidationError)
from .profiles import profile_from_json

COMMANDS = ("toric-analyze", "systole", "verify-action-linking",
            "equidistribute", "diskmap-calabi", "diskmap-dictionary",
            "linking")

THREADS_ENV = "REEBSYS_THREADS"


@dataclass
class RunConfig:
    command: str
    input: str
    output: str
    seed: int = 0
    samples: int = 100000
    horizon: float = 1000.0
    epsilon: float = 0.1
    grid: int = 4096
    max_pq: int = 12
    n_tori: int = 64
    quiet: bool = False
    surface: str = "y"
    orientation: int = 1
    z_threshold: float = 4.0
    return_tol: float = 0.1
    suspension_c: float | None = None
    k_max: int = 3
    plot_grid: int = 128
    dump_samples: bool = False
    export_curves: bool = False
    threads: int = 1


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 1:
        raise ValidationError(f"{THREADS_ENV} must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reebsys",
        description="systolic invariants and flow statistics of toric "
                    "domain boundaries and disk-map suspensions")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", required=True, help="input JSON path")
        p.add_argument("--output", required=True, help="output directory")
        p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        p.add_argument("--samples", type=int, default=100000)
        p.add_argument("--horizon", type=float, default=1000.0)
        p.add_argument("--epsilon", type=float, default=0.1)
        p.add_argument("--grid", type=int, default=None,
                       help="grid/quadrature resolution (command-specific default)")
        p.add_argument("--max-pq", type=int, default=12)
        p.add_argument("--n-tori", type=int, default=64)
        p.add_argument("--quiet", action="store_true")
        p.add_argument("--surface", choices=("y", "x"), default="y",
                       help="axis disk: bounded by the orbit over the y or x intercept")
        p.add_argument("--orientation", type=int, choices=(1, -1), default=1)
        p.add_argument("--z-threshold", type=float, default=4.0)
        p.add_argument("--return-tol", type=float, default=0.1)
        p.add_argument("--suspension-c", type=float, default=None)
        p.add_argument("--k-max", type=int, default=3)
        p.add_argument("--plot-grid", type=int, default=128)
        p.add_argument("--dump-samples", action="store_true")
        p.add_argument("--export-curves", action="store_true")
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default from ${THREADS_ENV})")
    return parser


def config_from_args(args) -> RunConfig:
    grid_default = {"toric-analyze": 4096, "systole": 4096,
                    "verify-action-linking": 4096, "equidistribute": 4096,
                    "diskmap-calabi": 64, "diskmap-dictionary": 64,
                    "linking": 2048}[args.command]
    return RunConfig(
        command=args.command, input=args.input, output=args.output,
        seed=args.seed, samples=args.samples, horizon=args.horizon,
        epsilon=args.epsilon,
        grid=args.grid if args.grid is not None else grid_default,
        max_pq=args.max_pq, n_tori=args.n_tori, quiet=args.quiet,
        surface=args.surface, orientation=args.orientation,
        z_threshold=args.z_threshold, return_tol=args.return_tol,
        suspension_c=args.suspension_c, k_max=args.k_max,
        plot_grid=args.plot_grid, dump_samples=args.dump_samples,
        export_curves=args.export_curves,
        threads=args.threads if args.threads is not None else default_threads())


def load_input(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc


def meta(config: RunConfig) -> dict:
    return {"report_version": rp.REPORT_VERSION, "command": config.command,
            "seed": int(config.seed), "rng": fl.RNG_NAME}


def _torus_dict(t: sy.RationalTorus) -> dict:
    return {"p": t.p, "q": t.q, "t": t.t, "period": t.period,
            "continuum": t.continuum}


# ---------------------------------------------------------------------------
# command handlers


def run_toric_analyze(config: RunConfig):
    profile = profile_from_json(load_input(config.input))
    ic = profile.intercepts()
    rng = fl.rng_for_seed(config.seed)
    ts = rng.uniform(0.0, profile.two_area, 500)
    x, y, d1, d2 = profile.boundary_arrays(ts)
    euler = float(np.max(np.abs(x * d1 + y * d2 - 1.0)))

    h = 1e-5
    t_in = rng.uniform(0.05 * profile.two_area, 0.95 * profile.two_area, 100)
    xp, yp, _, _ = profile.boundary_arrays(t_in + h)
    xm, ym, _, _ = profile.boundary_arrays(t_in - h)
    x0, y0, d10, d20 = profile.boundary_arrays(t_in)
    xdot = (xp - xm) / (2 * h)
    ydot = (yp - ym) / (2 * h)
    hamilton = float(np.max(np.abs(xdot + d20) + np.abs(ydot - d10)))
    area_rate = float(np.max(np.abs(x0 * ydot - y0 * xdot - 1.0)))
    consistency = abs(ic.a * ic.d1_at_a - 1.0) + abs(ic.b * ic.d2_at_b - 1.0)

    report = {**meta(config), "profile": profile.to_json(),
              "a": ic.a, "b": ic.b,
              "area": profile.quadrant_area(),
              "volume": sy.contact_volume(profile),
              "checks": {"euler_max_residual": euler,
                         "hamilton_max_residual": hamilton,
                         "area_rate_max_residual": area_rate,
                         "intercept_consistency": float(consistency)},
              "tori": [_torus_dict(t)
                       for t in sy.enumerate_tori(profile, config.max_pq)]}
    ts_plot = np.linspace(0.0, profile.two_area, config.plot_grid)
    bx, by, bd1, bd2 = profile.boundary_arrays(ts_plot)
    files = {"boundary.csv": ("boundary", list(zip(ts_plot, bx, by, bd1, bd2)))}
    summary = f"a={ic.a:.6g} b={ic.b:.6g} area={report['area']:.6g}"
    return report, files, summary


def run_systole(config: RunConfig):
    profile = profile_from_json(load_input(config.input))
    rep = sy.systolic_interval(profile, grid_n=config.grid,
                               max_pq_witness=config.max_pq)
    witnesses = []
    for w in rep.witnesses:
        witnesses.append({"extremum": w.extremum, "slot": w.slot, "t": w.t,
                          "value": w.value,
                          "p": w.torus.p if w.torus else None,
                          "q": w.torus.q if w.torus else None,
                          "period": w.torus.period if w.torus else None})
    report = {**meta(config), "profile": profile.to_json(),
              "volume": rep.volume,
              "interval": list(rep.interval),
              "enlarged_interval": list(rep.enlarged_interval),
              "norm": rep.norm, "contains_one": rep.contains_one,
              "grid_n": rep.grid_n, "witnesses": witnesses,
              "tori": [_torus_dict(t) for t in rep.tori],
              "pairing_values": rep.pairing_values or None}
    files = {"plots": ("systole-plots", profile)}
    summary = (f"interval=[{rep.interval[0]:.9g}, {rep.interval[1]:.9g}] "
               f"norm={rep.norm:.3g} contains_one={rep.contains_one}")
    return report, files, summary


def run_verify_action_linking(config: RunConfig):
    profile = profile_from_json(load_input(config.input))
    surface = tp.axis_disk(profile, config.surface, orientation=config.orientation)
    rep = tp.action_linking_verify(profile, surface, config.samples,
                                   config.horizon, config.seed,
                                   return_tol=config.return_tol,
                                   threads=config.threads)
    report = {**meta(config), "profile": profile.to_json(),
              "surface": {"kind": surface.kind, "axis": config.surface,
                          "angle": surface.angle,
                          "orientation": surface.orientation},
              "lhs": rep.lhs, "rhs": rep.rhs, "stderr": rep.stderr,
              "z": rep.z, "n_samples": rep.n_samples, "horizon": rep.horizon,
              "n_fallback": rep.n_fallback, "return_tol": config.return_tol,
              "z_threshold": config.z_threshold}
    files = {}
    if config.dump_samples:
        files["samples.csv"] = ("samples", profile)
    summary = (f"lhs={rep.lhs:.9g} rhs={rep.rhs:.9g} z={rep.z:.3g} "
               f"fallback={rep.n_fallback}")
    return report, files, summary, rep


def run_equidistribute(config: RunConfig):
    profile = profile_from_json(load_input(config.input))
    oset = fl.approximate_liouville_by_orbits(profile, config.n_tori,
                                              config.max_pq)
    orbits = [{**_torus_dict(t), "weight": w}
              for t, w in zip(oset.orbits, oset.weights)]
    report = {**meta(config), "profile": profile.to_json(),
              "n_tori": config.n_tori, "max_pq": config.max_pq,
              "discrepancy": oset.discrepancy, "orbits": orbits,
              "per_function": [{"name": n, "weighted_average": v, "target": m}
                               for n, v, m in oset.per_function]}
    summary = f"n_tori={config.n_tori} discrepancy={oset.discrepancy:.6g}"
    return report, {}, summary


def run_diskmap_calabi(config: RunConfig):
    H = dm.hamiltonian_from_json(load_input(config.input))
    cal = dm.calabi(H, config.grid)
    residual = dm.calabi_eta_residual(H, max(16, config.grid // 2))
    report = {**meta(config), "hamiltonian": H.to_json(), "calabi": cal,
              "eta_shift_residual": residual, "quad_n": config.grid,
              "boundary_flags": H.boundary_flags()}
    files = {"action_spectrum.csv": ("action-spectrum", H)}
    return report, files, f"calabi={cal:.12g}"


def run_diskmap_dictionary(config: RunConfig):
    H = dm.hamiltonian_from_json(load_input(config.input))
    rep = dm.suspension_dictionary(H, c=config.suspension_c,
                                   k_max=config.k_max,
                                   epsilon=config.epsilon,
                                   quad_n=config.grid)
    chk = dm.mean_action_theorem_check(H, config.epsilon,
                                       k_max=max(config.k_max, 4),
                                       quad_n=config.grid)

    def point_dict(P):
        if P is None:
            return None
        return {"z": list(P.z), "k": P.k, "action_k": P.action_k,
                "mean_action": P.mean_action, "s": P.s,
                "resonance": P.resonance}

    rows = [{"z": list(r.z), "k": r.k, "action_k": r.action_k,
             "mean_action": r.mean_action, "period": r.period,
             "period_residual": r.period_residual,
             "page_crossings": r.page_crossings, "pairing": r.pairing,
             "pairing_ge": r.pairing_ge, "mean_action_le": r.mean_action_le,
             "equivalence_ok": r.equivalence_ok} for r in rep.rows]
    report = {**meta(config), "hamiltonian": H.to_json(), "c": rep.c,
              "epsilon": rep.epsilon, "calabi": rep.calabi,
              "volume": rep.volume,
              "volume_quadrature": rep.volume_quadrature,
              "volume_residual": rep.volume_residual,
              "page_area": rep.page_area, "rows": rows,
              "boundary_flags": rep.boundary_flags,
              "mean_action_check": {
                  "found_low": chk.found_low, "found_high": chk.found_high,
                  "witness_low": point_dict(chk.witness_low),
                  "witness_high": point_dict(chk.witness_high),
                  "boundary_rotation": chk.boundary_rotation,
                  "hypothesis_cal_lt_half_rotation":
                      chk.hypothesis_cal_lt_half_rotation}}
    files = {"action_spectrum.csv": ("action-spectrum", H)}
    summary = (f"c={rep.c:.6g} calabi={rep.calabi:.9g} "
               f"points={len(rows)} vol_resid={rep.volume_residual:.2e}")
    return report, files, summary


def _curve_from_spec(spec, label: str):
    if not isinstance(spec, dict):
        raise ValidationError(f"{label}: curve spec must be an object")
    keys = set(spec)
    if keys == {"csv"}:
        pts = rp.read_curve_csv(spec["csv"])
        return tp.ClosedCurve.from_points(pts), {"csv": spec["csv"],
                                                 "points": int(len(pts))}
    if keys == {"orbit"}:
        o = dict(spec["orbit"])
        unknown = set(o) - {"profile", "p", "q", "samples", "index", "phase2"}
        if unknown:
            raise ValidationError(f"{label}: unknown orbit keys {sorted(unknown)}")
        profile = profile_from_json(o["profile"])
        p, q = int(o["p"]), int(o["q"])
        if p < 1 or q < 1 or math.gcd(p, q) != 1:
            raise ValidationError(f"{label}: (p, q) must be coprime positives")
        matches = [t for t in sy.enumerate_tori(profile, max(p, q))
                   if (t.p, t.q) == (p, q)]
        if not matches:
            raise ValidationError(f"{label}: profile has no ({p}, {q}) torus")
        index = int(o.get("index", 0))
        if not 0 <= index < len(matches):
            raise ValidationError(f"{label}: torus index {index} out of range "
                                  f"({len(matches)} roots)")
        torus = matches[index]
        n = int(o.get("samples", 1024))
        curve = tp.toric_orbit_curve(profile, torus, n,
                                     phase2=float(o.get("phase2", 0.0)))
        return curve, {"p": p, "q": q, "t": torus.t, "period": torus.period,
                       "samples": n}
    if keys == {"axis_orbit"}:
        o = dict(spec["axis_orbit"])
        unknown = set(o) - {"profile", "axis", "samples"}
        if unknown:
            raise ValidationError(f"{label}: unknown axis-orbit keys {sorted(unknown)}")
        profile = profile_from_json(o["profile"])
        orbit = sy.axis_orbit(profile, o.get("axis", "y"))
        n = int(o.get("samples", 256))
        curve = tp.toric_orbit_curve(profile, orbit, n)
        return curve, {"axis": orbit.axis, "period": orbit.period, "samples": n}
    raise ValidationError(
        f"{label}: curve spec must have exactly one of 'csv', 'orbit', "
        f"'axis_orbit'; got {sorted(keys)}")


def run_linking(config: RunConfig):
    doc = load_input(config.input)
    if not isinstance(doc, dict) or set(doc) != {"curves"}:
        raise ValidationError("linking input must be {'curves': [spec, spec]}")
    specs = doc["curves"]
    if not (isinstance(specs, list) and len(specs) == 2):
        raise ValidationError("linking needs exactly two curve specs")
    c1, desc1 = _curve_from_spec(specs[0], "curves[0]")
    c2, desc2 = _curve_from_spec(specs[1], "curves[1]")
    res = tp.linking_number(c1, c2)
    report = {**meta(config), "link": res.link, "residual": res.residual,
              "raw": res.raw, "pole_index": res.pole_index,
              "subdivisions": res.subdivisions, "curves": [desc1, desc2]}
    files = {}
    if config.export_curves:
        files["curves"] = ("curves", (c1, c2))
    return report, files, f"link={res.link} residual={res.residual:.3g}"


# ---------------------------------------------------------------------------
# dispatch


def run(config: RunConfig) -> int:
    os.makedirs(config.output, exist_ok=True)
    handlers = {
        "toric-analyze": run_toric_analyze,
        "systole": run_systole,
        "verify-action-linking": run_verify_action_linking,
        "equidistribute": run_equidistribute,
        "diskmap-calabi": run_diskmap_calabi,
        "diskmap-dictionary": run_diskmap_dictionary,
        "linking": run_linking,
    }
    out = handlers[config.command](config)
    report, files, summary = out[0], out[1], out[2]
    rp.validate_report(config.command, report)
    report_path = os.path.join(config.output, f"{config.command}.json")
    rp.write_report(report_path, report)

    for name, payload in files.items():
        kind = payload[0]
        if kind == "boundary":
            rp.write_csv(os.path.join(config.output, "boundary.csv"),
                         ("t", "x", "y", "d1", "d2"), payload[1])
        elif kind == "systole-plots":
            profile = payload[1]
            rp.emit_plot_data(config.output, "systolic-grid",
                             (profile, config.plot_grid), config.quiet)
            rp.emit_plot_data(config.output, "pairing-profile",
                             (profile, config.plot_grid), config.quiet)
        elif kind == "samples":
            samples = fl.liouville_sample(payload[1], config.samples, config.seed)
            rp.write_samples_csv(os.path.join(config.output, "samples.csv"),
                                 samples)
        elif kind == "action-spectrum":
            H = payload[1]
            pts = dm.periodic_points(H, max(config.k_max, 1))
            rp.emit_plot_data(config.output, "action-spectrum",
                             (H, pts, config.plot_grid), config.quiet)
        elif kind == "curves":
            curves = payload[1]
            rp.write_curve_csv(os.path.join(config.output, "curve_1.csv"),
                               curves[0].points)
            rp.write_curve_csv(os.path.join(config.output, "curve_2.csv"),
                               curves[1].points)

    if not config.quiet:
        print(f"{config.command}: {summary} -> {report_path}")

    if config.command == "verify-action-linking":
        tp.check_statistical(out[3], config.z_threshold)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(config_from_args(args))
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except StatisticalError as exc:
        print(f"statistical inconsistency: {exc}", file=sys.stderr)
        return 4
    except ReebsysError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
