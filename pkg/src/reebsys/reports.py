"""Report serialization: JSON reports, CSV dumps, schema validation.

Reports are plain dicts rendered with sorted keys and shortest
round-trip float representation, so identical inputs and seeds produce
byte-identical files.  Every report names its command, schema version,
seed and generator.  Files are written atomically (write then rename).
"""
from __future__ import annotations

import csv
import io
import json
import os
import sys
from importlib import resources

import numpy as np

from .errors import ValidationError

REPORT_VERSION = 1


def jsonable(obj):
    """Recursively convert report payloads to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, float) and obj != obj:
        raise ValidationError("NaN is not representable in reports")
    return obj


def render_report(report: dict) -> bytes:
    return (json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n").encode()


def atomic_write_bytes(path: str, data: bytes):
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def write_report(path: str, report: dict):
    atomic_write_bytes(path, render_report(report))


def write_csv(path: str, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating))
                         else v for v in row])
    atomic_write_bytes(path, buf.getvalue().encode())


def write_samples_csv(path: str, samples: np.ndarray):
    write_csv(path, ("t", "theta1", "theta2"),
              ((float(r[0]), float(r[1]), float(r[2])) for r in samples))


def write_curve_csv(path: str, points: np.ndarray):
    write_csv(path, ("x1", "y1", "x2", "y2"),
              (tuple(float(v) for v in row) for row in points))


def read_curve_csv(path: str) -> np.ndarray:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x1", "y1", "x2", "y2"]:
            raise ValidationError(f"{path}: expected header x1,y1,x2,y2")
        try:
            rows = [[float(v) for v in row] for row in reader if row]
        except ValueError as exc:
            raise ValidationError(f"{path}: non-numeric curve data: {exc}") from exc
    if len(rows) < 4:
        raise ValidationError(f"{path}: too few curve points")
    return np.asarray(rows, float)


def load_schema(command: str) -> dict:
    name = f"{command}.v{REPORT_VERSION}.json"
    try:
        text = (resources.files("reebsys.schemas") / name).read_text()
    except FileNotFoundError as exc:
        raise ValidationError(f"no schema shipped for command {command!r}") from exc
    return json.loads(text)


def validate_report(command: str, report: dict):
    import jsonschema

    schema = load_schema(command)
    try:
        jsonschema.validate(jsonable(report), schema)
    except jsonschema.ValidationError as exc:
        raise ValidationError(
            f"report for {command!r} violates its schema: {exc.message}") from exc
    return report


def warn(message: str, quiet: bool = False):
    if not quiet:
        print(f"warning: {message}", file=sys.stderr)


# ---------------------------------------------------------------------------
# plot-ready CSV emitters


def emit_plot_data(outdir: str, kind: str, payload, quiet: bool = False):
    """Write plot-ready CSV files for a computed report.

    kinds: 'systolic-grid' wants (profile, grid_n) and writes the
    (t, t_hat, g) table; 'pairing-profile' wants (profile, n) and writes
    pairings against the two axis disks along the curve; 'action-spectrum'
    wants (hamiltonian, periodic points, n) and writes the radial mean
    action curve with the located points.  Empty payloads produce a
    warning and no file.
    """
    paths = []
    if kind == "systolic-grid":
        profile, n = payload
        ts = np.linspace(0.0, profile.two_area, n)
        _, _, d1, d2 = profile.boundary_arrays(ts)
        g = 2.0 * profile.quadrant_area() * np.outer(d1, d2)
        rows = ((float(ts[i]), float(ts[j]), float(g[i, j]))
                for i in range(n) for j in range(n))
        path = os.path.join(outdir, "systolic_grid.csv")
        write_csv(path, ("t", "t_hat", "g"), rows)
        paths.append(path)
    elif kind == "pairing-profile":
        profile, n = payload
        two_a = profile.two_area
        ts = np.linspace(0.0, two_a, n + 2)[1:-1]
        _, _, d1, d2 = profile.boundary_arrays(ts)
        area2 = 2.0 * profile.quadrant_area()
        ic = profile.intercepts()
        rho_y = area2 * d1 * ic.d2_at_b
        rho_x = area2 * d2 * ic.d1_at_a
        path = os.path.join(outdir, "pairing_profile.csv")
        write_csv(path, ("t", "rho_y_disk", "rho_x_disk"),
                  zip(map(float, ts), map(float, rho_y), map(float, rho_x)))
        paths.append(path)
    elif kind == "action-spectrum":
        hamiltonian, points, n = payload
        from .diskmap import RadialHamiltonian, radial_action_exact
        rows = []
        if isinstance(hamiltonian, RadialHamiltonian):
            ss = np.linspace(0.0, 1.0, n)
            rows = [(float(s), float(v), "")
                    for s, v in zip(ss, radial_action_exact(hamiltonian, ss))]
        rows += [(float((P.z[0] ** 2 + P.z[1] ** 2)), float(P.mean_action), P.k)
                 for P in points]
        if not rows:
            warn("no action data to plot; skipping CSV", quiet)
            return []
        path = os.path.join(outdir, "action_spectrum.csv")
        write_csv(path, ("s", "mean_action", "k"), rows)
        paths.append(path)
    else:
        raise ValidationError(f"unknown plot kind: {kind!r}")
    return paths
