#!/usr/bin/env python3
"""Survey how the systolic interval widens as an lp boundary bends.

Sweeps the exponent of the lp family between the flat (ellipsoid) case and
strongly convex profiles, printing the interval, norm and contact volume,
and optionally dumping a CSV for plotting.
"""
import argparse
import csv
import sys

from reebsys.profiles import LpProfile
from reebsys.systolic import systolic_interval


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--a", type=float, default=1.0)
    ap.add_argument("--b", type=float, default=1.0)
    ap.add_argument("--p-min", type=float, default=1.0)
    ap.add_argument("--p-max", type=float, default=6.0)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--grid", type=int, default=2048)
    ap.add_argument("--csv", type=str, default=None)
    args = ap.parse_args()

    rows = []
    print(f"{'p':>6} {'rho_-':>12} {'rho_+':>12} {'norm':>12} {'volume':>12}")
    for i in range(args.steps):
        p = args.p_min + (args.p_max - args.p_min) * i / max(args.steps - 1, 1)
        profile = LpProfile(p, args.a, args.b)
        rep = systolic_interval(profile, grid_n=args.grid)
        print(f"{p:6.3f} {rep.interval[0]:12.8f} {rep.interval[1]:12.8f} "
              f"{rep.norm:12.8f} {rep.volume:12.8f}")
        rows.append((p, rep.interval[0], rep.interval[1], rep.norm, rep.volume))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("p", "rho_minus", "rho_plus", "norm", "volume"))
            w.writerows(rows)
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
