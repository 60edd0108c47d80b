"""Command-line surface: compute, verify, demo, plot.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
Errors are emitted as one JSON object per line on stderr.  All randomness
derives from --seed (or the problem file's seed); NUMRANGE_THREADS caps
suite parallelism.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from .errors import InputError, NumrangeError
from .problem import parse_problem
from .ranges import (approx_spatial_range, dyadic_schedule, intrinsic_range, spatial_range)
from .geometry import convex_hull
from . import verify as verify_mod

CSV_FLOAT = "%.17g"


def _fail(exc, code):
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
    return code


def _write_cloud_csv(path: str, cloud) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im", "source_label", "stability_eps"])
        for z, lab, s in zip(cloud.values, cloud.labels, cloud.stability):
            w.writerow([CSV_FLOAT % z.real, CSV_FLOAT % z.imag, str(lab), CSV_FLOAT % s])


def _write_polygon_csv(out_dir: str, polygon) -> None:
    with open(os.path.join(out_dir, "intrinsic_support.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["phi", "support"])
        for phi, s in zip(polygon.angles, polygon.values):
            w.writerow([CSV_FLOAT % phi, CSV_FLOAT % s])
    with open(os.path.join(out_dir, "intrinsic_vertices.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for z in polygon.vertices:
            w.writerow([CSV_FLOAT % z.real, CSV_FLOAT % z.imag])


def cmd_compute(args) -> int:
    problem = parse_problem(args.problem)
    pair = problem.build_pair()
    cfg = problem.compute
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "problem_echo.json"), "w", encoding="utf-8") as fh:
        json.dump(problem.echo_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    schedule = cfg["eps_schedule"] or dyadic_schedule(cfg["depth"])
    summary = {"f_sup": pair.f_sup, "n_indices": pair.n_indices,
               "eps_schedule": [float(e) for e in np.asarray(schedule)]}
    if "spatial" in cfg["ranges"]:
        cloud = spatial_range(pair, face_budget=cfg["face_budget"], seed=cfg["seed"])
        _write_cloud_csv(os.path.join(args.out, "spatial.csv"), cloud)
        summary["spatial_size"] = len(cloud)
    if "approx" in cfg["ranges"]:
        cloud = approx_spatial_range(pair, schedule=schedule, eta=cfg["eta"],
                                     budget=cfg["budget"], seed=cfg["seed"])
        _write_cloud_csv(os.path.join(args.out, "approx.csv"), cloud)
        summary["approx_size"] = len(cloud)
        summary["eta"] = cloud.eta
        if len(cloud):
            hull = convex_hull(cloud.values)
            summary["approx_hull_vertices"] = [[z.real, z.imag] for z in hull.vertices]
    if "intrinsic" in cfg["ranges"]:
        method = cfg["method"]
        if method in ("states", "both") and pair.kind != "finite":
            method = "norm-derivative"
        V = intrinsic_range(pair, n_angles=cfg["angles"], method=method)
        _write_polygon_csv(args.out, V)
        summary["intrinsic_method"] = method
        if "cross_gap" in V.extras:
            summary["intrinsic_cross_gap"] = float(V.extras["cross_gap"])
    with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(verify_mod._jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def cmd_verify(args) -> int:
    overrides = {}
    if args.config:
        problem = parse_problem(args.config)
        if problem.verify is not None:
            overrides = {k: v for k, v in problem.verify.items()
                         if k not in ("suite",) and v is not None}
    if args.suite == "main":
        report = verify_mod.verify_main(seed=args.seed, **{
            k: overrides[k] for k in ("count", "budget", "tol") if k in overrides})
    elif args.suite == "compact":
        report = verify_mod.compact_suite(seed=args.seed, **{
            k: overrides[k] for k in ("count", "budget", "tol") if k in overrides})
    else:
        report = verify_mod.smooth_suite(seed=args.seed, **{
            k: overrides[k] for k in ("count", "budget", "tol") if k in overrides})
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    sys.stdout.write(f"suite={args.suite} passed={report.passed} "
                     f"instances={len(report.instances)}\n")
    return 0 if report.passed else 1


def cmd_demo(args) -> int:
    N = int(args.N)
    schedule = sorted({max(N // 100, 1), max(N // 10, 1), N})
    if args.which == "nonattained":
        report = verify_mod.demo_nonattained(schedule, seed=args.seed)
    else:
        report = verify_mod.demo_nonsmooth(schedule, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
    sys.stdout.write(f"demo={args.which} passed={report.passed}\n")
    return 0 if report.passed else 1


def _read_cloud_csv(path: str):
    zs, stab = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            zs.append(complex(float(row["re"]), float(row["im"])))
            stab.append(float(row["stability_eps"]))
    return np.asarray(zs), np.asarray(stab)


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    spatial = os.path.join(args.indir, "spatial.csv")
    approx = os.path.join(args.indir, "approx.csv")
    vertices = os.path.join(args.indir, "intrinsic_vertices.csv")
    have = [p for p in (spatial, approx, vertices) if os.path.exists(p)]
    if not have:
        raise InputError(f"no range artifacts found under {args.indir!r}")
    fig, ax = plt.subplots(figsize=(6, 6))
    if os.path.exists(vertices):
        vz = []
        with open(vertices, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                vz.append(complex(float(row["re"]), float(row["im"])))
        if vz:
            loop = np.asarray(vz + [vz[0]])
            ax.plot(loop.real, loop.imag, "-", color="tab:green", lw=1.5,
                    label="intrinsic range")
    if os.path.exists(approx):
        z, _ = _read_cloud_csv(approx)
        if z.size:
            ax.plot(z.real, z.imag, "x", color="tab:orange", ms=4, mew=0.8,
                    label="approximated spatial", alpha=0.7)
    if os.path.exists(spatial):
        z, _ = _read_cloud_csv(spatial)
        if z.size:
            ax.plot(z.real, z.imag, ".", color="tab:blue", ms=5,
                    label="spatial", alpha=0.8)
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    out = args.out
    if not out.endswith(".svg"):
        out += ".svg"
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    fig.savefig(out, format="svg", bbox_inches="tight")
    plt.close(fig)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="numrange",
        description="Numerical ranges of bounded vector-valued functions on lp spaces. "
                    "NUMRANGE_THREADS caps suite parallelism.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute range clouds and the intrinsic polygon")
    c.add_argument("--problem", required=True, help="problem JSON file")
    c.add_argument("--out", required=True, help="output directory")
    c.set_defaults(fn=cmd_compute)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", required=True, choices=["main", "compact", "smooth"])
    v.add_argument("--config", default=None, help="problem file whose verify block overrides defaults")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", required=True)
    v.set_defaults(fn=cmd_verify)

    d = sub.add_parser("demo", help="run a counterexample demonstration")
    d.add_argument("which", choices=["nonattained", "nonsmooth"])
    d.add_argument("--N", type=int, default=1000, help="largest truncation in the schedule")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True)
    d.set_defaults(fn=cmd_demo)

    p = sub.add_parser("plot", help="render an SVG overlay of computed ranges")
    p.add_argument("--in", dest="indir", required=True, help="directory produced by compute")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(fn=cmd_plot)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except InputError as exc:
        return _fail(exc, 2)
    except NumrangeError as exc:
        return _fail(exc, 1)
    except OSError as exc:
        return _fail(exc, 2)


if __name__ == "__main__":
    sys.exit(main())
