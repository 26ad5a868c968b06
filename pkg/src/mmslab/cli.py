"""Command-line driver.

Verbs: space, estimate, norms, vitali, gauss, gallery, verify-paper.
Reports are JSON (or CSV for dimension sweeps) and embed the effective
configuration plus the package version, so identical invocations produce
byte-identical output.  Exit codes: 0 ok, 1 failed claim/expectation,
2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__, gausslab, gallery, geometry, norms, verification
from .measures import QuadratureError
from .spaces import load_space

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _emit(payload: dict, args, default_name: str) -> None:
    payload = {"tool": "mmslab", "version": __version__,
               "config": {k: v for k, v in sorted(vars(args).items())
                          if k not in ("func", "out") and v is not None},
               **payload}
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _entry(args) -> gallery.GalleryEntry:
    kwargs = {}
    if getattr(args, "n", None) is not None and args.gallery in ("broom", "infinite-broom", "onedir"):
        key = "n_max"
        kwargs[key] = args.n
    if getattr(args, "x_max", None) is not None and args.gallery == "arc-connected":
        kwargs["x_max"] = args.x_max
    return gallery.build(args.gallery, **kwargs)


def cmd_space(args) -> int:
    s = load_space(args.file)
    info = {"kind": s.kind}
    if s.is_finite():
        info["points"] = int(len(s.universe))
        info["max_distance"] = float(np.max(s.matrix))
    else:
        info["dim"] = s.dim
        info["q"] = "inf" if math.isinf(s.q) else s.q
    _emit({"space": info}, args, "space")
    return EXIT_OK


def cmd_estimate(args) -> int:
    e = _entry(args)
    radii = [float(r) for r in args.radii.split(",")] if args.radii else None
    if args.what == "comparability":
        if radii is None:
            raise SystemExit("comparability needs --radii")
        est = geometry.comparability_sup(e.measure, e.space, radii)
    elif args.what == "doubling":
        est = geometry.doubling_constant(e.measure, e.space, radii=radii)
    elif args.what == "blossom":
        est = geometry.blossom_constant(e.measure, e.space, radii=radii)
    elif args.what == "geomdoubling":
        if not e.space.is_finite():
            raise SystemExit("geomdoubling estimation here needs a finite gallery space")
        count = 0
        rs = radii or list(np.unique(e.space.matrix)[1:])
        for r in rs:
            for x in e.space.universe:
                from .measures import Ball
                count = max(count, geometry.geometric_doubling_number(
                    e.space, Ball(int(x), 2.0 * float(r)), list(e.space.universe)))
        _emit({"estimate": {"name": "geom-doubling-D", "value": count,
                            "direction": "upper-for-sample"}}, args, "estimate")
        return EXIT_OK
    else:
        raise SystemExit(f"unknown estimate {args.what}")
    _emit({"estimate": est.to_dict()}, args, "estimate")
    return EXIT_OK


def cmd_norms(args) -> int:
    e = _entry(args)
    from .measures import AtomicMeasure
    if not isinstance(e.measure, AtomicMeasure):
        raise SystemExit("kernel norms need an atomic gallery entry")
    kern = norms.build_kernel(e.measure, e.space, args.r)
    if args.method == "l1":
        rep = norms.op_norm_l1(kern)
    elif args.method == "lp":
        rep = norms.op_norm_lp(kern, args.p)
    elif args.method == "weak":
        rep = norms.weak_type_constant(kern, args.p)
    else:
        raise SystemExit(f"unknown method {args.method}")
    _emit({"norm": rep.to_dict()}, args, "norms")
    return EXIT_OK


def cmd_vitali(args) -> int:
    e = _entry(args)
    rng = np.random.default_rng(args.seed)
    from .measures import Ball
    if e.space.is_finite():
        n = len(e.space.universe)
        top = float(np.max(e.space.matrix))
        balls = [Ball(int(rng.integers(0, n)), float(rng.uniform(0.1 * top, 0.8 * top)))
                 for _ in range(args.count)]
    else:
        balls = [Ball(float(rng.uniform(0.1, 8.0)), float(rng.uniform(0.1, 2.0)))
                 for _ in range(args.count)]
    res = geometry.vitali_select(e.measure, e.space, balls)
    _emit({"vitali": res.to_dict()}, args, "vitali")
    return EXIT_OK


def cmd_gauss(args) -> int:
    if args.gauss_cmd == "upper":
        if args.d_range:
            lo, hi = (int(v) for v in args.d_range.split(":"))
            rows = [(d, gausslab.l1_upper_bound(d), gausslab.l1_upper_bound_log(d))
                    for d in range(lo, hi + 1)]
            if args.csv:
                with open(args.csv, "w", newline="") as fh:
                    w = csv.writer(fh)
                    w.writerow(["d", "value", "log_value", "err"])
                    for d, v, lg in rows:
                        w.writerow([d, v, lg, 0.0])
                print(f"wrote {args.csv}")
            else:
                _emit({"sweep": [{"d": d, "value": v, "log_value": lg}
                                 for d, v, lg in rows]}, args, "gauss")
            return EXIT_OK
        lg = gausslab.l1_upper_bound_log(args.d)
        _emit({"upper": {"d": args.d, "value": gausslab.l1_upper_bound(args.d),
                         "log_value": lg, "per_dim": math.exp(lg / args.d)}},
              args, "gauss")
        return EXIT_OK
    if args.gauss_cmd == "lower":
        rep = gausslab.weak_lower_bound(args.d, p=args.p, region=args.region)
        _emit({"lower": rep.to_dict()}, args, "gauss")
        return EXIT_OK
    if args.gauss_cmd == "checks":
        lo, hi = (int(v) for v in args.d_range.split(":"))
        rows = []
        bad = 0
        for d in range(lo, hi + 1):
            row = {"d": d,
                   "gamma_ratio": gausslab.gamma_ratio_check(d).status,
                   "cap_volume": gausslab.cap_volume_ratio(d).status}
            if d >= 2:
                row["cap_measure"] = gausslab.cap_measure_bound(d).status
                row["shell"] = "pass" if gausslab.shell_mass_log(d) > \
                    -0.5 * math.log(math.pi * math.e ** 3 * d) else "fail"
            bad += sum(1 for v in row.values() if v == "fail")
            rows.append(row)
        _emit({"checks": rows, "failures": bad}, args, "gauss")
        return EXIT_OK if bad == 0 else EXIT_CLAIM_FAILED
    raise SystemExit(f"unknown gauss subcommand {args.gauss_cmd}")


def cmd_operator(args) -> int:
    e = _entry(args)
    from .measures import DiracFunction
    from .operators import OperatorSpec
    spec = OperatorSpec(kind=args.kind, measure=e.measure, space=e.space,
                        radius=args.r, span=args.span,
                        radii=np.array([float(v) for v in args.radii.split(",")])
                        if args.radii else None)
    if e.space.is_finite():
        points = list(e.space.universe) if not args.points else \
            [int(v) for v in args.points.split(",")]
        probe = DiracFunction(int(args.dirac))
    else:
        if not args.points:
            raise SystemExit("continuous entries need --points")
        points = [float(v) for v in args.points.split(",")]
        probe = DiracFunction(float(args.dirac))
    rows = list(spec.evaluate(probe, points))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["point", "value"])
            for x, v in rows:
                w.writerow([x, v])
        print(f"wrote {args.csv}")
    else:
        w = csv.writer(sys.stdout)
        w.writerow(["point", "value"])
        for x, v in rows:
            w.writerow([x, v])
    return EXIT_OK


def cmd_gallery(args) -> int:
    if args.gallery_cmd == "list":
        _emit({"gallery": gallery.gallery_names()}, args, "gallery")
        return EXIT_OK
    if args.gallery_cmd == "verify":
        kwargs = {}
        if args.n is not None and args.name in ("broom", "infinite-broom", "onedir"):
            kwargs["n_max"] = args.n
        e = gallery.build(args.name, **kwargs)
        table = e.verify()
        ok = all(row["passed"] for row in table)
        _emit({"entry": e.name, "meta": e.meta, "expectations": table,
               "all_passed": ok}, args, "gallery")
        return EXIT_OK if ok else EXIT_CLAIM_FAILED
    raise SystemExit(f"unknown gallery subcommand {args.gallery_cmd}")


def cmd_verify_paper(args) -> int:
    only = set(int(v) for v in args.claims.split(",")) if args.claims else None
    try:
        results = verification.run_claims(quick=args.quick, seed=args.seed, only=only)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for res in results:
        print(res.line())
    payload = {"claims": [r.to_dict() for r in results],
               "passed": sum(r.passed for r in results),
               "failed": sum(not r.passed for r in results)}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({"tool": "mmslab", "version": __version__,
                       "config": {"quick": args.quick, "seed": args.seed},
                       **payload}, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    return EXIT_OK if payload["failed"] == 0 else EXIT_CLAIM_FAILED


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mmslab",
                                description="metric measure space laboratory")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("space", help="load and validate a space file")
    ps.add_argument("file")
    ps.add_argument("--out")
    ps.set_defaults(func=cmd_space)

    pe = sub.add_parser("estimate", help="estimate a constant on a gallery entry")
    pe.add_argument("what", choices=["comparability", "doubling", "blossom", "geomdoubling"])
    pe.add_argument("--gallery", required=True)
    pe.add_argument("--radii", help="comma-separated radius grid")
    pe.add_argument("--n", type=int)
    pe.add_argument("--x-max", type=float, dest="x_max")
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_estimate)

    pn = sub.add_parser("norms", help="kernel norms on an atomic gallery entry")
    pn.add_argument("--gallery", required=True)
    pn.add_argument("--r", type=float, required=True)
    pn.add_argument("--p", type=float, default=1.0)
    pn.add_argument("--method", choices=["l1", "lp", "weak"], default="l1")
    pn.add_argument("--n", type=int)
    pn.add_argument("--out")
    pn.set_defaults(func=cmd_norms)

    pv = sub.add_parser("vitali", help="greedy disjointification on random balls")
    pv.add_argument("run", nargs="?", default="run")
    pv.add_argument("--gallery", required=True)
    pv.add_argument("--seed", type=int, required=True)
    pv.add_argument("--count", type=int, default=20)
    pv.add_argument("--n", type=int)
    pv.add_argument("--out")
    pv.set_defaults(func=cmd_vitali)

    pg = sub.add_parser("gauss", help="gaussian bound pipelines")
    gs = pg.add_subparsers(dest="gauss_cmd", required=True)
    g1 = gs.add_parser("upper")
    g1.add_argument("--d", type=int)
    g1.add_argument("--d-range", dest="d_range")
    g1.add_argument("--csv")
    g1.add_argument("--out")
    g2 = gs.add_parser("lower")
    g2.add_argument("--d", type=int, required=True)
    g2.add_argument("--p", type=float, default=1.0)
    g2.add_argument("--region", choices=["ball", "shell"], default="ball")
    g2.add_argument("--seed", type=int, default=0)
    g2.add_argument("--out")
    g3 = gs.add_parser("checks")
    g3.add_argument("--d-range", dest="d_range", required=True)
    g3.add_argument("--out")
    pg.set_defaults(func=cmd_gauss)

    po = sub.add_parser("operator", help="stream operator values as CSV rows")
    po.add_argument("kind", choices=["average", "maximal-centered",
                                     "maximal-uncentered", "directional-right"])
    po.add_argument("--gallery", required=True)
    po.add_argument("--r", type=float)
    po.add_argument("--span", type=float)
    po.add_argument("--radii", help="radius grid for maximal operators")
    po.add_argument("--dirac", required=True, help="probe location (index or coordinate)")
    po.add_argument("--points", help="comma-separated evaluation points")
    po.add_argument("--n", type=int)
    po.add_argument("--csv")
    po.set_defaults(func=cmd_operator)

    pl = sub.add_parser("gallery", help="list or verify example entries")
    ls = pl.add_subparsers(dest="gallery_cmd", required=True)
    l1 = ls.add_parser("list")
    l1.add_argument("--out")
    l2 = ls.add_parser("verify")
    l2.add_argument("name")
    l2.add_argument("--n", type=int)
    l2.add_argument("--out")
    pl.set_defaults(func=cmd_gallery)

    pp = sub.add_parser("verify-paper", help="run the quantitative claims table")
    pp.add_argument("--quick", action="store_true",
                    help="skip Monte Carlo legs and the threshold search")
    pp.add_argument("--seed", type=int, default=20250809)
    pp.add_argument("--claims", help="comma-separated claim numbers to run")
    pp.add_argument("--out")
    pp.set_defaults(func=cmd_verify_paper)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
