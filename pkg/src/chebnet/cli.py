"""``chebnet`` command line.

Every subcommand builds a report of named checks; the exit code is 0 when all
checks pass, 1 when one fails and 2 on usage, configuration or runtime errors.
Library modules are imported inside the handlers so that CHEBNET_THREADS can
cap the BLAS thread pools before numpy loads.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")

DEFAULT_TOLERANCES = {
    "identity": 1e-8,
    "chebyshev": 1e-9,
    "symmetry": 1e-10,
    "catalog_K": 1e-8,
    "rim_K": 1e-6,
    "mapping": 1e-9,
    "middle_K": 1e-7,
    "concordance": 1e-6,
    "parallelogram": 1e-4,
    "rate": 3.5,
    "commutation": 1e-6,
    "conservation": 1e-6,
    "theorem": 1e-3,
    "sine_gordon": 5e-3,
    "sphere": 1e-4,
    "lelieuvre": 1e-3,
    "compat": 1e-5,
    "round_trip": 5e-3,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _threads():
    raw = os.environ.get("CHEBNET_THREADS")
    if raw is None:
        return None
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise UsageError(f"CHEBNET_THREADS must be a positive integer, got {raw!r}")
    for var in _THREAD_VARS:
        os.environ[var] = str(n)
    return n


# -- parser -------------------------------------------------------------------

def _common(p):
    p.add_argument("--report", metavar="PATH", help="write the full JSON report here")
    p.add_argument("--config", metavar="PATH", help="JSON file whose keys override flags")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="override a default tolerance (repeatable)")


def _surface_args(p, default="pseudosphere-asym"):
    p.add_argument("--surface", default=default)
    p.add_argument("--params", type=json.loads, default={}, metavar="JSON",
                   help="surface parameters as a JSON object")


def _example_args(p):
    p.add_argument("--example", default="9.1", choices=("9.1", "9.2"))
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--net", default="A", choices=("A", "B"))


def build_parser():
    ap = _Parser(prog="chebnet", description="Concordant Chebyshev nets and pseudospherical pairs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("catalog", help="list surfaces; check K = -1 on pseudospherical entries")
    p.add_argument("--grid", type=int, default=9, help="interior grid size per side")
    p.add_argument("--rim", action="store_true", help="also check the middle-surface rim curvature")
    p.add_argument("--k", type=float, default=1.0)
    _common(p)

    p = sub.add_parser("invariants", help="second-order invariants of a net at a point")
    _surface_args(p)
    p.add_argument("--point", type=float, nargs=2, metavar=("P", "Q"))
    p.add_argument("--pair", default="coordinate", choices=("coordinate", "random"))
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("classify", help="Chebyshev / conjugate / concordant verdicts")
    _surface_args(p)
    p.add_argument("--pair", default="coordinate", choices=("coordinate", "random"))
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--expect", action="append", default=[],
                   choices=("chebyshev", "not-chebyshev", "conjugate", "concordant"),
                   help="turn a verdict into a check (repeatable)")
    _common(p)

    p = sub.add_parser("identities", help="identity suite at random points and pairs")
    _surface_args(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("symmetries", help="discrete symmetries T0-T3")
    _surface_args(p)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _common(p)

    p = sub.add_parser("construct", help="reverse and forward construction at one resolution")
    _example_args(p)
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--samples", type=int, default=50, help="points for the net checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--obj", metavar="PATH", help="export the middle-surface grid")
    _common(p)

    p = sub.add_parser("trace", help="trace net curves and run the parallelogram test")
    _example_args(p)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--quad-size", type=float, default=0.3)
    p.add_argument("--quad-n", type=int, default=10)
    p.add_argument("--refine", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", help="export the traced curves")
    _common(p)

    p = sub.add_parser("roundtrip", help="round trip with a convergence table")
    _example_args(p)
    p.add_argument("--n", type=int, default=9)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--refine", type=int, default=1)
    _common(p)

    p = sub.add_parser("export", help="write meshes, curves or a JSON document")
    _example_args(p)
    p.add_argument("--object", default="middle",
                   choices=("middle", "plus", "minus", "curves", "document"))
    p.add_argument("--format", choices=("obj", "csv", "json"))
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--n", type=int, default=33)
    p.add_argument("--step", type=float, default=0.0125)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--trace-step", type=float, default=1e-3)
    _common(p)
    return ap


def _apply_config(args):
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    allowed = set(vars(args)) - {"command", "config"} | {"tolerances"}
    unknown = sorted(set(cfg) - allowed)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
    for key, value in cfg.items():
        if key == "tolerances":
            if not isinstance(value, dict):
                raise UsageError("'tolerances' must be an object")
            args.tol = list(args.tol) + [f"{k}={v}" for k, v in value.items()]
        else:
            setattr(args, key, value)


def _tolerances(args):
    tol = dict(DEFAULT_TOLERANCES)
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep or name not in tol:
            raise UsageError(f"bad tolerance {item!r}; known: {', '.join(sorted(tol))}")
        try:
            tol[name] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad tolerance value in {item!r}") from exc
    return tol


# -- handlers -----------------------------------------------------------------

def _pair(kind, rng):
    from .invariants import DirectionPair, random_pair
    return DirectionPair.coordinate() if kind == "coordinate" else random_pair(rng)


def cmd_catalog(args, doc, tol):
    import numpy as np
    from .catalog import PSEUDOSPHERICAL, catalog_listing, make_surface
    from .parallel import gauss_curvature
    doc.data["surfaces"] = catalog_listing()
    for entry in doc.data["surfaces"]:
        print(f"  {entry['name']:<22s} {entry['description']}")
    for name in PSEUDOSPHERICAL:
        S = make_surface(name)
        (p0, p1), (q0, q1) = S.domain
        g = np.linspace(0.05, 0.95, args.grid)
        P, Q = np.meshgrid(p0 + (p1 - p0) * g, q0 + (q1 - q0) * g, indexing="ij")
        K = gauss_curvature(S, P, Q)
        doc.add(f"catalog_K[{name}]", "catalog_K", np.max(np.abs(K + 1.0)), tol["catalog_K"])
    if args.rim:
        from .pipeline import rim_curvature
        val, _ = rim_curvature(args.k)
        s2 = np.sin(args.k) ** 2
        doc.data["rim_K"] = val
        doc.add("rim_K", "rim_K", abs(val + 2 * s2 / (1 + s2)), tol["rim_K"])


def cmd_invariants(args, doc, tol):
    import numpy as np
    from dataclasses import asdict
    from .catalog import make_surface
    from .invariants import identity_suite, invariant_record
    S = make_surface(args.surface, args.params)
    p, q = args.point if args.point else S.center
    pair = _pair(args.pair, np.random.default_rng(args.seed))
    rec = {k: float(np.asarray(v)) for k, v in asdict(invariant_record(S, p, q, pair)).items()}
    doc.data.update(point=[p, q], record=rec)
    for k, v in rec.items():
        print(f"  {k:<10s} {v: .12g}")
    rep = identity_suite(S, p, q, pair)
    doc.add("identity", "identity", rep.max, tol["identity"])


def cmd_classify(args, doc, tol):
    import numpy as np
    from .catalog import make_surface
    from .invariants import ConcordanceSpec, classify_net, sample_points
    rng = np.random.default_rng(args.seed)
    S = make_surface(args.surface, args.params)
    pair = _pair(args.pair, rng)
    pts = sample_points(S, args.samples, rng)
    res = classify_net(S, pair, pts, ConcordanceSpec(args.mu, args.kappa, args.lam),
                       tol_chebyshev=tol["chebyshev"], tol_concordant=tol["concordance"])
    doc.data.update({k: res[k] for k in ("max", "chebyshev", "conjugate", "concordant", "spec")})
    doc.data["singular"] = len(res["singular"])
    for k in ("chebyshev", "conjugate", "concordant"):
        print(f"  {k:<11s} {res[k]}")
    m = res["max"]
    cheb = max(m[k] for k in ("commutator", "iota", "pi", "kg1_plus_omega1", "kg2_minus_omega2"))
    for e in args.expect:
        if e == "chebyshev":
            doc.add("chebyshev", "chebyshev", cheb, tol["chebyshev"])
        elif e == "not-chebyshev":
            doc.add("chebyshev_violated", "chebyshev", cheb, 1e-3, mode="min")
        elif e == "conjugate":
            doc.add("conjugate", "concordance", m["sigma"], tol["chebyshev"])
        else:
            doc.add("concordance", "concordance", m["concordance"], tol["concordance"])


def _random_samples(args, rng, doc):
    from .catalog import make_surface
    from .invariants import conditioned_samples
    S = make_surface(args.surface, args.params)
    samples, redrawn = conditioned_samples(S, args.samples, rng)
    doc.data["redrawn"] = redrawn
    for p, q, pair in samples:
        yield S, p, q, pair


def cmd_identities(args, doc, tol):
    import numpy as np
    from .errors import ChebnetError
    from .invariants import identity_suite
    worst, skipped = {}, 0
    for S, p, q, pair in _random_samples(args, np.random.default_rng(args.seed), doc):
        try:
            rep = identity_suite(S, p, q, pair)
        except ChebnetError:
            skipped += 1
            continue
        for k, v in rep.as_dict().items():
            worst[k] = max(worst.get(k, 0.0), v)
    if not worst:
        raise UsageError("every sample point was singular")
    doc.data.update(residuals=worst, skipped=skipped, max_residual=max(worst.values()))
    for k, v in sorted(worst.items()):
        doc.add(f"identity[{k}]", "identity", v, tol["identity"])


def cmd_symmetries(args, doc, tol):
    import numpy as np
    from .errors import ChebnetError
    from .invariants import symmetry_residuals
    worst, skipped = {}, 0
    for S, p, q, pair in _random_samples(args, np.random.default_rng(args.seed), doc):
        try:
            res = {T: symmetry_residuals(T, S, p, q, pair) for T in ("T0", "T1", "T2", "T3")}
        except ChebnetError:
            skipped += 1
            continue
        for T, r in res.items():
            worst[T] = max(worst.get(T, 0.0), max(float(np.max(v)) for v in r.values()))
    doc.data["skipped"] = skipped
    for T, v in worst.items():
        doc.add(f"symmetry[{T}]", "symmetry", v, tol["symmetry"])


_THEOREM_KEYS = ("gauss", "asymptotic", "tangency", "detI", "mean")


def _construction_checks(doc, c, tol, prefix=""):
    """Checks on one Construction (grid level)."""
    import numpy as np
    from .pipeline import round_trip_distance
    doc.add(f"{prefix}commutation", "commutation",
            np.nanmax(c.grid.commutation_defect) / c.grid.step**2,
            tol["commutation"])
    doc.add(f"{prefix}conservation", "conservation", c.potential.loop_max, tol["conservation"])
    for key, v in c.pair.summary().items():
        if key.startswith(_THEOREM_KEYS):
            doc.add(prefix + key, key, v, tol["theorem"])
    if c.asymptotic is not None:
        for key, v in c.asymptotic.summary().items():
            t = {"sine": "sine_gordon", "sphe": "sphere", "psi": "sphere",
                 "leli": "lelieuvre", "comp": "compat"}[key[:4]]
            doc.add(prefix + key, key, v, tol[t])
    for t, d in round_trip_distance(c).items():
        doc.add(f"{prefix}round_trip_{t}", "round_trip", np.max(d), tol["round_trip"])


def cmd_construct(args, doc, tol):
    import numpy as np
    from .invariants import sample_points
    from .parallel import mapping_tensor, middle_curvature
    from .pipeline import construct, example_pair
    pp = example_pair(args.example, args.k)
    rng = np.random.default_rng(args.seed)
    pts = sample_points(pp.domain, args.samples, rng)
    mt = mapping_tensor(pp, pts[:, 0], pts[:, 1], residuals=False)
    doc.add("mapping_det", "mapping_det", np.max(np.abs(mt.det_residual)), tol["mapping"])
    doc.add("mapping_xieta", "mapping_xieta", np.max(np.abs(mt.xi_eta_residual)), tol["mapping"])
    Kj, Kf, _ = middle_curvature(pp, pts[:, 0], pts[:, 1], args.kappa)
    doc.add("middle_K", "middle_K", np.nanmax(np.abs(Kj - Kf)), tol["middle_K"])
    c = construct(args.example, args.net, args.n, args.step, args.k, args.kappa, pp=pp)
    from .parallel import check_net
    chk = check_net(c.net, pts, tol["concordance"])
    m = chk["max"]
    doc.add("concordance", "concordance", m["concordance"], tol["concordance"])
    doc.add("chebyshev_net", "chebyshev", max(m["iota"], m["pi"]), tol["concordance"])
    doc.data["kappa_eff"] = chk["kappa_eff"]
    _construction_checks(doc, c, tol)
    if args.obj:
        from .export import export_obj
        nv, nf = export_obj(c.grid.r, args.obj, name=f"middle_{args.example}_{args.net}")
        doc.data["obj"] = {"path": args.obj, "vertices": nv, "faces": nf}
        print(f"  wrote {args.obj}: {nv} vertices, {nf} faces")


def _seeds(pp, n):
    import numpy as np
    (p0, p1), (q0, q1) = pp.domain
    pc, qc = pp.center
    t = np.linspace(-0.5, 0.5, n) if n > 1 else np.zeros(1)
    # a short diagonal segment through the centre, well inside the chart
    return np.c_[pc + 0.2 * (p1 - p0) * t, qc + 0.2 * (q1 - q0) * t]


def cmd_trace(args, doc, tol):
    from .grid import parallelogram_test, trace_curves
    from .parallel import concordant_nets
    from .pipeline import example_pair
    pp = example_pair(args.example, args.k)
    net = {n.label: n for n in concordant_nets(pp, args.kappa)}[args.net]
    curves = trace_curves(net, _seeds(pp, args.seeds), args.step, args.steps)
    doc.data["curves"] = {"count": len(curves), "truncated": sum(c.truncated for c in curves)}
    prev = None
    for lv in range(args.refine + 1):
        h = args.step / 2**lv
        r = parallelogram_test(net, pp.center, args.quad_size, args.quad_n, h)
        doc.add(f"parallelogram[h={h:g}]", "parallelogram", r["max_discrepancy"], tol["parallelogram"])
        if prev is not None:
            doc.add(f"parallelogram_rate[h={h:g}]", "rate", prev / r["max_discrepancy"], tol["rate"],
                    mode="min")
        prev = r["max_discrepancy"]
    if args.csv:
        from .export import export_csv
        rows = export_csv(curves, args.csv)
        doc.data["csv"] = {"path": args.csv, "rows": rows}
        print(f"  wrote {args.csv}: {rows} rows")


def cmd_roundtrip(args, doc, tol):
    from .pipeline import round_trip
    rt = round_trip(args.example, args.step, args.n, args.refine, args.net, args.k, args.kappa)
    table = rt.table()
    doc.data["table"] = table
    doc.data["rates"] = rt.rates
    print(f"  {'step':>8s} {'n':>4s} {'dist+':>10s} {'dist-':>10s} {'loop':>10s} {'worst':>10s}")
    for row in table:
        print(f"  {row['step']:8.5f} {row['n']:4d} {row['distance_plus']:10.2e} "
              f"{row['distance_minus']:10.2e} {row['loop']:10.2e} {row['worst_residual']:10.2e}")
    _construction_checks(doc, rt.levels[0], tol)
    for key, ratios in sorted(rt.rates.items()):
        if key.startswith(_THEOREM_KEYS + ("sine_gordon", "lelieuvre", "distance")):
            for i, r in enumerate(ratios):
                doc.add(f"rate[{key}][{i}]", "rate", r, tol["rate"], mode="min")


def cmd_export(args, doc, tol):
    fmt = args.format or {"curves": "csv", "document": "json"}.get(args.object, "obj")
    if args.object == "curves":
        from .grid import trace_curves
        from .parallel import concordant_nets
        from .pipeline import example_pair
        pp = example_pair(args.example, args.k)
        net = {n.label: n for n in concordant_nets(pp, args.kappa)}[args.net]
        obj = trace_curves(net, _seeds(pp, args.seeds), args.trace_step, args.steps)
    else:
        from .pipeline import construct
        c = construct(args.example, args.net, args.n, args.step, args.k, args.kappa,
                      asymptotic=False)
        if args.object == "document":
            g = c.grid
            obj = {"example": args.example, "net": args.net, "step": g.step, "chart": g.chart,
                   "middle": g.r, "normal": g.n, "omega": g.omega, "h11": g.h11, "h12": g.h12,
                   "h22": g.h22, "m": c.potential.m, "r_plus": c.pair.r_plus,
                   "r_minus": c.pair.r_minus, "mask": c.pair.mask}
        else:
            obj = {"middle": c.grid.r, "plus": c.pair.r_plus, "minus": c.pair.r_minus}[args.object]
    from .export import export_geometry
    kw = {}
    if fmt == "obj" and args.object in ("plus", "minus"):
        kw["mask"] = c.pair.mask
    out = export_geometry(obj, fmt, args.out, **kw)
    doc.data["export"] = {"path": args.out, "format": fmt, "result": out}
    print(f"  wrote {args.out} ({fmt}): {out}")


HANDLERS = {
    "catalog": cmd_catalog, "invariants": cmd_invariants, "classify": cmd_classify,
    "identities": cmd_identities, "symmetries": cmd_symmetries, "construct": cmd_construct,
    "trace": cmd_trace, "roundtrip": cmd_roundtrip, "export": cmd_export,
}


def run_cli(argv=None):
    """Parse, run and report; returns the exit code."""
    try:
        threads = _threads()
        args = build_parser().parse_args(argv)
        _apply_config(args)
        tol = _tolerances(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:      # --help
        return int(exc.code or 0)

    from .report import ReportDocument
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "tol")}
    config["tolerances"] = tol
    doc = ReportDocument(args.command, config, meta={"threads": threads})
    try:
        HANDLERS[args.command](args, doc, tol)
    except Exception as exc:       # noqa: BLE001 - every failure is a run error
        print(f"chebnet {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(doc.summary())
    if args.report:
        try:
            doc.write(args.report)
        except ChebnetError as exc:
            print(f"chebnet: {exc}", file=sys.stderr)
            return 2
    return 0 if doc.verdict else 1


def main(argv=None):
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
