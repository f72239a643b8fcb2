"""Command line front end.

Exit codes: 0 success, 1 computational error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from manin_dp import bundles, cones, counting, fibration, monoid
from manin_dp.cache import cached_enumeration
from manin_dp.config import OUTPUT_FORMATS, Config, ConfigError, load_config
from manin_dp.lattice import ClassVector, LatticeError, Model, PicardLattice, anticanonical_degree, dumps_canonical

EXIT_OK, EXIT_COMPUTE, EXIT_CONFIG = 0, 1, 2
CSV_COLUMNS = ["d", "N_numerator", "N_denominator", "ratio_decimal", "target_decimal"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _surface_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--degree", type=int, help="del Pezzo degree (blow-up model)")
    g.add_argument("--r", type=int, help="number of blown-up points")
    g.add_argument("--quadric", action="store_true", help="use P1 x P1")


def _common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON or TOML config file")
    p.add_argument("--output", choices=OUTPUT_FORMATS)
    p.add_argument("--cache-dir", help="enumeration cache directory ('' disables)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="manin-dp", description="Exact computations for del Pezzo surfaces and fibrations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    surface = sub.add_parser("surface", help="surface-level reports")
    ssub = surface.add_subparsers(dest="surface_command", required=True, parser_class=_Parser)
    info = ssub.add_parser("info", help="rank, degree and special curve counts")
    _surface_args(info)
    _common_args(info)

    en = sub.add_parser("enumerate", help="integral classes of given degree and square")
    _surface_args(en)
    _common_args(en)
    en.add_argument("--antideg", type=int, required=True)
    en.add_argument("--selfint", type=int, required=True)

    co = sub.add_parser("cones", help="effective generators and nef cone of curves")
    _surface_args(co)
    _common_args(co)
    co.add_argument("--ray-cap", type=int, default=cones.DEFAULT_RAY_CAP)

    al = sub.add_parser("alpha", help="alpha constant of the nef cone")
    _surface_args(al)
    _common_args(al)
    al.add_argument("--ray-cap", type=int, default=cones.DEFAULT_RAY_CAP)
    al.add_argument("--monte-carlo", type=int, default=0, metavar="SAMPLES", help="also report a sampled volume")

    th = sub.add_parser("thresholds", help="explicit height bounds of a fibration")
    _common_args(th)
    th.add_argument("--genus", type=int)
    th.add_argument("--neg", type=int)
    th.add_argument("--m", type=int, dest="m_xb")
    th.add_argument("--fiber-degree", type=int)
    th.add_argument("--maxdef", help='JSON table, e.g. \'{"entries": {"3": 2}, "horizon": 12}\'')

    ct = sub.add_parser("count", help="convergence of the counting function")
    _surface_args(ct)
    _common_args(ct)
    ct.add_argument("--q", type=Fraction)
    ct.add_argument("--dmax", type=int)
    ct.add_argument("--stride", type=int)
    ct.add_argument("--genus", type=int)
    ct.add_argument("--offset", help="comma separated class coordinates")
    ct.add_argument("--out", help="write the table here instead of stdout")
    ct.add_argument("--work-budget", type=int, default=counting.DEFAULT_WORK_BUDGET)

    mo = sub.add_parser("monoid-check", help="saturate component labels and report fiber sizes")
    _surface_args(mo)
    _common_args(mo)
    mo.add_argument("--horizon", type=int)
    mo.add_argument("--generators", type=int, help="number of base components (default 2)")
    mo.add_argument("--no-relations", action="store_true", help="withhold the joining relations")

    bp = sub.add_parser("bundle-predicates", help="vanishing, point and freeness predicates")
    _common_args(bp)
    bp.add_argument("--genus", type=int)
    bp.add_argument("--rank", type=int, choices=(1, 2))
    bp.add_argument("--total", type=int)
    bp.add_argument("--structure", choices=[s.value for s in bundles.Structure])
    bp.add_argument("--L1", type=int, dest="deg_L1")
    bp.add_argument("--L2", type=int, dest="deg_L2")
    bp.add_argument("--special", action="store_true", help="do not assume a generic bundle")
    bp.add_argument("--h0", type=int, dest="h0_override")
    return parser


def _load(args) -> Config:
    cfg = load_config(args.config) if getattr(args, "config", None) else Config()
    if getattr(args, "output", None):
        cfg.output = args.output
    if getattr(args, "cache_dir", None) is not None:
        cfg.cache_dir = args.cache_dir
    if getattr(args, "quadric", False):
        cfg.surface = {"model": Model.QUADRIC.value}
    elif getattr(args, "degree", None) is not None:
        cfg.surface = {"degree": args.degree}
    elif getattr(args, "r", None) is not None:
        cfg.surface = {"r": args.r}
    return cfg


def _emit(cfg: Config, payload, table_lines: list[str], out=None) -> None:
    out = out or sys.stdout
    if cfg.output == "table":
        out.write("\n".join(table_lines) + "\n")
    else:
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# -- commands ---------------------------------------------------------------


def cmd_surface_info(args, cfg: Config) -> int:
    lat = cfg.lattice()
    cache = cfg.resolved_cache_dir()
    ls, _ = cached_enumeration(lat, 1, -1, cache)
    cs, _ = cached_enumeration(lat, 2, 0, cache)
    ss, _ = cached_enumeration(lat, 3, 1, cache)
    payload = {
        "surface": str(lat),
        "lattice": lat.to_json(),
        "rank": lat.rank,
        "degree": lat.degree,
        "K_squared": lat.degree,
        "lines": len(ls),
        "conic_classes": len(cs),
        "line_systems": len(ss),
    }
    if lat.model is Model.QUADRIC:
        payload["rulings"] = len(cs)
    lines_out = [f"{k}: {v}" for k, v in payload.items() if k != "lattice"]
    _emit(cfg, payload, lines_out)
    return EXIT_OK


def cmd_enumerate(args, cfg: Config) -> int:
    lat = cfg.lattice()
    if args.antideg < 1:
        raise ConfigError("--antideg must be >= 1")
    classes, hit = cached_enumeration(lat, args.antideg, args.selfint, cfg.resolved_cache_dir())
    payload = [list(c.coords) for c in classes]
    if cfg.output == "json":
        sys.stdout.write(dumps_canonical(payload) + "\n")
    else:
        _emit(cfg, payload, [" ".join(map(str, c)) for c in payload])
    return EXIT_OK


def cmd_cones(args, cfg: Config) -> int:
    lat = cfg.lattice()
    nef = cones.nef_curve_cone(lat, args.ray_cap)
    eff = cones.effective_generators(lat)
    payload = {
        "surface": str(lat),
        "effective_generators": [list(e.coords) for e in eff],
        "nef_curve_cone": nef.to_json(),
        "nef_rays": len(nef.generators),
    }
    table = [f"surface: {lat}", f"effective generators: {len(eff)}", f"nef rays: {len(nef.generators)}"]
    table += ["  " + " ".join(map(str, r)) for r in nef.generators]
    _emit(cfg, payload, table)
    return EXIT_OK


def cmd_alpha(args, cfg: Config) -> int:
    lat = cfg.lattice()
    res = cones.alpha_constant(lat, args.ray_cap)
    payload = {"surface": str(lat), **res.to_json(), "alpha_decimal": counting.decimal_string(res.alpha)}
    table = [f"surface: {lat}", f"rho: {res.rho}", f"volume: {res.polytope_volume}", f"alpha: {res.alpha}"]
    if args.monte_carlo:
        est = cones.monte_carlo_volume(lat, samples=args.monte_carlo)
        payload["monte_carlo_volume"] = est
        table.append(f"monte carlo volume: {est:.6g}")
    _emit(cfg, payload, table)
    return EXIT_OK


def cmd_thresholds(args, cfg: Config) -> int:
    fib = dict(cfg.fibration)
    for key, val in (("base_genus", args.genus), ("neg", args.neg), ("m_xb", args.m_xb), ("fiber_degree", args.fiber_degree)):
        if val is not None:
            fib[key] = val
    if args.maxdef:
        try:
            fib["maxdef"] = json.loads(args.maxdef)
        except ValueError as e:
            raise ConfigError(f"--maxdef is not valid JSON: {e}") from e
    fib.setdefault("base_genus", 0)
    fib.setdefault("fiber_degree", 3)
    cfg.fibration = fib
    desc = cfg.descriptor()
    report = fibration.threshold_report(desc)
    table = [
        f"C(X) = {report['C']['value']}",
        f"non-free bound = {report['nonfree']['value']} (strict {report['nonfree']['strict_value']})",
        f"Q(X) = {report['Q']['value']} (upper bound for the movable bend-and-break height)",
        f"surface MBB threshold = {report['surface_mbb']}",
    ]
    for name in ("C", "nonfree", "Q"):
        table += [f"  {name}: {k} = {v}" for k, v in report[name]["terms"].items()]
    _emit(cfg, report, table)
    return EXIT_OK


def _parse_offset(text: str, lat: PicardLattice) -> ClassVector:
    try:
        c = ClassVector(int(x) for x in text.split(","))
    except ValueError as e:
        raise ConfigError(f"bad --offset {text!r}") from e
    try:
        lat.check(c)
    except LatticeError as e:
        raise ConfigError(str(e)) from e
    return c


def cmd_count(args, cfg: Config) -> int:
    lat = cfg.lattice()
    cc = cfg.counting
    q = args.q if args.q is not None else cc.q
    d_max = args.dmax if args.dmax is not None else cc.d_max
    stride = args.stride if args.stride is not None else cc.stride
    genus = args.genus if args.genus is not None else cc.genus
    if args.offset:
        offset = _parse_offset(args.offset, lat)
    elif cc.offset is not None:
        offset = _parse_offset(",".join(map(str, cc.offset)), lat)
    else:
        offset = None
    if q <= 1 or d_max < 0 or stride < 1:
        raise ConfigError("need q > 1, dmax >= 0 and stride >= 1")
    model = counting.CountingModel(
        lat, genus, offset, q, cc.brauer_order, cc.profile_count, cc.lattice_index
    )
    report = counting.convergence_report(model, d_max, stride, args.work_budget)
    out_fmt = cfg.output if cfg.output != "table" else "csv"
    buf = io.StringIO()
    if out_fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in report.rows:
            w.writerow([row.d, row.N.numerator, row.N.denominator,
                        counting.decimal_string(row.ratio), counting.decimal_string(row.target)])
    else:
        buf.write(json.dumps({"surface": str(lat), **report.to_json()}, indent=2, sort_keys=True) + "\n")
    if args.out:
        Path(args.out).write_text(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    msg = sys.stderr if not args.out else sys.stdout
    if report.rows:
        last = report.rows[-1]
        print(
            f"final d={last.d}: ratio {counting.decimal_string(last.ratio)} vs target "
            f"{counting.decimal_string(last.target)} (rel. dev. {float(last.relative_error):.3%})",
            file=msg,
        )
    for note in report.notes:
        print(f"note: {note}", file=msg)
    if report.truncated:
        print(f"TRUNCATED: enumeration budget reached, rows stop before d={report.truncated_at}", file=msg)
    return EXIT_OK


def cmd_monoid_check(args, cfg: Config) -> int:
    lat = cfg.lattice()
    mc = cfg.monoid
    horizon = args.horizon if args.horizon is not None else int(mc.get("horizon", 12))
    s = args.generators if args.generators is not None else int(mc.get("generators", 2))
    if s < 1:
        raise ConfigError("--generators must be >= 1")
    zero = ClassVector((0,) * lat.rank)
    if "base_classes" in mc:
        base = [lat.cls(c) for c in mc["base_classes"]]
        if len(base) != s:
            raise ConfigError("monoid.base_classes must list one class per generator")
    else:
        # distinct low-degree nef classes as base components
        pts = sorted((c for c, _ in cones.nef_points(lat, zero, 6)), key=lambda c: (anticanonical_degree(lat, c), c.coords))
        if len(pts) < s:
            raise ConfigError("not enough low-degree nef classes for that many generators")
        base = pts[:s]
    if args.no_relations or mc.get("relations") == "none":
        rels = monoid.RelationSet([])
    else:
        alpha = base[0]
        for b in base[1:]:
            alpha = alpha + b
        rels = monoid.claim_relations(lat, base, alpha)
    rep = monoid.saturate_and_check(s, rels, lat, horizon, base)
    payload = {"surface": str(lat), "generators": s, "base_classes": [list(b.coords) for b in base], **rep.to_json()}
    bad = [r for r in rep.rows if r.fiber_size != 1]
    table = [
        f"surface: {lat}, generators: {s}, horizon: {horizon}",
        f"classes checked: {len(rep.rows)}, non-singleton fibers: {len(bad)}",
        "SUCCESS" if rep.success else "FAILURE",
    ]
    _emit(cfg, payload, table)
    return EXIT_OK if rep.success else EXIT_COMPUTE


def cmd_bundle_predicates(args, cfg: Config) -> int:
    data = dict(cfg.bundle)
    for key in ("genus", "rank", "structure", "deg_L1", "deg_L2", "h0_override"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.total is not None:
        data["total_degree"] = args.total
    if args.special:
        data["generic"] = False
    data.setdefault("genus", 0)
    data.setdefault("rank", 2 if data.get("structure") else 1)
    if data.get("rank") == 1:
        data.pop("structure", None)
    try:
        b = bundles.NormalBundleDescriptor.from_json(data)
    except (TypeError, bundles.DescriptorError) as e:
        raise ConfigError(f"bad bundle descriptor: {e}") from e
    h = bundles.cohomology(b)
    mgp = bundles.max_general_points(b, b.rank)
    payload = {
        "descriptor": b.to_json(),
        "chi": b.chi,
        "h1_vanishes": bundles.h1_vanishes(b).value,
        "h0": h.h0 if isinstance(h.h0, int) else {"lower": h.h0.lower, "upper": h.h0.upper},
        "max_general_points": mgp if isinstance(mgp, int) else mgp.value,
        "relatively_free": bundles.is_relatively_free(b).value,
    }
    _emit(cfg, payload, [f"{k}: {v}" for k, v in payload.items() if k != "descriptor"])
    return EXIT_OK


COMMANDS = {
    "enumerate": cmd_enumerate,
    "cones": cmd_cones,
    "alpha": cmd_alpha,
    "thresholds": cmd_thresholds,
    "count": cmd_count,
    "monoid-check": cmd_monoid_check,
    "bundle-predicates": cmd_bundle_predicates,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _load(args)
        handler = cmd_surface_info if args.command == "surface" else COMMANDS[args.command]
        return handler(args, cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except fibration.MaxDefHorizonError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ValueError, ArithmeticError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
