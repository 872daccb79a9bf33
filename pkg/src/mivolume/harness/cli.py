"""Command-line entry point.

Exit status: 0 when every applicable check holds, 2 when some check is
violated, 1 on an execution error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .. import _exact as ex
from ..centerpoint import (DirectionSearchConfig, basu_oertel_cbar, default_config, g_function,
                           g_is_increasing, oertel_radius_lower_bound,
                           reference_bounds, worst_direction_result)
from ..constructions import worst_case
from ..errors import GeometryError
from ..lattice import lattice_width, unimodular_enlarge
from ..mixed_integer import MixedIntegerBody, mu
from ..polytope import Halfspace, Polytope, centroid, volume
from . import report as rep
from .experiments import (LEMMAS, VerifyRow, check_corollary_width, check_theorem_general,
                          check_theorem_n1, sweep, verify_lemma)
from .families import FAMILIES, InstanceFamily, generate_instance, parse_params, random_polytope
from .oracle import mc_volume

log = logging.getLogger("mivolume")

EXIT_OK, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2


def load_instance(path: str):
    obj = json.loads(Path(path).read_text())
    if "n" in obj and "body" in obj:
        return MixedIntegerBody.from_json(obj)
    return Polytope.from_json(obj)


def _mixed(args) -> MixedIntegerBody:
    if args.instance:
        inst = load_instance(args.instance)
        if not isinstance(inst, MixedIntegerBody):
            raise GeometryError("expected a mixed-integer instance with keys n, d, body")
        return inst
    if args.family:
        params = parse_params(args.params)
        params.setdefault("seed", args.seed)
        return generate_instance(InstanceFamily(args.family, params))
    raise GeometryError("give --instance or --family")


def _polytope(args) -> Polytope:
    inst = load_instance(args.instance)
    return inst.body if isinstance(inst, MixedIntegerBody) else inst


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _overrides(args) -> dict:
    over = {}
    if getattr(args, "samples", None):
        over["sphere_samples"] = args.samples
    if getattr(args, "rmax", None):
        over["r_max"] = args.rmax
    if getattr(args, "refine", None) is not None:
        over["refine_iters"] = args.refine
    return over


def _cfg(args, dim: int) -> DirectionSearchConfig:
    return default_config(dim, seed=args.seed, **_overrides(args))


def _records_exit(records) -> int:
    return EXIT_VIOLATED if any(r.satisfied is False for r in records) else EXIT_OK


def _emit_records(args, records, fields=None) -> int:
    fields = fields or rep.ExperimentRecord.FIELDS
    _emit(args, rep.render(records, args.format, fields))
    return _records_exit(records)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_volume(args) -> int:
    P = _polytope(args)
    v = volume(P)
    out = {"dim": P.dim, "affine_dim": P.affine_dim, "volume": ex.fraction_to_json(v) if isinstance(v, Fraction) else v,
           "volume_float": float(v)}
    if not P.is_empty:
        out["centroid"] = [ex.fraction_to_json(a) for a in centroid(P)]
    _emit_json(args, out)
    return EXIT_OK


def cmd_fibers(args) -> int:
    M = _mixed(args)
    fs = M.fiber_set
    if args.format == "json":
        _emit_json(args, {"total": ex.fraction_to_json(fs.total),
                          "fibers": [{"z": list(f.z), "vol_d": ex.fraction_to_json(f.vol_d)} for f in fs]})
    else:
        _emit(args, fs.to_csv())
    return EXIT_OK


def _halfspace(args, dim: int) -> Halfspace:
    if args.halfspace:
        return Halfspace.from_json(json.loads(Path(args.halfspace).read_text()))
    if args.normal is None or args.point is None:
        raise GeometryError("give --halfspace FILE or both --normal and --point")
    u = ex.vec(args.normal.split(","))
    x = ex.vec(args.point.split(","))
    if len(u) != dim or len(x) != dim:
        raise GeometryError(f"normal and point need {dim} coordinates")
    return Halfspace.through(u, x)


def cmd_mu(args) -> int:
    M = _mixed(args)
    H = _halfspace(args, M.dim)
    v = mu(M, H)
    _emit_json(args, {"mu": ex.fraction_to_json(v), "mu_float": float(v)})
    return EXIT_OK


def cmd_centerpoint(args) -> int:
    M = _mixed(args)
    cfg = _cfg(args, M.dim)
    if args.point:
        x = ex.vec(args.point.split(","))
        res = worst_direction_result(M, x, cfg)
        out = {"point": [ex.fraction_to_json(a) for a in x], "value": ex.fraction_to_json(res.value),
               "value_float": float(res.value), "direction": [float(a) for a in res.direction],
               "directions_tested": res.directions_tested, "seed": cfg.seed}
    else:
        out = oertel_radius_lower_bound(M, cfg, max_fibers=args.max_candidates).to_json()
    _emit_json(args, out)
    return EXIT_OK


def cmd_oertel(args) -> int:
    M = _mixed(args)
    cfg = _cfg(args, M.dim)
    cert = oertel_radius_lower_bound(M, cfg, max_fibers=args.max_candidates)
    ref = reference_bounds(M.n, M.d)
    ok = cert.value >= ref.helly - Fraction(1, 1000)
    out = {"certificate": cert.to_json(), "reference": ref.as_dict(),
           "helly_floor_respected": bool(ok), "conjecture_respected": float(cert.value) >= ref.conjecture}
    _emit_json(args, out)
    return EXIT_OK if ok else EXIT_VIOLATED


def cmd_worst_case(args) -> int:
    wc = worst_case(args.n, args.d, ex.to_fraction(args.R))
    value = mu(wc.body, wc.halfspace)
    cfg = _cfg(args, wc.body.dim)
    cert = oertel_radius_lower_bound(wc.body, cfg, max_fibers=args.max_candidates)
    above = ex.to_fraction(args.R) >= wc.threshold
    exact = value == wc.expected
    close = abs(cert.value - wc.expected) <= Fraction(1, 1000)
    out = {"n": args.n, "d": args.d, "R": args.R, "threshold": ex.fraction_to_json(wc.threshold),
           "mu": ex.fraction_to_json(value), "expected": ex.fraction_to_json(wc.expected),
           "exact_match": exact, "oertel": cert.to_json(), "oertel_within_1e-3": bool(close)}
    _emit_json(args, out)
    return EXIT_OK if (exact or not above) and close else EXIT_VIOLATED


def cmd_verify(args) -> int:
    params = parse_params(args.params)
    rows = verify_lemma(args.lemma, args.count, args.seed, args.family, params)
    _emit(args, rep.render(rows, args.format, VerifyRow.FIELDS))
    return EXIT_VIOLATED if any(r.satisfied is False for r in rows) else EXIT_OK


def _k_values(args) -> list[int]:
    return [int(v) for v in args.k_values.split(",")] if args.k_values else []


def _theorem(args, kind: str) -> int:
    params = parse_params(args.params)
    timings = args.timings
    if args.k_values:
        recs = sweep(args.family, params, _k_values(args), kind, cfg_overrides=_overrides(args),
                     seed=args.seed, timings=timings, jobs=args.jobs)
        return _emit_records(args, recs)
    M = _mixed(args)
    fam_id = args.instance or InstanceFamily(args.family, {**params, "seed": args.seed}).instance_id()
    check = {"n1": check_theorem_n1, "general": check_theorem_general, "width": check_corollary_width}[kind]
    recs = check(M, _cfg(args, M.dim), fam_id, args.seed, timings)
    return _emit_records(args, recs)


def cmd_theorem_n1(args) -> int:
    return _theorem(args, "n1")


def cmd_theorem_general(args) -> int:
    return _theorem(args, "general")


def cmd_corollary_width(args) -> int:
    if args.k_values:
        raise GeometryError("corollary-width runs on a single instance")
    return _theorem(args, "width")


def cmd_lattice_width(args) -> int:
    D = _polytope(args)
    _emit_json(args, lattice_width(D, args.bound).to_json())
    return EXIT_OK


def cmd_enlarge(args) -> int:
    D = _polytope(args)
    res = unimodular_enlarge(D, budget=args.budget, width_bound=args.bound)
    _emit_json(args, res.to_json())
    return EXIT_OK


def cmd_mc_check(args) -> int:
    rows = []
    if args.instance:
        polys = [("instance", _polytope(args))]
    else:
        dims = [int(v) for v in args.dims.split(",")]
        polys = [(f"random_polytope[dim={dim},seed={args.seed + i}]", random_polytope(dim, args.seed + i))
                 for dim in dims for i in range(args.count)]
    ok_all = True
    for i, (name, P) in enumerate(polys):
        exact = float(volume(P))
        est, se = mc_volume(P, args.samples, args.seed + i)
        ok = abs(est - exact) <= 3 * se if se > 0 else abs(est - exact) <= 1e-12
        ok_all &= ok
        rows.append({"instance_id": name, "dim": P.dim, "exact": repr(exact), "estimate": repr(est),
                     "stderr": repr(se), "within_3se": "yes" if ok else "no"})
    if args.format == "json":
        _emit_json(args, rows)
    else:
        import csv
        import io

        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else ["instance_id"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        _emit(args, buf.getvalue())
    return EXIT_OK if ok_all else EXIT_VIOLATED


def cmd_report(args) -> int:
    records = []
    for path in args.inputs:
        records += rep.read_records(path)
    _emit(args, rep.render(records, args.format))
    if args.plot_data:
        Path(args.plot_data).write_text(rep.plot_data(records))
    if args.plot:
        rep.plot_figure(records, args.plot)
    return _records_exit(records)


def cmd_cbar(args) -> int:
    c = basu_oertel_cbar()
    _emit_json(args, {"cbar": c, "g_at_1": g_function(1.0), "g_increasing_on_grid": g_is_increasing()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (recorded in outputs)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="store_true")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--instance", help="instance JSON file")
    source.add_argument("--family", choices=sorted(FAMILIES))
    source.add_argument("--params", help="family parameters, e.g. k=8,n=1,d=1")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--samples", type=int, help="uniform sphere directions")
    search.add_argument("--rmax", type=float, help="scale of integer-dominant composite directions")
    search.add_argument("--refine", type=int, help="coordinate refinement iterations")
    search.add_argument("--max-candidates", type=int, default=64, help="fiber centroids tried")

    p = argparse.ArgumentParser(prog="mivolume", description="Mixed-integer volume and centerpoint toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, parents, help_text):
        sp = sub.add_parser(name, parents=parents, help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("volume", cmd_volume, [common], "exact volume and centroid of a polytope")
    sp.add_argument("--instance", required=True)

    add("fibers", cmd_fibers, [common, source], "fiber volumes of a mixed-integer body")

    sp = add("mu", cmd_mu, [common, source], "mixed-integer measure of a halfspace")
    sp.add_argument("--halfspace", help="JSON {normal, offset}")
    sp.add_argument("--normal", help="comma-separated u")
    sp.add_argument("--point", help="comma-separated x on the boundary")

    sp = add("centerpoint", cmd_centerpoint, [common, source, search], "worst halfspace at a point or best candidate")
    sp.add_argument("--point", help="evaluate this point instead of the candidate list")

    add("oertel", cmd_oertel, [common, source, search], "certified lower bound on the Oertel radius")

    sp = add("verify", cmd_verify, [common], "per-lemma checks on seeded instances")
    sp.add_argument("--lemma", choices=LEMMAS, required=True)
    sp.add_argument("--family", choices=sorted(FAMILIES))
    sp.add_argument("--params")
    sp.add_argument("--count", type=int, default=50)

    for name, func, text in (("theorem-n1", cmd_theorem_n1, "one integer variable"),
                             ("theorem-general", cmd_theorem_general, "ball in the projection"),
                             ("corollary-width", cmd_corollary_width, "lattice-width version")):
        sp = add(name, func, [common, source, search], f"main bound check: {text}")
        sp.add_argument("--k-values", help="comma-separated sweep over k")
        sp.add_argument("--timings", action="store_true", help="fill runtime_ms (breaks byte identity)")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for a --k-values sweep")

    sp = add("worst-case", cmd_worst_case, [common, search], "tight example [0,1]^n x simplex")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--R", default="100")

    sp = add("lattice-width", cmd_lattice_width, [common], "lattice width of a projection")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--bound", type=int, default=2)

    sp = add("enlarge", cmd_enlarge, [common], "greedy unimodular rounding")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--budget", type=int, default=4)
    sp.add_argument("--bound", type=int, default=2)

    sp = add("mc-check", cmd_mc_check, [common], "exact volume vs Monte Carlo")
    sp.add_argument("--instance")
    sp.add_argument("--dims", default="2,3,4,5")
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--samples", type=int, default=100_000)

    sp = add("report", cmd_report, [common], "merge record files; optional plot data and figure")
    sp.add_argument("inputs", nargs="+")
    sp.add_argument("--plot-data", help="write gnuplot-ready columns here")
    sp.add_argument("--plot", help="write a PNG figure here (needs matplotlib)")

    add("cbar", cmd_cbar, [common], "large-set constant root and g(1)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (GeometryError, ValueError, OSError, json.JSONDecodeError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
