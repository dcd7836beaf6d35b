"""Command-line entry point: ``toric-ccc <subcommand> ...``."""

import argparse
import sys

from . import errors
from .bundles import (
    KClass, TDivisor, anticanonical, cohomology, graded_hom,
    moment_polytope, nef_h0_count, positivity,
)
from .ccc import CostandardObject, ccc_verify, kappa
from .charcycle import characteristic_cycle, dk_pairing, kappa_sheaf, verdier_flip
from .fanio import load_fan
from .fans import classify, surface_self_intersections
from .figures import KINDS, FigureSpec, render_svg, tdual_graph_p1
from .lg import critical_points, hori_vafa, tropicalize
from .morelli import euler_integral, i_t, morelli_image_check

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CODES = (
    (errors.ParseError, 3),
    (errors.UnknownFanError, 4),
    (errors.InvalidFanError, 5),
    (errors.NotAmpleError, 6),
    (errors.UnsupportedRankError, 7),
    (errors.UnsupportedFanError, 7),
    (errors.UnsupportedCycleError, 7),
    (errors.DegenerateInputError, 8),
    (errors.BoundingRegionError, 9),
    (errors.ToleranceInstabilityError, 9),
    (errors.NoCriticalPointsError, 10),
    (errors.IncompatibleFigureError, 11),
    (errors.ToricError, 12),
)


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _term(text):
    coeff, _, divisor = text.partition(":")
    if not divisor:
        raise argparse.ArgumentTypeError(f"expected COEFF:c1,c2,..., got {text!r}")
    try:
        return int(coeff), _ints(divisor)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad coefficient in {text!r}") from None


def _bool(x):
    return "true" if x else "false"


def _vec(v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def _divisor(fan, coeffs):
    if len(coeffs) != len(fan.rays):
        raise errors.ParseError(f"divisor needs {len(fan.rays)} coefficients, got {len(coeffs)}", "divisor")
    return TDivisor(coeffs)


# --- subcommands -----------------------------------------------------------------

def cmd_fan_check(args, out):
    doc = load_fan(args.fan)
    fan = doc.fan
    for w in doc.warnings:
        out.append(f"warning\t{w}")
    flags = classify(fan)
    out.append(f"rank\t{fan.rank}")
    out.append(f"rays\t{len(fan.rays)}")
    out.append(f"cones\t{len(fan.all_cones)}")
    out.append(f"smooth\t{_bool(flags.smooth)}")
    out.append(f"complete\t{_bool(flags.complete)}")
    out.append(f"simplicial\t{_bool(flags.simplicial)}")
    if flags.failed_test:
        out.append(f"failed_test\t{flags.failed_test}")
    if flags.smooth and flags.complete:
        pos = positivity(fan, anticanonical(fan))
        out.append(f"anticanonical_ample\t{_bool(pos.ample)}")
        out.append(f"anticanonical_nef\t{_bool(pos.nef)}")
        if fan.rank == 2:
            for i, k in sorted(surface_self_intersections(fan).items()):
                out.append(f"self_intersection\tD{i + 1}\t{k}")
    return EXIT_OK


def cmd_bundle(args, out):
    fan = load_fan(args.fan).fan
    d = _divisor(fan, args.d)
    pos = positivity(fan, d)
    out.append(f"ample\t{_bool(pos.ample)}")
    out.append(f"nef\t{_bool(pos.nef)}")
    mp = moment_polytope(fan, d).polytope
    if mp.is_bounded:
        out.append("vertices\t" + " ".join(_vec(v) for v in mp.ordered_vertices()))
    if pos.nef:
        out.append(f"lattice_points\t{nef_h0_count(fan, d)}")
    coh = cohomology(fan, d)
    out.append("total\t" + ",".join(map(str, coh.total_dims)))
    out.append(f"euler\t{coh.euler}")
    for w in coh.weights():
        out.append(f"weight\t{','.join(map(str, w))}\t" + ",".join(map(str, coh.at(w))))
    return EXIT_OK


def cmd_morelli(args, out):
    fan = load_fan(args.fan).fan
    k = KClass(fan, [(c, _divisor(fan, d)) for c, d in args.term])
    g = i_t(fan, k)
    integral = euler_integral(g)
    chi = k.euler()
    ok, failures = morelli_image_check(fan, g)
    out.append(f"euler_integral\t{integral}")
    out.append(f"coherent_euler\t{chi}")
    out.append(f"germs_certified\t{_bool(ok)}")
    for m in failures:
        out.append(f"uncertified\t{_vec(m)}")
    return EXIT_OK if ok and integral == chi else EXIT_FAILED


def cmd_ccc_verify(args, out):
    fan = load_fan(args.fan).fan
    da, db = _divisor(fan, args.da), _divisor(fan, args.db)
    b = None
    if args.corrupt_polytope:
        # push the first facet of the target polytope out by one
        bad = TDivisor([c + (i == 0) for i, c in enumerate(db.coeffs)])
        b = CostandardObject(moment_polytope(fan, bad).polytope, fan.rank, db)
    else:
        b = kappa(fan, db)
    report = ccc_verify(fan, da, db, constructible_b=b)
    out.append(report.to_text().rstrip("\n"))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_cc_pairing(args, out):
    fan = load_fan(args.fan).fan
    da, db = _divisor(fan, args.da), _divisor(fan, args.db)
    c1 = verdier_flip(characteristic_cycle(kappa_sheaf(fan, da)))
    c2 = characteristic_cycle(kappa_sheaf(fan, db))
    value = dk_pairing(c1, c2, periodic=not args.weight_zero)
    if args.weight_zero:
        chi = graded_hom(fan, da, db).at((0,) * fan.rank)
        chi = sum((-1) ** k * x for k, x in enumerate(chi))
    else:
        chi = graded_hom(fan, da, db).euler
    out.append(f"pairing\t{value}")
    out.append(f"ext_euler\t{chi}")
    out.append("PASS" if value == chi else "FAIL")
    return EXIT_OK if value == chi else EXIT_FAILED


def cmd_lg(args, out):
    t = args.t if args.t is not None else [1.0, 1.0, 1.0, 1.0]
    if len(t) != 4:
        raise errors.ParseError("--t needs four values", "t")
    if args.action == "critical-points":
        cps = critical_points(hori_vafa(args.m, t), density=args.density)
        out.append(f"count\t{len(cps)}")
        for z, v in zip(cps.points, cps.values):
            out.append("point\t" + "\t".join(_complex(x) for x in z) + "\tvalue\t" + _complex(v))
        return EXIT_OK
    curve = tropicalize(args.m, t)
    out.append(f"bounded_components\t{curve.bounded_components}")
    out.append(f"balanced\t{_bool(curve.is_balanced())}")
    for i, v in enumerate(curve.vertices):
        out.append(f"vertex\t{i}\t{_vec(v)}")
    for i, j, w in curve.edges:
        out.append(f"edge\t{i}\t{j}\tweight\t{w}")
    for i, d, w in curve.rays:
        out.append(f"ray\t{i}\t{_vec(d)}\tweight\t{w}")
    return EXIT_OK


def _complex(z):
    return f"{z.real:+.12f}{z.imag:+.12f}j"


def cmd_plot(args, out):
    if args.kind == "amoeba":
        source = tropicalize(args.m, args.t or [1, 1, 1, 1])
        spec = FigureSpec("amoeba", source, args.out)
    elif args.kind == "tdual-graph":
        c = args.c if args.c is not None else [0, 1]
        spec = FigureSpec("tdual-graph", tdual_graph_p1(c[0], c[1], args.samples), args.out)
    else:
        if not args.fan:
            raise errors.IncompatibleFigureError(f"{args.kind} figures need --fan")
        fan = load_fan(args.fan).fan
        d = _divisor(fan, args.d) if args.d is not None else None
        spec = FigureSpec(args.kind, fan, args.out, d)
    text = render_svg(spec)
    if not args.out:
        out.append(text.rstrip("\n"))
    else:
        out.append(f"wrote\t{args.out}")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="toric-ccc", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("fan-check", help="fan predicates and anticanonical positivity")
    s.add_argument("fan", help="library name or fan document path")
    s.set_defaults(func=cmd_fan_check)

    s = sub.add_parser("bundle", help="positivity, moment polytope and cohomology of O(D)")
    s.add_argument("--fan", required=True)
    s.add_argument("--d", type=_ints, required=True)
    s.set_defaults(func=cmd_bundle)

    s = sub.add_parser("morelli", help="indicator-function image of a K-class")
    s.add_argument("--fan", required=True)
    s.add_argument("--term", type=_term, action="append", required=True,
                   help="COEFF:c1,c2,... (repeatable)")
    s.set_defaults(func=cmd_morelli)

    s = sub.add_parser("ccc-verify", help="compare coherent and constructible homs")
    s.add_argument("--fan", required=True)
    s.add_argument("--da", type=_ints, required=True)
    s.add_argument("--db", type=_ints, required=True)
    s.add_argument("--corrupt-polytope", action="store_true",
                   help="replace the target polytope by a wrong one (must fail)")
    s.set_defaults(func=cmd_ccc_verify)

    s = sub.add_parser("cc-pairing", help="characteristic-cycle pairing against the Ext Euler characteristic")
    s.add_argument("--fan", required=True)
    s.add_argument("--da", type=_ints, required=True)
    s.add_argument("--db", type=_ints, required=True)
    s.add_argument("--weight-zero", action="store_true", help="pair without lattice translates")
    s.set_defaults(func=cmd_cc_pairing)

    s = sub.add_parser("lg", help="Hori-Vafa superpotential of F_m")
    s.add_argument("action", choices=("critical-points", "tropical"))
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--t", type=_floats)
    s.add_argument("--density", type=int, default=1)
    s.set_defaults(func=cmd_lg)

    s = sub.add_parser("plot", help="write an SVG figure")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("--fan")
    s.add_argument("--d", type=_ints)
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--t", type=_floats)
    s.add_argument("--c", type=_ints)
    s.add_argument("--samples", type=int, default=101)
    s.add_argument("--out")
    s.set_defaults(func=cmd_plot)
    return p


def run(argv):
    """``(exit status, report text)`` for an argument list."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), ""
    out = []
    try:
        status = args.func(args, out)
    except errors.ToricError as exc:
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                return code, f"error\t{type(exc).__name__}\t{exc}\n"
    except (ValueError, OSError) as exc:
        return EXIT_USAGE, f"error\t{type(exc).__name__}\t{exc}\n"
    return status, "\n".join(out) + "\n"


def main(argv=None):
    status, text = run(sys.argv[1:] if argv is None else argv)
    stream = sys.stdout if status in (EXIT_OK, EXIT_FAILED) else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
