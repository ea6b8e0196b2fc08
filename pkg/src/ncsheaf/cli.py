"""``ncsheaf`` command line front end.

Every input flag takes either a path to a JSON file or inline JSON text.
Results are written as canonical JSON to ``--out`` (default stdout).
Exit status: 0 on success, 1 on domain errors, 2 on unreadable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import serialize as ser
from .domains import (INTERSECT, UNION, build_w_tuple, base_open, exhaust,
                      omega_combine, omega_member, omega_validate)
from .errors import NcSheafError, ParseError
from .growth import GrowthThresholds, growth_fit, norm_weighted, seminorm_cn, sup_disk
from .matrep import (derived_series, pi_tilde, sigma_exact,
                     sigma_rep, strict_nilpotency_check, tri_mul, triangular_basis)
from .sheaf import embed_u, glue, nc_mul, section_eval, tau_restrict
from .uea import COMPLEX, REAL, GaussianRational, pbw_bracket, pbw_mul, pbw_mul_oracle


def load(arg):
    """JSON from a file path or from inline text."""
    if arg is None:
        raise ParseError("missing required input")
    text = arg.strip()
    if text[:1] in "{[":
        return ser.loads(text)
    try:
        with open(arg, encoding="utf-8") as fh:
            return ser.loads(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {arg!r}: {exc.strerror}") from exc


def scalar(text, field):
    """``"3/2"`` or, for complex input, ``"re,im"``."""
    try:
        if field == COMPLEX:
            parts = text.split(",")
            if len(parts) == 1:
                return GaussianRational(Fraction(parts[0]))
            if len(parts) == 2:
                return GaussianRational(Fraction(parts[0]), Fraction(parts[1]))
            raise ValueError(text)
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {text!r}") from exc


def rational(text):
    return scalar(text, REAL)


def nonneg(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


# -- commands ------------------------------------------------------------------------


def _pbw_pair(args):
    return ser.pbw_from_json(load(args.a)), ser.pbw_from_json(load(args.b))


def cmd_mul(args):
    return {"type": "pbw", **ser.pbw_to_json(pbw_mul(*_pbw_pair(args)))}


def cmd_oracle_mul(args):
    return {"type": "pbw", **ser.pbw_to_json(pbw_mul_oracle(*_pbw_pair(args)))}


def cmd_bracket(args):
    return {"type": "pbw", **ser.pbw_to_json(pbw_bracket(*_pbw_pair(args)))}


def cmd_rep(args):
    a = ser.pbw_from_json(load(args.a))
    V = ser.omega_from_json(load(args.inp)) if args.inp else None
    return {"type": "tri_matrix", **ser.trimatrix_to_json(pi_tilde(a, args.q, V))}


def cmd_sigma(args):
    r = scalar(args.r, args.field)
    exact = sigma_exact(r, args.q, args.gen, args.field)
    numeric = sigma_rep(complex(r) if args.field == COMPLEX else float(r), args.q, args.gen)
    return {"type": "numeric_matrix", **ser.numeric_to_json(numeric),
            "exact": ser.exact_matrix_to_json(exact, args.field)}


def cmd_omega_validate(args):
    check = omega_validate(ser.omega_from_json(load(args.inp)))
    out = {"valid": check.ok}
    if not check.ok:
        out.update(level=check.level, detail=check.detail)
    return out


def _omega_combine(op):
    def run(args):
        V = ser.omega_from_json(load(args.a))
        W = ser.omega_from_json(load(args.b))
        return {"type": "omega", **ser.omega_to_json(omega_combine(V, W, op))}
    return run


def cmd_omega_member(args):
    V = ser.omega_from_json(load(args.inp))
    return {"member": omega_member(V, scalar(args.r, V.space), args.q)}


def cmd_omega_wtuple(args):
    V = ser.omega_from_json(load(args.inp))
    return {"type": "domain_tuple", **ser.domain_tuple_to_json(build_w_tuple(V, args.q))}


def cmd_omega_base(args):
    V = base_open(scalar(args.lam, COMPLEX), args.p, rational(args.eps))
    return {"type": "omega", **ser.omega_to_json(V)}


def _section_doc(s):
    return {"type": "section", **ser.section_to_json(s),
            "density_guaranteed": s.density_guaranteed}


def cmd_sheaf_embed(args):
    a = ser.pbw_from_json(load(args.a))
    V = ser.omega_from_json(load(args.inp))
    return _section_doc(embed_u(a, V))


def cmd_sheaf_mul(args):
    s = ser.section_from_json(load(args.a))
    t = ser.section_from_json(load(args.b))
    V = ser.omega_from_json(load(args.inp)) if args.inp else s.parent
    return _section_doc(nc_mul(V, s, t))


def cmd_sheaf_restrict(args):
    s = ser.section_from_json(load(args.a))
    V = ser.omega_from_json(load(args.inp)) if args.inp else s.parent
    W = ser.omega_from_json(load(args.w))
    return _section_doc(tau_restrict(V, W, s))


def cmd_sheaf_glue(args):
    doc = load(args.inp)
    sections = [ser.section_from_json(s) for s in ser._list(ser._get(doc, "sections"), "sections")]
    if "cover" in doc:
        cover = [ser.omega_from_json(v) for v in ser._list(doc["cover"], "cover")]
    else:
        cover = [s.parent for s in sections]
    return _section_doc(glue(cover, sections))


def cmd_sheaf_eval(args):
    s = ser.section_from_json(load(args.a))
    value = section_eval(s, args.q, scalar(args.x, s.field))
    return {"value": ser.scalar_to_json(value, s.field)}


def cmd_tri_mul(args):
    A = ser.trimatrix_from_json(load(args.a))
    B = ser.trimatrix_from_json(load(args.b))
    return {"type": "tri_matrix", **ser.trimatrix_to_json(tri_mul(A, B))}


def cmd_tri_solvable(args):
    if args.inp:
        doc = load(args.inp)
        field = ser._field(doc)
        gens = []
        for g in ser._list(ser._get(doc, "generators"), "generators"):
            if isinstance(g, dict):
                gens.append(ser.numeric_from_json(g))
            else:
                gens.append(ser.exact_matrix_from_json(g, field))
    elif args.p is not None:
        gens = triangular_basis(args.p)
    else:
        raise ParseError("tri solvable needs --in or --p")
    series = derived_series(gens)
    return {"dims": list(series.dims), "solvable": series.solvable,
            "rationalized": series.rationalized}


def cmd_tri_nilpotency(args):
    return {"index": strict_nilpotency_check(args.p)}


def _poly_and_compact(args):
    f = ser.poly_from_json(load(args.a), args.field)
    K = ser.compact_from_json(load(args.k))
    return f, K


def cmd_norm_cn(args):
    f, K = _poly_and_compact(args)
    return {"value": ser.num(seminorm_cn(f, K, args.n))}


def cmd_norm_weighted(args):
    f, K = _poly_and_compact(args)
    return {"value": ser.num(norm_weighted(f, K, args.n))}


def cmd_norm_disk(args):
    f = ser.poly_from_json(load(args.a), args.field)
    return {"value": ser.num(sup_disk(f, scalar(args.center, COMPLEX), rational(args.radius)))}


def cmd_growth(args):
    doc = load(args.matrix)
    if "domains" in doc:
        b = ser.trimatrix_from_json(doc)
        K = ser.compact_from_json(load(args.k)) if args.k else None
    else:
        b = ser.numeric_from_json(doc)
        K = None
    s_min = float(rational(args.smin)) if args.smin else None
    thresholds = GrowthThresholds(residual=args.residual, slope=args.slope)
    report = growth_fit(b, float(rational(args.smax)), args.npts, K=K, s_min=s_min,
                        thresholds=thresholds)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(report.to_csv())
    return {"type": "growth_report", **ser.growth_report_to_json(report)}


def cmd_exhaust(args):
    K = ser.compact_tuple_from_json(load(args.k))
    W = ser.domain_tuple_from_json(load(args.w))
    return {"type": "compact_tuple", **ser.compact_tuple_to_json(exhaust(K, W))}


# -- parser ----------------------------------------------------------------------------


def _field_flag(p):
    p.add_argument("--field", choices=(REAL, COMPLEX), default=REAL)


def build_parser():
    parser = argparse.ArgumentParser(prog="ncsheaf", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output path (default: stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, text in (("mul", cmd_mul, "PBW product"),
                           ("oracle-mul", cmd_oracle_mul, "PBW product by word rewriting"),
                           ("bracket", cmd_bracket, "commutator ab - ba")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        p.set_defaults(func=fn)

    p = sub.add_parser("rep", parents=[common], help="polynomial matrix of an element at level q")
    p.add_argument("--a", required=True)
    p.add_argument("--q", type=nonneg, required=True)
    p.add_argument("--in", dest="inp", help="open set of Omega (default: all of Omega)")
    p.set_defaults(func=cmd_rep)

    p = sub.add_parser("sigma", parents=[common], help="generator matrix sigma_{r,q}(e1|e2)")
    p.add_argument("--r", required=True)
    p.add_argument("--q", type=nonneg, required=True)
    p.add_argument("--gen", choices=("e1", "e2"), required=True)
    _field_flag(p)
    p.set_defaults(func=cmd_sigma)

    omega = sub.add_parser("omega", help="open subsets of Omega").add_subparsers(
        dest="action", required=True)
    p = omega.add_parser("validate", parents=[common])
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_omega_validate)
    for name, op in (("union", UNION), ("intersect", INTERSECT)):
        p = omega.add_parser(name, parents=[common])
        p.add_argument("--a", required=True)
        p.add_argument("--b", required=True)
        p.set_defaults(func=_omega_combine(op))
    p = omega.add_parser("member", parents=[common])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--q", type=nonneg, required=True)
    p.set_defaults(func=cmd_omega_member)
    p = omega.add_parser("wtuple", parents=[common])
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--q", type=nonneg, required=True)
    p.set_defaults(func=cmd_omega_wtuple)
    p = omega.add_parser("base", parents=[common])
    p.add_argument("--lambda", dest="lam", required=True, help='center, "re" or "re,im"')
    p.add_argument("--p", type=nonneg, required=True)
    p.add_argument("--eps", required=True)
    p.set_defaults(func=cmd_omega_base)

    sheaf = sub.add_parser("sheaf", help="sections over open sets").add_subparsers(
        dest="action", required=True)
    p = sheaf.add_parser("embed", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(func=cmd_sheaf_embed)
    p = sheaf.add_parser("mul", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--in", dest="inp")
    p.set_defaults(func=cmd_sheaf_mul)
    p = sheaf.add_parser("restrict", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--in", dest="inp")
    p.set_defaults(func=cmd_sheaf_restrict)
    p = sheaf.add_parser("glue", parents=[common])
    p.add_argument("--in", dest="inp", required=True,
                   help='{"sections": [...], "cover": [...] (optional)}')
    p.set_defaults(func=cmd_sheaf_glue)
    p = sheaf.add_parser("eval", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--q", type=nonneg, required=True)
    p.add_argument("--x", required=True)
    p.set_defaults(func=cmd_sheaf_eval)

    tri = sub.add_parser("tri", help="triangular matrix algebras").add_subparsers(
        dest="action", required=True)
    p = tri.add_parser("mul", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_tri_mul)
    p = tri.add_parser("solvable", parents=[common])
    p.add_argument("--in", dest="inp")
    p.add_argument("--p", type=nonneg)
    p.set_defaults(func=cmd_tri_solvable)
    p = tri.add_parser("nilpotency", parents=[common])
    p.add_argument("--p", type=nonneg, required=True)
    p.set_defaults(func=cmd_tri_nilpotency)

    norm = sub.add_parser("norm", help="seminorms of polynomials").add_subparsers(
        dest="action", required=True)
    for name, fn in (("cn", cmd_norm_cn), ("weighted", cmd_norm_weighted)):
        p = norm.add_parser(name, parents=[common])
        p.add_argument("--a", required=True)
        p.add_argument("--k", required=True)
        p.add_argument("--n", type=nonneg, required=True)
        _field_flag(p)
        p.set_defaults(func=fn)
    p = norm.add_parser("disk", parents=[common])
    p.add_argument("--a", required=True)
    p.add_argument("--center", required=True)
    p.add_argument("--radius", required=True)
    _field_flag(p)
    p.set_defaults(func=cmd_norm_disk)

    p = sub.add_parser("growth", parents=[common], help="fit ||exp(isb)|| against (1+|s|)^alpha")
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", help="compact set, for function-valued matrices")
    p.add_argument("--smax", required=True)
    p.add_argument("--smin")
    p.add_argument("--npts", type=nonneg, default=64)
    p.add_argument("--residual", type=float, default=GrowthThresholds.residual)
    p.add_argument("--slope", type=float, default=GrowthThresholds.slope)
    p.add_argument("--csv", help="also write the samples as CSV")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("exhaust", parents=[common], help="enlarge compacts to a tuple with the inclusion property")
    p.add_argument("--k", required=True)
    p.add_argument("--w", required=True)
    p.set_defaults(func=cmd_exhaust)
    return parser


def run(argv=None):
    """Execute one request; returns ``(exit_status, output_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        text = ser.dumps(args.func(args))
    except ParseError as exc:
        print(f"ncsheaf: input error: {exc}", file=sys.stderr)
        return 2, ""
    except NcSheafError as exc:
        print(f"ncsheaf: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1, ""
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        print(f"ncsheaf: input error: {exc}", file=sys.stderr)
        return 2, ""
    if args.out:
        tmp = args.out + ".tmp"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, args.out)
        return 0, ""
    return 0, text


def main(argv=None):
    status, text = run(argv)
    if status == 0 and text:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
