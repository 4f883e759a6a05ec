"""cychom command line.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 for unreadable or malformed input and usage errors.
"""
import argparse
import os
import sys
from fractions import Fraction

from cychom import chern, complexes
from cychom.errors import CychomError, DegreeTooLarge, NotInvertible, ParseError, UnknownEntry
from cychom.io import dumps, load_algebra, load_cocycle, load_matrix, read_json

OK, FAIL, BAD_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


# ----------------------------------------------------------------------
# output


def _plain(x):
    """Something json.dumps accepts, with exact scalars as strings."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else "%d/%d" % (x.numerator, x.denominator)
    if hasattr(x, "passed"):
        return _plain({"passed": x.passed, "name": x.name, "counterexample": x.counterexample,
                       "details": x.details})
    return str(x)


def _text(obj, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append("%s%s:" % (pad, k))
                lines.extend(_text(v, indent + 1))
            else:
                lines.append("%s%s: %s" % (pad, k, _inline(v)))
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append("%s-" % pad)
                lines.extend(_text(v, indent + 1))
            else:
                lines.append("%s- %s" % (pad, _inline(v)))
    else:
        lines.append(pad + _inline(obj))
    return lines


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _message(exc):
    # KeyError subclasses would otherwise come out quoted
    return exc.args[0] if len(exc.args) == 1 and isinstance(exc.args[0], str) else str(exc)


def emit(report, fmt):
    report = _plain(report)
    if fmt == "text":
        print("\n".join(_text(report)))
    else:
        print(dumps(report))


# ----------------------------------------------------------------------
# inputs


def resolve_algebra(ref):
    """A spec file path, or the name of a gallery entry."""
    if os.path.exists(ref):
        return load_algebra(ref)
    from cychom.gallery import GALLERY
    if ref in GALLERY:
        return GALLERY[ref].algebra()
    raise ParseError("%s: no such file or gallery entry" % ref)


def _finite(A):
    if not A.is_finite:
        raise UsageError("%s is not finite dimensional; homology runs on finite algebras" % A.name)
    return A


# ----------------------------------------------------------------------
# subcommands


def cmd_validate(args):
    spec = read_json(args.file)
    if isinstance(spec, dict) and "kind" in spec:
        phi = load_cocycle(spec)
        return OK, {"valid": True, "kind": phi.kind, "degree": phi.degree, "verified": phi.verified,
                    "algebra": phi.carrier.name}
    A = load_algebra(spec)
    out = {"valid": True, "algebra": A.name, "field": A.field.spec(), "finite": A.is_finite}
    if A.is_finite:
        out["dim"] = A.dim
        out["commutative"] = A.is_commutative()
    out["traces"] = sorted(A.traces)
    out["derivations"] = sorted(getattr(A, "derivations", {}))
    return OK, out


def cmd_homology(args):
    A = _finite(resolve_algebra(args.file))
    cap = args.size_cap
    n = args.max_degree
    if args.theory == "hh":
        return OK, complexes.hochschild_homology(A, n, cap).to_json()
    if args.theory == "cohomology":
        return OK, complexes.hochschild_cohomology(A, args.coeff, n, cap).to_json()
    if args.theory == "hp":
        rep = complexes.periodic_cyclic(A, args.parity, max(n, 2), cap)
        return OK, rep.to_json()
    rep = complexes.cyclic_homology(A, n, args.method, cap)
    out = rep.to_json()
    if args.method == "quotient":
        try:
            other = complexes.cyclic_homology(A, n, "bB_bicomplex", cap)
        except DegreeTooLarge as exc:
            out["cross_check"] = {"method": "bB_bicomplex", "skipped": str(exc)}
        else:
            agree = other.as_list() == rep.as_list()
            out["cross_check"] = {"method": "bB_bicomplex", "dims": other.as_list(), "agree": agree}
            if not agree:
                return FAIL, out
    return OK, out


def _default_unit(A):
    """1 + x for the first basis element x making it invertible."""
    for l in A.labels:
        u = A.one() + A.basis(l)
        try:
            u.inverse()
        except NotInvertible:
            continue
        return u
    return None


def cmd_audit(args):
    A = _finite(resolve_algebra(args.file))
    cap, n = args.size_cap, args.max_degree
    if args.suite == "identities":
        entries = complexes.operator_identity_audit(A, n, cap)
        passed = complexes.audit_passed(entries)
        out = {"suite": "identities", "algebra": A.name, "max_degree": n, "passed": passed,
               "entries": entries}
        if not passed:
            out["first_failure"] = complexes.first_failure(entries)
        return (OK if passed else FAIL), out
    if args.suite == "sbi":
        v = complexes.sbi_audit(A, n, cap)
    elif args.suite == "morita":
        k = getattr(A, "matrix_size", None)
        if k is not None:
            # a full matrix algebra M_k(F): audit F against it
            from cychom.constructions import truncated_poly
            v = complexes.morita_audit(k, truncated_poly(A.field, 1), n, cap)
        else:
            v = complexes.morita_audit(args.k, A, n, cap)
    else:
        u = _default_unit(A)
        a = A.zero()
        for l in A.labels:
            a = a + A.basis(l)
        v = complexes.inner_action_audit(A, u, a, n, cap)
    out = {"suite": args.suite, "algebra": A.name, "max_degree": n, "passed": v.passed,
           "details": v.details}
    return (OK if v.passed else FAIL), out


def cmd_pair(args):
    phi = load_cocycle(args.cocycle)
    A = phi.carrier
    m = load_matrix(A, args.element)
    F = A.field
    if phi.degree % 2 == 0:
        val = chern.pair_even(phi, m)
        kind = "even"
    else:
        val = chern.pair_odd(phi, m)
        kind = "odd"
    out = {"cocycle": phi.name, "degree": phi.degree, "pairing": kind, "value": F.format(val),
           "algebra": A.name}
    if args.family:
        u = load_matrix(A, args.family)
        if u.witness is None:
            u.certify_invertible()
        v = chern.conjugation_invariance_test(phi, m, u)
        out["family"] = v.details
        out["constant"] = v.passed
        return (OK if v.passed else FAIL), out
    return OK, out


def cmd_gallery(args):
    from cychom import acceptance, gallery
    if args.all:
        out = acceptance.run_all()
        return (OK if out["passed"] else FAIL), out
    if not args.name:
        return OK, {"entries": gallery.listing()}
    results = gallery.run_entry(args.name, args.size_cap)
    passed = all(r["passed"] for r in results)
    return (OK if passed else FAIL), {"entry": args.name, "passed": passed, "checks": results}


# ----------------------------------------------------------------------


def _common():
    # SUPPRESS keeps a flag given before the subcommand from being reset by it
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS)
    p.add_argument("--size-cap", type=int, default=argparse.SUPPRESS,
                   help="largest chain space (entries) any complex may use")
    return p


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="cychom", parents=[common],
                                     description="Exact Hochschild and cyclic homology.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check an algebra or cocycle spec")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("homology", parents=[common], help="HH, HC, HP or Hochschild cohomology")
    p.add_argument("file", help="spec file or gallery entry name")
    p.add_argument("--theory", choices=["hh", "hc", "hp", "cohomology"], default="hh")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--method", choices=["quotient", "cyclic_bicomplex", "bB_bicomplex", "all"],
                   default="quotient")
    p.add_argument("--coeff", choices=["A", "A_dual"], default="A_dual")
    p.add_argument("--parity", choices=["even", "odd"], default="even")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("audit", parents=[common], help="operator identities, SBI, inner actions, Morita")
    p.add_argument("file", help="spec file or gallery entry name")
    p.add_argument("--suite", choices=["identities", "sbi", "inner", "morita"], default="identities")
    p.add_argument("--max-degree", type=int, default=3)
    p.add_argument("--k", type=int, default=2,
                   help="matrix size for the Morita suite (M_k(F) inputs use F and their own k)")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("pair", parents=[common], help="Chern-Connes pairing")
    p.add_argument("--cocycle", required=True)
    p.add_argument("--element", required=True, help="idempotent or invertible matrix spec")
    p.add_argument("--family", help="invertible u_t; checks <phi, u e u^-1> is constant")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("gallery", parents=[common], help="list or run worked examples")
    p.add_argument("name", nargs="?")
    p.add_argument("--all", action="store_true", help="run the acceptance suite")
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    args.format = getattr(args, "format", "json")
    args.size_cap = getattr(args, "size_cap", None)
    if getattr(args, "max_degree", 0) < 0:
        print("cychom: --max-degree must be non-negative", file=sys.stderr)
        return BAD_INPUT
    try:
        code, report = args.func(args)
    except (ParseError, UnknownEntry, DegreeTooLarge, UsageError) as exc:
        emit({"error": type(exc).__name__, "message": _message(exc)}, args.format)
        return BAD_INPUT
    except CychomError as exc:
        out = {"error": type(exc).__name__, "message": _message(exc), "passed": False}
        for attr in ("triple", "pair", "label", "args_tuple", "residual"):
            if getattr(exc, attr, None) is not None:
                out["counterexample"] = getattr(exc, attr)
                break
        emit(out, args.format)
        return FAIL
    except (KeyError, IndexError, TypeError, ValueError, AttributeError) as exc:
        # structurally wrong JSON that slipped past the spec readers
        emit({"error": "ParseError", "message": "%s: %s" % (type(exc).__name__, _message(exc))}, args.format)
        return BAD_INPUT
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
