"""Command-line front end.

Subcommands:
  ssgraph               supersingular classes and ell-isogeny adjacency
  eigensystems          simultaneous Hecke eigensystems
  dieudonne verify      structural certificate for the standard module
  hermitian diagonalize exact diagonalization of a positive hermitian form
  coset                 local double-coset representatives
  oracle tau            Ramanujan tau values by direct series expansion
  selftest              run the full verification suite

JSON output carries a top-level {"schema": "ssmod/1"} key and sorted keys,
so identical configurations produce byte-identical output.  Exit codes:
0 success, 1 check failure, 2 configuration or budget error.  The env var
SSMOD_BUDGET raises the enumeration caps used by scans.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import ff
from .ff import SSModError, BudgetError
from .qexp import delta_coefficients
from .sslocus import (build_sigma, hecke_matrix, eigensystems,
                      supersingular_classes, eichler_mass)
from .dieudonne import verify_certificate
from . import quatherm as qh
from . import localhecke as lh
from . import acceptance

SCHEMA = "ssmod/1"

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2


def _apply_budget():
    raw = os.environ.get("SSMOD_BUDGET")
    if raw:
        cap = int(raw)
        ff.SCAN_BUDGET = max(ff.SCAN_BUDGET, cap)
        lh.LAGRANGIAN_BUDGET = max(lh.LAGRANGIAN_BUDGET, cap)


def _emit_json(payload):
    payload = dict(payload)
    payload["schema"] = SCHEMA
    print(json.dumps(payload, sort_keys=True))


def _require_prime(p):
    if not lh._is_prime(p):
        raise SSModError("p must be prime: %d" % p)


def _matrix_ints(M):
    return [[x.to_int() for x in row] for row in M]


def cmd_ssgraph(args):
    _require_prime(args.p)
    ells = [int(x) for x in args.ell.split(",")] if args.ell else [2]
    sig = build_sigma(args.p, args.N)
    classes = supersingular_classes(args.p)
    payload = {
        "p": args.p,
        "N": args.N,
        "classes": [{"j": c.j.to_int(), "aut_order": len(c.auts)}
                    for c in classes],
        "mass": "%d/%d" % eichler_mass(classes),
        "points": len(sig.points),
        "adjacency": {},
    }
    for ell in ells:
        T = hecke_matrix(sig, ell, 0, brandt=True)
        payload["adjacency"][str(ell)] = _matrix_ints(T.matrix)
    if args.format == "csv":
        _matrices_to_csv(args.out, payload["adjacency"], args.p, args.N, 0)
    else:
        _emit_json(payload)
    return EXIT_OK


def _matrices_to_csv(prefix, mats, p, N, k):
    for ell, M in sorted(mats.items()):
        path = "%s_T%s.csv" % (prefix or "ssmod", ell)
        with open(path, "w") as fh:
            fh.write("ell=%s,k=%d,p=%d,N=%d\n" % (ell, k, p, N))
            for row in M:
                fh.write(",".join(str(x) for x in row) + "\n")
        print(path)


def cmd_eigensystems(args):
    _require_prime(args.p)
    ells = [int(x) for x in args.ell.split(",")]
    sig = build_sigma(args.p, args.N)
    mats = [hecke_matrix(sig, ell, args.k) for ell in ells]
    if args.format == "csv":
        _matrices_to_csv(args.out,
                         {str(e): _matrix_ints(m.matrix)
                          for e, m in zip(ells, mats)},
                         args.p, args.N, args.k)
        return EXIT_OK
    systems = eigensystems(mats)
    payload = {
        "p": args.p, "N": args.N, "k": args.k, "ells": ells,
        "systems": [{
            "values": [a.to_int() for a in s.values],
            "field_degree": s.values[0].params.m,
            "multiplicity": s.multiplicity,
        } for s in systems],
    }
    _emit_json(payload)
    return EXIT_OK


def cmd_dieudonne_verify(args):
    _require_prime(args.p)
    checks, notes = verify_certificate(args.p, args.n, args.g)
    payload = {
        "p": args.p, "n": args.n, "g": args.g,
        "checks": [{"name": name, "ok": ok} for name, ok in checks],
        "notes": notes,
    }
    _emit_json(payload)
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_CHECK_FAILED


def _parse_rational(s):
    if isinstance(s, str) and "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def _format_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def cmd_hermitian_diagonalize(args):
    with open(args.input) as fh:
        data = json.load(fh)
    p = data.get("p", 11)
    _require_prime(p)
    B = qh.build_algebra(p)
    raw = data["gram"]
    g = len(raw)
    gram = [[B.elt(*[_parse_rational(c) for c in raw[r][s]])
             for s in range(g)] for r in range(g)]
    form = qh.HermitianForm(B, gram)
    M = qh.hermitian_diagonalize(form,
                                 search_bound=data.get("search_bound", 50))
    payload = {
        "p": p, "g": g,
        "algebra": [_format_rational(B.a), _format_rational(B.b)],
        "transform": [[[_format_rational(c) for c in M[r][s].coeffs()]
                       for s in range(g)] for r in range(g)],
        "verified": True,
    }
    _emit_json(payload)
    return EXIT_OK


def cmd_coset(args):
    if args.group == "gl2":
        cl = lh.decompose_gl2(args.ell)
    else:
        cl = lh.decompose_gsp(args.g, args.ell)
    payload = {
        "group": args.group, "ell": args.ell, "g": args.g,
        "divisors": list(cl.divisors),
        "count": cl.count,
        "representatives": cl.reps,
    }
    _emit_json(payload)
    return EXIT_OK


def cmd_oracle_tau(args):
    coeffs = delta_coefficients(args.upto)
    payload = {"upto": args.upto, "tau": {}}
    if args.mod:
        _require_prime(args.mod)
        payload["mod"] = args.mod
    for n in range(1, args.upto + 1):
        v = coeffs[n - 1]
        if args.mod:
            v %= args.mod
        payload["tau"][str(n)] = v
    _emit_json(payload)
    return EXIT_OK


def cmd_selftest(args):
    names = args.only.split(",") if args.only else None
    results = acceptance.run_all(names)
    width = max(len(r["name"]) for r in results)
    for r in results:
        status = "PASS" if r["ok"] else "FAIL"
        print("%-*s  %s  %6.1fs  %s" % (width, r["name"], status,
                                        r["seconds"], r["detail"]))
    if args.json:
        _emit_json({"results": results})
    return EXIT_OK if all(r["ok"] for r in results) else EXIT_CHECK_FAILED


def build_parser():
    ap = argparse.ArgumentParser(prog="ssmod")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("ssgraph", help="supersingular classes and adjacency")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--N", type=int, default=1)
    g.add_argument("--ell", default="2", help="comma-separated primes")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("--out", default=None, help="csv file prefix")
    g.set_defaults(fn=cmd_ssgraph)

    e = sub.add_parser("eigensystems", help="simultaneous Hecke eigensystems")
    e.add_argument("--p", type=int, required=True)
    e.add_argument("--N", type=int, default=1)
    e.add_argument("--k", type=int, default=0)
    e.add_argument("--ell", default="2,3,5,7")
    e.add_argument("--format", choices=["json", "csv"], default="json")
    e.add_argument("--out", default=None)
    e.set_defaults(fn=cmd_eigensystems)

    d = sub.add_parser("dieudonne", help="Dieudonne module utilities")
    dsub = d.add_subparsers(dest="subcommand", required=True)
    dv = dsub.add_parser("verify", help="structural certificate")
    dv.add_argument("--p", type=int, required=True)
    dv.add_argument("--n", type=int, default=2)
    dv.add_argument("--g", type=int, default=1)
    dv.set_defaults(fn=cmd_dieudonne_verify)

    h = sub.add_parser("hermitian", help="quaternion hermitian forms")
    hsub = h.add_subparsers(dest="subcommand", required=True)
    hd = hsub.add_parser("diagonalize", help="diagonalize a positive form")
    hd.add_argument("--input", required=True,
                    help='JSON: {"p": 11, "gram": [[..]]}, rationals "a/b"')
    hd.set_defaults(fn=cmd_hermitian_diagonalize)

    c = sub.add_parser("coset", help="local double-coset representatives")
    c.add_argument("--group", choices=["gl2", "gsp"], required=True)
    c.add_argument("--g", type=int, default=1)
    c.add_argument("--ell", type=int, required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(fn=cmd_coset)

    o = sub.add_parser("oracle", help="independent oracles")
    osub = o.add_subparsers(dest="subcommand", required=True)
    ot = osub.add_parser("tau", help="Ramanujan tau by series expansion")
    ot.add_argument("--upto", type=int, default=7)
    ot.add_argument("--mod", type=int, default=None)
    ot.set_defaults(fn=cmd_oracle_tau)

    s = sub.add_parser("selftest", help="run the verification suite")
    s.add_argument("--only", default=None,
                   help="comma-separated check names")
    s.add_argument("--json", action="store_true")
    s.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        _apply_budget()
        return args.fn(args)
    except (BudgetError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except SSModError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
