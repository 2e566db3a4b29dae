"""Command-line front end.

Exit codes: 0 ok, 1 domain error, 2 usage error (bad arguments, unreadable or
malformed definition files).  Errors print as
``error[<code>]: <message>`` (or a JSON object under ``--json``).
``TMOTIF_PRECISION`` sets the default analytic precision; ``-P`` overrides it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import analytic as an
from .anderson import lie_check, motif_of_tmodule
from .dieudonne import is_fg_over_skew, newton_slopes, polygon_vertices
from .duality import PowerSeriesMap, dimension_identity, residue_pairing_perfectness, smith_valuations
from .errors import ParseError, TMotifError
from .ext1 import ExtClass, extension_to_point, point_to_extension, reduce_extension
from .frobenius import format_charpoly, frob_table
from .parse import parse_definitions, parse_scalar

ENV_PRECISION = "TMOTIF_PRECISION"
FALLBACK_PRECISION = 30


class UsageError(TMotifError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def default_precision() -> int:
    raw = os.environ.get(ENV_PRECISION)
    if raw is None:
        return FALLBACK_PRECISION
    try:
        v = int(raw)
    except ValueError:
        raise UsageError(f"{ENV_PRECISION}={raw!r} is not an integer") from None
    if v <= 0:
        raise UsageError(f"{ENV_PRECISION} must be positive")
    return v


# ---------------------------------------------------------------------------
# input helpers


def _read_defs(paths):
    chunks = []
    for p in paths:
        try:
            with open(p, encoding="utf-8") as fh:
                chunks.append(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror}") from None
    return parse_definitions("\n".join(chunks))


def _tmodule(defs, name=None):
    return defs.pick("tmodules", name)


def _motif(defs, name=None):
    """A motif block, or the motif of a t-module when no motif is declared."""
    if defs.motifs or name in defs.motifs:
        return defs.pick("motifs", name)
    return motif_of_tmodule(_tmodule(defs, name)).M


def _coords(raw, K, d):
    raw = raw.strip()
    if raw.startswith("["):
        try:
            items = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad coordinate list: {exc.msg}") from None
    else:
        items = [raw]
    if len(items) != d:
        raise ParseError(f"expected {d} coordinates, got {len(items)}")
    return [parse_scalar(str(c), K) for c in items]


def _extension(defs, name=None):
    mod, B = defs.pick("extensions", name)
    E = defs.tmodules[mod]
    P = motif_of_tmodule(E)
    return mod, E, ExtClass(P, tuple(B))


def format_tmodule(name, E) -> str:
    return f"tmodule {name} {{ d = {E.dim}, phi_t = {E.phi} }}\n"


def format_field(K) -> str:
    return f"field {{ p = {K.p}, e = {K.k.n} }}\n"


def format_extension_file(name, mod, E, c: ExtClass) -> str:
    B = ", ".join(json.dumps(str(b)) for b in c.B)
    return (format_field(E.K) + format_tmodule(mod, E)
            + f"extension {name} {{ module = {mod}, B = [{B}] }}\n")


def _local(x):
    return {"value": str(x), "valuation": x.v, "precision": x.N, "e": x.L.e}


# ---------------------------------------------------------------------------
# commands; each returns (text, data)


def cmd_motif_of(a):
    defs = _read_defs(a.files)
    E = _tmodule(defs, a.module)
    P = motif_of_tmodule(E)
    d = lie_check(P)
    table = [[str(x) for x in row] for row in P.table]
    basis = [[str(s) for s in b] for b in P.basis]
    text = [f"family: {P.family}", f"rank: {P.rank}", f"lie dimension: {d}",
            f"A = {P.M}", f"table = {json.dumps(table)}", f"basis = {json.dumps(basis)}"]
    data = {"family": P.family, "rank": P.rank, "lie_dim": d,
            "A": [[str(x) for x in r] for r in P.M.A], "table": table, "basis": basis}
    return "\n".join(text), data


def cmd_slopes(a):
    defs = _read_defs(a.files)
    M = _motif(defs, a.motif)
    sl = newton_slopes(M)
    verts = polygon_vertices(M)
    fg = is_fg_over_skew(M)
    text = [f"vertices: {' '.join(f'({x},{y})' for x, y in verts)}",
            f"slopes: {' '.join(str(s) for s in sl)}", f"finitely generated over K{{sigma}}: {fg}"]
    data = {"vertices": [[x, str(y)] for x, y in verts], "slopes": [str(s) for s in sl], "fg": fg}
    return "\n".join(text), data


def cmd_ext_from_point(a):
    defs = _read_defs(a.files)
    if a.point:
        mod, coords = defs.pick("points", a.point)
        E = defs.tmodules[mod]
    else:
        if a.x is None:
            raise UsageError("ext from-point needs --x or --point")
        E = _tmodule(defs, a.module)
        mod = a.module or next(k for t, k in defs.order if t == "tmodules")
        coords = _coords(a.x, defs.K, E.dim)
    c = point_to_extension(motif_of_tmodule(E), coords)
    text = format_extension_file(a.name, mod, E, c).rstrip("\n")
    return text, {"module": mod, "B": [str(b) for b in c.B], "file": text + "\n"}


def cmd_ext_to_point(a):
    defs = _read_defs(a.files)
    mod, E, c = _extension(defs, a.extension)
    x = extension_to_point(c)
    return "\n".join(str(v) for v in x), {"module": mod, "point": [str(v) for v in x]}


def cmd_ext_reduce(a):
    defs = _read_defs(a.files)
    mod, E, c = _extension(defs, a.extension)
    r = reduce_extension(c)
    text = format_extension_file(a.extension or "reduced", mod, E, r).rstrip("\n")
    return text, {"module": mod, "B": [str(b) for b in r.B], "split": r.is_split()}


def cmd_ext_baer(a):
    d1, d2 = _read_defs([a.first]), _read_defs([a.second])
    m1, E1, c1 = _extension(d1)
    m2, E2, c2 = _extension(d2)
    if E1.phi != E2.phi or E1.K != E2.K:
        raise TMotifError("extensions of different t-modules", code="field-mismatch")
    s = reduce_extension(c1 + c2)
    text = format_extension_file(a.name, m1, E1, s).rstrip("\n")
    return text, {"module": m1, "B": [str(b) for b in s.B]}


def cmd_frob_table(a):
    defs = _read_defs(a.files)
    M = _motif(defs, a.motif)
    rows = frob_table(M, a.max_deg)
    text, data = [], []
    for v, cp in rows:
        f = str(v)
        s = "bad reduction" if cp is None else format_charpoly(cp)
        text.append(f"{f}\t{s}")
        data.append({"prime": f, "degree": v.m, "charpoly": None if cp is None else s,
                     "coefficients": cp})
    return "\n".join(text), {"rows": data}


def cmd_analytic_exp(a):
    defs = _read_defs(a.files)
    E = _tmodule(defs, a.module)
    ex = an.exp_series(E, a.terms)
    res = an.functional_equation_residual(ex)
    exact = all(x.is_zero() for m in res for r in m for x in r)
    coeffs = [[[str(x) for x in row] for row in c] for c in ex.coeffs]
    text = [f"c_{i} = {json.dumps(c) if E.dim > 1 else c[0][0]}" for i, c in enumerate(coeffs)]
    text.append(f"functional equation exp(d z) = phi_t(exp z): {'exact' if exact else 'FAILS'}")
    return "\n".join(text), {"terms": a.terms, "coefficients": coeffs, "functional_equation_exact": exact}


def _field_for(M, P):
    return an.tower_for(M, P)


def cmd_analytic_invariants(a):
    defs = _read_defs(a.files)
    M = _motif(defs, a.motif)
    L = _field_for(M, a.precision)
    H = an.tate_invariant_basis(M, L, a.precision)
    certs = [[[str(c), str(b)] for c, b in row] for row in H.certificates()]
    text = [f"local field: {L}", f"P = {a.precision}", f"rank: {H.rank} (motif rank {M.rank})",
            f"terms: {H.D}", f"residual valuation: {H.residual}", f"verdict: {H.verdict}"]
    for i, row in enumerate(certs):
        text.append(f"decay of w_{i}: " + ", ".join(f"(c={c}, b={b})" for c, b in row))
    data = {"P": a.precision, "e": L.e, "m": L.m, "rank": H.rank, "motif_rank": M.rank,
            "terms": H.D, "residual": H.residual, "verdict": H.verdict, "certificates": certs}
    return "\n".join(text), data


def cmd_analytic_compare(a):
    defs = _read_defs(a.files)
    P = a.precision
    if a.torsion:
        mod, E, _ = _extension(defs, a.extension) if defs.extensions else (None, _tmodule(defs), None)
        M = motif_of_tmodule(E)
        if M.family != "carlitz":
            raise TMotifError("torsion comparison is implemented for the Carlitz module", code="unsupported")
        L = an.carlitz_field(E.K.q, E.K.p, P)
        H = an.tate_invariant_basis(M.M, L, P)
        x = an.carlitz_torsion_points(L, a.torsion)[-1]
        r = an.hodge_ext_compare(E, x, a.torsion, H, P)
        q = [str(c) for c in r.quotient] if r.quotient is not None else None
        text = [f"P = {P}", f"torsion level: t^{a.torsion}", f"h = {r.eps_bar}", f"u = {r.eps_u}",
                f"h - u = a(theta) lambda + O(pi^{r.remainder_val}), a = {q}", f"tolerance: q^-{r.digits:g}",
                f"match: {r.match}"]
        data = {"P": P, "torsion": a.torsion, "h": _local(r.eps_bar), "u": _local(r.eps_u),
                "lattice_coefficients": q, "remainder_valuation": r.remainder_val,
                "tolerance_digits": r.digits, "match": r.match}
        return "\n".join(text), data
    mod, E, c = _extension(defs, a.extension)
    x = extension_to_point(c)
    L = an.carlitz_field(E.K.q, E.K.p, P) if motif_of_tmodule(E).family == "carlitz" else _field_for(
        motif_of_tmodule(E).M, P)
    r = an.hodge_point_compare(E, x, L, digits=P)
    dev = r.deviation / L.e
    text = [f"P = {P}", f"point: {', '.join(str(v) for v in x)}", f"h = {r.eps_bar}",
            f"|exp(h) - x| = q^-{dev:g}", f"tolerance: q^-{r.digits:g}", f"match: {r.match}"]
    data = {"P": P, "point": [str(v) for v in x], "h": _local(r.eps_bar), "deviation_digits": dev,
            "tolerance_digits": r.digits, "match": r.match}
    return "\n".join(text), data


def cmd_duality_check(a):
    try:
        with open(a.alpha, encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {a.alpha}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{a.alpha}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        p, prec, rows = int(spec["p"]), int(spec.get("prec", 20)), spec["alpha"]
    except (KeyError, TypeError, ValueError):
        raise ParseError("alpha file needs keys p, alpha (and optionally prec)") from None
    al = PowerSeriesMap.from_lists(rows, p, prec)
    exps, _ = smith_valuations(al)
    dT, dC = dimension_identity(al)
    perfect = residue_pairing_perfectness(al)
    text = [f"elementary divisors: {' '.join(f'z^{e}' for e in exps)}", f"dim T = {dT}",
            f"dim coker alpha^T = {dC}", f"pairing perfect: {perfect}"]
    data = {"p": p, "prec": prec, "exponents": exps, "dim_T": dT, "dim_coker_transpose": dC,
            "perfect": perfect, "ok": perfect and dT == dC}
    return "\n".join(text), data


def cmd_selftest(a):
    from .selftest import run

    results = run(quick=a.quick, precision=a.precision)
    text = [f"{'PASS' if ok else 'FAIL'} {name}: {msg}" for name, ok, msg in results]
    data = {"results": [{"name": n, "ok": ok, "detail": m} for n, ok, m in results]}
    if not all(ok for _, ok, _ in results):
        raise _SelftestFailed("\n".join(text), data)
    return "\n".join(text), data


class _SelftestFailed(TMotifError):
    code = "selftest-failed"

    def __init__(self, text, data):
        super().__init__("some self-tests failed")
        self.text, self.data = text, data


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    prec = _Parser(add_help=False)
    prec.add_argument("-P", "--precision", type=int, default=None, help="digits (default from $TMOTIF_PRECISION or 30)")

    top = _Parser(prog="tmotif", description="t-motifs and abelian t-modules over F_q(theta)",
                  parents=[common])
    sub = top.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("motif-of", parents=[common], help="motif presentation of a t-module")
    p.add_argument("files", nargs="+")
    p.add_argument("--module")
    p.set_defaults(func=cmd_motif_of)

    p = sub.add_parser("slopes", parents=[common], help="Newton slopes")
    p.add_argument("files", nargs="+")
    p.add_argument("--motif")
    p.set_defaults(func=cmd_slopes)

    ext = sub.add_parser("ext", help="extensions and points").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = ext.add_parser("from-point", parents=[common])
    p.add_argument("files", nargs="+")
    p.add_argument("--x", help='coordinates: one expression or a JSON list')
    p.add_argument("--point", help="use a declared point")
    p.add_argument("--module")
    p.add_argument("--name", default="c")
    p.set_defaults(func=cmd_ext_from_point)
    p = ext.add_parser("to-point", parents=[common])
    p.add_argument("files", nargs="+")
    p.add_argument("--extension")
    p.set_defaults(func=cmd_ext_to_point)
    p = ext.add_parser("reduce", parents=[common])
    p.add_argument("files", nargs="+")
    p.add_argument("--extension")
    p.set_defaults(func=cmd_ext_reduce)
    p = ext.add_parser("baer", parents=[common])
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--name", default="sum")
    p.set_defaults(func=cmd_ext_baer)

    frob = sub.add_parser("frob", help="Frobenius data").add_subparsers(dest="sub", required=True,
                                                                       parser_class=_Parser)
    p = frob.add_parser("table", parents=[common])
    p.add_argument("files", nargs="+")
    p.add_argument("--max-deg", "--qmax-deg", dest="max_deg", type=int, default=3)
    p.add_argument("--motif")
    p.set_defaults(func=cmd_frob_table)

    ana = sub.add_parser("analytic", help="uniformization and invariants").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = ana.add_parser("exp", parents=[common])
    p.add_argument("files", nargs="+")
    p.add_argument("--terms", type=int, default=6)
    p.add_argument("--module")
    p.set_defaults(func=cmd_analytic_exp)
    p = ana.add_parser("invariants", parents=[common, prec])
    p.add_argument("files", nargs="+")
    p.add_argument("--motif")
    p.set_defaults(func=cmd_analytic_invariants)
    p = ana.add_parser("compare", parents=[common, prec])
    p.add_argument("files", nargs="+")
    p.add_argument("--extension")
    p.add_argument("--torsion", type=int, default=0, help="compare on a t^N-torsion point instead")
    p.set_defaults(func=cmd_analytic_compare)

    dual = sub.add_parser("duality", help="torsion duality").add_subparsers(dest="sub", required=True,
                                                                           parser_class=_Parser)
    p = dual.add_parser("check", parents=[common])
    p.add_argument("--alpha", required=True, help="JSON file {p, prec, alpha}")
    p.set_defaults(func=cmd_duality_check)

    p = sub.add_parser("selftest", parents=[common, prec])
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_selftest)
    return top


def _emit(obj, as_json, stream):
    if as_json:
        stream.write(json.dumps(obj, sort_keys=True) + "\n")
    else:
        stream.write(obj + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = sys.argv[1:] if argv is None else list(argv)
    as_json = "--json" in argv
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "precision", "absent") is None:
            args.precision = default_precision()
        if getattr(args, "precision", 1) is not None and getattr(args, "precision", 1) <= 0:
            raise UsageError("precision must be positive")
        for key in ("terms", "max_deg"):
            if getattr(args, key, 1) < 1:
                raise UsageError(f"--{key.replace('_', '-')} must be positive")
        if getattr(args, "torsion", 0) < 0:
            raise UsageError("--torsion must be nonnegative")
        text, data = args.func(args)
    except (UsageError, ParseError) as exc:
        _error(exc, as_json, stdout, stderr)
        return 2
    except _SelftestFailed as exc:
        _emit({"ok": False, **exc.data} if as_json else exc.text, as_json, stdout)
        return 1
    except TMotifError as exc:
        _error(exc, as_json, stdout, stderr)
        return 1
    _emit({"ok": True, **data} if as_json else text, as_json, stdout)
    return 0


def _error(exc, as_json, stdout, stderr):
    if as_json:
        _emit({"ok": False, "error": {"code": exc.code, "message": str(exc)}}, True, stdout)
    else:
        stderr.write(f"error[{exc.code}]: {exc}\n")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
