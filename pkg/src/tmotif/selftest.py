"""Small end-to-end checks behind ``tmotif selftest``.

Each check returns (name, ok, detail).  ``quick`` shrinks sample sizes; the
full acceptance suite lives in tests/test_acceptance.py.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import analytic as an
from .anderson import carlitz, carlitz_power, drinfeld, lie_check, motif_of_tmodule, point_act
from .dieudonne import is_fg_over_skew, make_standard, newton_slopes
from .errors import TMotifError
from .ext1 import dual_sequence_check, extension_to_point, point_to_extension
from .frobenius import frob_table
from .motif import unit_motif
from .ratfunc import function_field


def _families(K):
    th, one = K.theta, K.one
    return [carlitz(K), carlitz_power(K, 2), drinfeld(K, [th, one, one])]


def check_round_trip(quick):
    rng = random.Random(1)
    n = 5 if quick else 25
    for p in (2, 3):
        K = function_field(p)
        for E in _families(K):
            P = motif_of_tmodule(E)
            for _ in range(n):
                x = [K.random(rng, 3) for _ in range(E.dim)]
                y = [K.random(rng, 3) for _ in range(E.dim)]
                cx, cy = point_to_extension(P, x), point_to_extension(P, y)
                if extension_to_point(cx) != x:
                    return False, f"round trip failed for {E.name} over F_{p}"
                s = [a + b for a, b in zip(x, y)]
                if extension_to_point(cx + cy) != s:
                    return False, f"Baer sum failed for {E.name} over F_{p}"
                if extension_to_point(cx.scale([0, 1])) != point_act(E, [0, 1], x):
                    return False, f"t-action failed for {E.name} over F_{p}"
    return True, f"{n} points per family"


def check_carlitz_shape(quick):
    rng = random.Random(2)
    K = function_field(2)
    P = motif_of_tmodule(carlitz(K))
    for _ in range(5 if quick else 20):
        x = K.random(rng, 3)
        c = point_to_extension(P, [x])
        if [str(b) for b in c.B] != [str(x)]:
            return False, f"B = {c.B} for x = {x}"
    return True, "B = (x)"


def check_frobenius(quick):
    K = function_field(2)
    rows = frob_table(carlitz_motif_of(K), 3 if quick else 4)
    for v, cp in rows:
        f = list(v.coeffs)
        if cp is None or len(cp) != 2 or cp[1] != [1] or [(-a) % 2 for a in cp[0]] != f:
            return False, f"charpoly at {v} is {cp}"
    return True, f"{len(rows)} primes"


def carlitz_motif_of(K):
    return motif_of_tmodule(carlitz(K)).M


def check_slopes(quick):
    K = function_field(2)
    for s, r in ((1, 1), (1, 2), (2, 3)):
        if newton_slopes(make_standard(K, s, r)) != [Fraction(s, r)] * r:
            return False, f"V_{s}/{r}"
    if newton_slopes(unit_motif(K)) != [0] or is_fg_over_skew(unit_motif(K)):
        return False, "unit motif"
    E = drinfeld(K, [K.theta, K.zero, K.one])
    if newton_slopes(motif_of_tmodule(E).M) != [Fraction(1, 2)] * 2:
        return False, "Drinfeld rank 2"
    return True, "standard, unit and Drinfeld slopes"


def check_lie_and_dual(quick):
    K = function_field(3)
    for n in (1, 2, 3):
        if lie_check(motif_of_tmodule(carlitz_power(K, n))) != n:
            return False, f"Lie dimension of C^{n}"
    for r in (1, 2, 3):
        E = drinfeld(K, [K.theta] + [K.zero] * (r - 1) + [K.one])
        dim, ok = dual_sequence_check(motif_of_tmodule(E))
        if not ok or dim != r - 1:
            return False, f"dual sequence for rank {r}"
    return True, "Lie dimensions and dual quotients"


def check_analytic(quick, precision):
    digits = min(precision, 20) if quick else precision
    for q in (2, 3):
        K = function_field(q)
        E = carlitz(K)
        L = an.carlitz_field(q, q, digits)
        cert = an.certify_carlitz_period(E, L, an.carlitz_period(L))
        if not cert.ok or cert.exp_of_period <= (digits - 5) * L.e:
            return False, f"period certificate for q = {q}"
        H = an.tate_invariant_basis(motif_of_tmodule(E).M, L, digits)
        if H.rank != 1:
            return False, f"invariant rank {H.rank} for q = {q}"
        x = an.carlitz_torsion_points(L, 1)[0]
        if not an.hodge_ext_compare(E, x, 1, H, digits).match:
            return False, f"t-torsion comparison for q = {q}"
    return True, f"period, invariants and t-torsion comparison at P = {digits}"


def run(quick: bool = False, precision: int = 30):
    checks = [
        ("round-trip", lambda: check_round_trip(quick)),
        ("carlitz-shape", lambda: check_carlitz_shape(quick)),
        ("frobenius", lambda: check_frobenius(quick)),
        ("slopes", lambda: check_slopes(quick)),
        ("lie-and-dual", lambda: check_lie_and_dual(quick)),
        ("analytic", lambda: check_analytic(quick, precision)),
    ]
    out = []
    for name, fn in checks:
        try:
            ok, msg = fn()
        except TMotifError as exc:
            ok, msg = False, f"error[{exc.code}]: {exc}"
        out.append((name, ok, msg))
    return out
