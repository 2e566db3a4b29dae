"""The twelve acceptance criteria, one test each.

Every test prints a PASS/FAIL line; the lines are repeated in the terminal summary.
"""

import contextlib
import random
import time
from fractions import Fraction

from tmotif import analytic as an
from tmotif.anderson import carlitz, carlitz_power, drinfeld, lie_check, motif_of_tmodule, point_act
from tmotif.dieudonne import is_fg_over_skew, make_standard, newton_slopes
from tmotif.duality import (
    PowerSeriesMap,
    dimension_identity,
    image_functional,
    residue_pairing_perfectness,
    smith_valuations,
    torsion_basis,
    torsion_dual_surjection,
)
from tmotif.ext1 import dual_sequence_check, extension_to_point, point_to_extension
from tmotif.frobenius import compatible_at, frobenius_charpoly, irreducibles, reduce_at_prime
from tmotif.motif import unit_motif
from tmotif.ratfunc import function_field
from tmotif.skew import SkewPoly
from tmotif.tpoly import TPoly

K2, K3 = function_field(2), function_field(3)

RESULTS = []


@contextlib.contextmanager
def criterion(n, title):
    t0 = time.perf_counter()
    try:
        yield
    except BaseException:
        line = f"criterion {n:2d} FAIL  {title}"
        RESULTS.append(line)
        print(line)
        raise
    line = f"criterion {n:2d} PASS  {title} ({time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line)


def families(K):
    th, one = K.theta, K.one
    return {
        "carlitz": carlitz(K),
        "C^2": carlitz_power(K, 2),
        "C^3": carlitz_power(K, 3),
        "drinfeld-2": drinfeld(K, [th, th + one, th**2]),
        # a single Newton segment at infinity keeps the period lattice in a tame tower
        "drinfeld-3": drinfeld(K, [th, one, th, th**2]),
    }


def test_01_round_trip():
    with criterion(1, "point <-> extension round trip, Baer sum, t-action, 100 points x 5 families x F2, F3"):
        t0 = time.perf_counter()
        rng = random.Random(1)
        for K in (K2, K3):
            for E in families(K).values():
                P = motif_of_tmodule(E)
                prev_x, prev_c = None, None
                for _ in range(100):
                    x = [K.random(rng, 3) for _ in range(E.dim)]
                    c = point_to_extension(P, x)
                    assert extension_to_point(c) == x
                    assert extension_to_point(c.scale([0, 1])) == point_act(E, [0, 1], x)
                    if prev_c is not None:
                        assert extension_to_point(c + prev_c) == [a + b for a, b in zip(x, prev_x)]
                    prev_x, prev_c = x, c
        assert time.perf_counter() - t0 < 60


def test_02_carlitz_shape():
    with criterion(2, "Carlitz extension is the constant block (x), 50 points"):
        rng = random.Random(2)
        for K in (K2, K3):
            P = motif_of_tmodule(carlitz(K))
            for _ in range(25):
                x = K.random(rng, 3, rng.randrange(3))
                assert point_to_extension(P, [x]).B == (TPoly(K, [x]),)


def test_03_carlitz_frobenius():
    with criterion(3, "Carlitz Frobenius charpoly X - f_v(t), deg <= 5 over F2 and <= 4 over F3"):
        t0 = time.perf_counter()
        for K, top in ((K2, 5), (K3, 4)):
            p = K.p
            M = motif_of_tmodule(carlitz(K)).M
            for n in range(1, top + 1):
                for v in irreducibles(p, n):
                    assert frobenius_charpoly(reduce_at_prime(M, v)) == [[(-c) % p for c in v.coeffs], [1]]
        assert time.perf_counter() - t0 < 30


def test_04_compatible_system():
    with criterion(4, "rank-2 Drinfeld over F2: descent and torsion oracle at levels t, t+1"):
        K = K2
        P = motif_of_tmodule(drinfeld(K, [K.theta, K.one, K.one]))
        for n in range(1, 5):
            for v in irreducibles(2, n):
                cp = frobenius_charpoly(reduce_at_prime(P, v))  # raises unless coefficients descend
                assert len(cp) == 3 and cp[2] == [1]
                # the oracle at level t - a needs t - a prime to f_v(t)
                levels = [a for a in (0, 1) if n > 1 or a != v.coeffs[0]]
                assert len(levels) == (2 if n > 1 else 1)
                for a in levels:
                    ok, lhs, rhs = compatible_at(P, v, a)
                    assert ok, (v.coeffs, a, lhs, rhs)


def test_05_slopes():
    with criterion(5, "Newton slopes of standard, Drinfeld and unit motifs"):
        for s, r in ((1, 1), (1, 2), (2, 3)):
            assert newton_slopes(make_standard(K2, s, r)) == [Fraction(s, r)] * r
        th = K2.theta
        for r in (1, 2, 3, 4):
            coeffs = [th] + [K2.one] * (r - 1) + [th + K2.one]
            M = motif_of_tmodule(drinfeld(K2, coeffs)).M
            assert newton_slopes(M) == [Fraction(1, r)] * r
        assert newton_slopes(unit_motif(K2)) == [0]
        assert not is_fg_over_skew(unit_motif(K2))
        for K in (K2, K3):
            for E in families(K).values():
                assert is_fg_over_skew(motif_of_tmodule(E).M)


def test_06_lie_dimensions():
    with criterion(6, "Lie dimensions"):
        for K in (K2, K3):
            assert lie_check(motif_of_tmodule(carlitz(K))) == 1
            for n in (1, 2, 3, 4):
                assert lie_check(motif_of_tmodule(carlitz_power(K, n))) == n
            assert lie_check(motif_of_tmodule(drinfeld(K, [K.theta, K.one, K.one]))) == 1
            assert lie_check(motif_of_tmodule(drinfeld(K, [K.theta, K.one, K.theta, K.one]))) == 1


def test_07_dual_sequence():
    with criterion(7, "dual sequence quotient dimension r - 1"):
        for K in (K2, K3):
            assert dual_sequence_check(motif_of_tmodule(carlitz(K))) == (0, True)
            for r in (2, 3):
                E = drinfeld(K, [K.theta] + [K.one] * (r - 1) + [K.theta])
                assert dual_sequence_check(motif_of_tmodule(E)) == (r - 1, True)


def test_08_exp_log():
    with criterion(8, "exp/log: c_i recursion, composition identity, period |exp(lambda)| < q^-25"):
        t0 = time.perf_counter()
        for K in (K2, K3):
            q, th = K.q, K.theta
            c = [m[0][0] for m in an.exp_series(carlitz(K), 7).coeffs]
            prev = K.one
            assert c[0] == prev
            for i in range(1, 7):
                prev = prev.frob() / (th ** (q**i) - th)
                assert c[i] == prev
            # terms up to tau^4 are the q^4 terms
            E = drinfeld(K, [th, K.one, th])
            comp = an.compose_series(an.exp_series(E, 5), an.log_series(E, 5))
            assert comp[0] == [[K.one]] and all(m == [[K.zero]] for m in comp[1:5])
            L = an.carlitz_field(q, q, 30)
            lam = an.carlitz_period(L)
            (z,) = an.LocalExp(carlitz(K), L).exp([lam])
            assert z.small(25)
            (y,) = an.LocalExp(carlitz(K), L).exp([lam / L.theta])
            assert not y.small(1)
        assert time.perf_counter() - t0 < 30


def test_09_beta_residue():
    with criterion(9, "residue of beta: exact on 50 (m, eps), truncated within q^-20"):
        rng = random.Random(9)
        for K in (K2, K3):
            Es = [carlitz(K), drinfeld(K, [K.theta, K.one, K.one])]
            for E in Es:
                for _ in range(25):
                    m = SkewPoly(K, [K.random(rng, 2) for _ in range(rng.randint(1, 3))])
                    eps = K.random(rng, 2)
                    pf = an.beta_partial_fractions(E, m, eps, 3)
                    # the pole at t = theta comes from the sigma^0 part only
                    assert -pf.get(0, K.zero) == -(m.c[0] * eps if m.c else K.zero)
            E = Es[1]
            H = an.tate_invariant_basis(motif_of_tmodule(E).M, digits=30)
            for _ in range(5):
                m = SkewPoly(K, [K.random(rng, 2) for _ in range(3)])
                eps = K.random(rng, 2)
                tr = an.beta_residue_truncated(E, m, H.L(eps))
                assert (tr - H.L(-(m.c[0] * eps))).small(20)


def test_10_triviality_and_pairing():
    with criterion(10, "invariant ranks, Carlitz closed form, block rank r + 1 on 20 blocks, pairing"):
        for K in (K2, K3):
            for E in families(K).values():
                M = motif_of_tmodule(E).M
                H = an.tate_invariant_basis(M, digits=20)
                assert H.rank == M.rank
        rng = random.Random(10)
        small = lambda K: rng.choice([K.zero, K.one, K.one / K.theta, K.one / (K.theta + K.one)])  # noqa: E731
        count = 0
        for K in (K2, K3):
            q = K.q
            L = an.carlitz_field(q, q, 30)
            P = motif_of_tmodule(carlitz(K))
            H = an.tate_invariant_basis(P.M, L, 30)
            w = [x[0] for x in H.vectors[0]]
            assert an.match_up_to_units(w, an.carlitz_invariant_closed_form(L, len(w)), 15) is not None
            PD = motif_of_tmodule(drinfeld(K, [K.theta, K.one, K.one]))
            HD = an.tate_invariant_basis(PD.M, digits=20)
            for Pm, Hm in ((P, H), (PD, HD)):
                for _ in range(5):
                    B = [an._LTPoly([Hm.L(small(K)) for _ in range(2)]) for _ in range(Pm.rank)]
                    assert an.block_rank(B, Hm) == Pm.rank + 1
                    count += 1
            lam = an.carlitz_period(L)
            w0 = H.vectors[0]
            v1 = an.lattice_pairing(P, lam, w0, L, digits=15)
            vt = an.lattice_pairing(P, lam * L.theta, w0, L, digits=15)
            vs = an.lattice_pairing(P, lam * L.theta + lam, w0, L, digits=15)
            assert [c.is_zero() for c in vt.coeffs[:1]] == [True]
            assert vt.coeffs[1:2] == v1.coeffs[:1]
            n = max(len(vs.coeffs), len(vt.coeffs), len(v1.coeffs))
            pad = lambda c: list(c) + [L.F.zero] * (n - len(c))  # noqa: E731
            assert pad(vs.coeffs) == [a + b for a, b in zip(pad(vt.coeffs), pad(v1.coeffs))]
        assert count == 20


def test_11_torsion_comparison():
    with criterion(11, "Hodge class = exp-lift on Carlitz t- and t^2-torsion, additivity on 10 pairs"):
        rng = random.Random(11)
        for q in (2, 3):
            K = function_field(q)
            E = carlitz(K)
            L = an.carlitz_field(q, q, 30)
            P = motif_of_tmodule(E)
            H = an.tate_invariant_basis(P.M, L, 30)
            x1, x2 = an.carlitz_torsion_points(L, 2)
            assert an.hodge_ext_compare(E, x1, 1, H, 30).match
            assert an.hodge_ext_compare(E, x2, 2, H, 30).match
            lam = an.carlitz_period(L)

            def h(x):
                return an.hodge_class(P, an.local_point_class(P, [x], L), H).eps_bar[0]

            for _ in range(5):
                a, b = ([L(rng.randrange(q)) for _ in range(2)] for _ in range(2))
                x = a[0] * x1 + a[1] * x2
                y = b[0] * x1 + b[1] * x2
                assert an.in_lattice(h(x + y) - h(x) - h(y), lam, 10)


def _polymul(a, b, p):
    out = [0] * max(len(a) + len(b) - 1, 0)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def _polyadd(a, b, p):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n)]


def _matmul(A, B, p):
    return [[_sum([_polymul(A[i][k], B[k][j], p) for k in range(len(B))], p) for j in range(len(B[0]))]
            for i in range(len(A))]


def _sum(xs, p):
    out = []
    for x in xs:
        out = _polyadd(out, x, p)
    return out


def _alpha(rng, p, exps):
    """U diag(z^a) V with U lower and V upper unitriangular: elementary divisors z^a by construction."""
    n = len(exps)
    rnd = lambda: [rng.randrange(p) for _ in range(3)]  # noqa: E731
    U = [[[1] if i == j else (rnd() if i > j else []) for j in range(n)] for i in range(n)]
    V = [[[1] if i == j else (rnd() if i < j else []) for j in range(n)] for i in range(n)]
    D = [[[0] * a + [1] if i == j else [] for j in range(n)] for i, a in enumerate(exps)]
    return _matmul(_matmul(U, D, p), V, p)


def test_12_duality():
    with criterion(12, "torsion duality: well-defined, perfect, dim T = dim coker alpha^T"):
        rng = random.Random(12)
        shapes = [[1], [3], [6], [1, 2], [2, 2], [0, 3], [1, 1, 1], [1, 2, 3]]
        for p in (2, 3, 5):
            for exps in shapes:
                rows = _alpha(rng, p, exps)
                al = PowerSeriesMap.from_lists(rows, p, 16)
                assert sorted(smith_valuations(al)[0]) == sorted(exps)
                assert residue_pairing_perfectness(al)
                dT, dC = dimension_identity(al)
                assert dT == dC == sum(exps)
                n = len(exps)
                phi = [[rng.randrange(p) for _ in range(4)] for _ in range(n)]
                for g in torsion_basis(al):
                    # g and g + alpha(h) give the same value
                    h = [[rng.randrange(p) for _ in range(3)] for _ in range(n)]
                    ah = _matmul(rows, [[x] for x in h], p)
                    g2 = [gi + PowerSeriesMap.from_lists([[ahi[0]]], p, 16).alpha[0][0] for gi, ahi in zip(g, ah)]
                    assert torsion_dual_surjection(al, phi, g) == torsion_dual_surjection(al, phi, g2)
                    # functionals from the image of the transpose kill T
                    psi = [[rng.randrange(p) for _ in range(3)] for _ in range(n)]
                    assert torsion_dual_surjection(al, image_functional(al, psi), g) == 0
