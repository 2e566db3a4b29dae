"""Truncated analytic layer: exp and log, periods, Tate-algebra invariants,
Hodge data and the comparison between the Hodge class and the point.

Everything transcendental lives in a LocalField (see local.py).  The tower
(e, m) is chosen per motif; tolerances are in base-q digits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import flint

from .anderson import MotivePresentation, TModule, motif_of_tmodule
from .errors import (
    InsufficientPrecision,
    NonIntegral,
    NotConverged,
    TMotifError,
    UnsupportedPresentation,
)
from .local import LocalField, LocalScalar, TateSeries
from .motif import SigmaModule, validate_effective
from .skew import SkewPoly
from .tpoly import TPoly

DEFAULT_DIGITS = 30


# ---------------------------------------------------------------------------
# small dense linear algebra over a field (exact or local)


def _is_local(x) -> bool:
    return isinstance(x, LocalScalar)


def _pivot_key(x):
    if x.is_zero():
        return None
    return -x.v if _is_local(x) else 0


def solve_linear(M, b):
    """Solve M x = b for square M by Gaussian elimination (largest pivot for local entries)."""
    n = len(M)
    A = [list(r) + [bi] for r, bi in zip(M, b)]
    for c in range(n):
        best, bk = None, None
        for r in range(c, n):
            k = _pivot_key(A[r][c])
            if k is not None and (bk is None or k > bk):
                best, bk = r, k
        if best is None:
            raise TMotifError("singular linear system", code="singular-sylvester")
        A[c], A[best] = A[best], A[c]
        inv = A[c][c].inverse() if _is_local(A[c][c]) else A[c][c].inverse()
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and not A[r][c].is_zero():
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [A[r][n] for r in range(n)]


def _mfrob(X, k=1):
    for _ in range(k):
        X = [[x.frob() for x in r] for r in X]
    return X


def _mmul(X, Y, zero):
    return [[_acc((X[i][k] * Y[k][j] for k in range(len(Y))), zero) for j in range(len(Y[0]))]
            for i in range(len(X))]


def _acc(it, zero):
    s = zero
    for x in it:
        s = s + x
    return s


# ---------------------------------------------------------------------------
# exp and log


@dataclass
class ExpSeries:
    """exp(z) = sum_i c_i z^{(q^i)}; c_i are d x d matrices over a field domain."""

    coeffs: list
    E: TModule
    domain: object

    @property
    def n_terms(self) -> int:
        return len(self.coeffs)


def _phi_coeffs(E: TModule, conv):
    return [[[conv(a) for a in row] for row in E.coefficient(k)] for k in range(E.phi.degree() + 1)]


def exp_series(E: TModule, n_terms: int, L: LocalField | None = None) -> ExpSeries:
    """Coefficients c_0 .. c_{n_terms-1}, exactly over K, or in L when given.

    c_i d^{[q^i]} - d c_i = sum_{k >= 1} Phi_k c_{i-k}^{(q^k)} with d = d phi_t.
    """
    K = E.K
    dom = L if L is not None else K
    conv = (lambda a: L(a)) if L is not None else (lambda a: a)
    Phi = _phi_coeffs(E, conv)
    d = E.dim
    zero, one = dom.zero, dom.one
    ident = [[one if i == j else zero for j in range(d)] for i in range(d)]
    c = [ident]
    dq = Phi[0]
    for i in range(1, n_terms):
        dq = _mfrob(dq)
        R = [[zero] * d for _ in range(d)]
        for k in range(1, min(i, len(Phi) - 1) + 1):
            T = _mmul(Phi[k], _mfrob(c[i - k], k), zero)
            R = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(R, T)]
        if d == 1:
            den = dq[0][0] - Phi[0][0][0]
            if den.is_zero():
                raise TMotifError("singular Sylvester equation", code="singular-sylvester")
            c.append([[R[0][0] / den]])
            continue
        # vec(X) -> X dq - Phi0 X, unknown X[a][b] at index a*d + b
        n = d * d
        Mx = [[zero] * n for _ in range(n)]
        for a in range(d):
            for b in range(d):
                row = a * d + b
                for s in range(d):
                    Mx[row][a * d + s] = Mx[row][a * d + s] + dq[s][b]
                    Mx[row][s * d + b] = Mx[row][s * d + b] - Phi[0][a][s]
        x = solve_linear(Mx, [R[a][b] for a in range(d) for b in range(d)])
        c.append([[x[a * d + b] for b in range(d)] for a in range(d)])
    return ExpSeries(c, E, dom)


def log_series(E: TModule, n_terms: int, L: LocalField | None = None) -> ExpSeries:
    """l_0 = I, l_i = -sum_{j=1}^{i} c_j l_{i-j}^{(q^j)} (so exp(log z) = z)."""
    ex = exp_series(E, n_terms, L)
    zero = ex.domain.zero
    d = E.dim
    l = [ex.coeffs[0]]
    for i in range(1, n_terms):
        acc = [[zero] * d for _ in range(d)]
        for j in range(1, i + 1):
            T = _mmul(ex.coeffs[j], _mfrob(l[i - j], j), zero)
            acc = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(acc, T)]
        l.append(acc)
    return ExpSeries(l, E, ex.domain)


def compose_series(f: ExpSeries, g: ExpSeries):
    """Coefficients of f(g(z)) through the shorter length."""
    n = min(f.n_terms, g.n_terms)
    zero = f.domain.zero
    d = len(f.coeffs[0])
    out = []
    for i in range(n):
        acc = [[zero] * d for _ in range(d)]
        for j in range(i + 1):
            T = _mmul(f.coeffs[j], _mfrob(g.coeffs[i - j], j), zero)
            acc = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(acc, T)]
        out.append(acc)
    return out


def functional_equation_residual(ex: ExpSeries):
    """exp(d z) - phi_t(exp z) coefficientwise; zero matrices through retained terms."""
    E = ex.E
    conv = ex.domain if ex.domain is not E.K else (lambda a: a)
    Phi = _phi_coeffs(E, conv)
    zero = ex.domain.zero
    d = E.dim
    out = []
    dq = Phi[0]
    for i in range(ex.n_terms):
        lhs = _mmul(ex.coeffs[i], dq, zero)
        rhs = [[zero] * d for _ in range(d)]
        for k in range(0, min(i, len(Phi) - 1) + 1):
            T = _mmul(Phi[k], _mfrob(ex.coeffs[i - k], k), zero)
            rhs = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(rhs, T)]
        out.append([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)])
        dq = _mfrob(dq)
    return out


class LocalExp:
    """exp_E and log_E evaluated on vectors in L; coefficients computed lazily in L."""

    def __init__(self, E: TModule, L: LocalField):
        self.E, self.L = E, L
        self._c = exp_series(E, 2, L).coeffs
        self._l = None

    def _coeff(self, i):
        while len(self._c) <= i:
            self._c = exp_series(self.E, 2 * len(self._c), self.L).coeffs
        return self._c[i]

    def _sum(self, coeff, z, max_terms):
        L, d = self.L, len(z)
        out = list(z)
        y = list(z)
        small = 0
        for i in range(1, max_terms):
            y = [x.frob() for x in y]
            C = coeff(i)
            term = [_acc((C[a][b] * y[b] for b in range(d)), L.zero) for a in range(d)]
            out = [o + t for o, t in zip(out, term)]
            floor = min(o.N for o in out)
            if all(t.is_zero() or t.v >= floor for t in term):
                small += 1
                if small >= 2:
                    return out
            else:
                small = 0
        return out

    def exp(self, z, max_terms: int = 40):
        return self._sum(self._coeff, [self.L(x) for x in z], max_terms)

    def log(self, z, n_terms: int = 12):
        if self._l is None or len(self._l) < n_terms:
            self._l = log_series(self.E, n_terms, self.L).coeffs
        return self._sum(lambda i: self._l[i], [self.L(x) for x in z], n_terms)


# ---------------------------------------------------------------------------
# towers and the Carlitz period


def _q_minus_one_root_of_minus_one(F, q):
    """xi in F with xi^{q-1} = -1, or None."""
    target = -F.one
    for x in F.elements():
        if not x.is_zero() and x ** (q - 1) == target:
            return x
    return None


def carlitz_field(q: int, p: int, digits: int = DEFAULT_DIGITS, margin: int = 12) -> LocalField:
    """Smallest tower with e = q - 1 holding (-theta)^{1/(q-1)}."""
    e = q - 1
    for m in range(1, 5):
        L = LocalField(p, e, m, digits, margin)
        if _q_minus_one_root_of_minus_one(L.F, q) is not None:
            return L
    raise TMotifError("no tower found for the Carlitz period", code="unsupported-field")


def minus_theta_root(L: LocalField) -> LocalScalar:
    """A fixed (q-1)-th root of -theta."""
    q = L.q
    if L.e % (q - 1):
        raise TMotifError("need (q-1) | e", code="unsupported-field")
    xi = _q_minus_one_root_of_minus_one(L.F, q)
    if xi is None:
        raise TMotifError("(-1)^{1/(q-1)} not in the residue field", code="unsupported-field")
    return L.monomial(xi, -L.e // (q - 1))


def carlitz_period(L: LocalField) -> LocalScalar:
    """theta (-theta)^{1/(q-1)} prod_{i>=1} (1 - theta^{1-q^i})^{-1}."""
    q = L.q
    lam = L.theta * minus_theta_root(L)
    i = 1
    while L.e * (q**i - 1) < L.cap:
        lam = lam / (L.one - L.monomial(L.F.one, L.e * (q**i - 1)))
        i += 1
    return lam


@dataclass
class PeriodCertificate:
    digits: int
    exp_of_period: int  # pi-valuation of exp(lambda)
    division_is_torsion: bool
    division_nonzero: bool

    @property
    def ok(self) -> bool:
        return self.division_is_torsion and self.division_nonzero


def certify_carlitz_period(E: TModule, L: LocalField, lam: LocalScalar, margin: int = 5) -> PeriodCertificate:
    ex = LocalExp(E, L)
    (z,) = ex.exp([lam])
    (x,) = ex.exp([lam / L.theta])
    tors = L.theta * x + x.frob()
    return PeriodCertificate(
        L.digits,
        z.v,
        tors.small(L.digits - margin - 2),
        not x.small(margin),
    )


# ---------------------------------------------------------------------------
# additive polynomials and the invariants of sigma tau


def _additive_eval(a, y):
    """sum_k a_k y^{q^k}."""
    acc = a[0] * y
    z = y
    for ak in a[1:]:
        z = z.frob()
        if not ak.is_zero():
            acc = acc + ak * z
    return acc


def _zero_like(x):
    return x * 0


def _component_additive(A0, conv):
    """(P, build) with P the additive polynomial in y = x_{r-1}, build(y) -> x.

    A0 must be 1 x 1 or a companion matrix: unit subdiagonal in all but
    the last column.
    """
    r = len(A0)
    zero = conv(0)
    one = conv(1)
    if r == 1:
        a = conv(A0[0][0])
        return [-one, a], (lambda y: [y])
    for c in range(r - 1):
        for i in range(r):
            want = 1 if i == c + 1 else 0
            x = A0[i][c]
            if not (x - want).is_zero():
                raise UnsupportedPresentation("sigma-matrix at t = 0 is not in companion form")
    cs = [conv(A0[k][r - 1]) for k in range(r)]
    Xs = [[zero, cs[0]]]
    for k in range(1, r):
        prev = Xs[-1]
        X = [zero] + [x.frob() for x in prev]
        X[1] = X[1] + cs[k]
        Xs.append(X)
    P = list(Xs[-1])
    P[0] = P[0] - one

    def build(y):
        return [_additive_eval(X, y) for X in Xs]

    return P, build


def _components(A):
    """Index sets of the block-diagonal decomposition of a square TPoly matrix."""
    r = len(A)
    parent = list(range(r))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(r):
        for j in range(r):
            if not A[i][j].is_zero():
                parent[find(i)] = find(j)
    groups = {}
    for i in range(r):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values())


def _segments(vals, q):
    """Lower Newton hull of (q^k, v_k): list of (rho, on_line, k0, k1), smallest roots first.

    rho is the valuation (pi-units) of the roots belonging to the segment; they
    span an F_q-space of dimension k1 - k0.
    """
    pts = [(k, v) for k, v in enumerate(vals) if v is not None]
    if not pts or pts[0][0] != 0 or pts[-1][0] != len(vals) - 1:
        raise UnsupportedPresentation("additive polynomial is degenerate")
    out = []
    i = 0
    while i < len(pts) - 1:
        k0, v0 = pts[i]
        best, on = None, []
        for k, v in pts[i + 1:]:
            sl = Fraction(v - v0, q**k - q**k0)
            if best is None or sl < best:
                best, on = sl, [k]
            elif sl == best:
                on.append(k)
        k1 = on[-1]
        out.append((-best, [k0] + on, k0, k1))
        i = next(j for j, (k, _) in enumerate(pts) if k == k1)
    return out


def invariant_segments(M: SigmaModule):
    """Newton segments of the invariant equation x = A(0) tau(x), one list per diagonal block."""
    K = M.K
    A0 = [[a[0] for a in row] for row in M.A]
    out = []
    for comp in _components(M.A):
        sub = [[A0[i][j] for j in comp] for i in comp]
        P, _ = _component_additive(sub, lambda a: K(a) if not hasattr(a, "K") else a)
        vals = [None if a.is_zero() else -a.degree() for a in P]
        out.append(_segments(vals, K.q))
    return out


def required_ramification(M: SigmaModule) -> int:
    """Smallest e making all invariant valuations integral (tame only if prime to p)."""
    e = 1
    for segs in invariant_segments(M):
        for rho, *_ in segs:
            e = _lcm(e, rho.denominator)
    return e


def _lcm(a, b):
    from math import gcd

    return a * b // gcd(a, b)


def _residual_roots(P, rho: int, on, L: LocalField):
    """F_p-basis of roots c in F_{q^m} of sum_{k on line} lead(a_k) c^{q^k}."""
    F = L.F
    q = L.q
    leads = {k: P[k].coeff(P[k].v) for k in on}
    n = F.n
    cols = []
    for i in range(n):
        c = F.from_vector([1 if j == i else 0 for j in range(n)])
        val = F.zero
        for k, a in leads.items():
            val = val + a * c ** (q**k)
        cols.append(F.to_vector(val))
    M = flint.nmod_mat(n, n, [cols[j][i] for i in range(n) for j in range(n)], L.p)
    X, nullity = M.nullspace()
    return [F.from_vector([int(X[i, c]) for i in range(n)]) for c in range(nullity)]


def _lift_root(P, y, max_iter=400):
    """Newton for an additive polynomial: y <- y - P(y)/a_0 (P' = a_0)."""
    inv0 = P[0].inverse()
    for _ in range(max_iter):
        d = _additive_eval(P, y) * inv0
        if d.is_zero():
            return y
        y = y - d
    raise NotConverged("root lifting did not converge")


def _lift_root_stepwise(P, y, L: LocalField, max_iter: int = 4000):
    """Lift a root of a later Newton segment one leading term at a time.

    P(y + z) = P(y) + P(z), so the next term c pi^nu of z solves the residual
    equation of the terms of P that dominate at size nu.
    """
    q = L.q
    target = y.v + L.cap
    for _ in range(max_iter):
        b = _additive_eval(P, y)
        if b.is_zero():
            return y
        nus = {k: Fraction(b.v - a.v, q**k) for k, a in enumerate(P) if not a.is_zero()}
        nu = max(nus.values())
        if nu >= target:
            return y
        if nu.denominator != 1:
            raise TMotifError("root needs more ramification", code="tower-too-small")
        dom = {k: P[k].coeff(P[k].v) for k, v in nus.items() if v == nu}
        c = _solve_residual(dom, -b.coeff(b.v), L)
        if c is None:
            raise TMotifError("residue field too small for a root", code="tower-too-small")
        y = y + L.monomial(c, int(nu))
    raise NotConverged("stepwise root lifting did not converge")


def _solve_residual(leads, rhs, L: LocalField):
    """Some c in the residue field with sum_k leads[k] c^{q^k} = rhs, or None."""
    F, q, p = L.F, L.q, L.p
    n = F.n
    cols = []
    for i in range(n):
        c = F.from_vector([1 if j == i else 0 for j in range(n)])
        val = F.zero
        for k, a in leads.items():
            val = val + a * c ** (q**k)
        cols.append(F.to_vector(val))
    r = F.to_vector(rhs)
    aug = flint.nmod_mat(n, n + 1, [cols[j][i] if j < n else r[i] for i in range(n) for j in range(n + 1)], p)
    R, rank = aug.rref()
    sol = [0] * n
    for row in range(rank):
        piv = next(j for j in range(n + 1) if int(R[row, j]) != 0)
        if piv == n:
            return None
        sol[piv] = int(R[row, n])
    return F.from_vector(sol)


def tower_for(M: SigmaModule, digits: int = DEFAULT_DIGITS, margin: int = 12, max_m: int = 8) -> LocalField:
    """Tame tower (e, m) in which M{t}^{sigma tau} has a full basis, if one exists with q^m <= 2^20."""
    K = M.K
    if K.k.n != 1:
        raise UnsupportedPresentation("the analytic layer needs prime q")
    e = required_ramification(M)
    last = None
    for m in range(1, max_m + 1):
        if K.q**m > 2**20:
            break
        L = LocalField(K.p, e, m, digits, margin)
        try:
            _zero_solutions(M, L)
            return L
        except TMotifError as exc:
            last = exc
    raise TMotifError(f"no tame tower with e = {e} holds the invariants ({last})", code="tower-too-small")


def _zero_solutions(M: SigmaModule, L: LocalField):
    """F_q-basis of {x in L^r : x = A(0) tau(x)}."""
    r = M.rank
    A0 = [[L(a[0]) for a in row] for row in M.A]
    sols = []
    for comp in _components(M.A):
        sub = [[A0[i][j] for j in comp] for i in comp]
        P, build = _component_additive(sub, L)
        vals = [None if a.is_zero() else a.v for a in P]
        ys = []
        for rho, on, k0, k1 in _segments(vals, L.q):
            if rho.denominator != 1:
                raise TMotifError("ramification index too small", code="tower-too-small")
            roots = _residual_roots(P, int(rho), on, L)
            if len(roots) < k1 - k0:
                raise TMotifError("residue field too small", code="tower-too-small")
            for c in roots:
                y0 = L.monomial(c, int(rho))
                ys.append(_lift_root(P, y0) if k0 == 0 else _lift_root_stepwise(P, y0, L))
        for y in ys:
            xs = build(y)
            vec = [L.zero] * r
            for i, x in zip(comp, xs):
                vec[i] = x
            sols.append(vec)
    return sols


def _apply_twisted(Ak, w, j, L):
    """sum_{k >= 1} A_k tau(w_{j-k}) for a truncated vector Tate series w."""
    r = len(Ak[0])
    out = [L.zero] * r
    for k in range(1, min(j, len(Ak) - 1) + 1):
        tw = [x.frob() for x in w[j - k]]
        for i in range(r):
            for c in range(r):
                a = Ak[k][i][c]
                if not a.is_zero() and not tw[c].is_zero():
                    out[i] = out[i] + a * tw[c]
    return out


def _mat_apply(A, x, L):
    return [_acc((A[i][c] * x[c] for c in range(len(x)) if not A[i][c].is_zero()), L.zero) for i in range(len(A))]


def _small_branch(A0, R, L, max_iter=400):
    """Solution of x = A0 tau(x) + R near R."""
    x = list(R)
    if all(v.is_zero() for v in R):
        return x
    for _ in range(max_iter):
        nx = [a + b for a, b in zip(_mat_apply(A0, [v.frob() for v in x], L), R)]
        if all((a - b).is_zero() for a, b in zip(nx, x)):
            return nx
        x = nx
    raise NotConverged("fixed-point iteration did not converge")


@dataclass
class InvariantBasis:
    """H_1: a k[t]-basis of M{t}^{sigma tau}; vectors[b][j][i] = coefficient of t^j in coordinate i."""

    M: SigmaModule
    L: LocalField
    vectors: list
    D: int
    rank: int
    residual: int  # min pi-valuation of A tau(w) - w over retained degrees
    verdict: bool

    def series(self, b: int, i: int) -> TateSeries:
        return TateSeries([w[i] for w in self.vectors[b]], self.L)

    def certificates(self):
        return [[self.series(b, i).certificate() for i in range(self.M.rank)] for b in range(len(self.vectors))]


def _local_A(M, L):
    deg = max((a.degree() for row in M.A for a in row), default=0)
    return [[[L(a[k]) for a in row] for row in M.A] for k in range(deg + 1)]


def _extend_series(Ak, w0, L, target, max_D):
    """Coefficients w_j, j >= 0, until |w_j| q^j is below q^{-target} twice."""
    w = [w0]
    quiet = 0
    for j in range(1, max_D):
        R = _apply_twisted(Ak, w, j, L)
        wj = _small_branch(Ak[0], R, L)
        w.append(wj)
        if all(x.is_zero() or x.v - j * L.e > target * L.e for x in wj):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
    return w


def invariance_residual(Ak, w, L):
    """min valuation of (A tau(w) - w)_j over j where the truncation does not interfere."""
    worst = None
    for j in range(len(w)):
        R = _apply_twisted(Ak, w, j, L)
        lhs = [a + b for a, b in zip(_mat_apply(Ak[0], [x.frob() for x in w[j]], L), R)]
        for a, b in zip(lhs, w[j]):
            d = a - b
            v = d.N if d.is_zero() else d.v
            worst = v if worst is None else min(worst, v)
    return worst


def tate_invariant_basis(M: SigmaModule, L: LocalField | None = None, digits: int = DEFAULT_DIGITS,
                         max_D: int = 80) -> InvariantBasis:
    validate_effective(M)
    L = L or tower_for(M, digits)
    Ak = _local_A(M, L)
    zs = _zero_solutions(M, L)
    vecs = [_extend_series(Ak, z, L, L.digits, max_D) for z in zs]
    D = max(len(v) for v in vecs)
    vecs = [v + [[L.zero] * M.rank] * (D - len(v)) for v in vecs]
    res = min(invariance_residual(Ak, v, L) for v in vecs) if vecs else L.cap
    r = M.rank
    d0 = local_det([[vecs[b][0][i] for b in range(len(vecs))] for i in range(r)], L) if len(vecs) == r else L.zero
    verdict = len(vecs) == r and not d0.is_zero()
    return InvariantBasis(M, L, vecs, D, len(vecs) if verdict else _rank_estimate(vecs, L), res, verdict)


def local_det(A, L):
    """Determinant by elimination with largest pivots."""
    n = len(A)
    A = [list(r) for r in A]
    d = L.one
    for c in range(n):
        best, bk = None, None
        for r in range(c, n):
            k = _pivot_key(A[r][c])
            if k is not None and (bk is None or k > bk):
                best, bk = r, k
        if best is None:
            return L.zero
        if best != c:
            A[c], A[best] = A[best], A[c]
            d = -d
        d = d * A[c][c]
        inv = A[c][c].inverse()
        for r in range(c + 1, n):
            if not A[r][c].is_zero():
                f = A[r][c] * inv
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return d


def _rank_estimate(vecs, L):
    if not vecs:
        return 0
    r = len(vecs[0][0])
    rows = [[v[0][i] for i in range(r)] for v in vecs]
    # Gaussian elimination rank
    rank = 0
    rows = [list(x) for x in rows]
    for c in range(r):
        piv = next((i for i in range(rank, len(rows)) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inverse()
        for i in range(len(rows)):
            if i != rank and not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def carlitz_invariant_closed_form(L: LocalField, D: int):
    """Coefficients of (-theta)^{-1/(q-1)} prod_{i>=0} (1 - t/theta^{q^i}) through t^{D-1}."""
    q = L.q
    coeffs = [minus_theta_root(L).inverse()] + [L.zero] * (D - 1)
    i = 0
    while L.e * q**i <= 2 * L.cap:
        a = L.monomial(L.F.one, L.e * q**i)
        coeffs = [coeffs[0]] + [coeffs[j] - a * coeffs[j - 1] for j in range(1, D)]
        i += 1
    return coeffs


def match_up_to_units(w, ref, digits: float):
    """c in F_q^x with w_j = c ref_j for all j (to q^{-digits}), or None."""
    c = (w[0] / ref[0]).in_Fq(digits)
    if c is None or c.is_zero():
        return None
    L = ref[0].L
    cc = L.monomial(c, 0)
    if all((a - cc * b).small(digits) for a, b in zip(w, ref)):
        return c
    return None


# ---------------------------------------------------------------------------
# semilinear solves


def coboundary(f, L: LocalField, max_iter: int = 200):
    """g with tau(g) - g = f coefficientwise, g = -(f + tau f + tau^2 f + ...).

    Needs |f_i| < 1 for every coefficient.
    """
    out = []
    for a in f:
        if not a.is_zero() and a.v <= 0:
            raise TMotifError("coefficient of absolute value >= 1", code="coefficient-too-large")
        acc = L.zero
        cur = a
        for _ in range(max_iter):
            if cur.is_zero() or cur.v >= acc.N:
                break
            acc = acc + cur
            cur = cur.frob()
        out.append(-acc)
    return out


def semilinear_solve(mode: str, *, M: SigmaModule | None = None, f=None, L: LocalField | None = None,
                     digits: int = DEFAULT_DIGITS):
    """fixed-point: a k[t]-basis of M{t}^{sigma tau}; coboundary: g with tau(g) - g = f."""
    if mode == "fixed-point":
        return tate_invariant_basis(M, L, digits)
    if mode == "coboundary":
        return coboundary(f, L)
    raise TMotifError(f"unknown mode {mode}", code="usage")


def hom_solutions(A1, A2, F, q: int, window: int = 20):
    """F_p-basis of X (1x1 blocks allowed r2 x r1) with X A1 = A2 tau(X) over F((1/t)).

    A1, A2: square matrices of dicts {t-exponent: element of F} (Laurent
    polynomials).  X ranges over Laurent series with t-degrees <= window and
    an unbounded tail; only equations that involve no truncated coefficient are used.
    """
    r1, r2 = len(A1), len(A2)
    degs = [k for A in (A1, A2) for row in A for a in row for k in a]
    hi, lo = max(degs), min(degs)
    n = F.n
    top, bot = window, -window
    unknowns = [(a, b, k) for a in range(r2) for b in range(r1) for k in range(bot, top + 1)]
    index = {u: i for i, u in enumerate(unknowns)}
    rows = []
    # coefficient of t^s in (X A1 - A2 tau X)[a][b]
    for a in range(r2):
        for b in range(r1):
            for s in range(bot + hi, top + lo + 1 + (hi - lo)):
                terms = []
                ok = True
                for c in range(r1):
                    for k, val in A1[c][b].items():
                        terms.append(((a, c, s - k), val, False))
                for c in range(r2):
                    for k, val in A2[a][c].items():
                        terms.append(((c, b, s - k), val, True))
                if any(u[2] < bot for u, _, _ in terms):
                    ok = False
                if not ok:
                    continue
                # F_p-linear in the coordinates of the unknowns
                eq = [[0] * (len(unknowns) * n) for _ in range(n)]
                for u, val, twisted in terms:
                    if u[2] > top:
                        continue
                    col0 = index[u] * n
                    for i in range(n):
                        x = F.from_vector([1 if j == i else 0 for j in range(n)])
                        y = val * (x**q) if twisted else x * val
                        vec = F.to_vector(y)
                        for r in range(n):
                            eq[r][col0 + i] += -vec[r] if twisted else vec[r]
                rows.extend(eq)
    if not rows:
        return [], unknowns
    N = len(unknowns) * n
    Mx = flint.nmod_mat(len(rows), N, [x % F.p for r in rows for x in r], F.p)
    X, nullity = Mx.nullspace()
    return [[int(X[i, c]) for i in range(N)] for c in range(nullity)], unknowns


def hom_dimension(A1, A2, F, q: int, window: int = 20, keep_from: int = 0) -> int:
    """F_p-rank of the solutions restricted to t-degrees >= keep_from.

    Solutions of the truncated system that live only near the lower window
    edge are artefacts of the truncation; projecting them away leaves the
    honest count (0 when the slopes are disjoint).
    """
    sols, unknowns = hom_solutions(A1, A2, F, q, window)
    n = F.n
    cols = [i * n + j for i, u in enumerate(unknowns) if u[2] >= keep_from for j in range(n)]
    if not sols or not cols:
        return 0
    M = flint.nmod_mat(len(sols), len(cols), [s[c] for s in sols for c in cols], F.p)
    return M.rank()


# ---------------------------------------------------------------------------
# expansions at t = theta (u = t - theta)


class USeries:
    """sum_{k < T} a_k u^k over a LocalField, truncated at u^T."""

    __slots__ = ("a", "L")

    def __init__(self, a, L):
        self.a = list(a)
        self.L = L

    @property
    def T(self):
        return len(self.a)

    def __add__(self, o):
        return USeries([x + y for x, y in zip(self.a, o.a)], self.L)

    def __sub__(self, o):
        return USeries([x - y for x, y in zip(self.a, o.a)], self.L)

    def __neg__(self):
        return USeries([-x for x in self.a], self.L)

    def __mul__(self, o):
        T = min(self.T, o.T)
        out = [self.L.zero] * T
        for i in range(T):
            if self.a[i].is_zero():
                continue
            for j in range(T - i):
                if not o.a[j].is_zero():
                    out[i + j] = out[i + j] + self.a[i] * o.a[j]
        return USeries(out, self.L)

    def inverse(self):
        if self.a[0].is_zero():
            raise TMotifError("u-series is not a unit", code="not-a-unit")
        inv0 = self.a[0].inverse()
        out = [inv0]
        for k in range(1, self.T):
            acc = self.L.zero
            for j in range(1, k + 1):
                acc = acc + self.a[j] * out[k - j]
            out.append(-acc * inv0)
        return USeries(out, self.L)

    def shift_down(self, n):
        return USeries(self.a[n:], self.L)

    def order(self, digits: float) -> int:
        """Index of the first coefficient not below q^{-digits}."""
        for k, x in enumerate(self.a):
            if not x.small(digits):
                return k
        return self.T


def expand_at_theta(ws, L: LocalField, T: int) -> USeries:
    """Taylor coefficients at t = theta of sum_j w_j t^j."""
    p = L.p
    out = []
    for k in range(T):
        acc = L.zero
        for j in range(k, len(ws)):
            b = comb(j, k) % p
            if b and not ws[j].is_zero():
                acc = acc + ws[j] * L.theta_power(j - k) * b
        out.append(acc)
    return USeries(out, L)


def tpoly_at_theta(f: TPoly, L: LocalField, T: int) -> USeries:
    return expand_at_theta([L(c) for c in f.c], L, T)


def _cofactor_det(A, one):
    n = len(A)
    if n == 1:
        return A[0][0]
    acc = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * _cofactor_det(minor, one)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _cofactor_adj(A, one):
    n = len(A)
    if n == 1:
        return [[one]]
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            c = _cofactor_det(minor, one)
            adj[j][i] = -c if (i + j) % 2 else c
    return adj


@dataclass
class ThetaExpansion:
    """W(u) for an invariant basis, with det W = u^n h(u), h(0) != 0."""

    W: list
    adj: list
    h_inv: USeries
    n: int
    T: int


def theta_expansion(H: InvariantBasis, n: int, T: int | None = None, tol: float | None = None) -> ThetaExpansion:
    L = H.L
    r = H.M.rank
    T = T or 2 * n + 3
    tol = L.digits / 2 if tol is None else tol
    W = [[expand_at_theta([v[i] for v in H.vectors[b]], L, T) for b in range(r)] for i in range(r)]
    one = USeries([L.one] + [L.zero] * (T - 1), L)
    d = _cofactor_det(W, one)
    for k in range(n):
        if not d.a[k].small(tol):
            raise InsufficientPrecision(f"det of the invariants does not vanish to order {n} at theta")
    h = d.shift_down(n)
    if h.a[0].small(tol):
        raise InsufficientPrecision("det of the invariants vanishes to order > n at theta")
    return ThetaExpansion(W, _cofactor_adj(W, one), h.inverse(), n, T)


def residue_row(X: ThetaExpansion, V, P: MotivePresentation | None = None, L=None):
    """Res_{t=theta} of Y = V W^{-1} (V a row of u-series), mapped to Lie coordinates by the table."""
    r = len(X.W)
    zero = USeries([L.zero] * X.T, L)
    Y = []
    for j in range(r):
        acc = zero
        for b in range(r):
            acc = acc + V[b] * X.adj[b][j]
        Y.append(acc)
    if P is None:
        rows = [Y]
    else:
        rows = []
        for k in range(len(P.table)):
            acc = zero
            for j in range(r):
                if not P.table[k][j].is_zero():
                    acc = acc + tpoly_at_theta(P.table[k][j], L, X.T) * Y[j]
            rows.append([acc])
    out = [[(y * X.h_inv).a[X.n - 1] for y in row] for row in rows]
    return [o[0] for o in out] if P is not None else out[0]


def periods_from_invariants(H: InvariantBasis, P: MotivePresentation):
    """Lie vectors Res (e_b W^{-1}) pushed through the table: a basis of the period lattice."""
    n, _ = validate_effective(H.M)
    X = theta_expansion(H, n)
    L = H.L
    r = H.M.rank
    one = USeries([L.one] + [L.zero] * (X.T - 1), L)
    zero = USeries([L.zero] * X.T, L)
    return [residue_row(X, [one if b == c else zero for c in range(r)], P, L) for b in range(r)]


@dataclass
class HodgeTriple:
    H1: InvariantBasis
    expansions_M: list  # W(u): columns = invariants in M coordinates
    expansions_Mprime: list  # tau(W)(u): the same invariants in M' coordinates
    order_M: int  # ord_u det W
    order_Mprime: int  # ord_u det tau(W)
    n: int

    @property
    def ok(self) -> bool:
        return self.order_Mprime == 0 and self.order_M == self.n


def hodge_triple(M: SigmaModule, H: InvariantBasis | None = None, digits: int = DEFAULT_DIGITS) -> HodgeTriple:
    n, _ = validate_effective(M)
    H = H or tate_invariant_basis(M, digits=digits)
    if not H.verdict:
        raise TMotifError("motif is not analytically trivial at this precision", code="rank-deficient-at-precision")
    L, r = H.L, M.rank
    T = n + 3
    tol = L.digits / 2
    one = USeries([L.one] + [L.zero] * (T - 1), L)
    W = [[expand_at_theta([v[i] for v in H.vectors[b]], L, T) for b in range(r)] for i in range(r)]
    tW = [[expand_at_theta([v[i].frob() for v in H.vectors[b]], L, T) for b in range(r)] for i in range(r)]
    return HodgeTriple(H, W, tW, _cofactor_det(W, one).order(tol), _cofactor_det(tW, one).order(tol), n)


# ---------------------------------------------------------------------------
# block extensions and the Hodge class


def _local_tpoly_mul(b, f, L):
    """(TPoly with K or L coefficients) * (list of t-coefficients) truncated at len(f)."""
    bc = [L(c) for c in b.c]
    out = [L.zero] * len(f)
    for i, x in enumerate(bc):
        if x.is_zero():
            continue
        for j in range(len(f) - i):
            if not f[j].is_zero():
                out[i + j] = out[i + j] + x * f[j]
    return out


def block_invariants(B, H: InvariantBasis):
    """Invariants of [[1, B], [0, A]]: e_0 and (v_b, w_b) with v_b - tau(v_b) = B tau(w_b).

    B is a row of TPoly (over K or with LocalScalar coefficients).
    """
    L = H.L
    vs = []
    for w in H.vectors:
        D = len(w)
        f = [L.zero] * D
        for j, bj in enumerate(B):
            f = [a + c for a, c in zip(f, _local_tpoly_mul(bj, [x[j].frob() for x in w], L))]
        g = coboundary(f, L)
        vs.append([-x for x in g])
    return vs


def block_residual(B, H: InvariantBasis, vs):
    """min valuation of tau(v) + B tau(w) - v over the retained degrees."""
    L = H.L
    worst = None
    for v, w in zip(vs, H.vectors):
        D = len(w)
        f = [L.zero] * D
        for j, bj in enumerate(B):
            f = [a + c for a, c in zip(f, _local_tpoly_mul(bj, [x[j].frob() for x in w], L))]
        for a, b, c in zip(v, f, v):
            d = a.frob() + b - c
            val = d.N if d.is_zero() else d.v
            worst = val if worst is None else min(worst, val)
    return worst


def block_rank(B, H: InvariantBasis) -> int:
    """Rank of the invariant basis of the block motif (r + 1 when every coboundary solve succeeds)."""
    vs = block_invariants(B, H)
    if block_residual(B, H, vs) < H.L.digits * H.L.e:
        return H.rank
    return H.rank + 1


@dataclass
class HodgeExtClass:
    eps_bar: list  # Lie vector, LocalScalar entries
    L: LocalField


def hodge_class(P: MotivePresentation, B, H: InvariantBasis) -> HodgeExtClass:
    """eps_bar = Res_{t=theta} (V W^{-1}) in Lie coordinates."""
    n, _ = validate_effective(P.M)
    if n != 1:
        raise UnsupportedPresentation("Hodge classes are computed for exponent n = 1")
    L = H.L
    X = theta_expansion(H, n)
    vs = block_invariants(B, H)
    V = [expand_at_theta(v, L, X.T) for v in vs]
    return HodgeExtClass(residue_row(X, V, P, L), L)


def local_point_class(P: MotivePresentation, x, L: LocalField):
    """B for a point with coordinates in L (polynomial part of G A, G the t^{-1}-tail)."""
    E, A, r = P.E, P.M.A, P.rank
    D = max(max(a.degree() for row in A for a in row), 0)
    ys = [list(x)]
    for _ in range(D):
        ys.append(_local_act(E, ys[-1], L))
    mus = [[_eval_row_local(b, y, L) for b in P.basis] for y in ys]
    B = []
    for j in range(r):
        coef = {}
        for i in range(r):
            for e_a, c in enumerate(A[i][j].c):
                if c.is_zero():
                    continue
                for s in range(D + 1):
                    e = e_a - s - 1
                    if e < 0:
                        break
                    coef[e] = coef.get(e, L.zero) + mus[s][i] * L(c)
        B.append(_LTPoly([coef.get(e, L.zero) for e in range(D)]))
    return B


class _LTPoly:
    """Minimal t-polynomial with LocalScalar coefficients (only what block_invariants needs)."""

    def __init__(self, c):
        self.c = list(c)


def _local_act(E: TModule, x, L):
    return E.phi.evaluate(list(x), conv=L, q=L.q)


def _eval_row_local(b, x, L):
    acc = L.zero
    for a, xj in zip(b, x):
        if a:
            acc = acc + a.evaluate(xj, conv=L, q=L.q)
    return acc


# ---------------------------------------------------------------------------
# lattice reduction and the comparison h vs u


def reduce_mod_lattice(delta: LocalScalar, lam: LocalScalar, digits: float):
    """Greedy F_q[theta]-division of delta by a rank-one lattice generator.

    Returns (a, remainder) with delta = a(theta) lam + remainder; a is a list
    of F_q elements (constant first) or None if a quotient digit is not in F_q
    or not at a theta-power.
    """
    L = lam.L
    rho = delta / lam
    a = {}
    rem = delta
    for k, c in rho.terms():
        if k > 0:
            break
        if k % L.e or c ** L.q != c:
            return None, rem
        a[-k // L.e] = c
    if a:
        poly = L.zero
        for j, c in a.items():
            poly = poly + L.monomial(c, -j * L.e)
        rem = delta - poly * lam
    deg = max(a, default=-1)
    return [a.get(j, L.F.zero) for j in range(deg + 1)], rem


def in_lattice(delta: LocalScalar, lam: LocalScalar, digits: float) -> bool:
    a, rem = reduce_mod_lattice(delta, lam, digits)
    return a is not None and (rem.is_zero() or rem.small(digits))


def torsion_lift(E: TModule, x: LocalScalar, lam: LocalScalar, N: int, digits: float):
    """eps_u with exp(eps_u) = x among a(theta) lam / theta^N, deg a < N (x killed by t^N)."""
    import itertools

    L = lam.L
    ex = LocalExp(E, L)
    Fq = [L.F(i) for i in range(L.p)]
    base = lam * L.theta_power(N).inverse()
    for coeffs in itertools.product(Fq, repeat=N):
        eps = L.zero
        for j, c in enumerate(coeffs):
            if not c.is_zero():
                eps = eps + L.monomial(c, -j * L.e) * base
        (y,) = ex.exp([eps])
        if (y - x).is_zero() or (y - x).small(digits):
            return eps
    raise TMotifError("point is not a t^N-division point of the lattice", code="not-in-convergence-domain")


def carlitz_torsion_points(L: LocalField, N: int):
    """F_q-basis of E[t^N] for Carlitz, found as roots of theta x + x^q = y (independent of exp)."""
    one = L.one
    P1 = [L.theta, one]
    # theta x + x^q = 0: root of valuation -e/(q-1)
    roots = _residual_roots(P1, -L.e // (L.q - 1), [0, 1], L)
    x = _lift_root(P1, L.monomial(roots[0], -L.e // (L.q - 1)))
    pts = [x]
    inv = L.theta.inverse()
    for _ in range(N - 1):
        y = pts[-1]
        z = L.zero
        for _ in range(400):
            nz = (y - z.frob()) * inv
            if (nz - z).is_zero():
                break
            z = nz
        else:
            raise NotConverged("division iteration did not converge")
        pts.append(z)
    return pts  # pts[k] is killed by t^{k+1}


@dataclass
class CompareResult:
    eps_bar: LocalScalar
    eps_u: LocalScalar
    quotient: list | None
    remainder_val: int
    match: bool
    digits: float


def hodge_ext_compare(E: TModule, x: LocalScalar, N: int, H: InvariantBasis | None = None,
                      digits: int = DEFAULT_DIGITS) -> CompareResult:
    """Compare h (Hodge class of the extension of x) with u (exp-lift of x) for a t^N-torsion x on Carlitz."""
    P = motif_of_tmodule(E)
    if P.family != "carlitz":
        raise UnsupportedPresentation("the comparison is implemented for the Carlitz module")
    H = H or tate_invariant_basis(P.M, x.L)
    L = H.L
    lam = carlitz_period(L)
    B = local_point_class(P, [x], L)
    eb = hodge_class(P, B, H).eps_bar[0]
    tol = digits / 3
    if x.is_zero():
        eu = L.zero
    else:
        eu = torsion_lift(E, x, lam, N, tol)
    a, rem = reduce_mod_lattice(eb - eu, lam, tol)
    ok = a is not None and (rem.is_zero() or rem.small(tol))
    return CompareResult(eb, eu, a, rem.v, ok, tol)


@dataclass
class PointCompare:
    eps_bar: LocalScalar
    deviation: int  # pi-valuation of exp(eps_bar) - x
    match: bool
    digits: float


def hodge_point_compare(E: TModule, x, L: LocalField, H: InvariantBasis | None = None,
                        digits: int = DEFAULT_DIGITS) -> PointCompare:
    """h(x) against u(x) for a point x of a Drinfeld module: exp(h(x)) = x iff h(x) = u(x) mod the lattice.

    Only points for which the block invariants converge (|B tau(w)| < 1) are accepted.
    """
    P = motif_of_tmodule(E)
    if E.dim != 1:
        raise UnsupportedPresentation("the comparison is implemented for d = 1")
    H = H or tate_invariant_basis(P.M, L)
    L = H.L
    xl = [L(c) for c in x]
    B = local_point_class(P, xl, L)
    try:
        eb = hodge_class(P, B, H).eps_bar
    except TMotifError as exc:
        if exc.code == "coefficient-too-large":
            raise TMotifError("point is outside the convergence domain of the block invariants",
                              code="not-in-convergence-domain") from None
        raise
    y = LocalExp(E, L).exp(eb)
    dev = min((a - b).v for a, b in zip(y, xl))
    tol = digits / 3
    return PointCompare(eb[0], dev, dev > tol * L.e, tol)


# ---------------------------------------------------------------------------
# beta residues


def _require_drinfeld(E: TModule):
    if E.dim != 1:
        raise UnsupportedPresentation("exact beta residues need d = 1")


def lie_pairing(m: SkewPoly, eps):
    """eps(m + sigma M') for d = 1: the sigma^0 coefficient times eps."""
    return m[0] * eps if m.c else eps * 0


def beta_partial_fractions(E: TModule, m: SkewPoly, eps, J: int):
    """{s: a_s} with beta_0(m, eps) = sum_s a_s / (theta^{q^s} - t) + (terms with j > J)."""
    _require_drinfeld(E)
    K = E.K
    q = K.q
    c = [M[0][0] for M in exp_series(E, J + 1).coeffs]
    pf = {}
    for k, a in enumerate(m.c):
        if a.is_zero():
            continue
        for j in range(J + 1):
            s = j + k
            term = a * _frob_n(c[j], k) * _frob_n(eps, s)
            pf[s] = pf.get(s, K.zero) + term
    for s in pf:
        if s >= 1 and (K.theta ** (q**s) - K.theta).is_zero():
            raise TMotifError("pole collision", code="pole-collision")
    return pf


def _frob_n(x, n):
    for _ in range(n):
        x = x.frob()
    return x


def beta_residue_exact(E: TModule, m: SkewPoly, eps, J: int = 4):
    """Res_{t=theta} beta_0(m, eps) from the partial fractions; checked against -eps(m + sigma M')."""
    pf = beta_partial_fractions(E, m, eps, J)
    res = -pf.get(0, E.K.zero)
    expected = -lie_pairing(m, eps)
    if res != expected:
        raise TMotifError("residue identity fails", code="residue-mismatch")
    return res


def beta_residue_truncated(E: TModule, m: SkewPoly, eps: LocalScalar, I: int | None = None) -> LocalScalar:
    """-theta^{I+1} sum_k a_k exp(eps / theta^{I+1})^{q^k}, the residue read off the t^I coefficient."""
    _require_drinfeld(E)
    L = eps.L
    q = L.q
    if I is None:
        h = max(-eps.v / L.e, 0) if not eps.is_zero() else 0
        I = int((L.digits + q * h + 4) // (q - 1)) + 1
    ex = LocalExp(E, L)
    th = L.theta_power(I + 1)
    (y,) = ex.exp([eps * th.inverse()])
    acc = L.zero
    z = y
    for k, a in enumerate(m.c):
        if k:
            z = z.frob()
        if not a.is_zero():
            acc = acc + L(a) * z
    return -(th * acc)


# ---------------------------------------------------------------------------
# the period pairing


@dataclass
class PairingValue:
    coeffs: list  # F_q elements, constant first
    max_deviation: int  # min valuation of coefficient - rounded value (pi units)
    degree_checked: int


def lattice_pairing(P: MotivePresentation, lam, w, L: LocalField, terms: int = 8,
                    digits: float | None = None) -> PairingValue:
    """sum_j Y_j(t) w_j(t) with Y_j = sum_i b_j(exp(lam / theta^{i+1})) t^i, rounded into F_q[t]."""
    E = P.E
    if E.dim != 1:
        raise UnsupportedPresentation("pairing is implemented for d = 1")
    digits = L.digits / 2 if digits is None else digits
    ex = LocalExp(E, L)
    r = P.rank
    Y = [[None] * terms for _ in range(r)]
    inv = L.theta.inverse()
    z = lam
    for i in range(terms):
        z = z * inv
        (y,) = ex.exp([z])
        for j in range(r):
            Y[j][i] = _eval_row_local(P.basis[j], [y], L)
    prod = [L.zero] * terms
    for j in range(r):
        wj = [x[j] for x in w] + [L.zero] * terms
        for k in range(terms):
            for i in range(k + 1):
                if not wj[k - i].is_zero():
                    prod[k] = prod[k] + Y[j][i] * wj[k - i]
    coeffs, worst = [], None
    for c in prod:
        a = c.in_Fq(digits)
        if a is None:
            raise NonIntegral(f"pairing coefficient {c} is not within q^-{digits} of F_q")
        dev = c - L.monomial(a, 0)
        val = dev.N if dev.is_zero() else dev.v
        worst = val if worst is None else min(worst, val)
        coeffs.append(a)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return PairingValue(coeffs, worst, terms)
