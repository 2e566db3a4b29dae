"""Reduction at finite primes of F_q(theta) and Frobenius data.

Only prime q is supported here: the residue field F_v is built as
F_p[z]/(f_v) with theta-bar = z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import flint

from .anderson import MotivePresentation, TModule, motif_of_tmodule
from .errors import TMotifError, BadReduction, CapExceeded, DescentFailure, UnsupportedPresentation, ZeroDenominator
from .fields import FiniteDomain, FiniteField, finite_field
from .motif import SigmaModule
from .tpoly import TPoly, berkowitz, det, matfrob, matmul


@dataclass(frozen=True)
class PrimeV:
    """Monic irreducible f_v in F_q[theta] (coefficients as ints, constant first)."""

    coeffs: tuple
    p: int

    def __post_init__(self):
        c = tuple(int(x) % self.p for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        if len(c) < 2 or c[-1] != 1:
            raise BadReduction("f_v must be monic of positive degree")
        if not flint.fmpz_mod_poly_ctx(self.p)(list(c)).is_irreducible():
            raise BadReduction(f"f_v = {self} is reducible")

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    def residue_field(self) -> FiniteField:
        return FiniteField(self.p, self.m, self.coeffs)

    def theta_bar(self):
        return self.residue_field().gen

    def __str__(self):
        terms = []
        for i in range(self.m, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mon = "" if i == 0 else ("theta" if i == 1 else f"theta^{i}")
            terms.append(str(c) if not mon else (mon if c == 1 else f"{c}*{mon}"))
        return " + ".join(terms)


def _require_prime_q(K):
    if K.k.n != 1:
        raise UnsupportedPresentation("reduction is implemented for prime q only")


def _reduce_scalar(x, tb, F):
    try:
        return x.evaluate(tb, F)
    except ZeroDenominator:
        raise BadReduction("an entry has a denominator divisible by f_v") from None


@dataclass(frozen=True)
class ResidueMotif:
    A: list  # matrix of TPoly over FiniteDomain(F_v, q)
    v: PrimeV
    D: FiniteDomain

    @property
    def rank(self) -> int:
        return len(self.A)


def reduce_at_prime(M, v: PrimeV) -> ResidueMotif:
    if isinstance(M, MotivePresentation):
        M = M.M
    K = M.K
    _require_prime_q(K)
    F = v.residue_field()
    tb = F.gen
    D = FiniteDomain(F, K.q)
    A = [[TPoly(D, [_reduce_scalar(c, tb, F) for c in a.c]) for a in row] for row in M.A]
    d = det(A)
    if d.is_zero() or d.degree() < det(M.A).degree():
        raise BadReduction("sigma-matrix degenerates modulo f_v")
    return ResidueMotif(A, v, D)


def frobenius_matrix(R: ResidueMotif):
    """Pi = A tau(A) ... tau^{m-1}(A) over F_v[t]."""
    Pi = R.A
    cur = R.A
    for _ in range(R.v.m - 1):
        cur = matfrob(cur)
        Pi = matmul(Pi, cur)
    return Pi


def frobenius_charpoly(R: ResidueMotif):
    """det(X - Pi) descended to F_q[t]: list over X-powers of int coefficient lists in t."""
    Pi = frobenius_matrix(R)
    cp = berkowitz(Pi)
    q = R.D.q
    out = []
    for c in cp:
        row = []
        for a in c.c:
            if a**q != a:
                raise DescentFailure("a charpoly coefficient is not fixed by the residue Frobenius")
            row.append(int(a.to_list()[0]) if a.to_list() else 0)
        out.append(_strip(row))
    return out


def _strip(row):
    while row and row[-1] == 0:
        row.pop()
    return row


def format_charpoly(cp, var="X") -> str:
    parts = []
    for i in range(len(cp) - 1, -1, -1):
        c = cp[i]
        if not c:
            continue
        s = format_int_poly(c, "t")
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mon:
            parts.append(f"({s})" if "+" in s else s)
        elif s == "1":
            parts.append(mon)
        else:
            parts.append(f"({s})*{mon}" if "+" in s else f"{s}*{mon}")
    return " + ".join(parts) if parts else "0"


def format_int_poly(c, var="t") -> str:
    terms = []
    for i in range(len(c) - 1, -1, -1):
        a = c[i]
        if not a:
            continue
        mon = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        terms.append(str(a) if not mon else (mon if a == 1 else f"{a}*{mon}"))
    return " + ".join(terms) if terms else "0"


def irreducibles(p: int, deg: int):
    """Monic irreducibles of the given degree over F_p, in lexicographic order (top coefficient down)."""
    ctx = flint.fmpz_mod_poly_ctx(p)
    for tail in itertools.product(range(p), repeat=deg):
        coeffs = list(reversed(tail)) + [1]
        if ctx(coeffs).is_irreducible():
            yield PrimeV(tuple(coeffs), p)


def frob_table(M: SigmaModule, max_deg: int):
    rows = []
    for n in range(1, max_deg + 1):
        for v in irreducibles(M.K.p, n):
            try:
                R = reduce_at_prime(M, v)
            except BadReduction:
                rows.append((v, None))
                continue
            rows.append((v, frobenius_charpoly(R)))
    return rows


# ---------------------------------------------------------------------------
# torsion over finite fields


def _reduced_phi(E: TModule, G: FiniteField, tb):
    return [[[_reduce_scalar(c, tb, G) for c in a.c] for a in row] for row in E.phi.rows]


def _apply_phi(phi, x, q):
    d = len(x)
    out = []
    for i in range(d):
        acc = x[0] * 0
        for j in range(d):
            y = x[j]
            for k, c in enumerate(phi[i][j]):
                if k:
                    y = y**q
                if not c.is_zero():
                    acc = acc + c * y
        out.append(acc)
    return out


def _apply_f(phi, f, x, q):
    out = [xi * 0 for xi in x]
    y = list(x)
    for s, c in enumerate(f):
        if s:
            y = _apply_phi(phi, y, q)
        if c % q:
            out = [o + yi * c for o, yi in zip(out, y)]
    return out


@dataclass
class TorsionKernel:
    field: FiniteField
    theta_bar: object
    basis: list  # F_q-basis, each a d-vector over field
    phi: list
    q: int


def _embed_root(G: FiniteField, v: PrimeV):
    roots = G.poly_ring([G(c) for c in v.coeffs]).roots()
    if not roots:
        return None
    return roots[0][0]


def torsion_kernel(E: TModule, v: PrimeV, f, cap: int = 12) -> TorsionKernel:
    """F_q-basis of E[f] over the smallest F_{q^{mj}} (j <= cap) that contains it."""
    K = E.K
    _require_prime_q(K)
    q, p = K.q, K.p
    f = [int(c) % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    if not f:
        raise BadReduction("f must be nonzero")
    d = E.dim
    r = motif_of_tmodule(E).rank
    target = r * (len(f) - 1)
    for j in range(1, cap + 1):
        n = v.m * j
        try:
            G = finite_field(p, n)
        except TMotifError as exc:  # no shipped modulus
            raise CapExceeded(f"extension degree {n} not available") from exc
        tb = _embed_root(G, v)
        phi = _reduced_phi(E, G, tb)
        basis = _kernel_basis(G, d, lambda x: _apply_f(phi, f, x, q))
        if len(basis) >= target:
            return TorsionKernel(G, tb, basis, phi, q)
    raise CapExceeded(f"E[f] not rational over extensions of degree <= {cap}")


def _kernel_basis(G: FiniteField, d: int, fn):
    n = G.n
    p = G.p
    N = d * n
    cols = []
    for i in range(d):
        for k in range(n):
            x = [G.zero] * d
            x[i] = G.from_vector([1 if kk == k else 0 for kk in range(n)])
            y = fn(x)
            cols.append([c for yi in y for c in G.to_vector(yi)])
    M = flint.nmod_mat(N, N, [cols[j][i] for i in range(N) for j in range(N)], p)
    X, nullity = M.nullspace()
    basis = []
    for c in range(nullity):
        vec = [int(X[i, c]) for i in range(N)]
        basis.append([G.from_vector(vec[i * n:(i + 1) * n]) for i in range(d)])
    return basis


def kernel_size(T: TorsionKernel) -> int:
    return T.q ** len(T.basis)


def frobenius_on_torsion(T: TorsionKernel, v: PrimeV):
    """Matrix (over F_q) of x -> x^{q^m} on the kernel basis; column j = image of basis_j."""
    G, q, p = T.field, T.q, T.field.p
    n = G.n
    d = len(T.basis[0]) if T.basis else 0
    b = len(T.basis)
    N = d * n
    cols = [[c for xi in vec for c in G.to_vector(xi)] for vec in T.basis]
    M = flint.nmod_mat(N, b, [cols[j][i] for i in range(N) for j in range(b)], p)
    out = []
    for vec in T.basis:
        img = [xi ** (q**v.m) for xi in vec]
        rhs = [c for xi in img for c in G.to_vector(xi)]
        out.append(_solve_columns(M, rhs, p))
    return [[out[j][i] for j in range(b)] for i in range(b)]


def _solve_columns(M, rhs, p):
    N, b = M.nrows(), M.ncols()
    aug = flint.nmod_mat(N, b + 1, [int(M[i, j]) if j < b else rhs[i] for i in range(N) for j in range(b + 1)], p)
    R, rank = aug.rref()
    sol = [0] * b
    row = 0
    for j in range(b):
        if row < rank and int(R[row, j]) == 1 and all(int(R[row, k]) == 0 for k in range(j)):
            sol[j] = int(R[row, b])
            row += 1
    return sol


def charpoly_mod_p(mat, p: int):
    """det(X - mat) over F_p, coefficients constant first."""
    n = len(mat)
    if n == 0:
        return [1]
    m = flint.nmod_mat(n, n, [x for r in mat for x in r], p)
    return [int(c) for c in m.charpoly().coeffs()]


def reduce_charpoly_at(cp, a: int, p: int):
    """Evaluate each t-coefficient at t = a: X-polynomial over F_p."""
    out = []
    for c in cp:
        out.append(sum(ci * pow(a, i, p) for i, ci in enumerate(c)) % p)
    return out


def compatible_at(P: MotivePresentation, v: PrimeV, a: int, cap: int = 12):
    """Compare the motif-side charpoly mod (t - a) with the charpoly of Frobenius on E[t - a]."""
    p = P.K.p
    R = reduce_at_prime(P, v)
    cp = frobenius_charpoly(R)
    T = torsion_kernel(P.E, v, [-a % p, 1], cap)
    F = frobenius_on_torsion(T, v)
    lhs = reduce_charpoly_at(cp, a, p)
    rhs = charpoly_mod_p(F, p)
    return lhs == rhs, lhs, rhs
