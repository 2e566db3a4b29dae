"""Duality for torsion modules over k[[z]] through residues.

alpha: F -> G is an injective map of free k[[z]]-modules of rank n with
cokernel T.  A functional phi on F gives the functional
pi(g) -> Res_{z=0} phi(alpha^{-1} g) on T.
"""

from __future__ import annotations

from dataclasses import dataclass

import flint

from .errors import InsufficientPrecision, ShapeMismatch, TMotifError
from .tpoly import adjugate, det


class PS:
    """Truncated power series over F_p: sum c_i z^i + O(z^prec)."""

    __slots__ = ("c", "p", "prec")

    def __init__(self, coeffs, p: int, prec: int):
        self.p = p
        self.prec = prec
        c = [int(x) % p for x in list(coeffs)[:prec]]
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    def _co(self, o):
        return o if isinstance(o, PS) else PS([o], self.p, self.prec)

    def __add__(self, o):
        o = self._co(o)
        P = min(self.prec, o.prec)
        a, b = self.c[:P], o.c[:P]
        if len(a) < len(b):
            a, b = b, a
        return PS([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)], self.p, P)

    __radd__ = __add__

    def __neg__(self):
        return PS([-x for x in self.c], self.p, self.prec)

    def __sub__(self, o):
        return self + (-self._co(o))

    def __mul__(self, o):
        o = self._co(o)
        va, vb = self.valuation(), o.valuation()
        P = min(self.prec + vb, o.prec + va)
        out = [0] * max(min(P, len(self.c) + len(o.c)), 0)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    if i + j < len(out):
                        out[i + j] += x * y
        return PS(out, self.p, P)

    __rmul__ = __mul__

    def __pow__(self, n):
        r = PS([1], self.p, self.prec)
        for _ in range(n):
            r = r * self
        return r

    def __getitem__(self, i):
        if i >= self.prec:
            raise InsufficientPrecision(f"z^{i} beyond precision {self.prec}")
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __bool__(self):
        return bool(self.c)

    def is_zero(self):
        return not self.c

    def valuation(self) -> int:
        for i, x in enumerate(self.c):
            if x:
                return i
        return self.prec

    def shift_down(self, v: int) -> "PS":
        return PS(self.c[v:], self.p, self.prec - v)

    def inverse_unit(self) -> "PS":
        if not self.c or self.c[0] == 0:
            raise TMotifError("not a unit", code="not-a-unit")
        inv0 = pow(self.c[0], -1, self.p)
        s = []
        for k in range(self.prec):
            acc = 1 if k == 0 else 0
            for j in range(1, min(k, len(self.c) - 1) + 1):
                acc -= self.c[j] * s[k - j]
            s.append(acc * inv0 % self.p)
        return PS(s, self.p, self.prec)

    def __repr__(self):
        return f"PS({self.c}, O(z^{self.prec}))"


@dataclass(frozen=True)
class PowerSeriesMap:
    alpha: tuple  # n x n of PS
    p: int
    prec: int

    @classmethod
    def from_lists(cls, rows, p: int, prec: int):
        return cls(tuple(tuple(PS(e, p, prec) for e in r) for r in rows), p, prec)

    @property
    def n(self):
        return len(self.alpha)

    def matrix(self):
        return [list(r) for r in self.alpha]


def smith_valuations(al: PowerSeriesMap):
    """Exponents a_i of the elementary divisors z^{a_i} and U^{-1} with U alpha V = diag."""
    M = al.matrix()
    n, p, P = al.n, al.p, al.prec
    one, zero = PS([1], p, P), PS([], p, P)
    Uinv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    exps = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                v = M[i][j].valuation()
                if v < P and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise InsufficientPrecision("alpha is not injective at this precision")
        v, i, j = best
        M[k], M[i] = M[i], M[k]
        for r in Uinv:
            r[k], r[i] = r[i], r[k]
        for r in M:
            r[k], r[j] = r[j], r[k]
        u = M[k][k].shift_down(v).inverse_unit()
        for i in range(k + 1, n):
            if M[i][k]:
                c = M[i][k].shift_down(v) * u
                M[i] = [a - c * b for a, b in zip(M[i], M[k])]
                for r in Uinv:
                    r[k] = r[k] + r[i] * c
        for j in range(k + 1, n):
            if M[k][j]:
                c = M[k][j].shift_down(v) * u
                for r in M:
                    r[j] = r[j] - r[k] * c
        exps.append(v)
    return exps, Uinv


def torsion_basis(al: PowerSeriesMap):
    """k-basis of T as lifts g in G: U^{-1} z^j e_i, j < a_i."""
    exps, Uinv = smith_valuations(al)
    n, p, P = al.n, al.p, al.prec
    out = []
    for i, a in enumerate(exps):
        for j in range(a):
            zj = PS([0] * j + [1], p, P)
            out.append([Uinv[r][i] * zj for r in range(n)])
    return out


def torsion_dual_surjection(al: PowerSeriesMap, phi, g) -> int:
    """Res_{z=0} phi(alpha^{-1} g)."""
    n, p, P = al.n, al.p, al.prec
    if len(phi) != n or len(g) != n:
        raise ShapeMismatch("phi and g must have length n")
    phi = [x if isinstance(x, PS) else PS(x, p, P) for x in phi]
    g = [x if isinstance(x, PS) else PS(x, p, P) for x in g]
    A = al.matrix()
    d = det(A)
    v = d.valuation()
    if v >= d.prec:
        raise InsufficientPrecision("det alpha vanishes at this precision")
    adj = adjugate(A)
    w = [sum((adj[i][j] * g[j] for j in range(n)), PS([], p, P)) for i in range(n)]
    s = sum((phi[i] * w[i] for i in range(n)), PS([], p, P))
    u = d.shift_down(v).inverse_unit()
    if v - 1 >= min(s.prec, u.prec):
        raise InsufficientPrecision(f"need precision above {v}")
    return (s * u)[v - 1] if v >= 1 else 0


def pairing_matrix(al: PowerSeriesMap, functionals=None):
    basis = torsion_basis(al)
    n, P = al.n, al.prec
    if functionals is None:
        functionals = []
        for i in range(n):
            for j in range(max(P // 2, 1)):
                functionals.append([[0] * j + [1] if k == i else [] for k in range(n)])
    return [[torsion_dual_surjection(al, f, g) for g in basis] for f in functionals], basis


def _rank(rows, p):
    if not rows or not rows[0]:
        return 0
    m = flint.nmod_mat(len(rows), len(rows[0]), [x for r in rows for x in r], p)
    return m.rank()


def residue_pairing_perfectness(al: PowerSeriesMap) -> bool:
    """The functionals induced from Hom(F, k[[z]]) separate T: rank = dim_k T."""
    M, basis = pairing_matrix(al)
    if not basis:
        return True
    if _rank(M, al.p) != len(basis):
        raise TMotifError("pairing is degenerate", code="singular-pairing")
    return True


def transpose_map(al: PowerSeriesMap) -> PowerSeriesMap:
    return PowerSeriesMap(tuple(zip(*al.alpha)), al.p, al.prec)


def dimension_identity(al: PowerSeriesMap) -> tuple[int, int]:
    """(dim_k T, dim_k coker alpha^T)."""
    a, _ = smith_valuations(al)
    b, _ = smith_valuations(transpose_map(al))
    return sum(a), sum(b)


def image_functional(al: PowerSeriesMap, psi):
    """psi o alpha, a functional in the image of alpha^T."""
    n, p, P = al.n, al.p, al.prec
    psi = [x if isinstance(x, PS) else PS(x, p, P) for x in psi]
    return [sum((psi[i] * al.alpha[i][j] for i in range(n)), PS([], p, P)) for j in range(n)]
