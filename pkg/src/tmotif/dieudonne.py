"""sigma-modules over K((1/t)) and their slopes.

Slopes are read off a cyclic vector: with w_k = sigma^k v and
sigma^r v = sum_i c_i w_i, the lower convex hull of the points
(i, v(c_i)), (r, 0), v = -deg_t, has the slopes of M as its segment slopes.
Since tau does not change t-degrees this is the usual Newton polygon of a
twisted polynomial.  Carlitz gets slope 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotConverged, ShapeMismatch
from .motif import SigmaModule
from .tpoly import TPoly, det, matfrob, matmul


@dataclass(frozen=True)
class DieudonneModule:
    """sigma-matrix t^{-shift} A with A polynomial."""

    A: list
    K: object
    shift: int = 0

    @property
    def rank(self) -> int:
        return len(self.A)

    @classmethod
    def from_motif(cls, M: SigmaModule) -> "DieudonneModule":
        return cls(M.A, M.K, 0)


def make_standard(K, s: int, r: int) -> DieudonneModule:
    """V_{s/r}: sigma(tau e_i) = e_{i+1}, sigma(tau e_r) = t^s e_1."""
    if r <= 0 or gcd(r, s) != 1:
        raise ShapeMismatch(f"need r > 0 and gcd(r, s) = 1, got s={s}, r={r}")
    h = max(-s, 0)
    one = TPoly.monomial(K, K.one, h)
    A = [[TPoly(K) for _ in range(r)] for _ in range(r)]
    for i in range(r - 1):
        A[i + 1][i] = one
    A[0][r - 1] = TPoly.monomial(K, K.one, s + h)
    return DieudonneModule(A, K, h)


def _candidates(K, r):
    th = K.theta
    for k in range(1, 4):
        yield [TPoly(K, [th ** (i * k)]) for i in range(r)]
    for k in range(1, 3):
        yield [TPoly.monomial(K, th**i, i * k) for i in range(r)]
    yield [TPoly(K, [th**i, K.one]) for i in range(r)]


def _apply(A, v):
    """A tau(v) for a column vector v."""
    tv = [x.frob() for x in v]
    return [sum((A[i][j] * tv[j] for j in range(len(v))), TPoly(v[0].D)) for i in range(len(A))]


def cyclic_newton_points(D: DieudonneModule):
    A, K, r = D.A, D.K, D.rank
    for v in _candidates(K, r):
        ws = [v]
        for _ in range(r):
            ws.append(_apply(A, ws[-1]))
        W = [[ws[j][i] for j in range(r)] for i in range(r)]
        dW = det(W)
        if dW.is_zero():
            continue
        pts = []
        for i in range(r):
            Wi = [[(ws[r][row] if j == i else ws[j][row]) for j in range(r)] for row in range(r)]
            di = det(Wi)
            if not di.is_zero():
                pts.append((i, dW.degree() - di.degree()))
        pts.append((r, 0))
        return pts
    raise NotConverged("no cyclic vector among the candidates")


def lower_hull(pts):
    pts = sorted(pts)
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def newton_slopes(D) -> list[Fraction]:
    """Slopes with multiplicity, ascending."""
    if isinstance(D, SigmaModule):
        D = DieudonneModule.from_motif(D)
    hull = lower_hull(cyclic_newton_points(D))
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        sl = Fraction(y2 - y1, x2 - x1)
        out.extend([sl - D.shift] * (x2 - x1))
    if hull[0][0] != 0:
        raise NotConverged("sigma is not injective")
    total = sum(out)
    dd = det(D.A).degree() - D.shift * D.rank
    if total != dd:
        raise NotConverged(f"slope sum {total} differs from deg det {dd}")
    return out


def polygon_vertices(D):
    if isinstance(D, SigmaModule):
        D = DieudonneModule.from_motif(D)
    hull = lower_hull(cyclic_newton_points(D))
    return [(x, y - D.shift * x) for x, y in hull]


def is_fg_over_skew(M) -> bool:
    return all(s > 0 for s in newton_slopes(M))


def valuation_growth_slopes(D, n: int):
    """Independent estimate from B_n = A tau(A) ... tau^{n-1}(A).

    Partial sums lambda_1 + ... + lambda_k (largest first) are approximated by
    max deg of k x k minors of B_n divided by n.  Only meant for small r, n.
    """
    if isinstance(D, SigmaModule):
        D = DieudonneModule.from_motif(D)
    A, r = D.A, D.rank
    B = A
    cur = A
    for _ in range(n - 1):
        cur = matfrob(cur)
        B = matmul(B, cur)
    partial = [Fraction(0)]
    for k in range(1, r + 1):
        best = None
        for rows in itertools.combinations(range(r), k):
            for cols in itertools.combinations(range(r), k):
                m = det([[B[i][j] for j in cols] for i in rows])
                if not m.is_zero():
                    best = m.degree() if best is None else max(best, m.degree())
        partial.append(Fraction(best, n) - k * D.shift)
    return partial
