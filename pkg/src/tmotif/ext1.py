"""Extensions of a motif by the unit motif, and the isomorphism with points.

A class is a row B over K[t]; the extension has sigma-matrix
[[1, B], [0, A]] and B is taken modulo delta(F) = F A - tau(F).

For a point x the class is built from the t^{-1}-tails
G_j = sum_{s >= 0} mu_x(t^s e_j) t^{-s-1}: then G A - tau(G) is a
polynomial row, which is B.
"""

from __future__ import annotations

from dataclasses import dataclass

from .anderson import MotivePresentation, TModule, motif_of_tmodule, point_act
from .errors import (
    FieldMismatch,
    NoConvergence,
    RoundTripFailure,
    ShapeMismatch,
    TailNoncancellation,
    UnsupportedPresentation,
)
from .motif import SigmaModule, validate_effective
from .skew import SkewMatrix
from .series import TLaurentTail, inverse_tail
from .tpoly import TPoly, adjugate, det, max_degree, smith_diagonal, transpose

DEFAULT_TAIL = 2
MAX_RETRIES = 4


@dataclass(frozen=True)
class ExtClass:
    P: MotivePresentation
    B: tuple  # 1 x r row of TPoly

    def __post_init__(self):
        if len(self.B) != self.P.rank:
            raise ShapeMismatch(f"B has length {len(self.B)}, motif has rank {self.P.rank}")

    def __add__(self, other: "ExtClass") -> "ExtClass":
        _same_motif(self, other)
        return ExtClass(self.P, tuple(a + b for a, b in zip(self.B, other.B)))

    def __neg__(self):
        return ExtClass(self.P, tuple(-a for a in self.B))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "ExtClass":
        """a . [B] = [a B] for a in k[t] (TPoly or list of ints)."""
        K = self.P.K
        a = a if isinstance(a, TPoly) else TPoly(K, [K(c) for c in a])
        return ExtClass(self.P, tuple(a * b for b in self.B))

    def is_split(self) -> bool:
        return all(b.is_zero() for b in reduce_extension(self).B)

    def equivalent(self, other: "ExtClass") -> bool:
        return (self - other).is_split()

    def block_motif(self) -> SigmaModule:
        return build_block_motif(self.P, [self.B])

    def __str__(self):
        return "[" + ", ".join(f'"{b}"' for b in self.B) + "]"


def _same_motif(c1, c2):
    if c1.P is not c2.P and c1.P.M.A != c2.P.M.A:
        raise FieldMismatch("extension classes of different motifs")


def delta_image(F, M: SigmaModule):
    """delta(F) = F A - tau(F) for a row F."""
    r = M.rank
    if len(F) != r:
        raise ShapeMismatch(f"row of length {len(F)} for rank {r}")
    out = []
    for j in range(r):
        acc = TPoly(M.K)
        for i in range(r):
            if F[i] and M.A[i][j]:
                acc = acc + F[i] * M.A[i][j]
        out.append(acc - F[j].frob())
    return tuple(out)


# ---------------------------------------------------------------------------
# point -> class


def point_to_extension(P: MotivePresentation, x, N: int | None = None) -> ExtClass:
    N = DEFAULT_TAIL if N is None else N
    for _ in range(MAX_RETRIES + 1):
        try:
            return _point_to_extension(P, list(x), N)
        except TailNoncancellation:
            N *= 2
    raise TailNoncancellation(f"tail terms do not cancel at precision {N}")


def _point_to_extension(P, x, N):
    K, A, r = P.K, P.M.A, P.rank
    D = max(max_degree(A), 0)
    S = D + N
    mus = P.mu_powers(x, S)  # mus[s][j] = mu(t^s e_j)
    B = []
    for j in range(r):
        # coefficients of (G A)_j at t^e for e in [-N, D-1]
        coef = {}
        for i in range(r):
            a = A[i][j]
            for e_a, c in enumerate(a.c):
                if c.is_zero():
                    continue
                for s in range(S):
                    e = e_a - s - 1
                    if e < -N:
                        break
                    coef[e] = coef.get(e, K.zero) + mus[s][i] * c
        for k in range(1, N + 1):
            if coef.get(-k, K.zero) != mus[k - 1][j].frob():
                raise TailNoncancellation(f"coefficient of t^-{k} in column {j} does not cancel")
        B.append(TPoly(K, [coef.get(e, K.zero) for e in range(D)]))
    return ExtClass(P, tuple(B))


# ---------------------------------------------------------------------------
# normal forms


def reduce_extension(c: ExtClass) -> ExtClass:
    P = c.P
    fam = P.family
    if fam.startswith("sum("):
        return _reduce_blocks(c)
    if fam in ("carlitz", "drinfeld", "companion"):
        return ExtClass(P, _reduce_companion(P, list(c.B)))
    if fam == "carlitz-power":
        return ExtClass(P, _reduce_rank_one(P, list(c.B)))
    raise UnsupportedPresentation(f"no normal form for family {fam}")


def _reduce_blocks(c: ExtClass) -> ExtClass:
    P = c.P
    E = P.E
    sub = []
    for a, b in _dim_blocks(P):
        Eb = TModule(SkewMatrix(E.K, [row[a:b] for row in E.phi.rows[a:b]]), E.K, E.name)
        sub.append(motif_of_tmodule(Eb))
    out = []
    off = 0
    for Q in sub:
        part = ExtClass(Q, tuple(c.B[off:off + Q.rank]))
        out.extend(reduce_extension(part).B)
        off += Q.rank
    return ExtClass(P, tuple(out))


def _dim_blocks(P):
    rows = P.E.phi.rows
    d = len(rows)
    cuts, start = [], 0
    for end in range(1, d + 1):
        if all(not rows[i][j] and not rows[j][i] for i in range(start, end) for j in range(end, d)):
            cuts.append((start, end))
            start = end
    return cuts


def _companion_shape(P):
    d = P.E.dim
    r = P.rank
    return d, r // d


def _sub_delta(B, F, M):
    dl = delta_image(F, M)
    return [b - x for b, x in zip(B, dl)]


def _reduce_companion(P, B):
    K = P.K
    M = P.M
    d, s = _companion_shape(P)
    r = P.rank
    lead = P.E.coefficient(s)
    zero = TPoly(K)
    last = range((s - 1) * d, s * d)
    for _ in range(10_000):
        # move everything into the last block
        for i in range(s - 1):
            for l in range(d):
                f = B[i * d + l]
                if f:
                    F = [zero] * r
                    F[(i + 1) * d + l] = f
                    B = _sub_delta(B, F, M)
        k = max((B[j].degree() for j in last), default=-1)
        if k <= 0:
            return tuple(B)
        b = [B[j][k] for j in last]
        cvec = [sum((lead[m][n] * b[n] for n in range(d)), K.zero) for m in range(d)]
        F = [zero] * r
        for m in range(d):
            F[m] = TPoly.monomial(K, cvec[m], k - 1)
        B = _sub_delta(B, F, M)
    raise NoConvergence("reduction did not terminate")


def _reduce_rank_one(P, B):
    K = P.K
    a = P.M.A[0][0]
    n = a.degree()
    alpha_inv = K.one / a.lead()
    (b,) = B
    while b.degree() >= n:
        m = b.degree()
        F = [TPoly.monomial(K, b.lead() * alpha_inv, m - n)]
        (b,) = _sub_delta([b], F, P.M)
    return (b,)


# ---------------------------------------------------------------------------
# class -> point


def _inverse_matrix_tail(A, prec):
    dt = det(A)
    adj = adjugate(A)
    dA = max(max_degree(adj), 0)
    inv = inverse_tail(dt, prec + dA)
    return [[inv * a for a in row] for row in adj]


def extension_to_point(c: ExtClass, max_iter: int | None = None, verify: bool = True):
    P = c.P
    K, r = P.K, P.rank
    red = reduce_extension(c)
    B = list(red.B)
    if all(b.is_zero() for b in B):
        return [K.zero] * P.E.dim
    X = max(max(max_degree(P.table), 0) + 2, 2)
    adj_deg = max(max_degree(adjugate(P.M.A)), 0)
    det_deg = det(P.M.A).degree()
    pad = r * max(0, adj_deg - det_deg)
    W = X + pad
    Ainv = _inverse_matrix_tail(P.M.A, W + max(max_degree([B]), 0) + 1)
    G = [TLaurentTail(K, {}, W) for _ in range(r)]
    max_iter = max_iter or 4 * r * (W + 2) + 8
    for _ in range(max_iter):
        H = [TLaurentTail.from_tpoly(B[i], W) + G[i].frob() for i in range(r)]
        G_new = []
        for j in range(r):
            acc = None
            for i in range(r):
                term = H[i] * Ainv[i][j]
                acc = term if acc is None else acc + term
            G_new.append(_tail_window(acc, W, K))
        if all(_same_window(a, b, W) for a, b in zip(G, G_new)):
            break
        G = G_new
    else:
        raise NoConvergence("tail fixed point did not stabilise")
    x = []
    for k in range(P.E.dim):
        acc = K.zero
        for j in range(r):
            for i, pc in enumerate(P.table[k][j].c):
                if not pc.is_zero():
                    acc = acc + pc * G[j][-i - 1]
        x.append(acc)
    if verify:
        back = point_to_extension(P, x)
        if not (back - red).is_split():
            raise RoundTripFailure("recovered point does not reproduce the class")
    return x


def _tail_window(f: TLaurentTail, W: int, K) -> TLaurentTail:
    return TLaurentTail(K, {-k: f[-k] for k in range(1, min(W, f.prec) + 1)}, W)


def _same_window(a, b, W):
    return all(a[-k] == b[-k] for k in range(1, W + 1))


# ---------------------------------------------------------------------------
# block motifs and the dual


def build_block_motif(P: MotivePresentation, rows) -> SigmaModule:
    K = P.K
    n, r = len(rows), P.rank
    one, zero = TPoly(K, [K.one]), TPoly(K)
    A = []
    for i in range(n):
        A.append([one if j == i else zero for j in range(n)] + list(rows[i]))
    for i in range(r):
        A.append([zero] * n + list(P.M.A[i]))
    return SigmaModule(A, K)


def build_one_t_motif(P: MotivePresentation, points, N: int | None = None):
    rows = [point_to_extension(P, u, N).B for u in points]
    Mt = build_block_motif(P, rows)
    validate_effective(Mt)
    return Mt, rows


def dual_motif(P: MotivePresentation) -> SigmaModule:
    """sigma on Hom(M, C): (t - theta) (A^{-1})^T, with denominators cancelled."""
    K = P.K
    n, alpha = validate_effective(P.M)
    adjT = transpose(adjugate(P.M.A))
    if n != 1:
        raise UnsupportedPresentation("dual is defined here for exponent n = 1")
    inv = K.one / alpha
    return SigmaModule([[a * inv for a in row] for row in adjT], K)


def dual_sequence_check(P: MotivePresentation):
    Md = dual_motif(P)
    diag = smith_diagonal(Md.A)
    dim = sum(f.degree() for f in diag)
    return dim, dim == P.rank - 1


def ext_module_ops(c1: ExtClass, c2: ExtClass | None = None, a=None) -> ExtClass:
    out = c1 if c2 is None else c1 + c2
    return out if a is None else out.scale(a)


__all__ = [
    "ExtClass",
    "build_block_motif",
    "build_one_t_motif",
    "delta_image",
    "dual_motif",
    "dual_sequence_check",
    "ext_module_ops",
    "extension_to_point",
    "point_act",
    "point_to_extension",
    "reduce_extension",
]
