"""Abelian t-modules, their motifs, and points.

M_E = K[sigma]^{1 x d} (row vectors).  sigma acts by left multiplication,
t by right multiplication with phi_t.  A point x in E(K) = K^d is the
K[sigma]-linear map mu_x(m) = m(x).

A :class:`MotivePresentation` fixes a K[t]-basis e_1..e_r of M_E, each
given as a row vector ``basis[j]`` of twisted polynomials, together with the
matrix A of sigma in that basis and a table P with eps_k = sum_j P[k][j] e_j
for the standard generators eps_k.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, NotNilpotent, ShapeMismatch, UnsupportedPresentation
from .motif import SigmaModule, t_minus_theta, validate_effective
from .skew import SkewMatrix, SkewPoly
from .tpoly import TPoly, adjugate, block_diag, det, smith_diagonal


@dataclass(frozen=True)
class TModule:
    phi: SkewMatrix
    K: object
    name: str = ""

    def __post_init__(self):
        n, m = self.phi.shape
        if n == 0 or n != m:
            raise ShapeMismatch("phi_t must be a nonempty square matrix")

    @property
    def dim(self) -> int:
        return self.phi.shape[0]

    def coefficient(self, k: int):
        return self.phi.coefficient(k)

    def lie(self):
        """d phi_t, the sigma-degree-0 coefficient matrix."""
        return self.coefficient(0)

    def act(self, x):
        return self.phi.evaluate(list(x))

    def __str__(self):
        return str(self.phi)


def _mat_mul_scalar(A, B, K):
    n, k, m = len(A), len(B), len(B[0])
    return [[_sum((A[i][t] * B[t][j] for t in range(k)), K.zero) for j in range(m)] for i in range(n)]


def _sum(it, zero):
    acc = zero
    for x in it:
        acc = acc + x
    return acc


def validate_abelian(E: TModule):
    """Nilpotency of d phi_t - theta and membership in a supported family."""
    K = E.K
    d = E.dim
    N = [[E.lie()[i][j] - (K.theta if i == j else K.zero) for j in range(d)] for i in range(d)]
    P = N
    for _ in range(d - 1):
        P = _mat_mul_scalar(P, N, K)
    if any(not x.is_zero() for r in P for x in r):
        raise NotNilpotent("d phi_t - theta is not nilpotent")
    motif_of_tmodule(E)
    return True


@dataclass(frozen=True)
class MotivePresentation:
    E: TModule
    M: SigmaModule
    basis: tuple  # r rows, each a tuple of d SkewPoly
    table: list  # d x r matrix of TPoly
    family: str

    @property
    def rank(self) -> int:
        return self.M.rank

    @property
    def K(self):
        return self.M.K

    def mu_powers(self, x, n: int):
        """[[mu_x(t^s e_j) for j] for s < n]."""
        E = self.E
        out = []
        y = list(x)
        for s in range(n):
            out.append([_eval_row(b, y) for b in self.basis])
            if s + 1 < n:
                y = E.act(y)
        return out

    def check(self) -> bool:
        """sigma b_j = sum_i A_ij(t) b_i and eps_k = sum_j P_kj(t) b_j in K[sigma]^{1xd}."""
        K, E = self.K, self.E
        r, d = self.rank, E.dim
        for j in range(r):
            lhs = [SkewPoly.sigma(K) * a for a in self.basis[j]]
            rhs = _zero_row(K, d)
            for i in range(r):
                rhs = _row_add(rhs, _t_act(self.M.A[i][j], self.basis[i], E))
            if lhs != rhs:
                return False
        for k in range(d):
            eps = [SkewPoly(K, [K.one] if m == k else []) for m in range(d)]
            rhs = _zero_row(K, d)
            for j in range(r):
                rhs = _row_add(rhs, _t_act(self.table[k][j], self.basis[j], E))
            if eps != rhs:
                return False
        return True


def _eval_row(b, x):
    acc = None
    for a, xj in zip(b, x):
        if a:
            v = a.evaluate(xj)
            acc = v if acc is None else acc + v
    return acc if acc is not None else x[0] * 0


def _zero_row(K, d):
    return [SkewPoly(K) for _ in range(d)]


def _row_add(a, b):
    return [x + y for x, y in zip(a, b)]


def _row_times_matrix(row, phi: SkewMatrix):
    d = len(row)
    return [_sum_skew((row[i] * phi.rows[i][j] for i in range(d) if row[i]), row[0].D) for j in range(d)]


def _sum_skew(it, D):
    acc = SkewPoly(D)
    for x in it:
        acc = acc + x
    return acc


def _t_act(p: TPoly, row, E: TModule):
    """p(t) . row = sum_s p_s (row phi_t^s)."""
    K = E.K
    out = _zero_row(K, E.dim)
    cur = list(row)
    for s, c in enumerate(p.c):
        if s:
            cur = _row_times_matrix(cur, E.phi)
        if not c.is_zero():
            out = _row_add(out, [SkewPoly(K, [c]) * a for a in cur])
    return out


# ---------------------------------------------------------------------------
# families


def carlitz(K) -> TModule:
    return TModule(SkewMatrix(K, [[SkewPoly(K, [K.theta, K.one])]]), K, "carlitz")


def drinfeld(K, coeffs) -> TModule:
    """phi_t = theta + g_1 s + ... + g_r s^r."""
    coeffs = [K(c) for c in coeffs]
    if coeffs[0] != K.theta:
        raise NotNilpotent("constant term of phi_t must be theta")
    return TModule(SkewMatrix(K, [[SkewPoly(K, coeffs)]]), K, f"drinfeld{len(coeffs) - 1}")


def carlitz_power(K, n: int) -> TModule:
    """C^{(x)n}: phi_t = theta I + N + E_{n1} s."""
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = [K.zero, K.zero]
            if i == j:
                c[0] = K.theta
            if j == i + 1:
                c[0] = c[0] + K.one
            if i == n - 1 and j == 0:
                c[1] = K.one
            row.append(SkewPoly(K, c))
        rows.append(row)
    return TModule(SkewMatrix(K, rows), K, f"carlitz^{n}")


def direct_sum_tmodule(*Es: TModule) -> TModule:
    K = Es[0].K
    d = sum(E.dim for E in Es)
    rows = [[SkewPoly(K) for _ in range(d)] for _ in range(d)]
    off = 0
    for E in Es:
        for i in range(E.dim):
            for j in range(E.dim):
                rows[off + i][off + j] = E.phi.rows[i][j]
        off += E.dim
    return TModule(SkewMatrix(K, rows), K, "+".join(E.name for E in Es))


# ---------------------------------------------------------------------------
# motif of a t-module


def _scalar_inverse(A, K):
    d = det(A)
    if d.is_zero():
        return None
    adj = adjugate(A)
    inv = K.one / d
    return [[x * inv for x in r] for r in adj]


def _is_carlitz_power(E: TModule):
    K, d = E.K, E.dim
    return E.phi == carlitz_power(K, d).phi


def motif_of_tmodule(E: TModule) -> MotivePresentation:
    K, d = E.K, E.dim
    if d > 1 and _is_carlitz_power(E):
        return _carlitz_power_presentation(E)
    s = E.phi.degree()
    if s >= 1:
        W = _scalar_inverse(E.coefficient(s), K)
        if W is not None:
            return _companion_presentation(E, s, W)
    blocks = _split_blocks(E)
    if blocks is not None and len(blocks) > 1:
        return direct_sum_presentation(*(motif_of_tmodule(B) for B in blocks), E=E)
    raise UnsupportedPresentation(
        "phi_t is neither of invertible leading coefficient, a Carlitz tensor power, nor a direct sum of such"
    )


def _companion_presentation(E: TModule, s: int, W) -> MotivePresentation:
    K, d = E.K, E.dim
    r = s * d
    idx = lambda i, l: i * d + l  # noqa: E731
    zero = TPoly(K)
    A = [[zero for _ in range(r)] for _ in range(r)]
    one = TPoly(K, [K.one])
    for i in range(s - 1):
        for l in range(d):
            A[idx(i + 1, l)][idx(i, l)] = one
    Phi = [E.coefficient(k) for k in range(s)]
    WPhi = [_mat_mul_scalar(W, P, K) for P in Phi]
    for l in range(d):
        col = idx(s - 1, l)
        for m in range(d):
            A[idx(0, m)][col] = TPoly(K, [-WPhi[0][l][m], W[l][m]])
            for k in range(1, s):
                A[idx(k, m)][col] = TPoly(K, [-WPhi[k][l][m]])
    basis = []
    for i in range(s):
        for l in range(d):
            basis.append(tuple(SkewPoly.sigma(K, i) if m == l else SkewPoly(K) for m in range(d)))
    table = [[one if j == idx(0, k) else zero for j in range(r)] for k in range(d)]
    fam = "carlitz" if (d == 1 and s == 1) else ("drinfeld" if d == 1 else "companion")
    return MotivePresentation(E, SigmaModule(A, K), tuple(basis), table, fam)


def _carlitz_power_presentation(E: TModule) -> MotivePresentation:
    K, n = E.K, E.dim
    u = t_minus_theta(K)
    A = [[u**n]]
    basis = (tuple(SkewPoly(K, [K.one] if m == 0 else []) for m in range(n)),)
    table = [[u**i] for i in range(n)]
    return MotivePresentation(E, SigmaModule(A, K), basis, table, "carlitz-power")


def _split_blocks(E: TModule):
    """Split phi_t into consecutive diagonal blocks when it is block diagonal."""
    d = E.dim
    rows = E.phi.rows
    cuts = []
    start = 0
    for end in range(1, d + 1):
        if all(not rows[i][j] and not rows[j][i] for i in range(start, end) for j in range(end, d)):
            cuts.append((start, end))
            start = end
    if len(cuts) <= 1:
        return None
    return [TModule(SkewMatrix(E.K, [r[a:b] for r in rows[a:b]]), E.K, E.name) for a, b in cuts]


def direct_sum_presentation(*Ps: MotivePresentation, E: TModule | None = None) -> MotivePresentation:
    K = Ps[0].K
    E = E or direct_sum_tmodule(*(P.E for P in Ps))
    d = E.dim
    A = block_diag(*(P.M.A for P in Ps))
    r = len(A)
    basis = []
    table = [[TPoly(K) for _ in range(r)] for _ in range(d)]
    doff = roff = 0
    for P in Ps:
        dd = P.E.dim
        for b in P.basis:
            basis.append(tuple([SkewPoly(K)] * doff + list(b) + [SkewPoly(K)] * (d - doff - dd)))
        for k in range(dd):
            for j in range(P.rank):
                table[doff + k][roff + j] = P.table[k][j]
        doff += dd
        roff += P.rank
    fam = "sum(" + ",".join(P.family for P in Ps) + ")"
    return MotivePresentation(E, SigmaModule(A, K), tuple(basis), table, fam)


# ---------------------------------------------------------------------------
# points and Lie algebra


def point_act(E: TModule, a, x):
    """phi_a(x) for a in k[t], given as a list of integers (constant term first) or TPoly."""
    coeffs = a.c if isinstance(a, TPoly) else [E.K(c) for c in a]
    out = [xi * 0 for xi in x]
    y = list(x)
    for s, c in enumerate(coeffs):
        if s:
            y = E.act(y)
        if not c.is_zero():
            out = [o + c * yi for o, yi in zip(out, y)]
    return out


def lie_check(P: MotivePresentation) -> int:
    """dim_K K[t]^r / A K[t]^r, which must equal dim E."""
    diag = smith_diagonal(P.M.A)
    u = t_minus_theta(P.K)
    dim = 0
    for f in diag:
        if f.is_zero():
            raise DimensionMismatch("sigma matrix is singular")
        g = f
        while g.degree() > 0:
            qt, r = g.divmod(u)
            if not r.is_zero():
                raise DimensionMismatch(f"elementary divisor {f} is not a power of t - theta")
            g = qt
        dim += f.degree()
    if dim != P.E.dim:
        raise DimensionMismatch(f"cokernel of sigma has dimension {dim}, expected {P.E.dim}")
    validate_effective(P.M)
    return dim
