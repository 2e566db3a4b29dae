"""Polynomials in t over a coefficient domain, and small matrix kernels.

Coefficient domains follow the protocol of :class:`FunctionField`:
``zero``, ``one``, ``q``, coercion by call, and ``frob``.
"""

from __future__ import annotations

from .errors import ShapeMismatch, ZeroDenominator


class TPoly:
    """sum_i c[i] t^i with trailing zeros stripped."""

    __slots__ = ("D", "c")

    def __init__(self, D, coeffs=()):
        self.D = D
        c = [x if not isinstance(x, int) else D(x) for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    @classmethod
    def _raw(cls, D, c):
        while c and c[-1].is_zero():
            c.pop()
        obj = cls.__new__(cls)
        obj.D = D
        obj.c = c
        return obj

    @classmethod
    def const(cls, D, a):
        return cls(D, [D(a)] if not isinstance(a, int) else [D(a)])

    @classmethod
    def monomial(cls, D, a, n: int):
        return cls(D, [D.zero] * n + [D(a)])

    @classmethod
    def t_minus(cls, D, a):
        """t - a."""
        return cls(D, [-D(a), D.one])

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.D.zero

    def lead(self):
        return self.c[-1]

    def _co(self, other):
        if isinstance(other, TPoly):
            return other
        return TPoly(self.D, [self.D(other)])

    def __add__(self, other):
        other = self._co(other)
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return TPoly._raw(self.D, out)

    __radd__ = __add__

    def __neg__(self):
        return TPoly._raw(self.D, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._co(other))

    def __rsub__(self, other):
        return self._co(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, TPoly):
            s = self.D(other)
            if s.is_zero():
                return TPoly._raw(self.D, [])
            return TPoly._raw(self.D, [x * s for x in self.c])
        a, b = self.c, other.c
        if not a or not b:
            return TPoly._raw(self.D, [])
        z = self.D.zero
        out = [z] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x.is_zero():
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return TPoly._raw(self.D, out)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        r = TPoly(self.D, [self.D.one])
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            other = self._co(other)
        return len(self.c) == len(other.c) and all(x == y for x, y in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(self.c))

    def divmod(self, other: "TPoly"):
        if other.is_zero():
            raise ZeroDenominator("division by the zero polynomial")
        inv = self.D.one / other.lead()
        r = list(self.c)
        db = other.degree()
        z = self.D.zero
        qt = [z] * max(0, len(r) - db)
        for i in range(len(r) - 1, db - 1, -1):
            if r[i].is_zero():
                continue
            f = r[i] * inv
            qt[i - db] = f
            for j, y in enumerate(other.c):
                r[i - db + j] = r[i - db + j] - f * y
        return TPoly._raw(self.D, qt), TPoly._raw(self.D, r[:db] if db > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        qt, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("inexact division")
        return qt

    def frob(self) -> "TPoly":
        """Coefficientwise twist: the action of tau on K[t]."""
        f = self.D.frob
        return TPoly._raw(self.D, [f(x) for x in self.c])

    def map(self, fn, D=None) -> "TPoly":
        D = D or self.D
        return TPoly(D, [fn(x) for x in self.c])

    def __call__(self, x):
        acc = None
        for a in reversed(self.c):
            acc = a if acc is None else acc * x + a
        return self.D.zero if acc is None else acc

    def shift(self, n: int) -> "TPoly":
        if n >= 0:
            return TPoly._raw(self.D, [self.D.zero] * n + list(self.c))
        return TPoly._raw(self.D, list(self.c[-n:]))

    def monic(self) -> "TPoly":
        return self * (self.D.one / self.lead())

    def derivative(self) -> "TPoly":
        return TPoly._raw(self.D, [x * i for i, x in enumerate(self.c)][1:])

    def __repr__(self):
        return f"TPoly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if x.is_zero():
                continue
            s = str(x)
            if i == 0:
                parts.append(s)
                continue
            mon = "t" if i == 1 else f"t^{i}"
            if x == self.D.one:
                parts.append(mon)
            else:
                parts.append(f"({s})*{mon}" if "+" in s or "/" in s else f"{s}*{mon}")
        return " + ".join(parts)


def pgcd(a: TPoly, b: TPoly) -> TPoly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def pxgcd(a: TPoly, b: TPoly):
    """(g, s, u) with s a + u b = g monic."""
    D = a.D
    r0, r1 = a, b
    s0, s1 = TPoly(D, [D.one]), TPoly(D, [])
    u0, u1 = TPoly(D, []), TPoly(D, [D.one])
    while not r1.is_zero():
        qt, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        u0, u1 = u1, u0 - qt * u1
    if r0.is_zero():
        return r0, s0, u0
    inv = D.one / r0.lead()
    return r0 * inv, s0 * inv, u0 * inv


# ---------------------------------------------------------------------------
# matrices: lists of rows; entries TPoly (or any ring element with + and *)


def zeros(D, n: int, m: int):
    return [[TPoly(D) for _ in range(m)] for _ in range(n)]


def identity(D, n: int):
    return [[TPoly(D, [D.one] if i == j else []) for j in range(n)] for i in range(n)]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def matmul(A, B):
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise ShapeMismatch(f"cannot multiply {n}x{k} by {k2}x{m}")
    zero = A[0][0] * 0 if n and k else None
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                a = A[i][t]
                if not a:
                    continue
                b = B[t][j]
                if not b:
                    continue
                acc = a * b if acc is None else acc + a * b
            row.append(acc if acc is not None else zero)
        out.append(row)
    return out


def matadd(A, B):
    if shape(A) != shape(B):
        raise ShapeMismatch("shape mismatch in addition")
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def matsub(A, B):
    if shape(A) != shape(B):
        raise ShapeMismatch("shape mismatch in subtraction")
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def matscale(A, s):
    return [[a * s for a in r] for r in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matfrob(A):
    return [[a.frob() for a in r] for r in A]


def is_zero_matrix(A) -> bool:
    return all(not a for r in A for a in r)


def mat_eq(A, B) -> bool:
    return shape(A) == shape(B) and all(a == b for r, s in zip(A, B) for a, b in zip(r, s))


def berkowitz(A):
    """Characteristic polynomial coefficients of a square matrix, division free.

    Returns [c_0, ..., c_n] with det(x I - A) = sum c_i x^i; entries are ring
    elements of the same type as those of A.
    """
    n = len(A)
    if n == 0:
        return []
    one = _one_like(A[0][0])
    zero = A[0][0] * 0
    # vect holds coefficients of the charpoly of the leading r x r block, highest first
    vect = [one, -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        C = [A[i][r] for i in range(r)]
        Sub = [row[:r] for row in A[:r]]
        a = A[r][r]
        # Toeplitz column: 1, -a, -R C, -R S C, ..., -R S^{r-1} C
        col = [one, -a]
        v = C
        for _ in range(r):
            col.append(-_dot(R, v, zero))
            v = [_dot(Sub[i], v, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(min(i, r) + 1):
                if i - j < len(col):
                    s = s + col[i - j] * vect[j]
            new.append(s)
        vect = new
    return list(reversed(vect))


def _dot(u, v, zero):
    s = zero
    for x, y in zip(u, v):
        s = s + x * y
    return s


def _one_like(x):
    if isinstance(x, TPoly):
        return TPoly(x.D, [x.D.one])
    return x ** 0


def det(A):
    n = len(A)
    if n == 0:
        raise ShapeMismatch("determinant of an empty matrix")
    cp = berkowitz(A)
    return cp[0] if n % 2 == 0 else -cp[0]


def adjugate(A):
    """adj(A) with A adj(A) = det(A) I, via cofactors computed by Berkowitz."""
    n = len(A)
    if n == 1:
        return [[_one_like(A[0][0])]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            d = det(minor)
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return out


def kron(A, B):
    n, m = shape(A)
    p, r = shape(B)
    return [[A[i // p][j // r] * B[i % p][j % r] for j in range(m * r)] for i in range(n * p)]


def block_diag(*Ms):
    D = _first_entry(Ms).D
    n = sum(len(M) for M in Ms)
    out = zeros(D, n, n)
    off = 0
    for M in Ms:
        for i, row in enumerate(M):
            for j, a in enumerate(row):
                out[off + i][off + j] = a
        off += len(M)
    return out


def _first_entry(Ms):
    for M in Ms:
        for row in M:
            for a in row:
                return a
    raise ShapeMismatch("empty block list")


def max_degree(A) -> int:
    return max((a.degree() for r in A for a in r if a), default=-1)


def smith_diagonal(A):
    """Invariant factors (monic) of a matrix over D[t], D a field.

    Plain elimination with Euclidean pivoting; returns the diagonal of the
    Smith normal form including zero entries for rank deficiency.
    """
    M = [list(r) for r in A]
    n, m = shape(M)
    diag = []
    for k in range(min(n, m)):
        piv = _min_entry(M, k)
        if piv is None:
            diag.extend(TPoly(M[0][0].D) for _ in range(min(n, m) - k))
            break
        while True:
            i, j = piv
            M[k], M[i] = M[i], M[k]
            for row in M:
                row[k], row[j] = row[j], row[k]
            p = M[k][k]
            dirty = False
            for i in range(k + 1, n):
                if M[i][k]:
                    qt, r = M[i][k].divmod(p)
                    M[i] = [a - qt * b for a, b in zip(M[i], M[k])]
                    dirty = dirty or bool(r)
            for j in range(k + 1, m):
                if M[k][j]:
                    qt, r = M[k][j].divmod(p)
                    for row in M:
                        row[j] = row[j] - qt * row[k]
                    dirty = dirty or bool(r)
            if not dirty:
                bad = None
                for i in range(k + 1, n):
                    for j in range(k + 1, m):
                        if M[i][j] and not (M[i][j] % p).is_zero():
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                M[k] = [a + b for a, b in zip(M[k], M[bad])]
            piv = _min_entry(M, k)
        diag.append(M[k][k].monic())
    return diag


def _min_entry(M, k):
    best = None
    for i in range(k, len(M)):
        for j in range(k, len(M[0])):
            a = M[i][j]
            if a and (best is None or a.degree() < best[0]):
                best = (a.degree(), i, j)
    return None if best is None else best[1:]
