"""Twisted polynomials sum x_i sigma^i with sigma x = x^q sigma."""

from __future__ import annotations

from .errors import FieldMismatch, ShapeMismatch


def frob_iter(D, x, n: int):
    for _ in range(n):
        x = D.frob(x)
    return x


class SkewPoly:
    __slots__ = ("D", "c")

    def __init__(self, D, coeffs=()):
        self.D = D
        c = [D(x) if isinstance(x, int) else x for x in coeffs]
        while c and c[-1].is_zero():
            c.pop()
        self.c = c

    @classmethod
    def sigma(cls, D, n: int = 1):
        return cls(D, [D.zero] * n + [D.one])

    @classmethod
    def const(cls, D, a):
        return cls(D, [D(a)])

    def degree(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else self.D.zero

    def _check(self, other):
        if not isinstance(other, SkewPoly):
            return SkewPoly(self.D, [self.D(other)])
        if other.D is not self.D and other.D != self.D:
            raise FieldMismatch(f"{self.D} vs {other.D}")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.c), len(other.c))
        return SkewPoly(self.D, [self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return SkewPoly(self.D, [-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        """(a sigma^i)(b sigma^j) = a b^{q^i} sigma^{i+j}."""
        other = self._check(other)
        if not self.c or not other.c:
            return SkewPoly(self.D)
        D = self.D
        out = [D.zero] * (len(self.c) + len(other.c) - 1)
        tw = list(other.c)
        for i, a in enumerate(self.c):
            if i:
                tw = [D.frob(b) for b in tw]
            if a.is_zero():
                continue
            for j, b in enumerate(tw):
                out[i + j] = out[i + j] + a * b
        return SkewPoly(D, out)

    def __rmul__(self, other):
        return self._check(other) * self

    def __pow__(self, n: int):
        r = SkewPoly(self.D, [self.D.one])
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        if not isinstance(other, SkewPoly):
            other = self._check(other)
        return len(self.c) == len(other.c) and all(x == y for x, y in zip(self.c, other.c))

    def __hash__(self):
        return hash(tuple(self.c))

    def evaluate(self, x, conv=None, q=None):
        """sum_i c_i x^{q^i}; ``conv`` maps coefficients into the field of x."""
        q = q or self.D.q
        conv = conv or (lambda a: a)
        acc = None
        y = x
        for i, a in enumerate(self.c):
            if i:
                y = y**q
            if a.is_zero():
                continue
            term = conv(a) * y
            acc = term if acc is None else acc + term
        return acc if acc is not None else x * 0

    def __call__(self, x):
        return self.evaluate(x)

    def twist(self) -> "SkewPoly":
        """Coefficientwise frob (conjugation by sigma: sigma f = f^(1) sigma)."""
        return SkewPoly(self.D, [self.D.frob(a) for a in self.c])

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i, a in enumerate(self.c):
            if a.is_zero():
                continue
            s = str(a)
            if i == 0:
                parts.append(s)
                continue
            mon = "s" if i == 1 else f"s^{i}"
            if a == self.D.one:
                parts.append(mon)
            else:
                parts.append(f"({s})*{mon}" if "+" in s or "/" in s else f"{s}*{mon}")
        return " + ".join(parts)

    __repr__ = __str__


class SkewMatrix:
    """d1 x d2 array of SkewPoly."""

    __slots__ = ("D", "rows")

    def __init__(self, D, rows):
        rows = [[x if isinstance(x, SkewPoly) else SkewPoly(D, [D(x)]) for x in r] for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ShapeMismatch("ragged skew matrix")
        self.D = D
        self.rows = rows

    @classmethod
    def identity(cls, D, d: int):
        return cls(D, [[SkewPoly(D, [D.one] if i == j else []) for j in range(d)] for i in range(d)])

    @classmethod
    def zero(cls, D, n: int, m: int):
        return cls(D, [[SkewPoly(D) for _ in range(m)] for _ in range(n)])

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("shape mismatch")
        return SkewMatrix(self.D, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("shape mismatch")
        return SkewMatrix(self.D, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ShapeMismatch(f"cannot multiply {n}x{k} by {k2}x{m}")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = SkewPoly(self.D)
                for t in range(k):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return SkewMatrix(self.D, out)

    def __pow__(self, n: int):
        r = SkewMatrix.identity(self.D, self.shape[0])
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        return isinstance(other, SkewMatrix) and self.rows == other.rows

    def degree(self) -> int:
        return max((a.degree() for r in self.rows for a in r), default=-1)

    def coefficient(self, k: int):
        """Matrix of sigma^k coefficients."""
        return [[a[k] for a in r] for r in self.rows]

    def evaluate(self, x, conv=None, q=None):
        """Apply to a column vector x: (sum_j a_ij(x_j))_i."""
        n, m = self.shape
        if len(x) != m:
            raise ShapeMismatch(f"vector of length {len(x)} for {n}x{m} matrix")
        out = []
        for i in range(n):
            acc = x[0] * 0 if m else None
            for j in range(m):
                acc = acc + self.rows[i][j].evaluate(x[j], conv, q)
            out.append(acc)
        return out

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(f'"{a}"' for a in r) + "]" for r in self.rows) + "]"

    __repr__ = __str__


def additive_evaluate(a, x, conv=None, q=None):
    """Evaluate a SkewPoly at a scalar or a SkewMatrix at a vector."""
    if isinstance(a, SkewMatrix):
        return a.evaluate(list(x), conv, q)
    return a.evaluate(x, conv, q)
