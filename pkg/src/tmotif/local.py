"""Truncated elements of F_{q^m}((pi)) with pi^e = 1/theta.

|theta| = q, |pi| = q^{-1/e}.  Every element carries an absolute precision
N: it is known modulo pi^N.  A field object bounds the number of stored
digits N - v by ``cap`` (a relative budget, as in floating point), so that
twisting (which multiplies precisions by q) stays cheap.  Exact zero has
N = EXACT.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import FieldMismatch, InsufficientPrecision, TMotifError, ZeroDenominator
from .fields import MAX_ORDER, finite_field
from .ratfunc import RatFunc

EXACT = 10**12


class LocalField:
    """F_{q^m}((pi)), pi^e = 1/theta, at most ``cap`` stored digits per element."""

    def __init__(self, p: int, e: int, m: int = 1, digits: int = 30, margin: int = 10, qexp: int = 1):
        if gcd(e, p) != 1:
            raise TMotifError(f"ramification index {e} is wild for p = {p}", code="wild-ramification")
        self.p = p
        self.q = p**qexp
        if self.q**m > MAX_ORDER:
            raise TMotifError("q^m exceeds 2^20", code="unsupported-field")
        self.e = e
        self.m = m
        self.F = finite_field(p, qexp * m)
        self.R = self.F.poly_ring
        self.digits = digits
        self.margin = margin
        self.cap = (digits + margin) * e
        self.zero = LocalScalar(self, self.R.zero(), EXACT, EXACT)
        self.one = self.monomial(self.F.one, 0)
        self.pi = self.monomial(self.F.one, 1)
        self.theta = self.monomial(self.F.one, -e)
        self._twist = m > 1 or qexp > 1

    def __repr__(self):
        return f"F_{self.q}^{self.m}((pi)), pi^{self.e} = 1/theta, cap {self.cap}"

    def __eq__(self, other):
        return isinstance(other, LocalField) and (self.p, self.q, self.e, self.m, self.cap) == (
            other.p, other.q, other.e, other.m, other.cap)

    def __hash__(self):
        return hash((self.p, self.q, self.e, self.m, self.cap))

    def with_digits(self, digits: int, margin: int | None = None) -> "LocalField":
        return LocalField(self.p, self.e, self.m, digits, self.margin if margin is None else margin,
                          self.F.n // self.m)

    def monomial(self, c, k: int, N: int | None = None) -> "LocalScalar":
        N = k + self.cap if N is None else N
        if k >= N:
            return LocalScalar(self, self.R.zero(), N, N)
        c = c if type(c).__name__ == "fq_default" else self.F(c)
        return LocalScalar(self, self.R([c]), k, N)

    def theta_power(self, n: int) -> "LocalScalar":
        return self.monomial(self.F.one, -self.e * n)

    def __call__(self, x) -> "LocalScalar":
        if isinstance(x, LocalScalar):
            if x.L is not self and x.L != self:
                raise FieldMismatch("different local fields")
            return x
        if isinstance(x, int):
            return self.monomial(self.F(x), 0) if x % self.p else self.zero
        if isinstance(x, RatFunc):
            return self.from_ratfunc(x)
        if hasattr(x, "is_zero") and type(x).__name__ == "fq_default":
            return self.monomial(x, 0) if not x.is_zero() else self.zero
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def _rev_series(self, f):
        """theta-polynomial f -> (pi^{e deg f} f(theta)) as a pi-series."""
        c = [self.F(int(a)) for a in f.coeffs()]
        return self.R(c[::-1]).inflate(self.e) if self.e > 1 else self.R(c[::-1])

    def from_ratfunc(self, x: RatFunc) -> "LocalScalar":
        if x.is_zero():
            return self.zero
        if x.K.coeff.n != 1:
            raise FieldMismatch("only prime-field coefficients embed")
        dn, dd = x.num.degree(), x.den.degree()
        v = -self.e * (dn - dd)
        n = self.cap
        num = self._rev_series(x.num)
        if dd > 0:
            den = self._rev_series(x.den)
            f = num.mul_low(den.inverse_series_trunc(n), n)
        else:
            f = num if num.degree() < n else num.truncate(n) if hasattr(num, "truncate") else num
        return LocalScalar.make(self, f, v, v + self.cap)

    def frob(self, x: "LocalScalar") -> "LocalScalar":
        return x.frob()

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def elements_Fq(self):
        F = finite_field(self.p, self.F.n // self.m)
        for a in F.elements():
            yield self(int(a.to_list()[0]) if a.to_list() else 0) if F.n == 1 else self.monomial(a, 0)


def _trunc(f, n: int):
    if n <= 0:
        return f.context().zero()
    if f.degree() < n:
        return f
    return f.context()(f.coeffs()[:n])


def _shift(f, k: int, n: int):
    """pi^k f truncated below pi^n."""
    if k >= n:
        return f.context().zero()
    f = _trunc(f, n - k)
    if k == 0:
        return f
    return f.context()([0] * k + f.coeffs())


class LocalScalar:
    """pi^v f(pi) + O(pi^N), f(0) != 0 unless the element is zero (then v = N)."""

    __slots__ = ("L", "f", "v", "N")

    def __init__(self, L, f, v, N):
        self.L = L
        self.f = f
        self.v = v
        self.N = N

    @staticmethod
    def make(L, f, v, N):
        N = min(N, EXACT)
        if f.is_zero():
            return LocalScalar(L, L.R.zero(), N, N)
        coeffs = f.coeffs()
        i = 0
        while i < len(coeffs) and coeffs[i].is_zero():
            i += 1
        if v + i >= N:
            return LocalScalar(L, L.R.zero(), N, N)
        if i:
            f = L.R(coeffs[i:])
            v += i
        N = min(N, v + L.cap)
        f = _trunc(f, N - v)
        return LocalScalar(L, f, v, N)

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return self.f.is_zero()

    def valuation(self) -> int:
        """pi-adic valuation (N if indistinguishable from zero)."""
        return self.v

    def abs_log(self) -> Fraction:
        """log_q |x| = -v/e."""
        return Fraction(-self.v, self.L.e)

    def rel_prec(self) -> int:
        return self.N - self.v

    def coeff(self, i: int):
        if i >= self.N:
            raise InsufficientPrecision(f"pi^{i} beyond precision {self.N}")
        k = i - self.v
        if k < 0 or self.f.is_zero() or k > self.f.degree():
            return self.L.F.zero
        return self.f.coeffs()[k]

    def leading(self):
        return self.f.coeffs()[0] if not self.f.is_zero() else self.L.F.zero

    def terms(self):
        if self.f.is_zero():
            return []
        return [(self.v + i, c) for i, c in enumerate(self.f.coeffs()) if not c.is_zero()]

    # -- arithmetic --------------------------------------------------------
    def _co(self, o):
        if isinstance(o, LocalScalar):
            return o
        return self.L(o)

    def __add__(self, o):
        o = self._co(o)
        N = min(self.N, o.N)
        if self.f.is_zero():
            return LocalScalar.make(self.L, o.f, o.v, N)
        if o.f.is_zero():
            return LocalScalar.make(self.L, self.f, self.v, N)
        v = min(self.v, o.v)
        n = min(N - v, self.L.cap)
        if n <= 0:
            return LocalScalar(self.L, self.L.R.zero(), N, N)
        a = _shift(self.f, self.v - v, n)
        b = _shift(o.f, o.v - v, n)
        return LocalScalar.make(self.L, a + b, v, N)

    __radd__ = __add__

    def __neg__(self):
        return LocalScalar(self.L, -self.f, self.v, self.N)

    def __sub__(self, o):
        return self + (-self._co(o))

    def __rsub__(self, o):
        return self._co(o) + (-self)

    def __mul__(self, o):
        o = self._co(o)
        N = min(self.N + o.v, o.N + self.v)
        v = self.v + o.v
        if self.f.is_zero() or o.f.is_zero():
            N = min(N, EXACT)
            return LocalScalar(self.L, self.L.R.zero(), N, N)
        n = min(N - v, self.L.cap)
        if n <= 0:
            return LocalScalar(self.L, self.L.R.zero(), N, N)
        return LocalScalar.make(self.L, self.f.mul_low(o.f, n), v, N)

    __rmul__ = __mul__

    def inverse(self) -> "LocalScalar":
        if self.f.is_zero():
            raise ZeroDenominator("inverse of an element indistinguishable from zero")
        rel = self.N - self.v
        v = -self.v
        n = min(rel, self.L.cap)
        return LocalScalar.make(self.L, self.f.inverse_series_trunc(n), v, v + rel)

    def __truediv__(self, o):
        return self * self._co(o).inverse()

    def __rtruediv__(self, o):
        return self._co(o) * self.inverse()

    def __pow__(self, n: int):
        if n == self.L.q:
            return self.frob()
        if n < 0:
            return self.inverse() ** (-n)
        r = self.L.one
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def frob(self) -> "LocalScalar":
        """x -> x^q."""
        L = self.L
        q = L.q
        if self.f.is_zero():
            N = min(self.N * q, EXACT) if self.N > 0 else self.N * q
            return LocalScalar(L, self.f, N, N)
        g = self.f.inflate(q)
        if L._twist:
            g = L.R([c**q for c in g.coeffs()])
        return LocalScalar.make(L, g, self.v * q, self.N * q)

    def __eq__(self, o):
        if isinstance(o, (int, LocalScalar)):
            return (self - self._co(o)).is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.N))

    def close_to(self, o, digits: float) -> bool:
        """|self - o| < q^{-digits}."""
        d = self - self._co(o)
        return d.v > digits * self.L.e

    def small(self, digits: float) -> bool:
        return self.v > digits * self.L.e

    def in_Fq(self, digits: float):
        """Round to an element of F_q if |x - c| < q^{-digits}; otherwise None."""
        L = self.L
        c = self.coeff(0) if self.N > 0 else L.F.zero
        if c**L.q != c:
            return None
        if (self - L.monomial(c, 0)).small(digits):
            return c
        return None

    def __repr__(self):
        return f"LocalScalar({self})"

    def __str__(self):
        if self.f.is_zero():
            return f"O(pi^{self.N})"
        parts = []
        for k, c in self.terms()[:6]:
            s = str(c)
            s = f"({s})" if " " in s else s
            parts.append(s if k == 0 else f"{s}*pi^{k}")
        more = " + ..." if len(self.terms()) > 6 else ""
        return " + ".join(parts) + more + f" + O(pi^{self.N})"


@dataclass
class TateSeries:
    """sum_i a_i t^i with a_i LocalScalar (or vectors thereof), plus a decay certificate."""

    coeffs: list
    L: LocalField

    def certificate(self):
        """(c, b) with log_q|a_i| <= -c i + b on the stored range, c the best slope from the ends."""
        logs = [Fraction(-min(_vec(a), key=lambda x: x.v).v, self.L.e) for a in self.coeffs]
        if len(logs) < 2:
            return Fraction(0), logs[0] if logs else Fraction(0)
        b = max(logs)
        c = (logs[0] - logs[-1]) / (len(logs) - 1)
        return c, b

    def decays(self) -> bool:
        c, _ = self.certificate()
        return c > 0


def _vec(a):
    return a if isinstance(a, (list, tuple)) else [a]
