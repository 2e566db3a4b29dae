"""Truncated Laurent series at t = infinity and at t = theta.

Precision is carried with every value.  For products we use the sharp
rule: an error O(t^{-N-1}) in one factor is multiplied by the leading term
of the other, so the result is known to ``min(Na - deg b, Nb - deg a)``.
"""

from __future__ import annotations

from .errors import InsufficientPrecision, ZeroDenominator
from .tpoly import TPoly


def _trim_front(c, lo, D):
    i = 0
    while i < len(c) and c[i].is_zero():
        i += 1
    return c[i:], lo + i


class TLaurentTail:
    """sum_{i=-N}^{dmax} c_i t^i + O(t^{-N-1}).

    ``coeffs[k]`` is the coefficient of ``t^(lo + k)`` with ``lo = -prec``.
    """

    __slots__ = ("D", "prec", "coeffs")

    def __init__(self, D, coeffs_by_exp: dict, prec: int):
        self.D = D
        self.prec = prec
        top = max((e for e, v in coeffs_by_exp.items() if not v.is_zero()), default=-prec - 1)
        self.coeffs = [coeffs_by_exp.get(e, D.zero) for e in range(-prec, top + 1)]

    @classmethod
    def _make(cls, D, lo_coeffs, prec):
        obj = cls.__new__(cls)
        obj.D = D
        obj.prec = prec
        c = list(lo_coeffs)
        while c and c[-1].is_zero():
            c.pop()
        obj.coeffs = c
        return obj

    @classmethod
    def from_tpoly(cls, p: TPoly, prec: int):
        return cls._make(p.D, [p.D.zero] * prec + list(p.c), prec)

    def degree(self) -> int:
        """Largest exponent with a nonzero known coefficient, or -prec-1."""
        return len(self.coeffs) - 1 - self.prec

    def __getitem__(self, e: int):
        if e < -self.prec:
            raise InsufficientPrecision(f"coefficient of t^{e} not known at precision {self.prec}")
        k = e + self.prec
        return self.coeffs[k] if k < len(self.coeffs) else self.D.zero

    def coefficient(self, e: int):
        return self[e]

    def polynomial_part(self) -> TPoly:
        return TPoly(self.D, self.coeffs[self.prec:])

    def truncate(self, prec: int) -> "TLaurentTail":
        if prec > self.prec:
            raise InsufficientPrecision("cannot raise precision")
        return TLaurentTail._make(self.D, self.coeffs[self.prec - prec:], prec)

    def __add__(self, other):
        if isinstance(other, TPoly):
            other = TLaurentTail.from_tpoly(other, self.prec)
        p = min(self.prec, other.prec)
        a, b = self.truncate(p).coeffs, other.truncate(p).coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return TLaurentTail._make(self.D, out, p)

    def __neg__(self):
        return TLaurentTail._make(self.D, [-x for x in self.coeffs], self.prec)

    def __sub__(self, other):
        if isinstance(other, TPoly):
            other = TLaurentTail.from_tpoly(other, self.prec)
        return self + (-other)

    def scale(self, s) -> "TLaurentTail":
        return TLaurentTail._make(self.D, [x * s for x in self.coeffs], self.prec)

    def __mul__(self, other):
        if isinstance(other, TPoly):
            other = TLaurentTail.from_tpoly(other, 0)
            p = self.prec - max(other.degree(), 0) if other.coeffs else self.prec
            return self._mul(other, max(p, 0))
        if not isinstance(other, TLaurentTail):
            return self.scale(self.D(other))
        da = max(self.degree(), -self.prec)
        db = max(other.degree(), -other.prec)
        p = min(self.prec - db, other.prec - da)
        return self._mul(other, p)

    __rmul__ = __mul__

    def _mul(self, other, p):
        if p < 0:
            raise InsufficientPrecision("product has no known coefficients")
        D = self.D
        lo_a, lo_b = -self.prec, -other.prec
        top = self.degree() + other.degree()
        if top < -p:
            return TLaurentTail._make(D, [], p)
        out = [D.zero] * (top + p + 1)
        for i, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            ea = lo_a + i
            for j, y in enumerate(other.coeffs):
                e = ea + lo_b + j
                if e < -p:
                    continue
                out[e + p] = out[e + p] + x * y
        return TLaurentTail._make(D, out, p)

    def frob(self) -> "TLaurentTail":
        f = self.D.frob
        return TLaurentTail._make(self.D, [f(x) for x in self.coeffs], self.prec)

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TLaurentTail):
            return NotImplemented
        p = min(self.prec, other.prec)
        return (self - other).truncate(p).is_zero()

    def __str__(self):
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            x = self.coeffs[k]
            if x.is_zero():
                continue
            e = k - self.prec
            s = str(x)
            s = f"({s})" if ("+" in s or "/" in s) and e != 0 else s
            mon = "t" if e == 1 else f"t^{e}"
            parts.append(s if e == 0 else (mon if s == "1" else f"{s}*{mon}"))
        parts.append(f"O(t^{-self.prec - 1})")
        return " + ".join(parts)

    __repr__ = __str__


def residue_at_infinity(f: TLaurentTail):
    """Coefficient of t^{-1}."""
    if f.prec < 1:
        raise InsufficientPrecision("residue needs precision at least 1")
    return f[-1]


def inverse_tail(den: TPoly, prec: int) -> TLaurentTail:
    """1/den expanded at t = infinity to precision prec."""
    if den.is_zero():
        raise ZeroDenominator("expansion of 1/0")
    D = den.D
    m = den.degree()
    # den = t^m (d_m + d_{m-1} x + ... + d_0 x^m), x = 1/t
    rev = den.c[::-1]
    inv0 = D.one / rev[0]
    n = prec - m + 1  # need x^0..x^{n-1} of the inverse
    s = []
    for k in range(max(n, 0)):
        acc = D.one if k == 0 else D.zero
        for j in range(1, min(k, m) + 1):
            acc = acc - rev[j] * s[k - j]
        s.append(acc * inv0)
    # coefficient of t^{-m-k} is s[k]
    by_exp = {-m - k: v for k, v in enumerate(s)}
    return TLaurentTail(D, by_exp, prec)


def expand_at_infinity(num: TPoly, den: TPoly | None = None, prec: int = 3) -> TLaurentTail:
    if den is None:
        return TLaurentTail.from_tpoly(num, prec)
    if den.is_zero():
        raise ZeroDenominator("expansion with zero denominator")
    a = max(num.degree(), 0)
    inv = inverse_tail(den, prec + a)
    return inv._mul(TLaurentTail.from_tpoly(num, 0), prec)


class UThetaSeries:
    """sum_{i >= lo} c_i u^i + O(u^P), u = t - theta.

    ``lo`` may be negative (Laurent part, used for residues at t = theta).
    """

    __slots__ = ("D", "lo", "coeffs", "prec")

    def __init__(self, D, coeffs, prec: int, lo: int = 0):
        self.D = D
        self.prec = prec
        c = list(coeffs)[: max(prec - lo, 0)]
        self.coeffs, self.lo = _trim_front(c, lo, D)
        if not self.coeffs:
            self.lo = prec

    def __getitem__(self, i: int):
        if i >= self.prec:
            raise InsufficientPrecision(f"coefficient of u^{i} not known at precision {self.prec}")
        k = i - self.lo
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.D.zero

    def valuation(self) -> int:
        return self.lo

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        p = min(self.prec, other.prec)
        lo = min(self.lo, other.lo)
        return UThetaSeries(self.D, [self._get(i) + other._get(i) for i in range(lo, p)], p, lo)

    def _get(self, i):
        k = i - self.lo
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.D.zero

    def __neg__(self):
        return UThetaSeries(self.D, [-x for x in self.coeffs], self.prec, self.lo)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return UThetaSeries(self.D, [x * s for x in self.coeffs], self.prec, self.lo)

    def __mul__(self, other):
        if not isinstance(other, UThetaSeries):
            return self.scale(self.D(other))
        # relative precisions add to the other factor's valuation
        p = min(self.prec + other.lo, other.prec + self.lo)
        lo = self.lo + other.lo
        out = [self.D.zero] * max(p - lo, 0)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                k = i + j
                if k >= len(out):
                    break
                out[k] = out[k] + x * y
        return UThetaSeries(self.D, out, p, lo)

    __rmul__ = __mul__

    def inverse(self) -> "UThetaSeries":
        if not self.coeffs:
            raise ZeroDenominator("inverse of a series indistinguishable from zero")
        rel = self.prec - self.lo
        inv0 = self.D.one / self.coeffs[0]
        s = []
        for k in range(rel):
            acc = self.D.one if k == 0 else self.D.zero
            for j in range(1, min(k, len(self.coeffs) - 1) + 1):
                acc = acc - self.coeffs[j] * s[k - j]
            s.append(acc * inv0)
        return UThetaSeries(self.D, s, rel - self.lo, -self.lo)

    def __truediv__(self, other):
        return self * other.inverse()

    def residue(self):
        """Coefficient of u^{-1}."""
        return self[-1]

    def __str__(self):
        parts = []
        for k, x in enumerate(self.coeffs):
            if x.is_zero():
                continue
            e = k + self.lo
            s = str(x)
            s = f"({s})" if ("+" in s or "/" in s) and e != 0 else s
            mon = "u" if e == 1 else f"u^{e}"
            parts.append(s if e == 0 else (mon if s == "1" else f"{s}*{mon}"))
        parts.append(f"O(u^{self.prec})")
        return " + ".join(parts)

    __repr__ = __str__


def expand_at_theta(p: TPoly, prec: int, theta=None) -> UThetaSeries:
    """Taylor expansion of p(t) at t = theta in powers of u = t - theta."""
    D = p.D
    th = D.theta if theta is None else theta
    # Horner: acc(u) <- acc(u) * (theta + u) + c, truncated at u^prec
    acc = []
    for c in reversed(p.c):
        new = [D.zero] * min(len(acc) + 1, prec)
        for i, x in enumerate(acc):
            if i < prec:
                new[i] = new[i] + x * th
            if i + 1 < prec:
                new[i + 1] = new[i + 1] + x
        if prec > 0:
            new[0] = new[0] + c
        acc = new
    return UThetaSeries(D, acc, prec, 0)
