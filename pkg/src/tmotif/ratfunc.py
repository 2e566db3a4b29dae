"""The rational function field K = F(theta) over a finite field.

``FunctionField`` is a *domain*: it knows its zero/one, how to coerce, and
the twist ``frob`` (q-th power, q = size of the constant field k).  All the
polynomial/series/matrix code in this package is written against that small
protocol so it runs unchanged over K, over residue fields and over local
fields.
"""

from __future__ import annotations

import random

import flint

from .errors import FieldMismatch, ZeroDenominator
from .fields import FiniteField, finite_field


class FunctionField:
    """K = F_c(theta) with constant field k = F_q ⊆ F_c."""

    def __init__(self, k: FiniteField, coeff: FiniteField | None = None):
        self.k = k
        self.coeff = coeff or k
        if self.coeff.p != k.p or self.coeff.n % k.n:
            raise FieldMismatch("coefficient field must contain k")
        if self.coeff is not k and k.n != 1:
            raise FieldMismatch("scalar extension only supported from a prime field")
        self.q = k.order
        self.p = k.p
        self.R = self.coeff.poly_ring
        self._one_poly = self.R.one()
        self._zero_poly = self.R.zero()
        self.zero = RatFunc(self._zero_poly, self._one_poly, self)
        self.one = RatFunc(self._one_poly, self._one_poly, self)
        self.theta = RatFunc(self.R([0, 1]), self._one_poly, self)
        self._twist_coeffs = self.coeff.n != k.n

    def __repr__(self):
        return f"{self.coeff!r}(theta)"

    def __eq__(self, other):
        return isinstance(other, FunctionField) and self.k == other.k and self.coeff == other.coeff

    def __hash__(self):
        return hash((self.k, self.coeff))

    def __call__(self, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            if x.K is self or x.K == self:
                return x
            if x.K.coeff.n == 1:
                return RatFunc(self.R([int(c) for c in x.num.coeffs()]),
                               self.R([int(c) for c in x.den.coeffs()]), self)
            raise FieldMismatch(f"cannot coerce from {x.K} to {self}")
        if isinstance(x, int):
            return RatFunc(self.R([x]), self._one_poly, self) if x % self.p else self.zero
        if isinstance(x, flint.fq_default):
            return RatFunc(self.R([x]), self._one_poly, self)
        if isinstance(x, (list, tuple)):
            return self.poly(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self}")

    def poly(self, coeffs) -> "RatFunc":
        return RatFunc(self.R([self.coeff(c) for c in coeffs]), self._one_poly, self)

    def fraction(self, num, den) -> "RatFunc":
        n = num if isinstance(num, flint.fq_default_poly) else self.R(list(num))
        d = den if isinstance(den, flint.fq_default_poly) else self.R(list(den))
        return RatFunc.make(n, d, self)

    def frob(self, x: "RatFunc") -> "RatFunc":
        return x.frob()

    def is_zero(self, x) -> bool:
        return x.num.is_zero()

    def random(self, rng: random.Random, degree: int = 3, den_degree: int = 0) -> "RatFunc":
        num = self.R([self.coeff.random(rng) for _ in range(degree + 1)])
        if den_degree <= 0:
            return RatFunc(num, self._one_poly, self)
        den = self.R([self.coeff.random(rng) for _ in range(den_degree)] + [1])
        return RatFunc.make(num, den, self)

    def base_change(self, coeff: FiniteField) -> "FunctionField":
        return FunctionField(self.k, coeff)


def _poly_frob(f, q, twist):
    if f.degree() <= 0 and not twist:
        return f
    g = f.inflate(q)
    if twist:
        g = _map_coeffs(g, lambda c: c**q)
    return g


def _map_coeffs(f, fn):
    R = f.context()
    return R([fn(c) for c in f.coeffs()])


class RatFunc:
    """num/den in F_c[theta], den monic, gcd(num, den) = 1.  Immutable."""

    __slots__ = ("num", "den", "K")

    def __init__(self, num, den, K: FunctionField):
        self.num = num
        self.den = den
        self.K = K

    @staticmethod
    def make(num, den, K: FunctionField) -> "RatFunc":
        if den.is_zero():
            raise ZeroDenominator("denominator is zero")
        if num.is_zero():
            return K.zero
        if den.degree() == 0:
            c = den.leading_coefficient()
            if c.is_one():
                return RatFunc(num, den, K)
            return RatFunc(num * c.inverse(), K._one_poly, K)
        g = num.gcd(den)
        if g.degree() > 0:
            num = num.exact_division(g)
            den = den.exact_division(g)
        c = den.leading_coefficient()
        if not c.is_one():
            ci = c.inverse()
            num = num * ci
            den = den * ci
        return RatFunc(num, den, K)

    # -- coercion helpers -------------------------------------------------
    def _co(self, other):
        if isinstance(other, RatFunc):
            if other.K is not self.K and other.K != self.K:
                raise FieldMismatch(f"{self.K} vs {other.K}")
            return other
        if isinstance(other, (int, flint.fq_default)):
            return self.K(other)
        return NotImplemented

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        if self.den.degree() == 0 and other.den.degree() == 0:
            return RatFunc(self.num + other.num, self.den, self.K)
        if self.den == other.den:
            return RatFunc.make(self.num + other.num, self.den, self.K)
        return RatFunc.make(self.num * other.den + other.num * self.den, self.den * other.den, self.K)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.K)

    def __sub__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        if self.den.degree() == 0 and other.den.degree() == 0:
            return RatFunc(self.num * other.num, self.den, self.K)
        if self.num.is_zero() or other.num.is_zero():
            return self.K.zero
        return RatFunc.make(self.num * other.num, self.den * other.den, self.K)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDenominator("inverse of zero")
        return RatFunc.make(self.den, self.num, self.K)

    def __truediv__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._co(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num**n, self.den**n, self.K)

    def __eq__(self, other):
        if isinstance(other, (int, flint.fq_default)):
            other = self.K(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(int(c) if self.K.coeff.n == 1 else str(c) for c in self.num.coeffs()),
                     tuple(str(c) for c in self.den.coeffs())))

    def frob(self) -> "RatFunc":
        """x -> x^q: theta -> theta^q and coefficients raised to the q-th power."""
        K = self.K
        tw = K._twist_coeffs
        return RatFunc(_poly_frob(self.num, K.q, tw), _poly_frob(self.den, K.q, tw), K)

    # -- inspection --------------------------------------------------------
    def degree(self) -> int:
        """deg num - deg den (minus the valuation at theta = infinity)."""
        if self.num.is_zero():
            raise ValueError("degree of zero")
        return self.num.degree() - self.den.degree()

    def height(self) -> int:
        return max(self.num.degree(), self.den.degree())

    def in_constants(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant(self):
        if not self.in_constants():
            raise ValueError("not a constant")
        return self.num.coeffs()[0] if not self.num.is_zero() else self.K.coeff.zero

    def evaluate(self, x, field: FiniteField | None = None):
        """Evaluate at an element x of a finite field containing the prime field."""
        F = field
        conv = (lambda c: F(int(c))) if self.K.coeff.n == 1 else (lambda c: c)
        num = F.zero
        for c in reversed(self.num.coeffs()):
            num = num * x + conv(c)
        den = F.zero
        for c in reversed(self.den.coeffs()):
            den = den * x + conv(c)
        if den.is_zero():
            raise ZeroDenominator("denominator vanishes at the evaluation point")
        return num / den

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        n = format_theta_poly(self.num, self.K)
        if self.den.degree() == 0:
            return n
        d = format_theta_poly(self.den, self.K)
        wrap = lambda x: f"({x})" if (" " in x or "*" in x) else x  # noqa: E731
        return f"{wrap(n)}/{wrap(d)}"


def _coeff_str(c, K) -> str:
    if K.coeff.n == 1:
        return str(int(c))
    s = str(c)
    return s if " " not in s and "+" not in s else f"({s})"


def format_theta_poly(f, K: FunctionField, var: str = "theta") -> str:
    if f.is_zero():
        return "0"
    terms = []
    for i, c in reversed(list(enumerate(f.coeffs()))):
        if c.is_zero():
            continue
        cs = _coeff_str(c, K)
        if i == 0:
            terms.append(cs)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            terms.append(mon if c.is_one() else f"{cs}*{mon}")
    return " + ".join(terms)


def function_field(p: int, e: int = 1) -> FunctionField:
    return FunctionField(finite_field(p, e))
