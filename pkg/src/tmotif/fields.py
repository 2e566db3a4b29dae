"""Finite fields with fixed, shipped moduli.

Elements are ``flint.fq_default`` values; this module only pins down which
modulus is used for each ``(p, n)`` so that arithmetic is reproducible.
"""

from __future__ import annotations

import atexit
import functools
import gc
import random
from dataclasses import dataclass

import flint

from .errors import TMotifError

# Lexicographically least monic irreducible of each degree (constant term first).
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1), (2, 2): (1, 1, 1), (2, 3): (1, 1, 0, 1), (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1), (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1), (2, 8): (1, 1, 0, 1, 1, 0, 0, 0, 1),
    (2, 9): (1, 1, 0, 0, 0, 0, 0, 0, 0, 1), (2, 10): (1, 0, 0, 1) + (0,) * 6 + (1,),
    (2, 11): (1, 0, 1) + (0,) * 8 + (1,), (2, 12): (1, 0, 0, 1) + (0,) * 8 + (1,),
    (2, 13): (1, 1, 0, 1, 1) + (0,) * 8 + (1,), (2, 14): (1, 0, 0, 0, 0, 1) + (0,) * 8 + (1,),
    (2, 15): (1, 1) + (0,) * 13 + (1,), (2, 16): (1, 1, 0, 1, 0, 1) + (0,) * 10 + (1,),
    (2, 17): (1, 0, 0, 1) + (0,) * 13 + (1,), (2, 18): (1, 0, 0, 1) + (0,) * 14 + (1,),
    (2, 19): (1, 1, 1, 0, 0, 1) + (0,) * 13 + (1,), (2, 20): (1, 0, 0, 1) + (0,) * 16 + (1,),
    (3, 1): (0, 1), (3, 2): (1, 0, 1), (3, 3): (1, 2, 0, 1), (3, 4): (2, 1, 0, 0, 1),
    (3, 5): (1, 2, 0, 0, 0, 1), (3, 6): (2, 1, 0, 0, 0, 0, 1),
    (3, 7): (2, 0, 1, 0, 0, 0, 0, 1), (3, 8): (2, 0, 1, 0, 0, 0, 0, 0, 1),
    (3, 9): (1, 0, 1, 2, 0, 0, 0, 0, 0, 1), (3, 10): (1, 0, 2) + (0,) * 7 + (1,),
    (3, 11): (2, 0, 1) + (0,) * 8 + (1,), (3, 12): (2, 0, 1) + (0,) * 9 + (1,),
    (5, 1): (0, 1), (5, 2): (2, 0, 1), (5, 3): (1, 1, 0, 1), (5, 4): (2, 0, 0, 0, 1),
    (5, 5): (1, 4, 0, 0, 0, 1), (5, 6): (2, 1, 0, 0, 0, 0, 1),
    (5, 7): (1, 1, 0, 0, 0, 0, 0, 1), (5, 8): (2, 0, 0, 0, 0, 0, 0, 0, 1),
}

# python-flint can segfault if the cyclic GC at interpreter exit frees a
# finite field context before polynomials over it.  Freezing the heap at
# exit leaves teardown to plain refcounting, which frees in a safe order.
atexit.register(gc.freeze)

SUPPORTED_PRIMES = (2, 3, 5)
MAX_ORDER = 2**20


class FiniteField:
    """GF(p^n) presented as F_p[z]/(modulus)."""

    def __init__(self, p: int, n: int = 1, modulus=None):
        if p not in SUPPORTED_PRIMES:
            raise TMotifError(f"unsupported characteristic {p}", code="unsupported-field")
        if modulus is None:
            if (p, n) not in MODULI:
                raise TMotifError(f"no shipped modulus for GF({p}^{n})", code="unsupported-field")
            modulus = MODULI[(p, n)]
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise TMotifError("modulus must be monic of degree n", code="unsupported-field")
        mpoly = flint.fmpz_mod_poly_ctx(p)(list(modulus))
        if not mpoly.is_irreducible():
            raise TMotifError(f"modulus {modulus} is reducible", code="reducible-modulus")
        self.p = p
        self.n = n
        self.order = p**n
        self.modulus = modulus
        if n == 1:
            self.ctx = flint.fq_default_ctx(p, 1)
        else:
            self.ctx = flint.fq_default_ctx(p, n, "z", modulus=mpoly)
        self.zero = self.ctx.zero()
        self.one = self.ctx.one()
        self.gen = self.ctx.gen() if n > 1 else self.ctx(modulus[0] * (p - 1) % p)
        self.poly_ring = flint.fq_default_poly_ctx(self.ctx)

    def __call__(self, x):
        if isinstance(x, (list, tuple)):
            return self.from_vector(x)
        return self.ctx(x)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.n})"

    def to_vector(self, x) -> list[int]:
        v = [int(c) for c in x.to_list()]
        return v + [0] * (self.n - len(v))

    def from_vector(self, v) -> flint.fq_default:
        z = self.zero
        g = self.gen
        for c in reversed(list(v)):
            z = z * g + self.ctx(int(c))
        return z

    def elements(self):
        import itertools

        for v in itertools.product(range(self.p), repeat=self.n):
            yield self.from_vector(v[::-1])

    def random(self, rng: random.Random):
        return self.from_vector([rng.randrange(self.p) for _ in range(self.n)])

    def frob(self, x, q: int):
        return x**q

    def is_prime_field(self) -> bool:
        return self.n == 1


@functools.lru_cache(maxsize=None)
def finite_field(p: int, n: int = 1, modulus: tuple | None = None) -> FiniteField:
    return FiniteField(p, n, modulus)


@dataclass(frozen=True)
class FieldDescriptor:
    """(p, e, m): base field F_q with q = p^e, residue extension degree m."""

    p: int
    e: int = 1
    m: int = 1

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise TMotifError(f"p must be one of {SUPPORTED_PRIMES}", code="unsupported-field")
        if self.p ** (self.e * self.m) > MAX_ORDER:
            raise TMotifError("q^m exceeds 2^20", code="unsupported-field")

    @property
    def q(self) -> int:
        return self.p**self.e

    def base(self) -> FiniteField:
        return finite_field(self.p, self.e)

    def residue(self) -> FiniteField:
        return finite_field(self.p, self.e * self.m)


class FiniteDomain:
    """A finite field viewed as a coefficient domain with twist x -> x^q."""

    def __init__(self, F: FiniteField, q: int):
        self.F = F
        self.q = q
        self.p = F.p
        self.zero = F.zero
        self.one = F.one

    def __call__(self, x):
        return self.F(x)

    def __eq__(self, other):
        return isinstance(other, FiniteDomain) and (self.F, self.q) == (other.F, other.q)

    def __hash__(self):
        return hash((self.F, self.q))

    def __repr__(self):
        return f"{self.F!r}[q={self.q}]"

    def frob(self, x):
        return x**self.q

    def is_zero(self, x) -> bool:
        return x.is_zero()
