"""sigma-modules over K[t] given by a matrix in a fixed basis.

Convention: column j of ``A`` is the image of tau e_j, i.e.
sigma(tau e_j) = sum_i A[i][j] e_i.  A morphism F: M1 -> M2 satisfies
F A1 = A2 tau(F).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatch, NotEffective, ShapeMismatch
from .tpoly import (
    TPoly,
    block_diag,
    det,
    identity,
    kron,
    mat_eq,
    matfrob,
    matmul,
    max_degree,
    shape,
)


@dataclass(frozen=True)
class SigmaModule:
    A: list
    K: object

    def __post_init__(self):
        n, m = shape(self.A)
        if n == 0 or n != m:
            raise ShapeMismatch(f"sigma matrix must be square and nonempty, got {n}x{m}")

    @property
    def rank(self) -> int:
        return len(self.A)

    def det(self) -> TPoly:
        return det(self.A)

    def max_degree(self) -> int:
        return max_degree(self.A)

    def __str__(self):
        return "[" + ", ".join("[" + ", ".join(f'"{a}"' for a in r) + "]" for r in self.A) + "]"


def t_minus_theta(K) -> TPoly:
    return TPoly(K, [-K.theta, K.one])


def unit_motif(K) -> SigmaModule:
    return SigmaModule(identity(K, 1), K)


def carlitz_motif(K, n: int = 1) -> SigmaModule:
    return SigmaModule([[t_minus_theta(K) ** n]], K)


def validate_effective(M: SigmaModule):
    """(n, alpha) with det A = alpha (t - theta)^n."""
    d = M.det()
    if d.is_zero():
        raise NotEffective("det A = 0")
    u = t_minus_theta(M.K)
    n = 0
    while d.degree() > 0:
        qt, r = d.divmod(u)
        if not r.is_zero():
            raise NotEffective(f"det A = {d} * (t - theta)^{n} has a root other than theta")
        d, n = qt, n + 1
    return n, d[0]


def _same_field(M1, M2):
    if M1.K != M2.K:
        raise FieldMismatch(f"{M1.K} vs {M2.K}")


def tensor_product(M1: SigmaModule, M2: SigmaModule) -> SigmaModule:
    _same_field(M1, M2)
    return SigmaModule(kron(M1.A, M2.A), M1.K)


def direct_sum(*Ms: SigmaModule) -> SigmaModule:
    for M in Ms[1:]:
        _same_field(Ms[0], M)
    return SigmaModule(block_diag(*(M.A for M in Ms)), Ms[0].K)


def determinant(M: SigmaModule) -> SigmaModule:
    return SigmaModule([[M.det()]], M.K)


def morphism_check(F, M1: SigmaModule, M2: SigmaModule) -> bool:
    if shape(F) != (M2.rank, M1.rank):
        raise ShapeMismatch(f"morphism must be {M2.rank}x{M1.rank}, got {shape(F)}")
    return mat_eq(matmul(F, M1.A), matmul(M2.A, matfrob(F)))


def change_basis(M: SigmaModule, U, Uinv) -> SigmaModule:
    """Matrix in the basis given by the columns of U: U^{-1} A tau(U)."""
    return SigmaModule(matmul(matmul(Uinv, M.A), matfrob(U)), M.K)
