"""Frobenius characteristic polynomials of a Drinfeld module at all good primes up to a degree.

Each row is checked against the torsion oracle at every level t - a with a in F_q
prime to f_v(t); the last column lists the levels that agreed.
"""

import argparse
from dataclasses import dataclass

from tmotif.anderson import drinfeld, motif_of_tmodule
from tmotif.errors import BadReduction
from tmotif.frobenius import compatible_at, format_charpoly, frobenius_charpoly, irreducibles, reduce_at_prime
from tmotif.parse import parse_scalar
from tmotif.ratfunc import function_field


@dataclass
class Config:
    q: int = 2
    coeffs: tuple = ("theta", "1", "1")  # phi_t = sum coeffs[i] s^i
    max_deg: int = 4


def table(cfg: Config):
    K = function_field(cfg.q)
    P = motif_of_tmodule(drinfeld(K, [parse_scalar(c, K) for c in cfg.coeffs]))
    for n in range(1, cfg.max_deg + 1):
        for v in irreducibles(cfg.q, n):
            try:
                cp = frobenius_charpoly(reduce_at_prime(P, v))
            except BadReduction:
                yield v, None, []
                continue
            ok = []
            for a in range(cfg.q):
                if n == 1 and (a + v.coeffs[0]) % cfg.q == 0:
                    continue  # t - a divides f_v(t): E[t - a] is not etale there
                if compatible_at(P, v, a)[0]:
                    ok.append(a)
            yield v, cp, ok


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--coeffs", nargs="+", default=list(Config.coeffs))
    ap.add_argument("--max-deg", type=int, default=Config.max_deg)
    a = ap.parse_args()
    cfg = Config(a.q, tuple(a.coeffs), a.max_deg)
    print(f"phi_t = {' + '.join(f'({c}) s^{i}' for i, c in enumerate(cfg.coeffs))} over F_{cfg.q}")
    for v, cp, ok in table(cfg):
        prime = " ".join(str(c) for c in v.coeffs)
        if cp is None:
            print(f"[{prime}]\tbad reduction")
        else:
            print(f"[{prime}]\t{format_charpoly(cp)}\tlevels agreeing: {ok}")


if __name__ == "__main__":
    main()
