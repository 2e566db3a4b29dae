"""How the Hodge class of a Carlitz torsion extension approaches its exp-lift as precision grows.

For each precision P and torsion level N, prints the pi-valuation of
h - u - a(theta) lambda after lattice reduction, in units of q^-1.
"""

import argparse
from dataclasses import dataclass

from tmotif import analytic as an
from tmotif.anderson import carlitz, motif_of_tmodule
from tmotif.ratfunc import function_field


@dataclass
class Config:
    q: int = 2
    levels: tuple = (1, 2, 3)
    precisions: tuple = (10, 20, 30, 40)


def run(cfg: Config):
    K = function_field(cfg.q)
    E = carlitz(K)
    for P in cfg.precisions:
        L = an.carlitz_field(cfg.q, cfg.q, P)
        H = an.tate_invariant_basis(motif_of_tmodule(E).M, L, P)
        pts = an.carlitz_torsion_points(L, max(cfg.levels))
        for N in cfg.levels:
            r = an.hodge_ext_compare(E, pts[N - 1], N, H, P)
            yield P, N, r.remainder_val / L.e, r.quotient, r.match


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=Config.q)
    ap.add_argument("--levels", type=int, nargs="+", default=list(Config.levels))
    ap.add_argument("--precisions", type=int, nargs="+", default=list(Config.precisions))
    a = ap.parse_args()
    cfg = Config(a.q, tuple(a.levels), tuple(a.precisions))
    print("P\tN\tremainder (q-digits)\tlattice coefficient\tmatch")
    for P, N, rem, quot, ok in run(cfg):
        print(f"{P}\t{N}\t{rem:g}\t{[str(c) for c in quot] if quot else quot}\t{ok}")


if __name__ == "__main__":
    main()
