"""Which Drinfeld modules have their period lattice in a tame tower, and how big must it be.

For every phi_t = theta + sum g_i s^i with g_i in {0, theta^a : a <= max_deg},
report the ramification index e, the residue degree m, the number of Newton
segments of the invariant equation at t = 0, and the failure reason if any.
"""

import argparse
import collections
import itertools
import time
from dataclasses import dataclass

from tmotif import analytic as an
from tmotif.anderson import drinfeld, motif_of_tmodule
from tmotif.errors import TMotifError
from tmotif.ratfunc import function_field


@dataclass
class Config:
    q: int = 2
    rank: int = 2
    max_deg: int = 3
    digits: int = 20


def survey(cfg: Config):
    K = function_field(cfg.q)
    th = K.theta
    choices = [None] + list(range(cfg.max_deg + 1))
    rows = []
    for degs in itertools.product(choices, repeat=cfg.rank):
        if degs[-1] is None:
            continue
        cs = [th] + [K.zero if d is None else th**d for d in degs]
        M = motif_of_tmodule(drinfeld(K, cs)).M
        nseg = max(len(s) for s in an.invariant_segments(M))
        t0 = time.perf_counter()
        try:
            H = an.tate_invariant_basis(M, digits=cfg.digits)
            status = (H.L.e, H.L.m, "ok" if H.verdict else "rank-deficient")
        except TMotifError as exc:
            status = (None, None, exc.code)
        rows.append((degs, nseg, *status, time.perf_counter() - t0))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for f, v in vars(Config()).items():
        ap.add_argument(f"--{f.replace('_', '-')}", type=int, default=v)
    cfg = Config(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args()).items()})
    rows = survey(cfg)
    print(f"q = {cfg.q}, rank {cfg.rank}, coefficient degrees <= {cfg.max_deg}")
    print("degrees\tsegments\te\tm\tstatus\tseconds")
    for degs, nseg, e, m, st, dt in rows:
        print(f"{degs}\t{nseg}\t{e}\t{m}\t{st}\t{dt:.2f}")
    tally = collections.Counter((nseg, st) for _, nseg, _, _, st, _ in rows)
    print("\nsegments, status -> count")
    for k in sorted(tally):
        print(f"{k}\t{tally[k]}")


if __name__ == "__main__":
    main()
