#!/usr/bin/env python3
"""Random sweep over classical two-weight problems.

Draws geometric-profile embedding problems with Banach parameters, checks
the engine verdicts against the closed-form thresholds, and prints how the
sampled problems fall into the compact / nuclear / gap regions.
"""

import argparse
import random
import time
from fractions import Fraction

from gsembed import EmbeddingProblem, compactness, geometric, nuclearity, recip
from gsembed.embanalyzer import INF

POOL = [Fraction(1), Fraction(4, 3), Fraction(3, 2), Fraction(2),
        Fraction(3), Fraction(4), Fraction(8), INF]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    counts = {"neither": 0, "compact-only": 0, "nuclear": 0}
    mismatches = 0
    t0 = time.perf_counter()
    for _ in range(args.count):
        s1 = Fraction(rng.randint(-24, 24), rng.choice([1, 2, 3, 4]))
        s2 = Fraction(rng.randint(-24, 24), rng.choice([1, 2, 3, 4]))
        p1, q1, p2, q2 = (rng.choice(POOL) for _ in range(4))
        d = rng.randint(1, 4)
        pr = EmbeddingProblem(geometric(s1), geometric(s2), p1, q1, p2, q2, d)

        gap = s1 - s2
        want_c = gap > d * max(Fraction(0), recip(p1) - recip(p2))
        want_n = gap > d - d * max(Fraction(0), recip(p2) - recip(p1))
        vc = compactness(pr).status == "holds"
        vn = nuclearity(pr).status == "holds"
        if vc != want_c or vn != want_n:
            mismatches += 1
            print(f"MISMATCH s1={s1} s2={s2} p=({p1},{p2}) q=({q1},{q2}) d={d}")
        if vn:
            counts["nuclear"] += 1
        elif vc:
            counts["compact-only"] += 1
        else:
            counts["neither"] += 1

    dt = time.perf_counter() - t0
    print(f"{args.count} problems in {dt:.2f}s, {mismatches} mismatches")
    for k, v in counts.items():
        print(f"  {k:13s} {v:6d}  ({100.0 * v / args.count:.1f}%)")


if __name__ == "__main__":
    main()
