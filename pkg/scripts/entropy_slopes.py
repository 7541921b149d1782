#!/usr/bin/env python3
"""Entropy-bound decay rates on growing finite sections.

For cube-shaped sections (all outer and inner indices = inf) the lattice
covering bound tracks the weight ratio, so the fitted slope of
log2(bound) vs log2(k) should land near -(rate(sigma) - rate(tau)) / dim.
Prints the fit for a few smoothness gaps plus one log-perturbed profile.
"""

import argparse

from gsembed import EmbeddingProblem, rate_fit
from gsembed.embanalyzer import INF


def report(label: str, problem: EmbeddingProblem, levels):
    fit = rate_fit(problem, levels=levels)
    pred = "-" if fit.predicted_slope is None else f"{fit.predicted_slope:+.3f}"
    ratio = "-" if fit.ratio is None else f"{fit.ratio:.3f}"
    print(f"{label:28s} slope {fit.slope:+.4f}  predicted {pred}  ratio {ratio}")
    for k, b in zip(fit.ks, fit.bounds):
        print(f"    k={k:4d}  bound {b:.6g}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument(
        "--levels", type=int, nargs="+", default=[1, 2, 3, 4],
        help="levels to fit over; a single value N stands for 1..N",
    )
    args = ap.parse_args()
    if len(args.levels) == 1:
        args.levels = list(range(1, args.levels[0] + 1))
    if len(args.levels) < 2:
        ap.error("need at least two levels")

    for s in (1, 2, 3):
        pr = EmbeddingProblem(f"2^({s}*j)", "1", INF, INF, INF, INF, 1)
        report(f"2^({s}j) -> 1, cube", pr, args.levels)

    pr = EmbeddingProblem("2^(j)*(1+j)", "1", INF, INF, INF, INF, 1)
    report("2^(j)(1+j) -> 1, cube", pr, args.levels)

    pr = EmbeddingProblem("2^(2*j)", "1", INF, INF, INF, INF, 2)
    report("2^(2j) -> 1, cube, d=2", pr, args.levels[:-1] or args.levels)


if __name__ == "__main__":
    main()
