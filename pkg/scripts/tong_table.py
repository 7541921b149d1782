#!/usr/bin/env python3
"""Table of the two summability exponents governing nuclearity vs
compactness.

For each pair (r1, r2) prints t with 1/t = 1 - (1/r1 - 1/r2)+ next to r*
with 1/r* = (1/r2 - 1/r1)+.  On reciprocals 1/t >= 1/r* everywhere, with
equality only at {1, inf}; the strict gap is the window where an embedding
can be compact without being nuclear.
"""

from fractions import Fraction

from gsembed import dual_star, tong
from gsembed.embanalyzer import INF


def fmt(x) -> str:
    return "inf" if x == INF else str(x)


def main():
    grid = [Fraction(1), Fraction(4, 3), Fraction(2), Fraction(3),
            Fraction(6), INF]
    width = 12
    print("t(r1,r2) | r*(r1,r2)")
    print(" " * 8 + "".join(f"r2={fmt(r2):<{width - 3}}" for r2 in grid))
    for r1 in grid:
        cells = []
        for r2 in grid:
            cell = f"{fmt(tong(r1, r2))}|{fmt(dual_star(r1, r2))}"
            if {r1, r2} == {Fraction(1), INF}:
                cell += "*"
            cells.append(f"{cell:<{width}}")
        print(f"r1={fmt(r1):<5s}" + "".join(cells))
    print("\n* the only pairs where the two exponents coincide")


if __name__ == "__main__":
    main()
