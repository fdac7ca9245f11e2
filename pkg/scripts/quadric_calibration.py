#!/usr/bin/env python3
"""Sweep the rank-one quadric relation over parameter differences.

For the order-2 cyclic group the degree-zero center closes the quadric
Z^2 = X*Y + gamma with gamma = 4 b^2; this script tabulates gamma and the
calibrated ratio b / (k_0 - k_1) over a sweep, confirming it is constant.
"""

from fractions import Fraction

from leafatlas.cherednik import rank1_center_relation
from leafatlas.refgroup import ParameterK, catalog


def main():
    W = catalog("cyclic2")
    print(f"{'k_0':>8}{'k_1':>8}{'gamma':>12}{'b':>10}{'b/diff':>10}")
    ratios = set()
    sweep = [(0, 0), (1, 0), (0, 1), (2, 0), (3, 0), (Fraction(1, 2), 0),
             (Fraction(5, 3), Fraction(1, 3)), (-2, 1)]
    for k0, k1 in sweep:
        k = ParameterK.from_lists(W, [[k0, k1]])
        rec = rank1_center_relation(k)
        ratio = rec["b_over_difference"]
        if ratio is not None:
            ratios.add(str(ratio))
        print(f"{str(k0):>8}{str(k1):>8}{str(rec['gamma']).split(': ')[-1]:>12}"
              f"{(str(rec['b']).split(': ')[-1] if rec['b'] is not None else '-'):>10}"
              f"{(str(ratio).split(': ')[-1] if ratio is not None else '-'):>10}")
    print(f"\ndistinct calibration ratios: {sorted(ratios)}")


if __name__ == "__main__":
    main()
