"""Reconstruct the l=2 coset numerators P0, P1 and report their values at t = 1.

Usage: python scripts/reconstruct_numerators.py [--order N]
"""

import argparse
import time

from wreathmolien.cli import load_golden
from wreathmolien.molienweyl import Q0, gamma0_series, gamma1_series
from wreathmolien.seriesring import IntPolynomial, eval_at_one, is_palindromic, reconstruct_numerator


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--order", type=int, default=120)
    args = ap.parse_args()

    start = time.perf_counter()
    numerators = {}
    for name, fn, sign in (("P0", gamma0_series, 1), ("P1", gamma1_series, -1)):
        p = reconstruct_numerator(fn(2, args.order), Q0, 113)
        golden = IntPolynomial(load_golden(f"{name.lower()}.txt"))
        numerators[name] = p
        print(f"{name}: degree {p.degree}, palindromic(sign {sign:+d}) = "
              f"{is_palindromic(p, sign, 113)}, matches reference = {p == golden}, "
              f"value at 1 = {eval_at_one(p)}")
    half_sum = (numerators["P0"] + numerators["P1"]).exact_div(2)
    print(f"(P0 + P1)/2 at 1 = {eval_at_one(half_sum)}")
    print(f"denominator degrees: {Q0.degrees}")
    print(f"elapsed: {time.perf_counter() - start:.1f} s at order {args.order}")


if __name__ == "__main__":
    main()
