#!/usr/bin/env python3
# ======================================================================
# Recompute every bundled verification target in exact arithmetic and
# compare against the stored reference digits.  Prints as it goes.
# ======================================================================

import argparse
from time import perf_counter

from e2sieve import TARGETS, leading_coefficient, lemma41_constant, loglinear_eval


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=15, help="printed significant digits")
    args = ap.parse_args()

    for name, target in TARGETS.items():
        F = target.test_function()
        params = target.params()
        t0 = perf_counter()
        lc = leading_coefficient(F, params, target.variant)
        dt = perf_counter() - t0
        print(f"=== {name}  (k={target.k}, rho={target.rho}, theta={target.theta}, "
              f"variant={target.variant})  [{dt:.2f}s]")
        print(f"  I           = {lc.I_value}")
        print(f"  J           = {lc.J_values[0]}   reference {target.reference['J']}")
        print(f"  L           = {loglinear_eval(lc.L_values[0], args.digits)}   "
              f"reference {target.reference['L']}")
        print(f"  M           = {loglinear_eval(lc.M_values[0], args.digits)}   "
              f"reference {target.reference['M']}")
        print(f"  log term    = {loglinear_eval(lemma41_constant(params.eta), args.digits)}")
        print(f"  coefficient = {loglinear_eval(lc.value, args.digits)}   "
              f"reference {target.reference['coefficient']}")
        sign = "positive" if lc.value.to_float() > 0 else "NOT positive"
        print(f"  -> leading coefficient {sign}")
        print()


if __name__ == "__main__":
    main()
