#!/usr/bin/env python3
"""Index bookkeeping for the L2 Betti number bound: beta ~ V^(3/8) along a tower of levels."""

import math

import numpy as np

from endoscope.growth import exponent_report, ideal_spec_parse, local_limit, packet_dimension_sum


def main():
    tower = [ideal_spec_parse(f"3,inert,{k}") for k in range(1, 13)]
    table = exponent_report(tower)
    print(f"{'k':>3} {'N':>10} {'log V':>9} {'log beta':>9} {'exponent':>9}")
    for k, row in enumerate(table.rows, 1):
        print(f"{k:3d} {row.N_ideal:10d} {math.log(row.V):9.3f} {math.log(row.beta_upper):9.3f} "
              f"{row.exponent_upper:9.5f}")
    print("decreasing:", table.decreasing, " gap to 3/8 at the end:", round(table.final_gap, 5))

    # slope of log beta against log V is exactly 3/8 once k >= 2
    logV = np.array([math.log(r.V) for r in table.rows])
    logB = np.array([math.log(r.beta_upper) for r in table.rows])
    print("fitted slope:", np.polyfit(logV[1:], logB[1:], 1)[0])

    # V / N^8 is constant along the tower
    print("V/N^8 limit at Nv = 3 inert:", local_limit(3, "inert"), "=", float(local_limit(3, "inert")))

    # the multiplicity-weighted packet sum keeps about half of the product
    dims = [(2, 1)] * 6
    print("packet sum, eps = +1:", packet_dimension_sum(dims, 1), "of", 3**6)


if __name__ == "__main__":
    main()
