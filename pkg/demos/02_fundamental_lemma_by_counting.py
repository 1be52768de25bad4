#!/usr/bin/env python3
"""Count gamma-fixed self-dual lattices and watch the transfer identity come out exactly."""

import time

from endoscope.orbital import (
    StableClassParams, delta_factor, kappa_orbital_bruteforce, stable_orbital_bruteforce_H, verify_transfer,
)


def show(P):
    t = time.perf_counter()
    G = kappa_orbital_bruteforce(P)
    H = stable_orbital_bruteforce_H(P)
    print(f"{P.case:4s} q={P.q} A={P.A} B={P.B} C={P.C} r={P.r}  box M={G.box}")
    for pattern, kappa, count in G.per_class:
        print(f"    G class {pattern!s:14s} kappa={kappa:+d}  lattices={count}")
    for pattern, _, count in H.per_class:
        print(f"    H class {pattern!s:14s}           lattices={count}")
    lhs = delta_factor(P) * G.value
    rhs = H.value / P.q ** (2 * P.r)
    print(f"    Delta * Phi^kappa = {lhs}   q^-2r * Phi^st = {rhs}   ({time.perf_counter() - t:.2f}s)")


def main():
    # r = 0 is the classical fundamental lemma, and it pins the sign convention
    show(StableClassParams("E3", 3, 1, 1, 1, 0))
    # deeper level: fewer lattices survive (gamma - 1) L <= pi^r L
    show(StableClassParams("E3", 3, 2, 2, 2, 1))
    show(StableClassParams("EXEL", 3, 2, 1, 0, 0))

    rep = verify_transfer(StableClassParams("EXEL", 3, 1, 1, 0, 1), "oracle")
    print("oracle check:", rep.status, rep.kappa_oracle, rep.stable_oracle)


if __name__ == "__main__":
    main()
