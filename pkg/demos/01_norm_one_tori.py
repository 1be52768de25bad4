#!/usr/bin/env python3
"""Norm-one elements with prescribed valuation data, in truncated p-adic rings."""

from endoscope.local_arithmetic import (
    el_components, make_ctx, norm, ord, sample_norm_one_E3, sample_norm_one_EL,
)


def main():
    ctx = make_ctx(3, 12)
    print(f"p = {ctx.p}, N = {ctx.N}, E = F[d] with d^2 = {ctx.u}, L = F[w] with w^2 = p")
    print("ord(pi) =", ord(ctx.pi), " ord(w) =", ord(ctx.w), " norm(1 + d) == -1:", norm(ctx.E(1, 1)) == -1)

    # split torus: two norm-one eigenvalues of E, close to 1 and to each other
    for B, C, A in [(0, 0, 0), (1, 1, 1), (1, 1, 2), (2, 1, 1)]:
        t2, t3 = sample_norm_one_E3(ctx, B, C, A)
        print(f"(B, C, A) = ({B}, {C}, {A}):  ord(1-t2) = {ord(1 - t2)}, ord(1-t3) = {ord(1 - t3)}, "
              f"ord(t2-t3) = {ord(t2 - t3)}")

    # the torus EL^1: t = t1 + t2 w with norm 1 down to L
    for A, B in [(0, 0), (1, 1), (2, 1), (3, 1)]:
        t = sample_norm_one_EL(ctx, A, B)
        t1, t2 = el_components(t)
        print(f"(A, B) = ({A}, {B}):  ord(t1-1) = {ord(t1 - 1)}, ord(t2) = {ord(t2)}, "
              f"N_L(t) = 1: {norm(t, over='L') == ctx.L(1)}")
    # A can never exceed 2B + 1: N(t1) = 1 - p N(t2) pins ord(t1 - 1) down


if __name__ == "__main__":
    main()
