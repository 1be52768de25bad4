import random

import pytest

from endoscope.lattices import hnf_reduce, mat_mul, transpose


def random_lattice(rng, ctx, n, dmax=2, smin=-2, smax=2):
    """A random lattice: random upper-triangular integral basis, rescaled."""
    m = ctx.p ** (dmax + 2)
    cols = [[(rng.randrange(m), rng.randrange(m)) if i < j else (0, 0) for i in range(n)] for j in range(n)]
    for j in range(n):
        cols[j][j] = (ctx.p ** rng.randrange(dmax + 1), 0)
    return hnf_reduce(cols, ctx).scaled(rng.randrange(smin, smax + 1))


def unimodular(rng, ctx, n, steps=6):
    """Random element of GL_n(O_E) as a product of elementary and unit-diagonal matrices."""
    p, u = ctx.p, ctx.u
    m = ctx.modulus
    g = [[(1, 0) if i == j else (0, 0) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        e = [[(1, 0) if i == j else (0, 0) for j in range(n)] for i in range(n)]
        i, j = rng.sample(range(n), 2)
        e[i][j] = (rng.randrange(m), rng.randrange(m))
        k = rng.randrange(n)
        while True:
            a, b = rng.randrange(m), rng.randrange(m)
            if (a * a - u * b * b) % p:
                break
        e[k][k] = (a, b)
        g = mat_mul(g, e, u, m)
    return g


def mix_columns(rng, ctx, cols):
    """Columns spanning the same module: unimodular mix, shuffle, plus redundant sums."""
    n = len(cols)
    B = transpose(cols)  # rows = coordinates
    mixed = transpose(mat_mul(B, unimodular(rng, ctx, n), ctx.u, ctx.modulus))
    extra = []
    for _ in range(rng.randrange(3)):
        c = rng.randrange(n)
        f = (rng.randrange(9), rng.randrange(9))
        extra.append([((x[0] * f[0] + ctx.u * x[1] * f[1]) % ctx.modulus,
                       (x[0] * f[1] + x[1] * f[0]) % ctx.modulus) for x in mixed[c]])
    out = [list(c) for c in mixed] + extra
    rng.shuffle(out)
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)
