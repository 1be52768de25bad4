"""Hermitian lattices over O_E and enumeration of gamma-fixed self-dual lattices.

Internally an element a + b*delta of O_E is a pair of Python ints and a matrix is a
list of rows of pairs.  A lattice is stored through the integral module
pi^scale * Lambda in upper-triangular Hermite normal form (columns are basis
vectors, diagonal entries p^d_i, entries above the diagonal reduced mod p^d_i
coordinatewise).  That form is canonical, so lattices compare by tuple equality.

The enumeration walks the Bruhat-Tits tree of U(V) for rank 2 and 3.  Its
vertices are the lattices with pi*L^* <= L <= L^* and dim(L^*/L) in {0, 2}; the
self-dual ones (dim 0) are the hyperspecial vertices.  Fixed points of an elliptic
gamma form a subtree, so a breadth-first walk from any fixed vertex reaches every
fixed vertex.
"""

from dataclasses import dataclass, field
from itertools import combinations

from .errors import BoxUnstable, PrecisionExhausted, RankDeficient
from .local_arithmetic import ExtElement, vp

# -- O_E arithmetic on int pairs ----------------------------------------------

def emul(x, y, u):
    return (x[0] * y[0] + u * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def econj(x):
    return (x[0], -x[1])


def evp(x, p, cap):
    return min(vp(x[0], p, cap), vp(x[1], p, cap))


def val(a, p):
    """Valuation of an exact integer; a large sentinel for zero."""
    if a == 0:
        return _BIG
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def eval_exact(x, p):
    return min(val(x[0], p), val(x[1], p))


_BIG = 1 << 30


def einv_unit(x, p, u, m):
    n = (x[0] * x[0] - u * x[1] * x[1]) % m
    ni = pow(n, -1, m)
    return (x[0] * ni % m, -x[1] * ni % m)


def as_pairs(matrix):
    """Accept a matrix of ints, (a, b) pairs or ExtElements of E or F."""
    out = []
    for row in matrix:
        new = []
        for x in row:
            if isinstance(x, ExtElement):
                c = x.cast("E").coords
                new.append((c[0], c[1]))
            elif isinstance(x, tuple):
                new.append((x[0], x[1]))
            else:
                new.append((x, 0))
        out.append(new)
    return out


def mat_mul(a, b, u, m=None):
    n, k, l = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(l):
            s0 = s1 = 0
            for t in range(k):
                x, y = a[i][t], b[t][j]
                s0 += x[0] * y[0] + u * x[1] * y[1]
                s1 += x[0] * y[1] + x[1] * y[0]
            row.append((s0 % m, s1 % m) if m else (s0, s1))
        out.append(row)
    return out


def conj_transpose(a):
    return [[econj(a[i][j]) for i in range(len(a))] for j in range(len(a[0]))]


def transpose(a):
    return [[a[i][j] for i in range(len(a))] for j in range(len(a[0]))]


def det(a, u):
    n = len(a)
    if n == 1:
        return a[0][0]
    total = (0, 0)
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = emul(a[0][j], det(minor, u), u)
        sign = 1 if j % 2 == 0 else -1
        total = (total[0] + sign * term[0], total[1] + sign * term[1])
    return total


# -- Hermite normal form ------------------------------------------------------

def _hnf(gens, n, K, p, u):
    """Canonical HNF of the O_E-span of ``gens`` plus p^K O_E^n.

    ``gens`` are column vectors of pairs.  Returns a tuple of n columns.
    """
    m = p**K
    work = []
    for g in gens:
        col = [(a % m, b % m) for a, b in g]
        if any(a or b for a, b in col):
            work.append(col)
    cols = [None] * n
    diag = [K] * n
    for i in range(n - 1, -1, -1):
        best, bv = -1, K
        for idx, g in enumerate(work):
            v = evp(g[i], p, K)
            if v < bv:
                best, bv = idx, v
        if best < 0:
            col = [(0, 0)] * n
            col[i] = (m, 0)
            cols[i] = col
            continue
        g = work.pop(best)
        pk = p**bv
        unit = (g[i][0] // pk, g[i][1] // pk)
        ui = einv_unit(unit, p, u, m)
        g = [((a * ui[0] + u * b * ui[1]) % m, (a * ui[1] + b * ui[0]) % m) for a, b in g]
        g[i] = (pk, 0)
        diag[i] = bv
        rest = []
        for h in work:
            c = h[i]
            if c[0] or c[1]:
                f = (c[0] // pk, c[1] // pk)
                h = [
                    ((x[0] - f[0] * y[0] - u * f[1] * y[1]) % m, (x[1] - f[0] * y[1] - f[1] * y[0]) % m)
                    for x, y in zip(h, g)
                ]
            if any(a or b for a, b in h[:i]):
                rest.append(h)
        if bv:
            s = p ** (K - bv)
            extra = [((a * s) % m, (b * s) % m) for a, b in g[:i]] + [(0, 0)] * (n - i)
            if any(a or b for a, b in extra):
                rest.append(extra)
        work = rest
        cols[i] = g
    # reduce entries above the diagonal
    for j in range(n):
        col = cols[j]
        for i in range(j - 1, -1, -1):
            pd = p ** diag[i]
            a, b = col[i]
            qa, ra = divmod(a, pd)
            qb, rb = divmod(b, pd)
            if qa or qb:
                piv = cols[i]
                col = [
                    ((x[0] - qa * y[0] - u * qb * y[1]) % m, (x[1] - qa * y[1] - qb * y[0]) % m)
                    for x, y in zip(col[:i], piv[:i])
                ] + [(ra, rb)] + col[i + 1:]
        col = list(col)
        col[j] = (p ** diag[j], 0)
        cols[j] = tuple(col)
    return tuple(cols)


def _diag(cols, p):
    return tuple(val(cols[i][i][0], p) for i in range(len(cols)))


def _member(v, cols, p, u, m):
    """Is the column v (pairs) in the span of the HNF ``cols`` (mod m = p^K)?"""
    v = [(a % m, b % m) for a, b in v]
    for i in range(len(cols) - 1, -1, -1):
        pd = cols[i][i][0]
        a, b = v[i]
        if pd >= m:
            if a or b:
                return False
            continue
        if a % pd or b % pd:
            return False
        f = (a // pd, b // pd)
        piv = cols[i]
        v = [
            ((x[0] - f[0] * y[0] - u * f[1] * y[1]) % m, (x[1] - f[0] * y[1] - f[1] * y[0]) % m)
            for x, y in zip(v, piv)
        ]
    return True


# -- public types -------------------------------------------------------------

@dataclass(frozen=True)
class HermitianSpace:
    """E^rank with the hermitian form h(x, y) = x^T gram conj(y)."""

    rank: int
    gram: tuple
    sign_pattern: tuple = None

    def __post_init__(self):
        g = [list(r) for r in self.gram]
        if len(g) != self.rank:
            raise ValueError("gram size does not match the rank")
        if transpose(g) != [[econj(x) for x in row] for row in g]:
            raise ValueError("gram matrix is not hermitian")

    @classmethod
    def standard(cls, rank, p):
        """Antidiagonal form with entries (-1)^(i-1) on the antidiagonal.

        For even rank that matrix is skew-hermitian, so it is multiplied by delta.
        """
        rows = []
        for i in range(rank):
            row = []
            for j in range(rank):
                if j == rank - 1 - i:
                    s = -1 if i % 2 else 1
                    row.append((0, s) if rank % 2 == 0 else (s, 0))
                else:
                    row.append((0, 0))
            rows.append(tuple(row))
        return cls(rank, tuple(rows))

    @classmethod
    def diagonal(cls, entries, p, sign_pattern=None):
        """diag(a_1, ...) with a_i in F^x given as ints."""
        n = len(entries)
        rows = tuple(tuple((entries[i], 0) if i == j else (0, 0) for j in range(n)) for i in range(n))
        return cls(n, rows, sign_pattern)

    @classmethod
    def from_signs(cls, signs, p):
        """Diagonal form with a_i = 1 for sign +1 and a_i = p for sign -1."""
        return cls.diagonal([1 if s > 0 else p for s in signs], p, tuple(signs))

    def gram_matrix(self):
        return [list(r) for r in self.gram]


@dataclass(frozen=True)
class Lattice:
    """pi^(-scale) times the O_E-span of the HNF columns ``basis``.

    Always stored with the least scale for which the scaled module is integral.
    """

    basis: tuple
    scale: int
    p: int = field(compare=False)

    @property
    def rank(self):
        return len(self.basis)

    @property
    def exponents(self):
        return _diag(self.basis, self.p)

    @classmethod
    def from_hnf(cls, cols, scale, p):
        while all(x[0] % p == 0 and x[1] % p == 0 for col in cols for x in col):
            cols = tuple(tuple((x[0] // p, x[1] // p) for x in col) for col in cols)
            scale -= 1
        return cls(cols, scale, p)

    def at_scale(self, s):
        """Integral basis (list of columns) of pi^s * Lambda; s must be >= scale."""
        k = s - self.scale
        if k < 0:
            raise ValueError("scale too small")
        f = self.p**k
        return [[(x[0] * f, x[1] * f) for x in col] for col in self.basis]

    def scaled(self, k):
        """pi^k * Lambda."""
        return Lattice(self.basis, self.scale - k, self.p)

    def contains(self, other, u):
        s = max(self.scale, other.scale)
        mine = self.at_scale(s)
        K = sum(_diag(mine, self.p))
        m = self.p ** K
        return all(_member(col, mine, self.p, u, m) for col in other.at_scale(s))

    def __repr__(self):
        return f"Lattice(exponents={self.exponents}, scale={self.scale})"


def standard_lattice(rank, p):
    cols = tuple(tuple((1, 0) if i == j else (0, 0) for i in range(rank)) for j in range(rank))
    return Lattice(cols, 0, p)


def hnf_reduce(columns, ctx):
    """Canonical lattice spanned by ``columns`` (lists of ExtElements or pairs).

    The columns are read as an integral basis; the result records scale 0.
    """
    cols = [as_pairs([[x] for x in col]) for col in columns]
    cols = [[c[0] for c in col] for col in cols]
    n = len(cols[0])
    if len(cols) < n:
        raise RankDeficient("fewer columns than the rank")
    p, u, N = ctx.p, ctx.u, ctx.N
    # the span contains det * O^n for any n columns of full rank; use the best minor
    K = None
    for idx in combinations(range(len(cols)), n):
        sub = [[cols[j][i] for j in idx] for i in range(n)]
        d = det(sub, u)
        v = evp(d, p, N)
        if v < N and (K is None or v < K):
            K = v
    if K is None:
        raise RankDeficient(f"columns do not span a full-rank lattice at precision {N}")
    return Lattice.from_hnf(_hnf(cols, n, K, p, u), 0, p)


def lattice_gram(lat, V, u):
    """Gram matrix h(b_i, b_j) of the lattice basis, as exact (pairs / p^(2 scale))."""
    B = lat.at_scale(lat.scale)
    Bm = transpose(B)  # rows = coordinates
    raw = mat_mul(mat_mul(transpose(Bm), V.gram_matrix(), u), [[econj(x) for x in row] for row in Bm], u)
    return raw, 2 * lat.scale


def dual(lat, V, u):
    """Lambda^* = {y : h(x, y) in O_E for all x in Lambda}."""
    p = lat.p
    n = lat.rank
    B = [list(r) for r in transpose(lat.basis)]  # B[i][j]: row i of column j
    K = sum(lat.exponents)
    G = V.gram_matrix()
    # (B^T G) conj(y) in pi^(-scale) ... ; solve with the adjugate to stay integral
    M = mat_mul(transpose(B), G, u)  # n x n; dual: conj(y) in pi^scale * M^{-1} O^n
    dM = det(M, u)
    e = eval_exact(dM, p)
    if e >= _BIG:
        raise PrecisionExhausted("gram matrix is singular")
    adj = _adjugate(M, u)
    # M^{-1} = adj / det, det = p^e * unit
    unit = (dM[0] // p**e, dM[1] // p**e)
    m = p ** (K + e + 4 * n + 8)
    ui = einv_unit(unit, p, u, m)
    cols = []
    for j in range(n):
        col = [emul(adj[i][j], ui, u) for i in range(n)]
        cols.append([econj(x) for x in col])
    # y in pi^(scale - e) * span(cols); rescale so the module is integral
    new_scale = e - lat.scale
    cols_t = _hnf(cols, n, _span_bound(cols, p, u, m), p, u)
    return Lattice.from_hnf(cols_t, new_scale, p)


def _span_bound(cols, p, u, m):
    n = len(cols)
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    d = det(mat, u)
    return eval_exact((d[0] % m, d[1] % m), p)


def _adjugate(a, u):
    n = len(a)
    if n == 1:
        return [[(1, 0)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a) if k != i]
            d = det(minor, u)
            s = 1 if (i + j) % 2 == 0 else -1
            out[j][i] = (s * d[0], s * d[1])
    return out


def is_self_dual(lat, V, u):
    return dual(lat, V, u) == lat


def _apply(gamma, lat, u, m):
    """Columns of pi^scale * gamma * Lambda (mod m)."""
    B = transpose(lat.at_scale(lat.scale))
    return transpose(mat_mul(gamma, B, u, m))


def is_stable(gamma, lat, ctx):
    """gamma * Lambda == Lambda (gamma is assumed invertible on E^n)."""
    g = as_pairs(gamma)
    p, u = ctx.p, ctx.u
    K = sum(lat.exponents)
    m = p**K
    if K >= ctx.N:
        raise PrecisionExhausted("lattice finer than the working precision")
    cols = lat.at_scale(lat.scale)
    img = _apply(g, lat, u, ctx.modulus)
    if not all(_member(c, cols, p, u, m) for c in img):
        return False
    dg = det(g, u)
    return evp((dg[0] % ctx.modulus, dg[1] % ctx.modulus), p, ctx.N) == 0


def congruence_ok(gamma, lat, r, ctx):
    """(gamma - 1) Lambda <= pi^r Lambda."""
    g = as_pairs(gamma)
    n = len(g)
    h = [[((g[i][j][0] - (1 if i == j else 0)), g[i][j][1]) for j in range(n)] for i in range(n)]
    target = lat.scaled(r)
    s = max(lat.scale, target.scale)
    cols = target.at_scale(s)
    K = sum(_diag(cols, ctx.p))
    if K >= ctx.N:
        raise PrecisionExhausted("lattice finer than the working precision")
    src = transpose(lat.at_scale(s))
    img = transpose(mat_mul(h, src, ctx.u, ctx.modulus))
    return all(_member(c, cols, ctx.p, ctx.u, ctx.p**K) for c in img)




def enumerate_stable_selfdual(gamma, V, r, M, ctx, check_box=True):
    """Self-dual lattices L with gamma L = L and (gamma - 1) L <= pi^r L inside the box
    pi^M O^n <= L <= pi^-M O^n, sorted canonically.

    With ``check_box`` the walk is repeated at radius M + 1 and BoxUnstable is raised
    if the count moves.
    """
    from .building import walk

    res = walk(gamma, V, r, M, ctx)
    if check_box:
        wider = walk(gamma, V, r, M + 1, ctx)
        if len(wider.congruent) != len(res.congruent):
            raise BoxUnstable(
                f"count {len(res.congruent)} at M={M} but {len(wider.congruent)} at M={M + 1}"
            )
    lats = [Lattice.from_hnf(cols, M, ctx.p) for cols in res.congruent]
    return sorted(lats, key=lambda L: (L.scale, L.basis))
