"""Breadth-first walk over the gamma-fixed vertices of the Bruhat-Tits tree of U(V).

For E/F unramified and V of rank 2 or 3 with a form of even discriminant valuation,
the building of U(V) is a tree.  Its vertices are lattices L with
pi L^* <= L <= L^* and dim_{F_q^2}(L^*/L) = t in {0, 2}:

* t = 0 (self-dual): neighbours are {x in L : h(x, c) in pi O_E} for the
  isotropic lines c of L / pi L;
* t = 2: neighbours are L + pi^-1 c for the lines c of the radical of h mod pi on
  L / pi L that are isotropic for pi^-2 h.

A neighbour is gamma-fixed exactly when its line is stable under gamma mod pi, so
only eigenlines are followed.  The walk works in a fixed frame: every lattice is
represented by the HNF of pi^M L, and lattices outside pi^M O^n <= L <= pi^-M O^n
are not entered (counted as boundary hits).
"""

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import InfeasibleGrid, PrecisionExhausted
from .lattices import _hnf, _member, as_pairs, det, eval_exact, val

DEFAULT_MAX_STATES = 2_000_000


def max_states():
    return int(os.environ.get("ENDOSCOPE_MAX_STATES", DEFAULT_MAX_STATES))


# -- residue field F_{p^2} = F_p[delta] ---------------------------------------

def fmul(x, y, u, p):
    return ((x[0] * y[0] + u * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)


def finv(x, u, p):
    n = pow((x[0] * x[0] - u * x[1] * x[1]) % p, -1, p)
    return (x[0] * n % p, -x[1] * n % p)


def nullspace(rows, n, u, p):
    """Basis of {c : sum_j row[j] c_j = 0 for every row} over F_{p^2}."""
    rows = [[(a % p, b % p) for a, b in r] for r in rows]
    pivots = []
    rank = 0
    for col in range(n):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != (0, 0)), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = finv(rows[rank][col], u, p)
        rows[rank] = [fmul(x, inv, u, p) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != (0, 0):
                f = rows[i][col]
                rows[i] = [
                    ((x[0] - g[0]) % p, (x[1] - g[1]) % p)
                    for x, g in zip(rows[i], (fmul(f, y, u, p) for y in rows[rank]))
                ]
        pivots.append(col)
        rank += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [(0, 0)] * n
        v[fc] = (1, 0)
        for i, pc in enumerate(pivots):
            x = rows[i][fc]
            v[pc] = (-x[0] % p, -x[1] % p)
        basis.append(v)
    return basis


def lines_in_span(basis, u, p):
    """One representative per line of the span of ``basis``."""
    k = len(basis)
    field = [(a, b) for a in range(p) for b in range(p)]
    out = []
    n = len(basis[0]) if basis else 0
    for lead in range(k):
        for tail in product(field, repeat=k - lead - 1):
            coeffs = [(0, 0)] * lead + [(1, 0)] + list(tail)
            v = [(0, 0)] * n
            for c, b in zip(coeffs, basis):
                if c != (0, 0):
                    v = [((x[0] + y[0]) % p, (x[1] + y[1]) % p) for x, y in zip(v, (fmul(c, z, u, p) for z in b))]
            out.append(v)
    return out


@lru_cache(maxsize=None)
def _all_lines(p, n):
    reps = []
    field = [(a, b) for a in range(p) for b in range(p)]
    for lead in range(n):
        for tail in product(field, repeat=n - lead - 1):
            reps.append([(0, 0)] * lead + [(1, 0)] + list(tail))
    arr = np.array(reps, dtype=np.int64)
    return arr[:, :, 0].copy(), arr[:, :, 1].copy(), reps


def _hform(c, H, d, u, m):
    """c^T H conj(d) mod m."""
    s0 = s1 = 0
    n = len(c)
    for i in range(n):
        ci = c[i]
        if ci == (0, 0):
            continue
        for j in range(n):
            h = H[i][j]
            if h == (0, 0):
                continue
            dj = d[j]
            # ci * h * conj(dj)
            a0 = ci[0] * h[0] + u * ci[1] * h[1]
            a1 = ci[0] * h[1] + ci[1] * h[0]
            s0 += a0 * dj[0] - u * a1 * dj[1]
            s1 += a1 * dj[0] - a0 * dj[1]
    return (s0 % m, s1 % m)


@dataclass
class WalkResult:
    selfdual: list  # scaled HNF columns of every fixed self-dual vertex
    congruent: list  # those with (gamma - 1) L <= pi^r L
    levels: list  # per self-dual vertex: largest s <= r with (gamma - 1) L <= pi^s L
    vertices: int
    boundary_hits: int


class TreeWalk:
    def __init__(self, gamma, V, r, M, ctx):
        m = ctx.modulus
        self.g = [[(x[0] % m, x[1] % m) for x in row] for row in as_pairs(gamma)]
        self.V = V
        self.n = V.rank
        self.r = r
        self.M = M
        self.K = 2 * M
        self.ctx = ctx
        self.p, self.u = ctx.p, ctx.u
        self.G = V.gram_matrix()
        if any(eval_exact(x, self.p) > 1 for row in self.G for x in row if x != (0, 0)):
            raise ValueError("gram entries must have valuation at most 1")
        self.eig = self._residual_eigenvalues()

    def _residual_eigenvalues(self):
        p, u, n = self.p, self.u, self.n
        gbar = [[(x[0] % p, x[1] % p) for x in row] for row in self.g]
        out = []
        for lam in product(range(p), repeat=2):
            mat = [[(gbar[i][j][0] - (lam[0] if i == j else 0), gbar[i][j][1] - (lam[1] if i == j else 0))
                    for j in range(n)] for i in range(n)]
            d = det(mat, u)
            if d[0] % p == 0 and d[1] % p == 0:
                out.append(lam)
        return out

    def _gram(self, cols):
        """h(b_i, b_j) / p^(2M) for the basis columns: exact integer pairs."""
        u, n, G = self.u, self.n, self.G
        scale = self.p**self.K
        left = []
        for i in range(n):
            bi = cols[i]
            left.append([
                (sum(bi[k][0] * G[k][l][0] + u * bi[k][1] * G[k][l][1] for k in range(n)),
                 sum(bi[k][0] * G[k][l][1] + bi[k][1] * G[k][l][0] for k in range(n)))
                for l in range(n)
            ])
        out = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                bj = cols[j]
                s0 = s1 = 0
                for l in range(n):
                    x, y = left[i][l], bj[l]
                    s0 += x[0] * y[0] - u * x[1] * y[1]
                    s1 += x[1] * y[0] - x[0] * y[1]
                if s0 % scale or s1 % scale:
                    raise PrecisionExhausted("vertex lattice is not integral")
                out[i][j] = (s0 // scale, s1 // scale)
                out[j][i] = (s0 // scale, -s1 // scale)
        return out

    def _gamma_in_basis(self, cols, need):
        """X with B X = gamma B, B upper triangular; valid mod p^need."""
        p, u, n = self.p, self.u, self.n
        m = self.ctx.modulus
        g = self.g
        Y = [[None] * n for _ in range(n)]
        for j in range(n):
            bj = cols[j]
            for i in range(n):
                s0 = s1 = 0
                gi = g[i]
                for k in range(j + 1):
                    x, y = gi[k], bj[k]
                    s0 += x[0] * y[0] + u * x[1] * y[1]
                    s1 += x[0] * y[1] + x[1] * y[0]
                Y[i][j] = (s0, s1)
        X = [None] * n
        loss = 0
        for i in range(n - 1, -1, -1):
            pd = cols[i][i][0]
            loss += val(pd, p)
            row = []
            for j in range(n):
                s0, s1 = Y[i][j]
                for k in range(i + 1, n):
                    x, y = cols[k][i], X[k][j]
                    s0 -= x[0] * y[0] + u * x[1] * y[1]
                    s1 -= x[0] * y[1] + x[1] * y[0]
                s0 %= m
                s1 %= m
                if s0 % pd or s1 % pd:
                    raise PrecisionExhausted("lattice is not gamma-stable at this precision")
                row.append((s0 // pd, s1 // pd))
            X[i] = row
        if self.ctx.N - loss < need:
            raise PrecisionExhausted(
                f"precision {self.ctx.N} leaves {self.ctx.N - loss} digits after division; {need} needed"
            )
        return X

    def _shifted(self, X, lam):
        p = self.p
        return [[((X[i][j][0] - (lam[0] if i == j else 0)) % p, (X[i][j][1] - (lam[1] if i == j else 0)) % p)
                 for j in range(self.n)] for i in range(self.n)]

    def _lines_selfdual(self, H, X):
        """gamma-stable isotropic lines of L / pi L."""
        p, u, n = self.p, self.u, self.n
        out = []
        for lam in self.eig:
            basis = nullspace(self._shifted(X, lam), n, u, p)
            if not basis:
                continue
            if len(basis) == n:
                return self._isotropic_scan(H)
            for c in lines_in_span(basis, u, p):
                if _hform(c, H, c, u, p) == (0, 0):
                    out.append(c)
        return out

    def _isotropic_scan(self, H):
        p, u = self.p, self.u
        la, lb, reps = _all_lines(p, self.n)
        Ha = np.array([[x[0] % p for x in row] for row in H], dtype=np.int64)
        Hb = np.array([[x[1] % p for x in row] for row in H], dtype=np.int64)
        # (H conj c)_i for every line c
        va = (la @ Ha.T - u * (lb @ Hb.T)) % p
        vb = (la @ Hb.T - lb @ Ha.T) % p
        sa = (la * va + u * lb * vb).sum(axis=1) % p
        sb = (la * vb + lb * va).sum(axis=1) % p
        return [reps[k] for k in np.nonzero((sa == 0) & (sb == 0))[0]]

    def _lines_modular(self, H, X):
        """gamma-stable lines of the radical of H mod pi, isotropic for H / pi^2."""
        p, u, n = self.p, self.u, self.n
        radical_eqs = [[H[i][j] for i in range(n)] for j in range(n)]
        p2 = p * p
        out = []
        for lam in self.eig:
            basis = nullspace(radical_eqs + self._shifted(X, lam), n, u, p)
            for c in lines_in_span(basis, u, p) if basis else ():
                if _hform(c, H, c, u, p2) == (0, 0):
                    out.append(c)
        return out

    def _down(self, cols, H, c):
        p, u, n = self.p, self.u, self.n
        w = []
        for i in range(n):
            s0 = s1 = 0
            for j in range(n):
                x, y = H[i][j], c[j]
                s0 += x[0] * y[0] - u * x[1] * y[1]
                s1 += x[1] * y[0] - x[0] * y[1]
            w.append((s0 % p, s1 % p))
        k = next(i for i in range(n) if w[i] != (0, 0))
        wk_inv = finv(w[k], u, p)
        gens = [[(p * x[0], p * x[1]) for x in cols[k]]]
        for j in range(n):
            if j == k:
                continue
            lam = fmul(w[j], wk_inv, u, p)
            gens.append([
                (x[0] - lam[0] * y[0] - u * lam[1] * y[1], x[1] - lam[0] * y[1] - lam[1] * y[0])
                for x, y in zip(cols[j], cols[k])
            ])
        K = self.K
        new = _hnf(gens, n, K + 1, p, u)
        big = p ** (K + 1)
        pk = p**K
        for i in range(n):
            if new[i][i][0] > pk:
                return None
            e = [(0, 0)] * n
            e[i] = (pk, 0)
            if not _member(e, new, p, u, big):
                return None
        return new

    def _up(self, cols, c):
        p, u, n = self.p, self.u, self.n
        v = []
        for i in range(n):
            s0 = s1 = 0
            for j in range(i, n):
                x, y = cols[j][i], c[j]
                s0 += x[0] * y[0] + u * x[1] * y[1]
                s1 += x[0] * y[1] + x[1] * y[0]
            if s0 % p or s1 % p:
                return None
            v.append((s0 // p, s1 // p))
        return _hnf(list(cols) + [v], n, self.K, p, u)

    def vertex_type(self, H):
        t = eval_exact(det(H, self.u), self.p)
        if t not in (0, 2):
            raise ValueError(f"not a vertex lattice: det valuation {t}")
        return t

    def run(self, start):
        p, n, r = self.p, self.n, self.r
        cap = max_states()
        pr = p**r
        start = _hnf(start, n, self.K, p, self.u)
        seen = {start}
        queue = [start]
        selfdual, congruent, levels = [], [], []
        hits = 0
        head = 0
        while head < len(queue):
            cols = queue[head]
            head += 1
            H = self._gram(cols)
            t = self.vertex_type(H)
            X = self._gamma_in_basis(cols, max(r, 1))
            if t == 0:
                selfdual.append(cols)
                level = min(
                    [r] + [eval_exact(((X[i][j][0] - (i == j)) % pr, X[i][j][1] % pr), p)
                           for i in range(n) for j in range(n)]
                )
                levels.append(level)
                if level >= r:
                    congruent.append(cols)
                nbrs = [self._down(cols, H, c) for c in self._lines_selfdual(H, X)]
            else:
                nbrs = [self._up(cols, c) for c in self._lines_modular(H, X)]
            for nb in nbrs:
                if nb is None:
                    hits += 1
                elif nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
                    if len(seen) > cap:
                        raise InfeasibleGrid(f"enumeration exceeded {cap} states (ENDOSCOPE_MAX_STATES)")
        return WalkResult(selfdual, congruent, levels, len(seen), hits)


def standard_start(n, M, p):
    """Columns of pi^M O^n."""
    return [[(p**M, 0) if i == j else (0, 0) for i in range(n)] for j in range(n)]


def walk(gamma, V, r, M, ctx, start=None):
    tw = TreeWalk(gamma, V, r, M, ctx)
    return tw.run(start if start is not None else standard_start(V.rank, M, ctx.p))
