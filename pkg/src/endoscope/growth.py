"""Finite group orders, congruence indices and the bookkeeping behind the growth exponent 3/8.

A level is a list of local places (Nv, split|inert, k).  At an inert place the group
is U(3) over the unramified quadratic extension, at a split place it is GL(3).
Everything is exact (ints and Fractions); only the exponent is a float.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .errors import DuplicatePlace, ParseError

DIM = {1: 1, 2: 4, 3: 9}  # dim of U(n) and GL(n) over the base: n^2
SPLIT, INERT = "split", "inert"


def gl_order(n, q):
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def u_order(n, q):
    out = q ** (n * (n - 1) // 2)
    for i in range(1, n + 1):
        out *= q**i - (-1) ** i
    return out


def _is_prime_power(n):
    if n < 2:
        return False
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


# -- brute force over small rings -----------------------------------------------------

def gl_order_bruteforce(n, q, k=1):
    """|GL_n(Z / q^k)| for prime q, by scanning every matrix."""
    m = q**k
    entries = np.array(list(product(range(m), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    return int(np.count_nonzero(_det(entries) % q))


def _det(a):
    n = a.shape[-1]
    if n == 1:
        return a[:, 0, 0]
    if n == 2:
        return a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    return (
        a[:, 0, 0] * (a[:, 1, 1] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 1])
        - a[:, 0, 1] * (a[:, 1, 0] * a[:, 2, 2] - a[:, 1, 2] * a[:, 2, 0])
        + a[:, 0, 2] * (a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0])
    )


class _QuadRing:
    """(Z / q^k)[x] / (x^2 - s x - t) with the conjugation x -> s - x.

    For k = 1 and an irreducible polynomial this is F_{q^2} with its Frobenius.
    """

    def __init__(self, q, k=1):
        self.q, self.m = q, q**k
        if q == 2:
            self.s, self.t = 1, 1  # x^2 + x + 1
        else:
            self.s, self.t = 0, next(a for a in range(2, q) if pow(a, (q - 1) // 2, q) == q - 1)
        m = self.m
        self.elems = np.array([(a, b) for a in range(m) for b in range(m)], dtype=np.int64)

    def mul(self, a0, a1, b0, b1):
        # (a0 + a1 x)(b0 + b1 x), x^2 = s x + t
        c2 = a1 * b1
        return (a0 * b0 + self.t * c2) % self.m, (a0 * b1 + a1 * b0 + self.s * c2) % self.m

    def conj(self, a0, a1):
        return (a0 + a1 * self.s) % self.m, (-a1) % self.m


def _phi(n):
    """Antidiagonal (-1)^(i-1): the standard form (hermitian for odd n)."""
    return [[(-1) ** i if j == n - 1 - i else 0 for j in range(n)] for i in range(n)]


def u_order_bruteforce(n, q, k=1):
    """#{g over O_E / q^k : g Phi g^* = Phi}, built row by row.

    Row i of g must satisfy h(g_i, g_j) = Phi_ij for j <= i, h(x, y) = x Phi conj(y)^T.
    """
    R = _QuadRing(q, k)
    m = R.m
    phi = _phi(n)
    # all vectors as arrays of shape (V, n, 2)
    coords = np.array(list(product(range(len(R.elems)), repeat=n)), dtype=np.int64)
    vecs = R.elems[coords]  # (V, n, 2)
    # w = Phi conj(v)^T as a vector for each v
    cv0, cv1 = R.conj(vecs[..., 0], vecs[..., 1])
    phi_np = np.array(phi, dtype=np.int64)
    w0 = (cv0 @ phi_np.T) % m
    w1 = (cv1 @ phi_np.T) % m

    def pair(a_idx, b_idx):
        """h(v_a, v_b) for index arrays, encoded as c0 + m c1."""
        a0, a1 = vecs[a_idx, :, 0], vecs[a_idx, :, 1]
        b0, b1 = w0[b_idx], w1[b_idx]
        c0, c1 = R.mul(a0, a1, b0, b1)
        return (c0.sum(axis=-1) % m) + m * (c1.sum(axis=-1) % m)

    nv = len(vecs)
    allv = np.arange(nv)
    # table[a, b] = h(v_a, v_b), filled in row blocks
    table = np.empty((nv, nv), dtype=np.int16)
    step = max(1, 2**20 // nv)
    for lo in range(0, nv, step):
        a = np.repeat(allv[lo:lo + step], nv)
        b = np.tile(allv, len(allv[lo:lo + step]))
        table[lo:lo + step] = pair(a, b).reshape(-1, nv)
    diag = np.diagonal(table)
    target = [[(phi[i][j] % m) for j in range(n)] for i in range(n)]

    def extend(rows):
        i = len(rows)
        cand = allv[diag == target[i][i]]
        for j, rj in enumerate(rows):
            cand = cand[table[cand, rj] == target[i][j]]
        if i == n - 1:
            return len(cand)
        return sum(extend(rows + [int(c)]) for c in cand)

    return extend([])


# -- indices ------------------------------------------------------------------------------

def _group_order(group, q):
    kind, n = group[:-1], int(group[-1])
    if kind == "U":
        return u_order(n, q)
    if kind == "GL":
        return gl_order(n, q)
    raise ValueError(f"unknown group {group!r}")


def congruence_index(group, q, k):
    """|G(O) : G(O, p^k)| for G in U1, U2, U3, GL1, GL2, GL3."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = int(group[-1])
    return _group_order(group, q) * q ** (DIM[n] * (k - 1))


@dataclass(frozen=True)
class Place:
    Nv: int
    split_type: str
    k: int

    def __post_init__(self):
        if not _is_prime_power(self.Nv):
            raise ValueError(f"Nv = {self.Nv} is not a prime power")
        if self.split_type not in (SPLIT, INERT):
            raise ValueError(f"split type must be 'split' or 'inert', got {self.split_type!r}")
        if self.k < 1:
            raise ValueError("exponent k must be >= 1")

    def index(self, n):
        return congruence_index(("U" if self.split_type == INERT else "GL") + str(n), self.Nv, self.k)


@dataclass(frozen=True)
class IdealFactorization:
    places: tuple

    def __post_init__(self):
        places = tuple(p if isinstance(p, Place) else Place(*p) for p in self.places)
        keys = [(p.Nv, p.split_type) for p in places]
        if len(set(keys)) != len(keys):
            raise DuplicatePlace("a place occurs twice")
        object.__setattr__(self, "places", tuple(sorted(places, key=lambda p: (p.Nv, p.split_type))))

    @property
    def norm(self):
        return math.prod(p.Nv**p.k for p in self.places)

    def coprime(self, other):
        mine = {(p.Nv, p.split_type) for p in self.places}
        return not mine & {(p.Nv, p.split_type) for p in other.places}

    def __mul__(self, other):
        acc = {(p.Nv, p.split_type): p.k for p in self.places}
        for p in other.places:
            acc[(p.Nv, p.split_type)] = acc.get((p.Nv, p.split_type), 0) + p.k
        return IdealFactorization(tuple(Place(nv, t, k) for (nv, t), k in acc.items()))

    def spec(self):
        return ";".join(f"{p.Nv},{p.split_type},{p.k}" for p in self.places)


def volume_index(ideal):
    """V(n) = |U(3, O) Z : U(3, n) Z|, place by place as idx_3 / idx_1."""
    return math.prod((Fraction(p.index(3), p.index(1)) for p in ideal.places), start=Fraction(1))


def character_count(ideal):
    """Characters of U(1) with conductor dividing n: |U(1, O) : U(1, n)|."""
    return math.prod(p.index(1) for p in ideal.places)


def _idx2(ideal):
    return math.prod(p.index(2) for p in ideal.places)


def beta_upper(ideal):
    """|U(3, O) : U(3, n)| / (N(n)^2 |U(2, O) : U(2, n)|)."""
    idx3 = math.prod(p.index(3) for p in ideal.places)
    return Fraction(idx3, ideal.norm**2 * _idx2(ideal))


def beta_lower(ideal):
    """V(n) |Theta(n)| N(n)^-2 |U(2, O) : U(2, n)|^-1, constants dropped."""
    return volume_index(ideal) * character_count(ideal) / (ideal.norm**2 * _idx2(ideal))


# -- multiplicities and packets -----------------------------------------------------------

def multiplicity(epsilon, n_pi):
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if n_pi < 0:
        raise ValueError("n(pi) must be >= 0")
    return (1 + epsilon * (-1) ** n_pi) // 2


def packet_dimension_sum_bruteforce(dims, epsilon):
    """Sum over subsets I of the inert places of m(|I|) prod_I d_s prod_{not I} d_n.

    Every subset is expanded explicitly (2^n terms), vectorized when int64 is safe.
    """
    n = len(dims)
    top = max([1] + [d for pair in dims for d in pair])
    if top**n * 2**n >= 2**62:
        total = 0
        for size in range(n + 1):
            if multiplicity(epsilon, size):
                for I in combinations(range(n), size):
                    total += math.prod(dims[v][1] if v in I else dims[v][0] for v in range(n))
        return total
    prods = np.ones(1, dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    for dn, ds in dims:
        prods = np.concatenate([prods * dn, prods * ds])
        sizes = np.concatenate([sizes, sizes + 1])
    keep = (1 + epsilon * (1 - 2 * (sizes % 2))) // 2
    return int((prods * keep).sum())


def packet_dimension_sum(dims, epsilon):
    """Closed form (prod(d_n + d_s) + epsilon prod(d_n - d_s)) / 2."""
    if any(d < 0 for pair in dims for d in pair):
        raise ValueError("dimensions must be nonnegative")
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    plus = math.prod(dn + ds for dn, ds in dims)
    minus = math.prod(dn - ds for dn, ds in dims)
    return (plus + epsilon * minus) // 2


# -- reports ---------------------------------------------------------------------------------

@dataclass
class GrowthReport:
    ideal: IdealFactorization
    N_ideal: int
    V: Fraction
    char_count: int
    beta_upper: Fraction
    beta_lower: Fraction
    exponent_upper: float

    @classmethod
    def of(cls, ideal):
        V = volume_index(ideal)
        bu = beta_upper(ideal)
        if V <= 1:
            raise ValueError("V(n) must exceed 1 for the exponent to be defined")
        return cls(ideal, ideal.norm, V, character_count(ideal), bu, beta_lower(ideal),
                   math.log(bu) / math.log(V))

    @property
    def lower_over_upper(self):
        return self.beta_lower / self.beta_upper

    @property
    def V_over_N8(self):
        return self.V / self.N_ideal**8

    @property
    def upper_over_N3(self):
        return self.beta_upper / self.N_ideal**3


def local_limit(Nv, split_type):
    """lim V / N^8 at one place: |G(F_q)| / (|G_1(F_q)| q^8)."""
    g = Place(Nv, split_type, 1)
    return Fraction(g.index(3), g.index(1) * Nv**8)


@dataclass
class ExponentTable:
    rows: list
    target: float = 0.375
    decreasing: bool = field(init=False)
    final_gap: float = field(init=False)

    def __post_init__(self):
        e = [r.exponent_upper for r in self.rows]
        self.decreasing = all(a > b for a, b in zip(e, e[1:]))
        self.final_gap = abs(e[-1] - self.target)


def exponent_report(sweep):
    if not sweep:
        raise ValueError("empty sweep")
    return ExponentTable([GrowthReport.of(ideal) for ideal in sweep])


def ideal_spec_parse(s):
    """Parse 'Nv,type,k;Nv,type,k;...' into an IdealFactorization."""
    if not s or not s.strip():
        raise ParseError("empty ideal spec", 0)
    places = []
    pos = 0
    for chunk in s.split(";"):
        parts = chunk.split(",")
        if len(parts) != 3:
            raise ParseError(f"expected 'Nv,type,k', got {chunk!r}", pos)
        nv, kind, k = (x.strip() for x in parts)
        kind = kind.lower()
        try:
            place = Place(int(nv), kind, int(k))
        except ValueError as exc:
            raise ParseError(f"bad place {chunk!r}: {exc}", pos) from None
        places.append(place)
        pos += len(chunk) + 1
    return IdealFactorization(tuple(places))
