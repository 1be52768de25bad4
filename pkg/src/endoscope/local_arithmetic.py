"""Truncated arithmetic in O_F / p^N and its quadratic extensions.

F = Q_p with uniformizer pi = p.  The three extensions are

* E  = F[delta], delta^2 = u with u the least quadratic nonresidue mod p (unramified),
* L  = F[w],     w^2 = p (ramified),
* EL = the compositum, with F-basis (1, delta, w, delta*w).

Every element stores four residues mod p^N in that basis; the tag records which
subring it lives in.  Valuations are normalized by ord(p) = 1, so elements of L and
EL can have half-integer valuations.  ``ord2`` returns twice the valuation as an int.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import inf

from .errors import Infeasible, InvalidExtension, PrecisionExhausted

INF = inf

_TAGS = ("F", "E", "L", "EL")
# which basis slots (1, delta, w, delta*w) each tag may occupy
_SLOTS = {"F": (0,), "E": (0, 1), "L": (0, 2), "EL": (0, 1, 2, 3)}


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def is_square_mod(a, p):
    return pow(a % p, (p - 1) // 2, p) == 1


def vp(a, p, cap):
    """p-adic valuation of the residue ``a`` mod p^cap, returning ``cap`` for zero."""
    a %= p**cap
    if a == 0:
        return cap
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


@dataclass(frozen=True)
class LocalRingCtx:
    p: int
    N: int
    u: int

    @property
    def q(self):
        return self.p

    @property
    def modulus(self):
        return self.p**self.N

    def elt(self, tag, coords, exact_zero=False):
        return ExtElement.make(self, tag, coords, exact_zero)

    def F(self, a):
        return ExtElement.from_ints(self, "F", (a,))

    def E(self, a, b=0):
        return ExtElement.from_ints(self, "E", (a, b))

    def L(self, a, c=0):
        return ExtElement.from_ints(self, "L", (a, c))

    def EL(self, c0, c1=0, c2=0, c3=0):
        return ExtElement.from_ints(self, "EL", (c0, c1, c2, c3))

    @property
    def pi(self):
        return self.F(self.p)

    @property
    def delta(self):
        return self.E(0, 1)

    @property
    def w(self):
        return self.L(0, 1)


def make_ctx(p, N):
    """Context for residue characteristic ``p`` at precision ``N``."""
    if p == 2:
        raise ValueError("residue characteristic 2 is excluded")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if N < 1:
        raise ValueError("precision N must be at least 1")
    u = next(a for a in range(2, p) if not is_square_mod(a, p))
    return LocalRingCtx(p, N, u)


def _join(t1, t2):
    if t1 == t2:
        return t1
    if t1 == "F":
        return t2
    if t2 == "F":
        return t1
    return "EL"


@dataclass(frozen=True)
class ExtElement:
    ctx: LocalRingCtx
    tag: str
    coords: tuple  # length 1, 2, 2, 4 for F, E, L, EL
    exact_zero: bool = False

    @classmethod
    def make(cls, ctx, tag, coords, exact_zero=False):
        if tag not in _TAGS:
            raise ValueError(f"unknown extension tag {tag!r}")
        if len(coords) != len(_SLOTS[tag]):
            raise ValueError(f"{tag} needs {len(_SLOTS[tag])} coordinates, got {len(coords)}")
        m = ctx.modulus
        return cls(ctx, tag, tuple(c % m for c in coords), exact_zero)

    @classmethod
    def from_ints(cls, ctx, tag, coords):
        """Literal constructor: an all-zero literal is the true zero."""
        return cls.make(ctx, tag, coords, exact_zero=all(c == 0 for c in coords))

    # -- coordinate plumbing ------------------------------------------------
    def full(self):
        out = [0, 0, 0, 0]
        for slot, c in zip(_SLOTS[self.tag], self.coords):
            out[slot] = c
        return out

    def _from_full(self, tag, full, exact_zero):
        for slot in range(4):
            if slot not in _SLOTS[tag] and full[slot] % self.ctx.modulus:
                raise InvalidExtension(f"value does not lie in {tag}")
        return ExtElement.make(self.ctx, tag, [full[s] for s in _SLOTS[tag]], exact_zero)

    def cast(self, tag):
        """Reinterpret in ``tag`` (up- or down-cast); fails if the value does not fit."""
        return self._from_full(tag, self.full(), self.exact_zero)

    def _coerce(self, other):
        if isinstance(other, int):
            return ExtElement.from_ints(self.ctx, "F", (other,))
        if other.ctx != self.ctx:
            raise ValueError("elements from different contexts")
        return other

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        tag = _join(self.tag, other.tag)
        s = [a + b for a, b in zip(self.full(), other.full())]
        return self._from_full(tag, s, self.exact_zero and other.exact_zero)

    __radd__ = __add__

    def __neg__(self):
        return self._from_full(self.tag, [-a for a in self.full()], self.exact_zero)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        tag = _join(self.tag, other.tag)
        p, u = self.ctx.p, self.ctx.u
        a0, a1, a2, a3 = self.full()
        b0, b1, b2, b3 = other.full()
        # x = X1 + X2 w with X1 = a0 + a1 d, X2 = a2 + a3 d in E
        x1y1 = (a0 * b0 + u * a1 * b1, a0 * b1 + a1 * b0)
        x2y2 = (a2 * b2 + u * a3 * b3, a2 * b3 + a3 * b2)
        x1y2 = (a0 * b2 + u * a1 * b3, a0 * b3 + a1 * b2)
        x2y1 = (a2 * b0 + u * a3 * b1, a2 * b1 + a3 * b0)
        full = [
            x1y1[0] + p * x2y2[0],
            x1y1[1] + p * x2y2[1],
            x1y2[0] + x2y1[0],
            x1y2[1] + x2y1[1],
        ]
        return self._from_full(tag, full, self.exact_zero or other.exact_zero)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = ExtElement.from_ints(self.ctx, self.tag, (1,) + (0,) * (len(self.coords) - 1))
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def inverse(self):
        """Inverse of a unit (valuation 0)."""
        if self.ord2() != 0:
            raise ValueError("only units are invertible in the truncated ring")
        m = self.ctx.modulus
        if self.tag == "F":
            return self._from_full("F", [pow(self.coords[0], -1, m), 0, 0, 0], False)
        if self.tag in ("E", "L"):
            n = norm(self)
            return conj(self) * n.inverse()
        n = norm(self, over="L")
        return conj(self, over="L") * n.inverse()

    def is_zero(self):
        return not any(self.coords)

    def __eq__(self, other):
        if isinstance(other, int):
            other = ExtElement.from_ints(self.ctx, "F", (other,))
        if not isinstance(other, ExtElement):
            return NotImplemented
        return self.ctx == other.ctx and self.full() == other.full()

    def __hash__(self):
        return hash((self.ctx, tuple(self.full())))

    def ord2(self):
        return ord2(self)

    def __repr__(self):
        names = ("", "d", "w", "dw")
        parts = [f"{c}{names[s]}" for s, c in zip(_SLOTS[self.tag], self.coords) if c]
        return f"{self.tag}({' + '.join(parts) or '0'} mod {self.ctx.p}^{self.ctx.N})"


def ord2(x):
    """Twice the valuation (exact integer); INF for the true zero."""
    if x.exact_zero:
        return INF
    p, N = x.ctx.p, x.ctx.N
    if x.is_zero():
        raise PrecisionExhausted(f"{x!r} vanishes at precision {N}")
    c0, c1, c2, c3 = x.full()
    lead = min(vp(c0, p, N), vp(c1, p, N))
    tail = min(vp(c2, p, N), vp(c3, p, N))
    best = min(2 * lead if lead < N else INF, 2 * tail + 1 if tail < N else INF)
    return best


def ord(x):
    """Valuation with ord(p) = 1: an int on F and E, a Fraction on L and EL."""
    v = ord2(x)
    if v == INF:
        return INF
    if x.tag in ("F", "E"):
        return v // 2
    return Fraction(v, 2)


def ord_E(x):
    """Valuation of an element of E (int)."""
    return ord(x.cast("E")) if x.tag != "E" else ord(x)


_CONJ = {
    ("E", "F"): (1, -1, 1, -1),
    ("L", "F"): (1, 1, -1, -1),
    ("EL", "L"): (1, -1, 1, -1),
    ("EL", "E"): (1, 1, -1, -1),
}
_DEFAULT_BASE = {"E": "F", "L": "F", "EL": "L"}


def _conj_key(x, over):
    over = over or _DEFAULT_BASE.get(x.tag)
    key = (x.tag, over)
    if key not in _CONJ:
        raise InvalidExtension(f"no quadratic involution of {x.tag} over {over}")
    return key


def conj(x, over=None):
    """Nontrivial automorphism of ``x.tag`` over the subfield ``over``."""
    key = _conj_key(x, over)
    signs = _CONJ[key]
    return x._from_full(x.tag, [s * c for s, c in zip(signs, x.full())], x.exact_zero)


def norm(x, over=None):
    key = _conj_key(x, over)
    return (x * conj(x, over)).cast(key[1])


def trace(x, over=None):
    key = _conj_key(x, over)
    return (x + conj(x, over)).cast(key[1])


def cayley(ctx, y):
    """(1 + y delta) / (1 - y delta): a norm-one element of E with ord(t - 1) = ord(y)."""
    return ctx.E(1, y) / ctx.E(1, -y)


def _units(p):
    return range(1, p)


def _with_valuation(p, k, span):
    """Integers y with v_p(y) = k, in increasing order, below p^(k + span)."""
    return [p**k * c for c in range(1, p**span) if c % p]


def sample_norm_one_E3(ctx, B, C, A):
    """Norm-one t2, t3 in E with ord(1 - t2) = C, ord(1 - t3) = B, ord(t2 - t3) = A.

    Returns the first pair in a fixed search order over Cayley parameters.
    """
    if INF in (A, B, C):
        raise Infeasible("eigenvalues equal to 1 (or to each other) are not regular")
    if min(A, B, C) < 0:
        raise Infeasible("valuations must be nonnegative")
    if A < min(B, C) or (B != C and A != min(B, C)):
        raise Infeasible(f"(A, B, C) = ({A}, {B}, {C}) violates the ultrametric inequality")
    if max(A, B, C) >= ctx.N:
        raise Infeasible(f"precision N = {ctx.N} cannot resolve valuation {max(A, B, C)}")
    p = ctx.p
    for y2 in _with_valuation(p, C, 1):
        for y3 in _with_valuation(p, B, max(A - B, 0) + 1):
            if vp(y2 - y3, p, ctx.N) != A:
                continue
            t2, t3 = cayley(ctx, y2), cayley(ctx, y3)
            if (ord(1 - t2), ord(1 - t3), ord(t2 - t3)) == (C, B, A):
                return t2, t3
    raise Infeasible(f"no norm-one pair with (A, B, C) = ({A}, {B}, {C}) at precision {ctx.N}")


def el_components(t):
    """Split t in EL as t1 + t2 w with t1, t2 in E."""
    c0, c1, c2, c3 = t.full()
    return t.ctx.E(c0, c1), t.ctx.E(c2, c3)


def el_invariants(t):
    """(ord_E(t1 - 1), ord_E(t2)) for t = t1 + t2 w."""
    t1, t2 = el_components(t)
    return ord(t1 - 1), ord(t2)


def sample_norm_one_EL(ctx, A, B):
    """t = t1 + t2 w in EL, norm one over L, with ord(t1 - 1) = A and ord(t2) = B.

    Candidates are z / conj_L(z) for z = 1 + delta (y1 + y2 w) with y1, y2 in Z,
    searched in a fixed order.
    """
    if B == INF:
        raise Infeasible("t2 = 0 puts t in E; gamma would not be regular")
    if A == INF or min(A, B) < 0:
        raise Infeasible("valuations must be finite and nonnegative")
    if A > 2 * B + 1:
        raise Infeasible(f"norm-one elements force A <= 2B + 1, got (A, B) = ({A}, {B})")
    if 2 * B + 2 >= ctx.N:
        raise Infeasible(f"precision N = {ctx.N} cannot resolve (A, B) = ({A}, {B})")
    p = ctx.p
    one = ctx.EL(1)
    y1s = [0] + [y for k in range(0, 2 * B + 2) for y in _with_valuation(p, k, 1)]
    for y2 in _with_valuation(p, B, 1):
        for y1 in y1s:
            s = ctx.EL(0, y1, 0, y2)  # delta * (y1 + y2 w)
            z = one + s
            t = z / conj(z, over="L")
            if el_invariants(t) == (A, B):
                if not norm(t, over="L") == ctx.L(1):
                    raise PrecisionExhausted("norm-one check failed")
                return t
    raise Infeasible(f"no norm-one element with (A, B) = ({A}, {B}) at precision {ctx.N}")
