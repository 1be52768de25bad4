"""Orbital integrals for (U(3), U(2) x U(1)) at an inert place: closed forms and lattice counts.

An orbital integral here is a bare count of self-dual lattices L fixed by gamma
with (gamma - 1) L <= pi^r L (the hyperspecial stabiliser gets mass 1).  Two shapes
of centraliser occur:

* E3:   gamma = diag(1, t2, t3) with t2, t3 in E^1, C = ord(1 - t2), B = ord(1 - t3),
        A = ord(t2 - t3);
* EXEL: gamma = 1 + (multiplication by t = t1 + t2 w on EL = E + E w), t in the
        norm-one group of EL/L, A = ord(t1 - 1), B = ord(t2).

The rational classes inside a stable class are realised by keeping gamma fixed and
changing the hermitian form.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .building import walk
from .errors import BoxUnstable, Infeasible
from .lattices import HermitianSpace, as_pairs, mat_mul, transpose
from .local_arithmetic import el_components, make_ctx, sample_norm_one_E3, sample_norm_one_EL

E3, EXEL = "E3", "EXEL"

# sign patterns eta on diag(a_1, a_2, a_3), a_i = 1 or pi; the U(1) slot is index 0
E3_PATTERNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))
E3_H_PATTERNS = ((1, 1), (-1, -1))


@dataclass(frozen=True)
class StableClassParams:
    case: str
    q: int
    A: int
    B: int
    C: int = 0
    r: int = 0

    def __post_init__(self):
        case = self.case.upper()
        object.__setattr__(self, "case", case)
        if case not in (E3, EXEL):
            raise ValueError(f"unknown case {self.case!r}")
        if min(self.A, self.B, self.C, self.r) < 0:
            raise ValueError("A, B, C, r must be nonnegative")
        if case == E3:
            A, B, C = self.A, self.B, self.C
            if A < min(B, C) or (B != C and A != min(B, C)):
                raise Infeasible(f"(A, B, C) = ({A}, {B}, {C}) violates the ultrametric inequality")
        elif self.A > 2 * self.B + 1:
            raise Infeasible(f"no norm-one t with (A, B) = ({self.A}, {self.B}): need A <= 2B + 1")

    @property
    def top(self):
        return max(self.A, self.B, self.C) if self.case == E3 else max(self.A, self.B)

    def default_box(self):
        if self.case == E3:
            return self.A + self.B + self.C + self.r + 2
        return 2 * self.A + 2 * self.B + self.r + 3

    def key(self):
        return (self.case, self.q, self.A, self.B, self.C if self.case == E3 else 0, self.r)


def precision_for(top, M, r):
    """Working precision for a walk at box radius M.

    Back-substitution against a rank-3 HNF at radius M divides by up to p^(3M + 3).
    """
    return 3 * (M + 1) + top + r + 8


@dataclass(frozen=True)
class ClassRepresentative:
    gamma: tuple  # rows of (a, b) pairs: a + b delta
    space: HermitianSpace
    kappa_sign: int
    modulus: int
    u: int

    def __post_init__(self):
        g = [list(r) for r in self.gamma]
        G = self.space.gram_matrix()
        gbar = [[(x[0], -x[1]) for x in row] for row in g]
        lhs = mat_mul(mat_mul(transpose(g), G, self.u), gbar, self.u, self.modulus)
        rhs = [[(x[0] % self.modulus, x[1] % self.modulus) for x in row] for row in G]
        if lhs != rhs:
            raise ValueError("gamma is not in the unitary group of the space")
        if g[0][0] != (1, 0) and self.space.rank == 3:
            raise ValueError("U(1) component of gamma must be 1")


@dataclass
class OrbitalResult:
    value: Fraction
    per_class: list = field(default_factory=list)  # (sign_pattern, kappa_sign, count)
    box: int = 0
    vertices: int = 0


def _gammas(params, ctx):
    """(gamma_G, gamma_H) as pair matrices."""
    one, z = (1, 0), (0, 0)
    if params.case == E3:
        t2, t3 = sample_norm_one_E3(ctx, params.B, params.C, params.A)
        t2, t3 = as_pairs([[t2, t3]])[0]
        return [[one, z, z], [z, t2, z], [z, z, t3]], [[t2, z], [z, t3]]
    t = sample_norm_one_EL(ctx, params.A, params.B)
    t1, t2 = as_pairs([list(el_components(t))])[0]
    pt2 = (ctx.p * t2[0], ctx.p * t2[1])
    block = [[t1, pt2], [t2, t1]]
    return [[one, z, z], [z, t1, pt2], [z, t2, t1]], block


def _spaces(case, p, side):
    """(sign_pattern, kappa_sign, HermitianSpace) for each rational class."""
    if case == E3:
        if side == "G":
            return [(s, s[0], HermitianSpace.from_signs(s, p)) for s in E3_PATTERNS]
        return [(s, 1, HermitianSpace.from_signs(s, p)) for s in E3_H_PATTERNS]
    hyp = ((0, 0), (1, 0))
    if side == "G":
        split = HermitianSpace(3, (((1, 0), (0, 0), (0, 0)), ((0, 0),) + hyp, ((0, 0), (1, 0), (0, 0))),
                               (1, 1, 1))
        return [((1, 1, 1), 1, split), ((-1, 1, -1), -1, HermitianSpace.diagonal([p, 1, p], p, (-1, 1, -1)))]
    return [((1, 1), 1, HermitianSpace(2, (hyp, ((1, 0), (0, 0))), (1, 1)))]


def representatives(params, side="G", ctx=None):
    """One ClassRepresentative per rational class of the stable class (G or H side)."""
    if ctx is None:
        M = params.default_box() + 1
        ctx = make_ctx(params.q, precision_for(params.top, M, params.r))
    gG, gH = _gammas(params, ctx)
    g = gG if side == "G" else gH
    return [
        ClassRepresentative(tuple(tuple(row) for row in g), V, k, ctx.modulus, ctx.u)
        for _, k, V in _spaces(params.case, params.q, side)
    ]


# -- closed forms ----------------------------------------------------------------

def _transfer_exponent(params):
    if params.case == E3:
        return params.B + params.C
    return min(2 * params.A, 2 * params.B + 1)


def _in_support(params):
    """Both sides vanish unless every eigenvalue is 1 mod pi^r."""
    if params.case == E3:
        return min(params.B, params.C) >= params.r
    return _transfer_exponent(params) >= 2 * params.r


def delta_factor(params):
    return Fraction(-params.q) ** (-_transfer_exponent(params))


def stable_orbital_closed(params):
    q, r = params.q, params.r
    if not _in_support(params):
        return Fraction(0)
    if params.case == E3:
        return Fraction(q ** (params.A - r) * (q + 1) - 2, q - 1)
    if params.B + 1 - r <= 0:
        return Fraction(0)
    return Fraction(q ** (params.B + 1 - r) - 1, q - 1)


def kappa_orbital_closed(params):
    st = stable_orbital_closed(params)
    if st == 0:
        return st
    return Fraction(-params.q) ** (_transfer_exponent(params) - 2 * params.r) * st


# -- brute force -------------------------------------------------------------------

@lru_cache(maxsize=512)
def _walk_levels(case, q, A, B, C, side, M, rcap):
    """Per class: (pattern, kappa, congruence levels of the fixed self-dual lattices,
    vertices visited, boundary hits) at box radius M."""
    params = StableClassParams(case, q, A, B, C, 0)
    ctx = make_ctx(q, precision_for(params.top, M, rcap))
    out = []
    for rep, (pattern, _, _) in zip(representatives(params, side, ctx), _spaces(case, q, side)):
        res = walk(rep.gamma, rep.space, rcap, M, ctx)
        out.append((pattern, rep.kappa_sign, tuple(res.levels), res.vertices, res.boundary_hits))
    return tuple(out)


def _counts(params, side, M):
    rcap = max(params.r, 2)
    C = params.C if params.case == E3 else 0
    rows = _walk_levels(params.case, params.q, params.A, params.B, C, side, M, rcap)
    return [(pat, k, sum(1 for lv in levels if lv >= params.r), verts) for pat, k, levels, verts, _ in rows]


def _bruteforce(params, side, M, check_box):
    if M is None:
        M = params.default_box()
    rows = _counts(params, side, M)
    if check_box:
        wider = _counts(params, side, M + 1)
        for a, b in zip(rows, wider):
            if a[2] != b[2]:
                raise BoxUnstable(f"class {a[0]}: {a[2]} lattices at M={M}, {b[2]} at M={M + 1}")
    signed = side == "G"
    value = sum(Fraction(k * c if signed else c) for _, k, c, _ in rows)
    return OrbitalResult(value, [(pat, k, c) for pat, k, c, _ in rows], M, sum(v for *_, v in rows))


def kappa_orbital_bruteforce(params, M=None, check_box=True):
    """Sum of kappa_sign times the lattice count over the rational classes of G."""
    return _bruteforce(params, "G", M, check_box)


def stable_orbital_bruteforce_H(params, M=None, check_box=True):
    """Unsigned sum of lattice counts over the classes of H = U(2) (U(1) factor is 1)."""
    return _bruteforce(params, "H", M, check_box)


@dataclass
class TransferReport:
    params: StableClassParams
    mode: str
    delta: Fraction
    kappa_closed: Fraction
    stable_closed: Fraction
    kappa_oracle: Fraction = None
    stable_oracle: Fraction = None
    per_class_G: list = None
    per_class_H: list = None
    passed: bool = False
    status: str = "pass"


def verify_transfer(params, mode="closed", M=None, check_box=True):
    """Check Delta * Phi^kappa = q^(-2r) * Phi^st, exactly."""
    delta = delta_factor(params)
    kc, sc = kappa_orbital_closed(params), stable_orbital_closed(params)
    scale = Fraction(1, params.q ** (2 * params.r))
    rep = TransferReport(params, mode, delta, kc, sc)
    ok = delta * kc == scale * sc
    if mode == "oracle":
        kg = kappa_orbital_bruteforce(params, M, check_box)
        sh = stable_orbital_bruteforce_H(params, M, check_box)
        rep.kappa_oracle, rep.stable_oracle = kg.value, sh.value
        rep.per_class_G, rep.per_class_H = kg.per_class, sh.per_class
        ok = ok and delta * kg.value == scale * sh.value and kg.value == kc and sh.value == sc
    elif mode != "closed":
        raise ValueError(f"unknown mode {mode!r}")
    rep.passed = ok
    rep.status = "pass" if ok else "fail"
    return rep


# -- feasibility grid --------------------------------------------------------------

DEFAULT_GRID = {"q": (3, 5), "r": (0, 1), "max_abc": 2}


def grid_points(case, qs=DEFAULT_GRID["q"], rs=DEFAULT_GRID["r"], max_abc=DEFAULT_GRID["max_abc"]):
    """Feasible parameter points in canonical order, plus the skipped (infeasible) ones."""
    case = case.upper()
    points, skipped = [], []
    for q, r in product(qs, rs):
        if case == E3:
            for B, C, A in product(range(max_abc + 1), repeat=3):
                if A < min(B, C) or (B != C and A != min(B, C)) or A < r:
                    continue
                points.append(StableClassParams(E3, q, A, B, C, r))
        else:
            for A, B in product(range(max_abc + 1), repeat=2):
                if B + 1 - r < 0:
                    continue
                if A > 2 * B + 1:
                    skipped.append((EXEL, q, A, B, 0, r))
                    continue
                points.append(StableClassParams(EXEL, q, A, B, 0, r))
    points.sort(key=StableClassParams.key)
    return points, skipped

