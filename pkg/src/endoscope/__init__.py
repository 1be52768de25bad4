"""Exact verification of a level-pi^r fundamental lemma for (U(3), U(2) x U(1)) by
lattice counting, plus the index bookkeeping behind the growth exponent 3/8."""

from .errors import (
    BoxUnstable,
    ConfigParseError,
    DuplicatePlace,
    EndoscopeError,
    GridExceeded,
    Infeasible,
    InfeasibleGrid,
    InvalidExtension,
    ParseError,
    PrecisionExhausted,
    RankDeficient,
)
from .growth import (
    GrowthReport,
    IdealFactorization,
    beta_lower,
    beta_upper,
    character_count,
    congruence_index,
    exponent_report,
    gl_order,
    ideal_spec_parse,
    multiplicity,
    packet_dimension_sum,
    u_order,
    volume_index,
)
from .lattices import (
    HermitianSpace,
    Lattice,
    congruence_ok,
    dual,
    enumerate_stable_selfdual,
    hnf_reduce,
    is_self_dual,
    is_stable,
)
from .local_arithmetic import (
    INF,
    ExtElement,
    LocalRingCtx,
    conj,
    make_ctx,
    norm,
    ord,
    sample_norm_one_E3,
    sample_norm_one_EL,
    trace,
)
from .orbital import (
    ClassRepresentative,
    OrbitalResult,
    StableClassParams,
    delta_factor,
    kappa_orbital_bruteforce,
    kappa_orbital_closed,
    representatives,
    stable_orbital_bruteforce_H,
    stable_orbital_closed,
    verify_transfer,
)

__version__ = "0.1.0"
