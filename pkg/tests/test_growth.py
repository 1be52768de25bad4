import math
from fractions import Fraction
from itertools import product

import pytest

from endoscope import DuplicatePlace, ParseError
from endoscope.growth import (
    beta_lower, beta_upper, character_count, congruence_index, exponent_report,
    gl_order, gl_order_bruteforce, ideal_spec_parse, local_limit, multiplicity, packet_dimension_sum,
    packet_dimension_sum_bruteforce, u_order, u_order_bruteforce, volume_index,
)


def test_orders():
    assert gl_order(3, 2) == 168
    assert u_order(3, 2) == 648
    assert u_order(3, 3) == 24192
    for q in (2, 3, 5, 7):
        assert u_order(1, q) == q + 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_index_fibration_at_2_2(n):
    assert gl_order_bruteforce(n, 2, 2) == congruence_index(f"GL{n}", 2, 2)
    assert u_order_bruteforce(n, 2, 2) == congruence_index(f"U{n}", 2, 2)


def test_congruence_index():
    assert congruence_index("U3", 3, 1) == 24192
    assert congruence_index("GL3", 2, 2) == 168 * 2**9
    for q, k in product((3, 5), (1, 2, 3)):
        assert congruence_index("U1", q, k) == (q + 1) * q ** (k - 1)
    with pytest.raises(ValueError):
        congruence_index("SO3", 3, 1)


def test_volume_and_characters():
    I = ideal_spec_parse("3,inert,1")
    assert volume_index(I) == 6048
    assert character_count(I) == 4
    assert character_count(ideal_spec_parse("5,split,2")) == 20
    assert beta_upper(I) == 28 == beta_lower(I)
    assert beta_upper(ideal_spec_parse("3,inert,2")) == 756
    assert beta_upper(ideal_spec_parse("5,split,1")) == 5**3 - 1


def test_local_limit():
    assert local_limit(3, "inert") == Fraction(24192, 4 * 3**8)
    for k in range(1, 5):
        I = ideal_spec_parse(f"5,split,{k}")
        assert volume_index(I) / I.norm**8 == local_limit(5, "split")


def test_multiplicativity():
    a, b = ideal_spec_parse("3,inert,2"), ideal_spec_parse("5,split,1;7,inert,1")
    assert a.coprime(b)
    ab = a * b
    for f in (volume_index, character_count, beta_upper, beta_lower):
        assert f(ab) == f(a) * f(b)
    assert (a * a).places[0].k == 4


def test_parse():
    assert len(ideal_spec_parse("3,inert,1").places) == 1
    assert len(ideal_spec_parse("3,inert,1;5,split,2").places) == 2
    with pytest.raises(DuplicatePlace):
        ideal_spec_parse("3,inert,1;3,inert,2")
    for bad in ["", "3,inert", "3,foo,1", "6,inert,1", "3,inert,0", "x,inert,1"]:
        with pytest.raises(ParseError):
            ideal_spec_parse(bad)
    with pytest.raises(ParseError) as e:
        ideal_spec_parse("3,inert,1;4,inert")
    assert e.value.position == 10


def test_multiplicity():
    assert multiplicity(1, 0) == 1
    assert multiplicity(1, 1) == 0
    assert multiplicity(-1, 1) == 1
    assert {multiplicity(e, n) for e in (1, -1) for n in range(6)} == {0, 1}


def test_packets():
    assert packet_dimension_sum([(1, 1)], 1) == 1
    assert packet_dimension_sum([(1, 1), (1, 1)], 1) == 2
    dims = [(3, 0), (2, 0), (5, 0)]
    assert packet_dimension_sum(dims, 1) == 30 == packet_dimension_sum_bruteforce(dims, 1)


def test_exponent_report():
    t = exponent_report([ideal_spec_parse(f"3,inert,{k}") for k in range(1, 9)])
    assert abs(t.rows[0].exponent_upper - math.log(28) / math.log(6048)) < 1e-12
    assert t.decreasing and t.final_gap < 0.02
    with pytest.raises(ValueError):
        exponent_report([])
