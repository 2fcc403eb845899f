import math

import pytest
from hypothesis import given, settings, strategies as st

from novak import divseq, numbers
from novak.errors import InvalidArgument


def test_novak_family_passes():
    rep = divseq.check_axioms(divseq.power_family(2, -1), 40)
    assert all(rep.passed(a) for a in divseq.AXIOMS)
    # u_1 = u_2 = 3 leaves u_2 without a primitive prime, and u_3 = 9
    assert rep.verdicts["zsigmondy"].exceptions == [2, 3]


def test_mersenne_family():
    rep = divseq.check_axioms(divseq.power_family(2, 1), 40)
    assert not rep.passed("nondegeneracy")
    assert rep.verdicts["zsigmondy"].exceptions == [1, 6]
    rep = divseq.check_axioms(divseq.power_family(4, 1), 40)
    assert all(rep.passed(a) for a in divseq.AXIOMS)
    assert rep.verdicts["zsigmondy"].exceptions == []


def test_plus_family_is_not_divisibility_sequence():
    rep = divseq.check_axioms(divseq.power_family(2, 1, sign=+1), 20)
    assert rep.verdicts["divisibility"].counterexample == (1, 2)


@given(st.integers(2, 9), st.integers(-8, 8))
@settings(max_examples=40, deadline=None)
def test_minus_family_divisibility(a, b):
    if b == 0 or math.gcd(a, abs(b)) != 1 or a == b:
        return
    rep = divseq.check_axioms(divseq.power_family(a, b), 24)
    assert rep.passed("divisibility")
    assert rep.verdicts["lte"].status in ("pass", "vacuous")


def test_self_divisors():
    assert divseq.self_divisors(divseq.power_family(2, 1), 10**4).elements == [1]
    novak = numbers.enumerate_brute(1000).elements
    assert divseq.self_divisors(divseq.power_family(2, -1), 1000).elements == novak
    assert divseq.self_divisors(divseq.power_family(2, -1), 10**4, workers=2).elements == numbers.enumerate_brute(10**4).elements


def test_self_divisors_without_residue():
    spec = divseq.DivSeqSpec("fib", _fib, 2)
    res = divseq.self_divisors(spec, 200, ceiling_bits=100)
    assert res.elements[:6] == [1, 5, 12, 24, 25, 36]
    assert res.skipped and min(res.skipped) > 100


def _fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_generalized_witnesses():
    assert divseq.generalized_witnesses(3, 1, 2) == [1, 2, 4]
    assert divseq.generalized_witnesses(2, -1, 3) == [1, 3, 9, 27, 171]
    for v in divseq.generalized_witnesses(4, 1, 3):
        assert (4**v - 1) % v == 0
    with pytest.raises(InvalidArgument):
        divseq.generalized_witnesses(2, 1, 2)


def test_spec_file():
    spec = divseq.parse_spec_file("family = power\na = 2\nb = -1\nsign = minus\n")
    assert spec.value(5) == 33
    with pytest.raises(InvalidArgument):
        divseq.parse_spec_file("a = 2\n")
    with pytest.raises(InvalidArgument):
        divseq.parse_spec_file("a = 2\nb = 1\nsign = *\n")
