"""Acceptance suite: one or more checks per criterion, summarized as one
PASS/FAIL line per criterion at the end of the pytest run.

Run alone with ``pytest tests/test_acceptance.py`` or
``python tests/test_acceptance.py``.
"""

import io
import json
import math
import random
import time

import pytest

from novak import arith, carmichael, divseq, numbers, primes, zsigmondy
from novak.cli import main as cli_main
from novak.errors import PreconditionViolation

# (p, [(prime, exponent, bold)]) reference table of
# p - 1 factorizations, including its 1459 row as printed.
TABLE1 = [
    (3, [(2, 1, True)]),
    (19, [(2, 1, True), (3, 2, True)]),
    (163, [(2, 1, True), (3, 4, True)]),
    (571, [(2, 1, True), (3, 1, True), (5, 1, False), (19, 1, True)]),
    (1459, [(2, 1, True), (3, 7, True)]),
    (8803, [(2, 1, True), (3, 3, True), (163, 1, True)]),
    (9137, [(2, 4, True), (571, 1, True)]),
    (17497, [(2, 3, True), (3, 7, True)]),
    (41113, [(2, 3, True), (3, 2, True), (571, 1, True)]),
    (52489, [(2, 3, True), (3, 8, True)]),
    (78787, [(2, 1, True), (3, 3, True), (1459, 1, True)]),
    (87211, [(2, 1, True), (3, 3, True), (5, 1, False), (17, 1, False), (19, 1, True)]),
    (135433, [(2, 3, True), (3, 4, True), (11, 1, False), (19, 1, True)]),
    (139483, [(2, 1, True), (3, 5, True), (7, 1, False), (41, 1, False)]),
    (144667, [(2, 1, True), (3, 4, True), (19, 1, True), (47, 1, False)]),
    (164617, [(2, 3, True), (3, 1, True), (19, 3, True)]),
    (174763, [(2, 1, True), (3, 2, True), (7, 1, False), (19, 1, True), (73, 1, False)]),
    (196579, [(2, 1, True), (3, 2, True), (67, 1, False), (163, 1, True)]),
    (274081, [(2, 5, True), (3, 1, True), (5, 1, False), (571, 1, True)]),
    (370009, [(2, 3, True), (3, 4, True), (571, 1, True)]),
    (370387, [(2, 1, True), (3, 3, True), (19, 3, True)]),
    (478243, [(2, 1, True), (3, 2, True), (163, 2, True)]),
    (760267, [(2, 1, True), (3, 4, True), (13, 1, False), (19, 2, True)]),
    (941489, [(2, 4, True), (19, 2, True), (163, 1, True)]),
]
TABLE1_PRIMES = [p for p, _ in TABLE1]

P_INF_PREFIX = [3, 19, 163, 1459, 8803, 78787, 370387, 478243]


def _product(row):
    out = 1
    for r, e, _ in row:
        out *= r**e
    return out


@pytest.fixture(scope="module")
def sieve_1e6():
    return primes.sieve(10**6)


@pytest.fixture(scope="module")
def table1():
    return primes.table1_report()


@pytest.fixture(scope="module")
def brute_1e6():
    t0 = time.perf_counter()
    rep = numbers.enumerate_brute(10**6)
    return rep, time.perf_counter() - t0


# 1. published table of the first 24 Novák primes


@pytest.mark.criterion(1)
def test_c1_sieve_first_24_are_table_primes(sieve_1e6):
    assert sieve_1e6.values[:24] == TABLE1_PRIMES
    assert sieve_1e6.undecided == []


@pytest.mark.criterion(1)
def test_c1_prime_after_table_is_genuine(sieve_1e6):
    # the table stops at 24 entries; the one further Novák prime below 10^6
    # is checked here without the sieve's own order machinery
    assert sieve_1e6.values[24:] == [944803]
    q = 944803
    t, acc = 1, 2
    while acc != 1:
        acc = acc * 2 % q
        t += 1
    assert t == q - 1 == 2 * 3**2 * 52489
    cert = sieve_1e6.primes[24]
    w = cert.witness
    assert w % q == 0 and pow(2, w, w) == w - 1


@pytest.mark.criterion(1)
def test_c1_table_arithmetic_guard():
    bad = [p for p, row in TABLE1 if _product(row) != p - 1]
    # 2 * 3^7 = 4374, while 1459 - 1 = 1458 = 2 * 3^6
    assert bad == [1459]


@pytest.mark.criterion(1)
def test_c1_table1_factorizations(table1):
    assert [r.p for r in table1] == TABLE1_PRIMES
    for row, (p, golden) in zip(table1, TABLE1):
        got = [(r, e) for r, e in row.p_minus_1]
        want = [(r, e) for r, e, _ in golden]
        if _product(golden) == p - 1:
            assert got == want, p
        else:
            # a printed row that cannot multiply to p - 1: same primes, and
            # the computed exponents multiply back exactly
            assert [r for r, _ in got] == [r for r, _ in want], p
            assert math.prod(r**e for r, e in got) == p - 1
            assert got == [(2, 1), (3, 6)]


@pytest.mark.criterion(1)
def test_c1_table1_bold_flags(table1):
    for row, (p, golden) in zip(table1, TABLE1):
        assert [f != "neither" for f in row.flags] == [b for _, _, b in golden], p


# 2. seventh element


@pytest.mark.criterion(2)
def test_c2_seventh_novak_prime():
    assert primes.seventh_check() is True


# 3. P_inf prefix


@pytest.mark.criterion(3)
def test_c3_p_infinity_prefix():
    rep = carmichael.p_infinity(10**6)
    assert rep.primes[: len(P_INF_PREFIX)] == P_INF_PREFIX
    assert rep.undecided == []


# 4. oracle equivalence


@pytest.mark.criterion(4)
def test_c4_closure_equals_brute(brute_1e6):
    brute, elapsed = brute_1e6
    closure = numbers.enumerate_closure(10**6)
    assert closure.exhaustive
    assert closure.elements == brute.elements
    assert elapsed < 60


@pytest.mark.criterion(4)
def test_c4_brute_matches_literal_definition():
    literal = [n for n in range(1, 20001) if (2**n + 1) % n == 0]
    assert numbers.enumerate_brute(20000, full_scan=True).elements == literal
    assert numbers.enumerate_brute(20000).elements == literal


@pytest.mark.criterion(4)
def test_c4_self_divisors_of_two_pow_plus_one():
    spec = divseq.power_family(2, 1, sign=+1)
    assert divseq.self_divisors(spec, 10**5).elements == numbers.enumerate_brute(10**5).elements


# 5. closure properties


@pytest.mark.criterion(5)
def test_c5_gcd_lcm_product_closed():
    elems = numbers.enumerate_brute(10**5).elements
    for i, m in enumerate(elems):
        for n in elems[i:]:
            c = numbers.combine(m, n)
            assert (c.gcd.n, c.lcm.n, c.product.n) == (math.gcd(m, n), math.lcm(m, n), m * n)
            for v in (c.gcd.n, c.lcm.n, c.product.n):
                assert (pow(2, v, v) + 1) % v == 0


@pytest.mark.criterion(5)
def test_c5_successor_up_to_100():
    for n in numbers.enumerate_brute(100).elements:
        m = numbers.successor(n).n
        assert m == 2**n + 1
        assert pow(2, m, m) == m - 1


@pytest.mark.criterion(5)
def test_c5_extension_accepts_exactly_divisors():
    from novak.sieve import primes_up_to

    small = primes_up_to(10**4)
    for n in numbers.enumerate_brute(600).elements:
        fac = arith.factor_two_power_plus_one(n)
        candidates = sorted(set(small) | set(fac.primes))
        for p in candidates:
            divides = (2**n + 1) % p == 0
            try:
                ext = numbers.extend(n, [(p, 1)])
            except PreconditionViolation:
                assert not divides, (n, p)
            else:
                assert divides, (n, p)
                v = ext.n
                assert v == n * p and pow(2, v, v) == v - 1


# 6. LTE and primitive prime divisors


@pytest.mark.criterion(6)
def test_c6_lte_random_tuples():
    from novak.sieve import primes_up_to

    rng = random.Random(20260101)
    odd_primes = [p for p in primes_up_to(100) if p > 2]
    done = 0
    while done < 10**4:
        p = rng.choice(odd_primes)
        b = rng.randrange(1, 10**3)
        if b % p == 0:
            continue
        a = b + p * rng.randrange(1, 50)
        k = rng.randrange(1, 501)
        formula, direct = arith.lte_check(a, b, k, p)
        assert formula == direct, (a, b, k, p)
        done += 1


@pytest.mark.criterion(6)
def test_c6_primitive_prime_grid():
    exceptional = []
    for a in range(2, 11):
        for b in range(1, a):
            if math.gcd(a, b) != 1:
                continue
            for n in range(2, 31):
                res = zsigmondy.primitive_prime(a, b, n)
                if res.exceptional:
                    exceptional.append((a, b, n))
                    continue
                p = res.prime
                assert (a**n + b**n) % p == 0
                assert all((a**k + b**k) % p for k in range(1, n))
    assert exceptional == [(2, 1, 3)]


# 7. omega(2^(3^n) + 1) >= n


@pytest.mark.criterion(7)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_c7_omega_three_powers(n):
    N = 3**n
    res = zsigmondy.omega_lower_via_tau(N)
    assert res.bound >= n
    assert len(set(res.primes)) == len(res.primes) == res.bound
    value = 2**N + 1
    for d, p in res.by_divisor.items():
        assert arith.is_prime(p) and value % p == 0
        if d > 1:
            assert zsigmondy.is_primitive(p, 2, 1, d)


# 8. counting bound from a single witness


@pytest.mark.criterion(8)
def test_c8_lemma6_bound(brute_1e6):
    count = brute_1e6[0].count
    checked = 0
    for n in numbers.enumerate_brute(100).elements:
        if n == 1:
            continue
        fac = arith.factor_two_power_plus_one(n)
        if not fac.complete:
            continue
        bound = numbers.lemma6_bound(10**6, n, fac.omega)
        assert numbers.lemma6_holds(count, bound), (n, bound, count)
        checked += 1
    assert checked == 4


# 9. Novák-Carmichael criterion


@pytest.mark.criterion(9)
def test_c9_korselt_matches_definition():
    for n in range(1, 1001):
        assert carmichael.is_novak_carmichael(n) == carmichael.is_novak_carmichael_direct(n), n
    assert carmichael.is_novak_carmichael(220)
    assert carmichael.is_novak_carmichael_direct(220)


# 10. saturation round trip


@pytest.mark.criterion(10)
def test_c10_saturation_from_p_infinity():
    members = carmichael.p_infinity(10**4).primes
    assert members
    for p in members:
        tr = carmichael.saturate(p)
        assert tr.A == 2 * tr.N and tr.N % 2 == 1
        assert pow(2, tr.N, tr.N) == tr.N - 1
        assert tr.N % p == 0


@pytest.mark.criterion(10)
def test_c10_novak_carmichael_doubles_use_p_infinity(brute_1e6):
    p_inf = set(carmichael.p_infinity(10**6).primes)
    hits = 0
    for N in brute_1e6[0].elements:
        if N == 1 or not carmichael.is_novak_carmichael(2 * N):
            continue
        hits += 1
        assert set(arith.factorize(N).primes) <= p_inf, N
    assert hits > 0


# 11. reported diagnostics are stable


def _run_cli(argv):
    out = io.StringIO()
    code = cli_main(argv, stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


@pytest.mark.criterion(11)
def test_c11_order_statistic_snapshot():
    st = primes.order_statistic(10**5, 10)
    assert (st.count, st.pi_x, st.fraction) == (1000, 9592, 1000 / 9592)
    assert st.reference == 0.1
    assert st.warning is not None
    st1 = primes.order_statistic(10**4, 1)
    assert (st1.count, st1.pi_x, st1.warning) == (1228, 1229, None)


@pytest.mark.criterion(11)
def test_c11_density_ratio_snapshot(sieve_1e6):
    assert sieve_1e6.pi_N == 25
    assert sieve_1e6.ratio == pytest.approx(0.0018172454081848961, rel=1e-12)


@pytest.mark.criterion(11)
def test_c11_diagnostics_emitted_and_byte_stable():
    for argv in (["--json", "orderstat", "--max", "100000", "--L", "3"], ["--json", "primes", "--max", "100000"]):
        code1, first = _run_cli(argv)
        code2, second = _run_cli(argv)
        assert code1 == code2 == 0
        assert first == second
        obj = json.loads(first)
        assert ("fraction" in obj and "reference" in obj) or "ratio" in obj


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
