"""Novák primes: primes dividing at least one Novák number.

Membership is decided by a recursion on the order of 2.  For an odd
prime q with ord_q(2) = t:

    q is a Novák prime  <=>  t = 2m with m odd and every prime of m is a
                             Novák prime.

(=>) If q | N with N Novák then q | 2^N + 1, so t | 2N and t does not
divide N; N is odd, hence t = 2m with m odd, m | N, and the primes of m
divide N.

(<=) Each prime r^e || m divides some Novák number W(r), hence divides
2^W(r) + 1, so W(r) * r^e is Novák by extension. The lcm N' of these is
Novák and m | N'. As t = 2m, 2^m = -1 mod q and N'/m is odd, so
q | 2^N' + 1 and N' * q is Novák.

The second direction builds the witness recorded in a certificate. Since
witnesses grow multiplicatively they are kept as exponent vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .arith import DEFAULT_BUDGET, FactorBudget, OrderRecord, factorize, is_prime, multiplicative_order
from .errors import BudgetExceeded, InvalidArgument
from .sieve import order_table, primes_up_to

# sieve() reads orders off a precomputed table up to this bound
TABLE_LIMIT = 2 * 10**7


@dataclass(frozen=True)
class ChainLink:
    prime: int
    order: int
    odd_part_factors: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class NovakPrimeCertificate:
    q: int
    order: OrderRecord
    odd_part_factors: tuple[tuple[int, int], ...]
    chain: tuple[ChainLink, ...]
    witness_exponents: tuple[tuple[int, int], ...]

    @property
    def witness(self) -> int:
        w = 1
        for p, e in self.witness_exponents:
            w *= p**e
        return w

    def to_json(self) -> dict:
        return {
            "q": str(self.q),
            "order": str(self.order.order),
            "odd_part_factors": [[str(p), e] for p, e in self.odd_part_factors],
            "chain": [
                {"prime": str(c.prime), "order": str(c.order), "odd_part_factors": [[str(p), e] for p, e in c.odd_part_factors]}
                for c in self.chain
            ],
            "witness_exponents": [[str(p), e] for p, e in self.witness_exponents],
        }


def _certificate(q: int, rec: OrderRecord, odd_fac: list[tuple[int, int]], known: Mapping[int, NovakPrimeCertificate]):
    if rec.two_adic != 1:
        return None
    if any(r not in known for r, _ in odd_fac):
        return None
    wit: dict[int, int] = {}
    links: dict[int, ChainLink] = {}
    for r, e in odd_fac:
        sub = known[r]
        sub_w = dict(sub.witness_exponents)
        sub_w[r] = max(sub_w.get(r, 0), e)
        for p, a in sub_w.items():
            wit[p] = max(wit.get(p, 0), a)
        for link in sub.chain:
            links[link.prime] = link
    wit[q] = wit.get(q, 0) + 1
    links[q] = ChainLink(q, rec.order, tuple(odd_fac))
    chain = tuple(links[p] for p in sorted(links))
    return NovakPrimeCertificate(q, rec, tuple(odd_fac), chain, tuple(sorted(wit.items())))


def is_novak_prime(
    q: int,
    known: Mapping[int, NovakPrimeCertificate],
    budget: FactorBudget | None = None,
) -> NovakPrimeCertificate | None:
    """Certificate for q if it is a Novák prime, else None.

    ``known`` must map every Novák prime below q to its certificate.
    Raises BudgetExceeded if q - 1 cannot be factored.
    """
    if q < 3 or not is_prime(q):
        raise InvalidArgument(f"{q} is not an odd prime")
    rec = multiplicative_order(q, 2, 1, budget)
    fac = factorize(rec.odd_part, budget)
    return _certificate(q, rec, list(fac.factors), known)


def _order_divisors_ok(p: int, order: int, odd_factors) -> bool:
    if pow(2, order, p) != 1 or (p - 1) % order:
        return False
    primes = [r for r, _ in odd_factors]
    if order % 2 == 0:
        primes.append(2)
    return all(pow(2, order // r, p) != 1 for r in primes)


def verify_certificate(cert: NovakPrimeCertificate) -> bool:
    """Check a certificate using nothing outside it."""
    seen: set[int] = set()
    for link in cert.chain:
        p = link.prime
        if not is_prime(p) or p in seen:
            return False
        odd = 1
        for r, e in link.odd_part_factors:
            if r not in seen or r >= p:
                return False
            odd *= r**e
        if link.order != 2 * odd or not _order_divisors_ok(p, link.order, link.odd_part_factors):
            return False
        seen.add(p)
    if not cert.chain or cert.chain[-1].prime != cert.q:
        return False
    wexp = dict(cert.witness_exponents)
    if wexp.get(cert.q, 0) < 1 or not set(wexp) <= seen:
        return False
    w = cert.witness
    # w | 2^w + 1, checked one prime power at a time
    for p, e in wexp.items():
        pe = p**e
        if pow(2, w, pe) != pe - 1:
            return False
    return True


@dataclass
class SieveReport:
    x: int
    primes: list[NovakPrimeCertificate]
    pi_N: int
    ratio: float | None
    undecided: list[int] = field(default_factory=list)

    @property
    def values(self) -> list[int]:
        return [c.q for c in self.primes]


def density_ratio(count: int, x: float) -> float | None:
    """count * ln^2 x / (x lnln x); None where lnln x <= 0."""
    if x <= math.e:
        return None
    lx = math.log(x)
    return count * lx * lx / (x * math.log(lx))


def sieve(x: int, budget: FactorBudget | None = None) -> SieveReport:
    """Ascending certification pass over the odd primes up to x.

    A prime whose order cannot be computed, or whose odd order part
    involves an undecided prime, is listed under ``undecided``.
    """
    if x < 1:
        raise InvalidArgument("x must be positive")
    budget = budget or DEFAULT_BUDGET
    known: dict[int, NovakPrimeCertificate] = {}
    undecided: list[int] = []
    if x <= TABLE_LIMIT:
        table = order_table(max(int(x), 3))
        for q in table.primes:
            if q > x:
                break
            order = table.orders[q]
            if order % 4 != 2:
                continue
            # p - 1 factorization gives the odd half's factorization for free
            half = order // 2
            odd_fac = []
            for r, _ in table.p_minus_1[q]:
                e = 0
                while half % r == 0:
                    half //= r
                    e += 1
                if e:
                    odd_fac.append((r, e))
            rec = OrderRecord(q, 2, 1, order, 1, order // 2)
            cert = _certificate(q, rec, odd_fac, known)
            if cert is not None:
                known[q] = cert
    else:
        undecided_set: set[int] = set()
        for q in primes_up_to(x):
            if q == 2:
                continue
            try:
                rec = multiplicative_order(q, 2, 1, budget)
            except BudgetExceeded:
                undecided.append(q)
                undecided_set.add(q)
                continue
            if rec.two_adic != 1:
                continue
            fac = factorize(rec.odd_part, budget)
            if any(r in undecided_set for r in fac.primes):
                undecided.append(q)
                undecided_set.add(q)
                continue
            cert = _certificate(q, rec, list(fac.factors), known)
            if cert is not None:
                known[q] = cert
    certs = [known[q] for q in sorted(known)]
    return SieveReport(x, certs, len(certs), density_ratio(len(certs), x), undecided)


def seventh_check() -> bool:
    """The seventh Novák prime is 9137 and there are exactly seven up to 10^4."""
    vals = sieve(10**4).values
    return len(vals) == 7 and vals[6] == 9137


@dataclass(frozen=True)
class Table1Row:
    p: int
    p_minus_1: tuple[tuple[int, int], ...]
    flags: tuple[str, ...]  # 'two', 'novak' or 'neither', aligned with p_minus_1

    @property
    def bold(self) -> tuple[int, ...]:
        return tuple(r for (r, _), f in zip(self.p_minus_1, self.flags) if f != "neither")

    def render(self) -> str:
        parts = []
        for (r, e), f in zip(self.p_minus_1, self.flags):
            tok = f"{r}^{e}" if e > 1 else str(r)
            parts.append(f"*{tok}*" if f != "neither" else tok)
        return " · ".join(parts)


def table1_report(budget: FactorBudget | None = None, x: int = 10**6, rows: int = 24) -> list[Table1Row]:
    """Factorization of p - 1 for the first ``rows`` Novák primes, flagging
    which prime factors are 2 or themselves Novák primes."""
    rep = sieve(x, budget)
    novak = set(rep.values)
    out = []
    for q in rep.values[:rows]:
        fac = factorize(q - 1, budget)
        flags = tuple("two" if r == 2 else ("novak" if r in novak else "neither") for r in fac.primes)
        out.append(Table1Row(q, fac.factors, flags))
    return out


@dataclass(frozen=True)
class OrderStatistic:
    x: int
    L: float
    count: int
    fraction: float
    pi_x: int
    warning: str | None = None

    @property
    def reference(self) -> float:
        return 1.0 / self.L


def order_statistic(x: int, L: float) -> OrderStatistic:
    """Count odd primes p <= x with ord_p(2) <= (p - 1)/L.

    Reported as a diagnostic alongside 1/L; the expected range of L is
    1 <= L <= ln x / lnln x and values outside it are flagged, not refused.
    """
    if x < 3:
        raise InvalidArgument("x must be >= 3")
    if L <= 0:
        raise InvalidArgument("L must be positive")
    warning = None
    upper = math.log(x) / math.log(math.log(x)) if x > math.e else 0.0
    if not (1 <= L <= upper):
        warning = f"L = {L} outside [1, ln x / lnln x = {upper:.4f}]"
    table = order_table(int(x))
    # ord <= (p - 1)/L  <=>  ord * L <= p - 1, compared exactly for integral L
    if float(L).is_integer():
        Li = int(L)
        count = sum(1 for p in table.primes if table.orders[p] * Li <= p - 1)
    else:
        count = sum(1 for p in table.primes if table.orders[p] <= (p - 1) / L)
    pi_x = len(table.primes) + 1
    return OrderStatistic(int(x), L, count, count / pi_x, pi_x, warning)
