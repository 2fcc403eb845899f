"""Novák-Carmichael numbers (n | a^n - 1 for every a coprime to n) and the
prime sets P_n, P_inf describing the Novák numbers N with 2N Novák-Carmichael.

P_0 is the primes = 3 mod 8; P_n keeps p in P_{n-1} when every prime of
(p - 1)/2 lies in P_{n-1}. The prime factors of (p - 1)/2 are all smaller
than p, so P_inf is also computable bottom-up:

    p in P_inf  <=>  p = 3 mod 8 and every prime of (p - 1)/2 is in P_inf.

(=>) if p is in every P_n, so are the primes of (p - 1)/2 (they are in
every P_{n-1}). (<=) by induction on p: the primes of (p - 1)/2 lie in
P_inf, hence in each P_{n-1}, so p lies in each P_n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import DEFAULT_BUDGET, FactorBudget, factorize, is_prime
from .errors import BudgetExceeded, CounterexampleError, InvalidArgument, SizeLimitExceeded
from .numbers import is_novak
from .sieve import factor_with_spf, primes_up_to, spf_table

DEFAULT_SATURATION_BITS = 1 << 20
# p_set / p_infinity factor (p - 1)/2 from a sieve table up to this bound
SPF_LIMIT = 2 * 10**7


def _korselt(n: int, primes) -> bool:
    return all(n % (p - 1) == 0 for p in primes)


def is_novak_carmichael(n: int, budget: FactorBudget | None = None) -> bool:
    """(p - 1) | n for every prime p | n. Never guesses on partial factorizations."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    fac = factorize(n, budget)
    if not fac.complete:
        raise BudgetExceeded(f"cannot factor {n} within budget")
    return _korselt(n, fac.primes)


def is_novak_carmichael_direct(n: int) -> bool:
    """The defining property, checked for every a in [1, n] coprime to n."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if n == 1:
        return True
    return all(pow(a, n, n) == 1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def enumerate_carmichael(x: int) -> list[int]:
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    spf = spf_table(max(int(x), 2))
    out = [1]
    for n in range(2, x + 1, 2):
        if _korselt(n, [p for p, _ in factor_with_spf(n, spf)]):
            out.append(n)
    return out


@dataclass(frozen=True)
class SaturationTrace:
    p: int
    steps: tuple[int, ...]
    A: int
    N: int


def saturate(p: int, budget: FactorBudget | None = None, size_ceiling_bits: int = DEFAULT_SATURATION_BITS) -> SaturationTrace:
    """Run a_0 = p, a_{k+1} = lcm(a_k, q - 1 for primes q | a_k) to its limit A.

    For p in P_inf the limit is A = 2N with N odd, 2N Novák-Carmichael and
    N Novák. Any failure of those facts raises CounterexampleError with
    the trace attached.
    """
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    budget = budget or DEFAULT_BUDGET
    a = p
    primes: dict[int, int] = {p: 1}
    steps = [a]
    while True:
        nxt = dict(primes)
        for q in list(primes):
            fac = factorize(q - 1, budget)
            if not fac.complete:
                raise BudgetExceeded(f"cannot factor {q} - 1")
            for r, e in fac.factors:
                nxt[r] = max(nxt.get(r, 0), e)
        a_next = 1
        for r, e in nxt.items():
            a_next *= r**e
        if a_next.bit_length() > size_ceiling_bits:
            raise SizeLimitExceeded(f"saturation of {p} exceeds {size_ceiling_bits} bits")
        steps.append(a_next)
        if a_next == a:
            break
        a, primes = a_next, nxt
    A = a
    trace = SaturationTrace(p, tuple(steps), A, A // 2)
    if primes.get(2, 0) != 1:
        raise CounterexampleError(f"2-adic valuation of A for p = {p} is not 1", trace)
    if not _korselt(A, primes):
        raise CounterexampleError(f"A for p = {p} is not Novák-Carmichael", trace)
    N = A // 2
    # N | 2^N + 1, checked one prime power at a time
    for r, e in primes.items():
        if r != 2 and pow(2, N, r**e) != r**e - 1:
            raise CounterexampleError(f"N for p = {p} is not a Novák number", trace)
    if N % p:
        raise CounterexampleError(f"{p} does not divide N", trace)
    return trace


@dataclass
class PSetReport:
    level: int | None  # None stands for infinity
    x: int
    primes: list[int]
    undecided: list[int] = field(default_factory=list)

    @property
    def level_name(self) -> str:
        return "inf" if self.level is None else str(self.level)


def _half_factors(x: int, budget: FactorBudget):
    """Yield (p, primes of (p-1)/2 or None) for p <= x with p = 3 mod 8."""
    cands = [p for p in primes_up_to(x) if p % 8 == 3]
    if x <= SPF_LIMIT:
        spf = spf_table(max(int(x), 2))
        for p in cands:
            yield p, [r for r, _ in factor_with_spf((p - 1) // 2, spf)]
    else:
        for p in cands:
            fac = factorize((p - 1) // 2, budget)
            yield p, fac.primes if fac.complete else None


def p_set(level: int, x: int, budget: FactorBudget | None = None) -> PSetReport:
    """P_level restricted to [1, x], by iterating the level recursion."""
    if level < 0:
        raise InvalidArgument("level must be >= 0")
    if x < 3:
        raise InvalidArgument("x must be >= 3")
    budget = budget or DEFAULT_BUDGET
    halves = dict(_half_factors(x, budget))
    undecided = {p for p, fs in halves.items() if fs is None}
    current = set(halves) - undecided
    for _ in range(level):
        nxt = set()
        for p in current:
            fs = halves[p]
            if any(r in undecided for r in fs):
                undecided.add(p)
            elif all(r in current for r in fs):
                nxt.add(p)
        if nxt == current:
            break
        current = nxt - undecided
    return PSetReport(level, x, sorted(current), sorted(undecided))


def p_infinity(x: int, budget: FactorBudget | None = None) -> PSetReport:
    """P_inf restricted to [1, x], bottom-up in increasing p."""
    if x < 3:
        raise InvalidArgument("x must be >= 3")
    budget = budget or DEFAULT_BUDGET
    members: set[int] = set()
    undecided: set[int] = set()
    for p, fs in _half_factors(x, budget):
        if fs is None or any(r in undecided for r in fs):
            undecided.add(p)
        elif all(r in members for r in fs):
            members.add(p)
    return PSetReport(None, x, sorted(members), sorted(undecided))


def stabilization_level(x: int, budget: FactorBudget | None = None, max_level: int = 64) -> int:
    """Smallest n with P_n = P_{n+1} on [1, x]."""
    prev = p_set(0, x, budget).primes
    for n in range(max_level):
        cur = p_set(n + 1, x, budget).primes
        if cur == prev:
            return n
        prev = cur
    raise BudgetExceeded("P_n did not stabilize within max_level")


@dataclass(frozen=True)
class ConjectureRow:
    x: int
    p_inf: int
    p_levels: tuple[int, ...]


def conjecture_counts(x_grid, n_max: int = 4, budget: FactorBudget | None = None) -> list[ConjectureRow]:
    """|P_inf & [1,x]| and |P_n & [1,x]| for n = 0..n_max, per grid point."""
    rows = []
    for x in x_grid:
        levels = tuple(len(p_set(n, x, budget).primes) for n in range(n_max + 1))
        rows.append(ConjectureRow(int(x), len(p_infinity(x, budget).primes), levels))
    return rows
