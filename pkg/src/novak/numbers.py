"""Novák numbers: integers N with N | 2^N + 1.

Besides the predicate this module holds the constructions that produce new
Novák numbers from old ones (successor 2^N + 1, gcd/lcm/product closure,
extension by prime factors of 2^N + 1), two enumerators that must agree,
and the witness families behind the lower bounds for their count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arith import (
    DEFAULT_BUDGET,
    FactorBudget,
    factor_two_power_plus_one,
    factorize,
    gcd_lcm,
    is_prime,
    two_power_plus_one_divisors,
)
from .errors import BudgetExceeded, InvalidArgument, PreconditionViolation, SizeLimitExceeded
from .parallel import map_chunks
from .zsigmondy import omega_lower_via_tau

DEFAULT_SIZE_CEILING_BITS = 1 << 24
# Above this bit length Novák-ness is established by the construction's
# proof instead of a direct modular power.
DIRECT_VERIFY_BITS = 1 << 13


def is_novak(n: int) -> bool:
    if n < 1:
        raise InvalidArgument("is_novak needs n >= 1")
    return pow(2, n, n) == (n - 1) % n if n > 1 else True


@dataclass(frozen=True)
class NovakNumber:
    """A natural number n known to divide 2^n + 1.

    ``proof`` records how that was established: 'direct' (modular power),
    'successor' or 'extension' (the construction's argument, used when n is
    too large to check directly).
    """

    n: int
    verified: bool = True
    proof: str = "direct"

    @classmethod
    def of(cls, n: int) -> "NovakNumber":
        if isinstance(n, NovakNumber):
            return n
        if n.bit_length() > DIRECT_VERIFY_BITS:
            raise SizeLimitExceeded(f"{n.bit_length()}-bit number too large to verify directly")
        if not is_novak(n):
            raise InvalidArgument(f"{n} is not a Novák number")
        return cls(n)

    def __int__(self) -> int:
        return self.n

    def __index__(self) -> int:
        return self.n


def _as_novak(n) -> NovakNumber:
    return n if isinstance(n, NovakNumber) else NovakNumber.of(n)


def _checked(n: int, proof: str) -> NovakNumber:
    if n.bit_length() <= DIRECT_VERIFY_BITS:
        if not is_novak(n):
            raise AssertionError(f"construction produced non-Novák {n}")
        return NovakNumber(n, True, "direct")
    return NovakNumber(n, True, proof)


def successor(n, size_ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS) -> NovakNumber:
    """M = 2^n + 1, again a Novák number.

    n | M and M/n is odd, so 2^n + 1 divides 2^M + 1 = (2^n)^(M/n) + 1.
    """
    nv = _as_novak(n)
    if nv.n + 1 > size_ceiling_bits:
        raise SizeLimitExceeded(f"2^{nv.n}+1 exceeds {size_ceiling_bits} bits")
    m = (1 << nv.n) + 1
    if m % nv.n or (m // nv.n) % 2 == 0:
        raise AssertionError("successor argument failed")
    return _checked(m, "successor")


def extend(n, exponents: Iterable[tuple[int, int]], size_ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS) -> NovakNumber:
    """n * prod(p^alpha) for primes p dividing 2^n + 1."""
    nv = _as_novak(n)
    out = nv.n
    for p, alpha in exponents:
        if alpha < 0:
            raise InvalidArgument("exponents must be non-negative")
        if not is_prime(p):
            raise InvalidArgument(f"{p} is not prime")
        if pow(2, nv.n, p) != p - 1:
            raise PreconditionViolation(f"{p} does not divide 2^{nv.n}+1")
        out *= p**alpha
        if out.bit_length() > size_ceiling_bits:
            raise SizeLimitExceeded(f"extension exceeds {size_ceiling_bits} bits")
    return _checked(out, "extension")


@dataclass(frozen=True)
class Combination:
    gcd: NovakNumber
    lcm: NovakNumber
    product: NovakNumber


def combine(m, n) -> Combination:
    """gcd, lcm and product of two Novák numbers, all Novák.

    The product is built as lcm * gcd: primes of the gcd divide the lcm,
    hence 2^lcm + 1, so it is an extension of the lcm.
    """
    mv, nv = _as_novak(m), _as_novak(n)
    g, l = gcd_lcm(mv.n, nv.n)
    gv, lv = _checked(g, "closure"), _checked(l, "closure")
    gfac = factorize(g)
    if not gfac.complete:
        raise BudgetExceeded(f"cannot factor gcd {g}")
    return Combination(gv, lv, extend(lv, gfac.factors))


@dataclass
class CountingReport:
    """Novák numbers up to x. ``unreached`` lists oracle elements a generator missed."""

    x: int
    count: int
    elements: list[int] | None = None
    include_one: bool = True
    exhaustive: bool = True
    unreached: list[int] = field(default_factory=list)


def _scan(lo: int, hi: int, step3: bool) -> list[int]:
    out = []
    if step3:
        # odd multiples of 3 in [lo, hi)
        start = lo + (-lo) % 3
        if start % 2 == 0:
            start += 3
        for k in range(start, hi, 6):
            if pow(2, k, k) == k - 1:
                out.append(k)
    else:
        for k in range(max(lo, 2), hi):
            if pow(2, k, k) == k - 1:
                out.append(k)
    return out


def enumerate_brute(x: int, include_one: bool = True, full_scan: bool = False, workers: int = 1) -> CountingReport:
    """Exhaustive scan of 1 and the odd multiples of 3 up to x.

    Every Novák number above 1 is odd and divisible by 3: its least prime p
    has ord_p(2) | gcd(2N, p - 1) = 2, forcing p = 3. ``full_scan`` checks
    every integer instead, for auditing that fact.
    """
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    found = map_chunks(_scan, 2, x + 1, workers, not full_scan)
    elems = ([1] if include_one else []) + found
    return CountingReport(x, len(elems), elems, include_one)


def _harvest_primes(k: int, limit: int, budget: FactorBudget, cache) -> tuple[list[int], bool]:
    """Primes q <= limit dividing 2^k + 1; the flag says whether the list is complete."""
    if k < limit.bit_length():
        limit = min(limit, (1 << k) + 1)
    capped = min(limit, budget.trial_bound - 1)
    qs = set(two_power_plus_one_divisors(k, capped))
    complete = capped >= limit
    if cache is not None:
        rec = cache.get(k)
        if rec is not None:
            qs.update(p for p in rec.primes if p <= limit)
            complete |= rec.complete
    if not complete and k <= FULL_FACTOR_MAX_N:
        fac = factor_two_power_plus_one(k, budget, cache)
        qs.update(p for p in fac.primes if p <= limit)
        complete = fac.complete
    return sorted(qs), complete


def enumerate_closure(x: int, budget: FactorBudget | None = None, cache=None, include_one: bool = True) -> CountingReport:
    """Generate Novák numbers up to x from {1, 3} by the closure constructions.

    The seed set is saturated under the successor map, gcd/lcm/product of
    pairs and extension by primes of 2^K + 1, dropping anything above x.
    Extension alone already reaches every Novák number: if q is the largest
    prime of N and q^e || N, then N / q^e is Novák and q divides 2 to that
    power plus one. ``exhaustive`` is False when the trial bound was too
    small to harvest every needed prime.
    """
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    budget = budget or DEFAULT_BUDGET
    found = {1} | ({3} if x >= 3 else set())
    frontier = sorted(found)
    exhaustive = True
    while frontier:
        new: set[int] = set()
        for k in frontier:
            if k.bit_length() <= x.bit_length():
                m = (1 << k) + 1
                if m <= x:
                    new.add(m)
            if 3 * k <= x:
                qs, ok = _harvest_primes(k, x // k, budget, cache)
                exhaustive &= ok
                for q in qs:
                    v = k * q
                    while v <= x:
                        new.add(v)
                        v *= q
        pool = sorted(found | new)
        for a in sorted(new | set(frontier)):
            for b in pool:
                g, l = gcd_lcm(a, b)
                new.add(g)
                if l <= x:
                    new.add(l)
                    if l * g <= x:
                        new.add(l * g)
        new -= found
        for v in new:
            if not is_novak(v):
                raise AssertionError(f"closure produced non-Novák {v}")
        found |= new
        frontier = sorted(new)
    elems = sorted(found if include_one else found - {1})
    return CountingReport(x, len(elems), elems, include_one, exhaustive)


def lemma6_bound(x: float, n, k: int) -> float:
    """(ln(x/n)/n)^k, a lower bound for the count of Novák numbers <= x
    when 1 < n <= x is Novák and 2^n + 1 has k distinct primes."""
    n = int(n)
    if n <= 1 or n > x:
        raise InvalidArgument("need 1 < n <= x")
    if k < 1:
        raise InvalidArgument("k must be positive")
    return (math.log(x / n) / n) ** k


def lemma6_holds(count: int, bound: float, rel_tol: float = 1e-9) -> bool:
    """Integer count >= ceil(bound), with the bound rounded down by rel_tol first."""
    return count >= math.ceil(bound * (1 - rel_tol) - rel_tol)


def witness_parameters(x: float) -> tuple[int, int]:
    """(n, k) = ([lnlnln x / (2 ln 3)], [sqrt(lnln x) / 2]), for display only."""
    if x <= math.e**math.e:
        raise InvalidArgument("x must exceed e^e")
    lnln = math.log(math.log(x))
    return int(math.log(lnln) / (2 * math.log(3))), int(math.sqrt(lnln) / 2)


@dataclass(frozen=True)
class WitnessFamily:
    N: NovakNumber
    omega_lower: int
    n: int
    k: int


def witness_family(n: int, k: int, size_ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS) -> WitnessFamily:
    """N = (2^(3^n) + 1)^k with omega(2^N + 1) >= (k + 1)^n - 1."""
    if n < 1 or k < 1:
        raise InvalidArgument("n and k must be positive")
    if 3**n + 1 > size_ceiling_bits or (3**n + 1) * k > size_ceiling_bits:
        raise SizeLimitExceeded("witness exceeds size ceiling")
    base = successor(3**n, size_ceiling_bits)
    N = base.n**k
    # base^k extends base by base's own primes, all of which divide 2^base + 1
    nv = _checked(N, "extension")
    return WitnessFamily(nv, (k + 1) ** n - 1, n, k)


@dataclass(frozen=True)
class DLowerResult:
    value: int
    witness: int
    exact: bool
    primes: tuple[int, ...] = ()


# 2^N + 1 is factored outright when N is at most this
FULL_FACTOR_MAX_N = 300


def omega_certified(N: int, budget: FactorBudget | None = None, cache=None) -> tuple[set[int], bool]:
    """Distinct primes verified to divide 2^N + 1, and whether that list is complete."""
    budget = budget or DEFAULT_BUDGET
    if N <= FULL_FACTOR_MAX_N:
        fac = factor_two_power_plus_one(N, budget, cache)
        if fac.complete:
            return set(fac.primes), True
        primes = set(fac.primes)
    else:
        primes = set(two_power_plus_one_divisors(N, budget.trial_bound - 1))
        if cache is not None and cache.get(N) is not None:
            primes.update(cache.get(N).primes)
    if N % 2:
        primes.update(omega_lower_via_tau(N, budget).primes)
    return primes, False


def d_lower(x: int, budget: FactorBudget | None = None, cache=None, candidates: Sequence[int] | None = None) -> DLowerResult:
    """Best certified lower bound for max omega(2^N + 1) over Novák N <= x.

    The witness is the smallest N > 1 attaining the bound.
    """
    if x < 3:
        raise InvalidArgument("x must be >= 3")
    budget = budget or DEFAULT_BUDGET
    if candidates is None:
        candidates = [n for n in enumerate_brute(x).elements if n > 1]
    best = None
    exact = True
    for N in candidates:
        primes, complete = omega_certified(N, budget, cache)
        exact &= complete
        if best is None or len(primes) > len(best[1]):
            best = (N, primes)
    N, primes = best
    return DLowerResult(len(primes), N, exact, tuple(sorted(primes)))
