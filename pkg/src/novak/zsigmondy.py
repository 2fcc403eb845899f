"""Primitive prime divisors of a^n + b^n and divisor-harvesting lower bounds
for the number of distinct primes of 2^N + 1.

A prime p is primitive for a^n + b^n when it divides a^n + b^n and none of
a^k + b^k with k < n. For p not dividing ab this happens exactly when the
order of a/b modulo p equals 2n, so every primitive prime is 1 mod 2n. That
fixes the trial-division progression used below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .arith import DEFAULT_BUDGET, FactorBudget, _split_composites, factorize, is_prime
from .errors import BudgetExceeded, CounterexampleError, InvalidArgument

# Above this n the value a^n + b^n is not built; the search runs on residues.
MATERIALIZE_MAX_N = 4000
# Literal check over every k < n is used up to this n, the order check above.
LITERAL_CHECK_MAX_N = 20000


@dataclass(frozen=True)
class PrimitiveDivisorResult:
    a: int
    b: int
    n: int
    prime: int | None
    exceptional: bool


def _is_exception(a: int, b: int, n: int) -> bool:
    return n == 3 and {a, b} == {1, 2}


def is_primitive(p: int, a: int, b: int, n: int) -> bool:
    """p | a^n + b^n and p does not divide a^k + b^k for any 1 <= k < n."""
    if (a * b) % p == 0 or (pow(a, n, p) + pow(b, n, p)) % p:
        return False
    if n <= LITERAL_CHECK_MAX_N:
        ak, bk = 1, 1
        for _ in range(1, n):
            ak = ak * a % p
            bk = bk * b % p
            if (ak + bk) % p == 0:
                return False
        return True
    return _order_is_2n(p, a, b, n)


def _odd_prime_divisors(n: int) -> list[int]:
    fac = factorize(n)
    if not fac.complete:
        raise BudgetExceeded(f"cannot factor {n}")
    return [r for r in fac.primes if r != 2]


def _order_is_2n(q: int, a: int, b: int, n: int, odd_primes: list[int] | None = None) -> bool:
    # given (a/b)^n = -1 mod q, the order is 2m with m | n and n/m odd;
    # m = n iff (a/b)^(n/r) != -1 for every odd prime r | n
    g = a * pow(b, -1, q) % q
    if pow(g, n, q) != q - 1:
        return False
    for r in odd_primes if odd_primes is not None else _odd_prime_divisors(n):
        if pow(g, n // r, q) == q - 1:
            return False
    return True


def _progression_search(a: int, b: int, n: int, limit: int) -> int | None:
    odd = _odd_prime_divisors(n)
    step = 2 * n
    q = step + 1
    while q < limit:
        if (a * b) % q and is_prime(q) and _order_is_2n(q, a, b, n, odd):
            return q
        q += step
    return None


def primitive_part(a: int, b: int, n: int) -> int:
    """a^n + b^n with every prime shared with some a^k + b^k (k < n) divided out."""
    r = a**n + b**n
    for k in range(1, n):
        s = a**k + b**k
        g = math.gcd(r, s)
        while g > 1:
            r //= g
            g = math.gcd(r, g)
    return r


def _smallest_factor_of_primitive_part(r: int, n: int, budget: FactorBudget) -> int | None:
    step = 2 * n
    q = step + 1
    while q < budget.trial_bound and q * q <= r:
        if r % q == 0:
            # all primes of r are 1 mod 2n, so the first hit is the least prime
            return q
        q += step
    if is_prime(r):
        return r
    found: dict[int, int] = {}
    _split_composites([r], budget, found)
    return min(found) if found else None


def primitive_prime(a: int, b: int, n: int, budget: FactorBudget | None = None) -> PrimitiveDivisorResult:
    """Find a primitive prime divisor of a^n + b^n.

    Returns an exceptional result (no prime) for (2, 1, 3), where 2^3 + 1 = 9
    and 3 already divides 2 + 1. Raises BudgetExceeded if no primitive
    prime could be certified within the budget.
    """
    budget = budget or DEFAULT_BUDGET
    if a < 1 or b < 1 or a == b or math.gcd(a, b) != 1:
        raise InvalidArgument("need distinct coprime natural numbers a, b")
    if n < 2:
        raise InvalidArgument("need n > 1")
    if _is_exception(a, b, n):
        return PrimitiveDivisorResult(a, b, n, None, True)
    if n <= MATERIALIZE_MAX_N:
        r = primitive_part(a, b, n)
        if r == 1:
            raise CounterexampleError(f"no primitive prime for {a}^{n}+{b}^{n}", (a, b, n))
        p = _smallest_factor_of_primitive_part(r, n, budget)
    else:
        p = _progression_search(a, b, n, budget.trial_bound)
    if p is None:
        raise BudgetExceeded(f"no primitive prime of {a}^{n}+{b}^{n} certified within budget")
    if not (is_prime(p) and is_primitive(p, a, b, n)):
        raise CounterexampleError(f"{p} failed primitive-prime verification", (a, b, n, p))
    return PrimitiveDivisorResult(a, b, n, p, False)


@dataclass(frozen=True)
class OmegaLowerBound:
    N: int
    bound: int
    primes: tuple[int, ...]
    by_divisor: dict[int, int] = field(default_factory=dict, compare=False)
    missing: tuple[int, ...] = ()


def omega_lower_via_tau(N: int, budget: FactorBudget | None = None) -> OmegaLowerBound:
    """Certify distinct primes of 2^N + 1, one primitive prime per divisor d != 3 of N.

    Each harvested prime is checked to divide 2^N + 1. When every harvest
    succeeds the bound is at least tau(N) - 1; divisors whose search ran out
    of budget are listed in ``missing``.
    """
    if N < 1 or N % 2 == 0:
        raise InvalidArgument("N must be an odd positive integer")
    budget = budget or DEFAULT_BUDGET
    fac = factorize(N, budget)
    if not fac.complete:
        raise BudgetExceeded(f"cannot factor {N} within budget")
    by_div: dict[int, int] = {}
    missing = []
    for d in fac.divisors():
        if d == 3:
            continue
        if d == 1:
            by_div[1] = 3
            continue
        try:
            res = primitive_prime(2, 1, d, budget)
        except BudgetExceeded:
            missing.append(d)
            continue
        by_div[d] = res.prime
    primes = list(by_div.values())
    if len(set(primes)) != len(primes):
        raise CounterexampleError("harvested primes are not distinct", by_div)
    for p in primes:
        if pow(2, N, p) != p - 1:
            raise CounterexampleError(f"{p} does not divide 2^{N}+1", (N, p))
    return OmegaLowerBound(N, len(primes), tuple(sorted(primes)), by_div, tuple(missing))
