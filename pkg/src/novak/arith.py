"""Exact integer kernel: modular powers, valuations, primality, orders,
the lifting-the-exponent check and budget-bounded factorization.

Everything here works on Python ints; no floating point touches a
number-theoretic predicate.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable

from .errors import BudgetExceeded, InvalidArgument
from .sieve import order_table, primes_up_to

__all__ = [
    "DETERMINISTIC_LIMIT",
    "FactorBudget",
    "FactoredInteger",
    "OrderRecord",
    "factor_two_power_plus_one",
    "factorize",
    "gcd_lcm",
    "is_prime",
    "lte_check",
    "mod_pow",
    "multiplicative_order",
    "pollard_rho",
    "prime_regime",
    "two_power_plus_one_divisors",
    "valuation",
]

# Miller-Rabin with the first 13 prime bases is exact below this bound.
DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
PROBABILISTIC_ROUNDS = 64

# Bit length up to which 2^n + 1 is materialised for exact division / rho.
MATERIALIZE_BITS = 1 << 16


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    if modulus < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise InvalidArgument("exponent must be non-negative")
    return pow(base, exponent, modulus)


def gcd_lcm(m: int, n: int) -> tuple[int, int]:
    """Return ``(gcd, lcm)`` with the conventions gcd(0, n) = n, lcm(0, n) = 0."""
    g = math.gcd(m, n)
    if m == 0 or n == 0:
        return g, 0
    return g, abs(m // g * n)


def valuation(n: int, p: int) -> int:
    """Largest k with p^k | n."""
    if n == 0:
        raise InvalidArgument("valuation of 0 is infinite")
    if p < 2:
        raise InvalidArgument(f"{p} is not a prime")
    n = abs(n)
    k = 0
    # square-and-divide keeps this fast for large exponents
    while n % p == 0:
        pk, step = p, 1
        while n % (pk * pk) == 0:
            pk *= pk
            step *= 2
        n //= pk
        k += step
    return k


def _miller_rabin(n: int, bases: Iterable[int]) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact below ``DETERMINISTIC_LIMIT``, 64 rounds above."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < DETERMINISTIC_LIMIT:
        return _miller_rabin(n, _MR_BASES)
    # bases drawn from a generator seeded by n, so answers are reproducible
    rng = random.Random(n)
    bases = [rng.randrange(2, n - 1) for _ in range(PROBABILISTIC_ROUNDS)]
    return _miller_rabin(n, _MR_BASES) and _miller_rabin(n, bases)


def prime_regime(p: int) -> str:
    """Which primality regime certifies ``p``: 'deterministic' or 'probabilistic'."""
    return "deterministic" if p < DETERMINISTIC_LIMIT else "probabilistic"


@dataclass(frozen=True)
class FactoredInteger:
    """A possibly partial factorization ``n = cofactor * prod(p^e)``."""

    n: int
    factors: tuple[tuple[int, int], ...] = ()
    cofactor: int = 1
    regimes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidArgument("FactoredInteger needs n >= 1")
        factors = tuple((int(p), int(e)) for p, e in self.factors)
        object.__setattr__(self, "factors", factors)
        prev = 1
        prod = self.cofactor
        for p, e in factors:
            if p <= prev or e < 1:
                raise InvalidArgument(f"factors must be strictly increasing with e >= 1: {factors}")
            if not is_prime(p):
                raise InvalidArgument(f"{p} listed as a prime factor but is composite")
            prev = p
            prod *= p**e
        if prod != self.n:
            raise InvalidArgument(f"factor product mismatch for {self.n}")
        if self.cofactor < 1:
            raise InvalidArgument("cofactor must be positive")
        object.__setattr__(self, "regimes", tuple(prime_regime(p) for p, _ in factors))

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    @property
    def omega(self) -> int:
        return len(self.factors)

    @property
    def tau(self) -> int:
        if not self.complete:
            raise BudgetExceeded(f"tau({self.n}) needs a complete factorization")
        return reduce(lambda acc, pe: acc * (pe[1] + 1), self.factors, 1)

    def divisors(self) -> list[int]:
        if not self.complete:
            raise BudgetExceeded(f"divisors of {self.n} need a complete factorization")
        divs = [1]
        for p, e in self.factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    @classmethod
    def from_parts(cls, n: int, primes: dict[int, int], cofactor: int = 1) -> "FactoredInteger":
        return cls(n, tuple(sorted(primes.items())), cofactor)

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors]
        if not self.complete:
            parts.append(f"C{self.cofactor}")
        return " * ".join(parts) if parts else "1"


@dataclass(frozen=True)
class FactorBudget:
    """Effort descriptor for factorization.

    trial_bound: trial division uses primes below this bound.
    rho_iterations: Pollard-rho iterations allowed per composite piece.
    """

    trial_bound: int = 10**6
    rho_iterations: int = 200_000

    def __post_init__(self):
        if self.trial_bound < 2 or self.rho_iterations < 1:
            raise InvalidArgument("budgets must be positive")


DEFAULT_BUDGET = FactorBudget()


def pollard_rho(n: int, max_iterations: int, seed: int = 1) -> int | None:
    """Brent's variant of Pollard rho. Returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    used = 0
    c = seed
    while used < max_iterations:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1 and used < max_iterations:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            used += r
            r *= 2
        if g == n:
            # batch overshot; step back one at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        c += 1
    return None


def _split_composites(parts: list[int], budget: FactorBudget, found: dict[int, int]) -> int:
    """Factor each piece with rho; return the product of unsplit composites."""
    leftover = 1
    stack = [p for p in parts if p > 1]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = pollard_rho(m, budget.rho_iterations)
        if d is None:
            leftover *= m
        else:
            stack.extend((d, m // d))
    return leftover


def _absorb_leftover(found: dict[int, int], leftover: int) -> int:
    # a prime found in one piece may still divide an unsplit composite
    for p in list(found):
        while leftover > 1 and leftover % p == 0:
            leftover //= p
            found[p] += 1
    return leftover


def factorize(n: int, budget: FactorBudget | None = None, cache=None) -> FactoredInteger:
    """Trial division, then cache lookup, then Pollard rho within ``budget``.

    Incomplete results are encoded in the returned cofactor, never raised.
    """
    if n < 1:
        raise InvalidArgument("factorize needs n >= 1")
    budget = budget or DEFAULT_BUDGET
    found: dict[int, int] = {}
    m = n
    for p in primes_up_to(budget.trial_bound - 1):
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1 and is_prime(m):
        found[m] = found.get(m, 0) + 1
        m = 1
    if m > 1 and cache is not None:
        for p in cache.candidate_primes(n):
            while m % p == 0:
                m //= p
                found[p] = found.get(p, 0) + 1
    leftover = _split_composites([m], budget, found) if m > 1 else 1
    leftover = _absorb_leftover(found, leftover)
    return FactoredInteger.from_parts(n, found, leftover)


def two_power_plus_one_divisors(n: int, limit: int) -> list[int]:
    """Primes q <= limit with q | 2^n + 1, without forming 2^n + 1.

    Candidates come from the order table (ord_q(2) | 2n, ord_q(2) does not
    divide n); every candidate is re-checked with a modular power.
    """
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    if limit < 3:
        return []
    table = order_table(int(limit))
    qs = table.divisors_of_two_pow_plus_one(n, limit)
    for q in qs:
        assert pow(2, n, q) == q - 1, (n, q)
    return qs


def _algebraic_pieces(n: int, value: int) -> list[int]:
    """Split ``value`` | 2^n + 1 using gcds with 2^m + 1 for m | n, n/m odd."""
    pieces = [value]
    for m in range(1, n):
        if n % m or (n // m) % 2 == 0:
            continue
        sub = (1 << m) + 1
        nxt = []
        for piece in pieces:
            g = math.gcd(piece, sub)
            while 1 < g < piece:
                nxt.append(g)
                piece //= g
                g = math.gcd(piece, sub)
            nxt.append(piece)
        pieces = nxt
    return [p for p in pieces if p > 1]


def factor_two_power_plus_one(n: int, budget: FactorBudget | None = None, cache=None) -> FactoredInteger:
    """Factor 2^n + 1, consulting the cache record for n first.

    Trial division is restricted to primes whose order of 2 is compatible
    with dividing 2^n + 1; exponents come from exact division. Remaining
    cofactors are split along the algebraic factors 2^m + 1 before rho.
    """
    if n < 0:
        raise InvalidArgument("n must be non-negative")
    budget = budget or DEFAULT_BUDGET
    value = (1 << n) + 1
    if cache is not None:
        hit = cache.get(n)
        if hit is not None and hit.complete:
            return hit
    found: dict[int, int] = {}
    m = value
    seeds = set(two_power_plus_one_divisors(n, budget.trial_bound - 1))
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            seeds.update(hit.primes)
    for p in sorted(seeds):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            found[p] = e
    if m > 1:
        if is_prime(m):
            found[m] = found.get(m, 0) + 1
            m = 1
        elif m.bit_length() <= MATERIALIZE_BITS:
            m = _split_composites(_algebraic_pieces(n, m), budget, found)
            m = _absorb_leftover(found, m)
    return FactoredInteger.from_parts(value, found, m)


@dataclass(frozen=True)
class OrderRecord:
    """Multiplicative order of base_num/base_den modulo p."""

    p: int
    base_num: int
    base_den: int
    order: int
    two_adic: int
    odd_part: int

    def __post_init__(self):
        if (self.p - 1) % self.order:
            raise InvalidArgument("order must divide p - 1")
        if self.order != (1 << self.two_adic) * self.odd_part or self.odd_part % 2 == 0:
            raise InvalidArgument("inconsistent 2-adic decomposition")


def _split_two_adic(k: int) -> tuple[int, int]:
    t = (k & -k).bit_length() - 1
    return t, k >> t


def multiplicative_order(p: int, a: int, b: int = 1, budget: FactorBudget | None = None) -> OrderRecord:
    """Smallest k >= 1 with a^k = b^k (mod p), for an odd prime p not dividing ab."""
    if p < 3 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")
    if a % p == 0 or b % p == 0:
        raise InvalidArgument(f"{p} divides a*b")
    g = a * pow(b, -1, p) % p
    fac = factorize(p - 1, budget)
    if not fac.complete:
        raise BudgetExceeded(f"could not factor {p} - 1 within budget")
    order = p - 1
    for r, e in fac.factors:
        for _ in range(e):
            if pow(g, order // r, p) == 1:
                order //= r
            else:
                break
    t, odd = _split_two_adic(order)
    return OrderRecord(p, a, b, order, t, odd)


def lte_check(a: int, b: int, k: int, p: int) -> tuple[int, int]:
    """Return (nu_p(a-b) + nu_p(k), nu_p(a^k - b^k)) for the lifting-the-exponent case.

    Requires p an odd prime with p | a - b and p not dividing ab; the two
    components then agree.
    """
    if k < 1:
        raise InvalidArgument("k must be a positive integer")
    if p < 3 or not is_prime(p):
        raise InvalidArgument(f"{p} is not an odd prime")
    if (a - b) % p != 0 or (a * b) % p == 0:
        raise InvalidArgument("requires p | a - b and p not dividing a*b")
    formula = valuation(a - b, p) + valuation(k, p)
    direct = valuation(a**k - b**k, p)
    return formula, direct
