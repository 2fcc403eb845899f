"""Small-number sieves: prime lists, smallest-prime-factor tables, and the
table of multiplicative orders of 2 modulo every odd prime below a limit.
"""

from __future__ import annotations

from functools import lru_cache
from math import isqrt

import numpy as np


def prime_mask(limit: int) -> np.ndarray:
    """Boolean array ``m`` of length ``limit + 1`` with ``m[k]`` true iff k is prime."""
    limit = max(int(limit), 1)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


@lru_cache(maxsize=8)
def _primes_cached(limit: int) -> tuple[int, ...]:
    return tuple(int(p) for p in np.flatnonzero(prime_mask(limit)))


def primes_up_to(limit: int) -> list[int]:
    if limit < 2:
        return []
    return list(_primes_cached(int(limit)))


@lru_cache(maxsize=4)
def spf_table(limit: int) -> np.ndarray:
    """Smallest prime factor of every k <= limit (spf[0] = 0, spf[1] = 1)."""
    limit = max(int(limit), 1)
    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1] = 1
    for p in range(2, limit + 1):
        if p * p > limit:
            break
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    spf[0] = 0
    return spf


def factor_with_spf(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    """Factor ``1 <= n < len(spf)`` by repeated smallest-prime-factor lookup."""
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


class OrderTable:
    """Multiplicative order of 2 modulo each odd prime ``p <= limit``.

    Orders are computed from the factorization of p - 1 read off the
    smallest-prime-factor table, then descending through prime divisors.
    """

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.primes = [p for p in primes_up_to(self.limit) if p > 2]
        spf = spf_table(max(self.limit, 2))
        self.orders: dict[int, int] = {}
        self.p_minus_1: dict[int, list[tuple[int, int]]] = {}
        for p in self.primes:
            fac = factor_with_spf(p - 1, spf)
            self.p_minus_1[p] = fac
            order = p - 1
            for r, e in fac:
                for _ in range(e):
                    if pow(2, order // r, p) == 1:
                        order //= r
                    else:
                        break
            self.orders[p] = order
        self._by_order: dict[int, list[int]] = {}
        for p, order in self.orders.items():
            self._by_order.setdefault(order, []).append(p)

    def order(self, p: int) -> int:
        return self.orders[p]

    def divisors_of_two_pow_plus_one(self, n: int, limit: int | None = None) -> list[int]:
        """Primes q <= min(limit, self.limit) dividing 2^n + 1.

        q | 2^n + 1 iff ord_q(2) divides 2n but not n. For odd n this means
        ord_q(2) = 2m with m odd and m | n.
        """
        cap = self.limit if limit is None else min(limit, self.limit)
        two_n = 2 * n
        found: list[int] = []
        for t, qs in self._by_order.items():
            if two_n % t == 0 and n % t != 0:
                found.extend(q for q in qs if q <= cap)
        return sorted(found)


@lru_cache(maxsize=4)
def order_table(limit: int) -> OrderTable:
    return OrderTable(limit)
