"""Novák numbers (N | 2^N + 1), Novák primes, primitive prime divisors,
Novák-Carmichael numbers and admissible divisibility sequences."""

from .arith import FactorBudget, FactoredInteger, factorize, is_prime, multiplicative_order
from .cache import FactorCache
from .errors import (
    BudgetExceeded,
    CacheError,
    CacheFormatError,
    CacheProductError,
    CounterexampleError,
    InvalidArgument,
    NovakError,
    PreconditionViolation,
    SizeLimitExceeded,
)
from .numbers import NovakNumber, combine, enumerate_brute, enumerate_closure, extend, is_novak, successor

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CacheError",
    "CacheFormatError",
    "CacheProductError",
    "CounterexampleError",
    "FactorBudget",
    "FactorCache",
    "FactoredInteger",
    "InvalidArgument",
    "NovakError",
    "NovakNumber",
    "PreconditionViolation",
    "SizeLimitExceeded",
    "combine",
    "enumerate_brute",
    "enumerate_closure",
    "extend",
    "factorize",
    "is_novak",
    "is_prime",
    "multiplicative_order",
    "successor",
]
