"""Persistent table of (partial) factorizations of 2^n + 1.

On-disk format is Cunningham style, one record per line::

    # comment
    2+ 9: 3^3 19^1
    2+ 18: 5^1 C52429

The trailing ``C<cofactor>`` marks an unfactored composite part.
"""

from __future__ import annotations

import os
import re
import threading
from pathlib import Path
from typing import Iterable, Iterator

from .arith import FactoredInteger, is_prime
from .errors import CacheError, CacheFormatError, CacheProductError, InvalidArgument

_RECORD = re.compile(r"^2\+ (\d+):((?: \d+(?:\^\d+)?)*)(?: C(\d+))?$")
_FACTOR = re.compile(r"^(\d+)(?:\^(\d+))?$")

ENV_VAR = "NOVAK_CACHE"


def parse_record(line: str, line_no: int | None = None, path=None) -> tuple[int, FactoredInteger]:
    m = _RECORD.match(line.rstrip("\r\n"))
    if not m:
        raise CacheFormatError(f"malformed record {line.strip()!r}", line_no, path)
    n = int(m.group(1))
    primes: dict[int, int] = {}
    for tok in m.group(2).split():
        fm = _FACTOR.match(tok)
        p, e = int(fm.group(1)), int(fm.group(2) or 1)
        if e < 1:
            raise CacheFormatError(f"exponent must be >= 1 in {tok!r}", line_no, path)
        if p in primes:
            raise CacheFormatError(f"prime {p} listed twice", line_no, path)
        if not is_prime(p):
            raise CacheFormatError(f"{p} is not prime", line_no, path)
        primes[p] = e
    cofactor = int(m.group(3)) if m.group(3) else 1
    if m.group(3) and (cofactor < 2 or is_prime(cofactor)):
        raise CacheFormatError(f"cofactor C{cofactor} is not composite", line_no, path)
    prod = cofactor
    for p, e in primes.items():
        prod *= p**e
    if prod != (1 << n) + 1:
        raise CacheProductError(f"record for 2^{n}+1 does not multiply back", line_no, path)
    return n, FactoredInteger.from_parts(prod, primes, cofactor)


def format_record(n: int, fac: FactoredInteger) -> str:
    parts = [f"2+ {n}:"]
    parts.extend(f"{p}^{e}" for p, e in fac.factors)
    if not fac.complete:
        parts.append(f"C{fac.cofactor}")
    return " ".join(parts)


def refine(a: FactoredInteger, b: FactoredInteger) -> FactoredInteger:
    """Combine two factorizations of the same number into one at least as fine."""
    if a.n != b.n:
        raise InvalidArgument("can only refine factorizations of the same number")
    m = a.n
    primes: dict[int, int] = {}
    for p in sorted(set(a.primes) | set(b.primes)):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        primes[p] = e
    return FactoredInteger.from_parts(a.n, primes, m)


class FactorCache:
    """Factorizations of 2^n + 1 keyed by n.

    Reads are lock-free; writes take a lock and are idempotent: writing an
    equal record is a no-op, a finer record of the same number replaces a
    coarser one.
    """

    def __init__(self, records: dict[int, FactoredInteger] | None = None, path=None):
        self._records: dict[int, FactoredInteger] = dict(records or {})
        self._lock = threading.Lock()
        self.path = path

    @classmethod
    def load(cls, path) -> "FactorCache":
        path = Path(path)
        cache = cls(path=path)
        with open(path) as fh:
            cache._read_lines(fh, path)
        return cache

    @classmethod
    def from_env(cls) -> "FactorCache | None":
        path = os.environ.get(ENV_VAR)
        if path and Path(path).exists():
            return cls.load(path)
        return None

    def _read_lines(self, lines: Iterable[str], path=None) -> None:
        for line_no, line in enumerate(lines, 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            n, fac = parse_record(line, line_no, path)
            old = self._records.get(n)
            if old is not None and format_record(n, old) != format_record(n, fac):
                raise CacheError(f"conflicting duplicate record for n = {n}", line_no, path)
            self._records[n] = fac

    @classmethod
    def parse(cls, text: str) -> "FactorCache":
        cache = cls()
        cache._read_lines(text.splitlines())
        return cache

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, n: int) -> bool:
        return n in self._records

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._records))

    def get(self, n: int) -> FactoredInteger | None:
        return self._records.get(n)

    def candidate_primes(self, value: int) -> list[int]:
        """Known primes of ``value`` when it has the form 2^n + 1 and n is cached."""
        w = value - 1
        if w < 1 or w & (w - 1):
            return []
        rec = self._records.get(w.bit_length() - 1)
        return rec.primes if rec is not None else []

    def put(self, n: int, fac: FactoredInteger) -> FactoredInteger:
        if fac.n != (1 << n) + 1:
            raise InvalidArgument(f"record is not a factorization of 2^{n}+1")
        with self._lock:
            old = self._records.get(n)
            new = fac if old is None else refine(old, fac)
            self._records[n] = new
            return new

    def merge(self, other: "FactorCache", allow_refine: bool = False) -> "FactorCache":
        out = FactorCache(self._records)
        for n in other:
            rec = other.get(n)
            old = out.get(n)
            if old is not None and format_record(n, old) != format_record(n, rec):
                if not allow_refine:
                    raise CacheError(f"conflicting records for n = {n}")
                rec = refine(old, rec)
            out._records[n] = rec
        return out

    def verify(self) -> list[int]:
        """Re-multiply every record; returns the verified keys in order."""
        for n in self:
            rec = self._records[n]
            prod = rec.cofactor
            for p, e in rec.factors:
                prod *= p**e
            if prod != (1 << n) + 1:
                raise CacheProductError(f"record for 2^{n}+1 does not multiply back")
        return list(self)

    def coverage(self) -> tuple[list[int], list[int]]:
        """(n with complete records, n with partial records)."""
        complete = [n for n in self if self._records[n].complete]
        partial = [n for n in self if not self._records[n].complete]
        return complete, partial

    def dumps(self) -> str:
        return "".join(format_record(n, self._records[n]) + "\n" for n in self)

    def save(self, path=None) -> None:
        path = Path(path or self.path)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(self.dumps())
        tmp.replace(path)
