"""Admissible divisibility sequences: an axiom checker over a finite range
and the set of self-divisors {n : n | u_n}.

The built-in family is u_n = a^n - b^n (or a^n + b^n with ``sign=+1``)
for integers a, b. Custom sequences plug in through ``DivSeqSpec`` with
any exact evaluator, optionally with a residue evaluator u_n mod m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .arith import DEFAULT_BUDGET, FactorBudget, factorize, is_prime
from .errors import InvalidArgument
from .sieve import primes_up_to

DEFAULT_SIZE_CEILING_BITS = 1 << 16

AXIOMS = ("divisibility", "lte", "zsigmondy", "growth", "nondegeneracy")


@dataclass(frozen=True)
class DivSeqSpec:
    """A sequence n -> u_n with a claimed growth base, |u_n| <= growth_base^n.

    ``growth_exponent`` = 2 turns the claim into |u_n| <= growth_base^(n^2),
    the weaker growth condition.
    """

    name: str
    evaluator: Callable[[int], int]
    growth_base: float
    params: dict = field(default_factory=dict)
    mod_evaluator: Callable[[int, int], int] | None = None
    growth_exponent: int = 1

    def value(self, n: int) -> int:
        return self.evaluator(n)

    def residue(self, n: int, m: int) -> int:
        if self.mod_evaluator is not None:
            return self.mod_evaluator(n, m)
        return self.evaluator(n) % m


def power_family(a: int, b: int, sign: int = -1, growth_base: float | None = None) -> DivSeqSpec:
    """u_n = a^n + sign * b^n."""
    if sign not in (1, -1):
        raise InvalidArgument("sign must be +1 or -1")
    if growth_base is None:
        growth_base = abs(a) + abs(b)
    op = "+" if sign > 0 else "-"
    return DivSeqSpec(
        name=f"{a}^n {op} {b}^n" if b >= 0 else f"{a}^n {op} ({b})^n",
        evaluator=lambda n: a**n + sign * b**n,
        growth_base=growth_base,
        params={"family": "power", "a": a, "b": b, "sign": sign},
        mod_evaluator=lambda n, m: (pow(a, n, m) + sign * pow(b, n, m)) % m,
    )


def parse_spec_file(text: str) -> DivSeqSpec:
    """Build a spec from ``key = value`` lines (family, a, b, sign, growth_base)."""
    from .config import parse_key_values

    kv = parse_key_values(text)
    family = kv.get("family", "power")
    if family != "power":
        raise InvalidArgument(f"unknown family {family!r}")
    try:
        a, b = int(kv["a"]), int(kv["b"])
    except KeyError as exc:
        raise InvalidArgument(f"spec file missing key {exc}") from None
    sign_s = kv.get("sign", "-")
    sign = {"-": -1, "minus": -1, "-1": -1, "+": 1, "plus": 1, "+1": 1, "1": 1}.get(sign_s)
    if sign is None:
        raise InvalidArgument(f"bad sign {sign_s!r}")
    gb = float(kv["growth_base"]) if "growth_base" in kv else None
    return power_family(a, b, sign, gb)


@dataclass
class AxiomVerdict:
    status: str  # 'pass', 'fail' or 'vacuous'
    counterexample: tuple | None = None
    exceptions: list[int] = field(default_factory=list)


@dataclass
class AxiomReport:
    spec: str
    bound: int
    verdicts: dict[str, AxiomVerdict]
    truncated_at: int | None = None

    def passed(self, axiom: str) -> bool:
        return self.verdicts[axiom].status == "pass"


def _values(spec: DivSeqSpec, bound: int, ceiling_bits: int) -> tuple[list[int], int | None]:
    vals = [0]
    for n in range(1, bound + 1):
        v = spec.value(n)
        if abs(v).bit_length() > ceiling_bits:
            return vals, n - 1
        vals.append(v)
    return vals, None


def _primitive_exists(vals: list[int], n: int) -> bool:
    r = abs(vals[n])
    if r == 0:
        return False
    for k in range(1, n):
        g = math.gcd(r, vals[k])
        while g > 1:
            r //= g
            g = math.gcd(r, g)
    return r > 1


def check_axioms(spec: DivSeqSpec, bound: int, ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS) -> AxiomReport:
    """Test the five axioms for n up to ``bound``.

    Zsigmondy exceptions are listed as observed; finiteness is never claimed.
    """
    if bound < 2:
        raise InvalidArgument("bound must be >= 2")
    vals, truncated = _values(spec, bound, ceiling_bits)
    top = len(vals) - 1
    verdicts: dict[str, AxiomVerdict] = {}

    cex = None
    for n in range(1, top + 1):
        for m in range(2 * n, top + 1, n):
            if vals[n] == 0 and vals[m] != 0 or vals[n] != 0 and vals[m] % vals[n]:
                cex = (n, m)
                break
        if cex:
            break
    verdicts["divisibility"] = AxiomVerdict("fail" if cex else "pass", cex)

    cex, checked = None, 0
    for p in primes_up_to(top):
        for n in range(1, top // p + 1):
            un = vals[n]
            if un == 0 or un % p:
                continue
            checked += 1
            if vals[p * n] % (p * un):
                cex = (p, n)
                break
        if cex:
            break
    verdicts["lte"] = AxiomVerdict("fail" if cex else ("pass" if checked else "vacuous"), cex)

    exceptions = [n for n in range(1, top + 1) if not _primitive_exists(vals, n)]
    verdicts["zsigmondy"] = AxiomVerdict("pass", None, exceptions)

    cex = None
    for n in range(1, top + 1):
        exp = n**spec.growth_exponent
        # exact integer comparison when the base is integral
        base = spec.growth_base
        limit = int(base) ** exp if float(base).is_integer() else base**exp
        if abs(vals[n]) > limit:
            cex = (n, vals[n])
            break
    verdicts["growth"] = AxiomVerdict("fail" if cex else "pass", cex)

    u1 = vals[1] if top >= 1 else None
    verdicts["nondegeneracy"] = AxiomVerdict("fail" if u1 in (1, -1) else "pass", (1, u1) if u1 in (1, -1) else None)
    return AxiomReport(spec.name, bound, verdicts, truncated)


def _selfdiv_chunk(lo: int, hi: int, spec: DivSeqSpec) -> list[int]:
    return [n for n in range(lo, hi) if spec.residue(n, n) == 0]


@dataclass
class SelfDivisors:
    x: int
    elements: list[int]
    skipped: list[int] = field(default_factory=list)

    @property
    def U(self) -> int:
        return len(self.elements)


def self_divisors(spec: DivSeqSpec, x: int, ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS, workers: int = 1) -> SelfDivisors:
    """{n <= x : n | u_n}. Without a residue evaluator values are built exactly,
    and n whose u_n exceeds the ceiling are reported in ``skipped``."""
    if x < 1:
        raise InvalidArgument("x must be >= 1")
    if spec.mod_evaluator is not None:
        from .parallel import map_chunks

        if workers > 1:
            # lambdas do not pickle; rebuild the family in the worker
            elems = [1] + map_chunks(_power_chunk, 2, x + 1, workers, _family_args(spec))
        else:
            elems = [1] + _selfdiv_chunk(2, x + 1, spec)
        return SelfDivisors(x, elems)
    elems, skipped = [1], []
    for n in range(2, x + 1):
        v = spec.value(n)
        if abs(v).bit_length() > ceiling_bits:
            skipped.append(n)
        elif v % n == 0:
            elems.append(n)
    return SelfDivisors(x, elems, skipped)


def _family_args(spec: DivSeqSpec) -> tuple[int, int, int]:
    p = spec.params
    if p.get("family") != "power":
        raise InvalidArgument("parallel evaluation needs a built-in family")
    return p["a"], p["b"], p["sign"]


def _power_chunk(lo: int, hi: int, args: tuple[int, int, int]) -> list[int]:
    a, b, sign = args
    return [n for n in range(lo, hi) if (pow(a, n, n) + sign * pow(b, n, n)) % n == 0]


def generalized_witnesses(
    a: int,
    b: int,
    depth: int,
    budget: FactorBudget | None = None,
    ceiling_bits: int = DEFAULT_SIZE_CEILING_BITS,
) -> list[int]:
    """Elements of {n : n | a^n - b^n} built by repeated prime extension.

    Start from 1; each round multiplies every element N by each prime found
    in a^N - b^N. Divisibility plus the lifting-the-exponent property keep
    the results self-divisors. Only primes the budget finds are used, and
    elements whose u_N exceeds the ceiling are not extended further.
    """
    if abs(a - b) < 2 or math.gcd(a, b) != 1:
        raise InvalidArgument("need |a - b| >= 2 and gcd(a, b) = 1")
    if depth < 0:
        raise InvalidArgument("depth must be >= 0")
    budget = budget or DEFAULT_BUDGET
    found = {1}
    frontier = [1]
    for _ in range(depth):
        nxt = set()
        for N in frontier:
            u = a**N - b**N
            if abs(u).bit_length() > ceiling_bits:
                continue
            for p in factorize(abs(u), budget).primes:
                nxt.add(N * p)
        nxt -= found
        for v in nxt:
            if (pow(a, v, v) - pow(b, v, v)) % v:
                raise AssertionError(f"{v} does not divide u_{v}")
        found |= nxt
        frontier = sorted(nxt)
    return sorted(found)
