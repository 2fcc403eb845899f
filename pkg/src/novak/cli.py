"""``novak`` command line.

Exit status: 0 success, 1 counterexample to a proven invariant, 2 invalid
arguments or input, 3 budget or size limit exceeded (including cache
records that fail their product check).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import arith, carmichael, divseq, numbers, primes, zsigmondy
from .cache import FactorCache
from .config import RunConfig
from .errors import (
    BudgetExceeded,
    CacheError,
    CacheProductError,
    CounterexampleError,
    InvalidArgument,
    NovakError,
    SizeLimitExceeded,
)

SCHEMA_VERSION = 1


class UsageError(InvalidArgument):
    pass


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    return v


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = {"default": argparse.SUPPRESS} if suppress else {}
    g = parser.add_argument_group("run options")
    g.add_argument("--json", dest="format", action="store_const", const="json", **d, help="single JSON object output")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", **d, help="CSV output for list-shaped results")
    g.add_argument("--config", **d, help="key = value configuration file")
    g.add_argument("--cache", **d, help="factor cache file (default: $NOVAK_CACHE)")
    g.add_argument("--trial-bound", type=int, **d)
    g.add_argument("--rho-iterations", type=int, **d)
    g.add_argument("--size-ceiling", dest="size_ceiling_bits", type=int, **d, help="bit ceiling for constructed numbers")
    g.add_argument("--workers", type=int, **d)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="novak", description="Novák numbers N | 2^N + 1 and related objects.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", metavar="<command>")
    sub.required = True

    def add(name, **kw):
        p = sub.add_parser(name, **kw)
        _common(p, suppress=True)
        return p

    p = add("check", help="test N | 2^N + 1")
    p.add_argument("n", type=_positive_int)

    p = add("list", help="list Novák numbers up to --max")
    p.add_argument("--max", type=_positive_int, required=True, dest="x")
    p.add_argument("--method", choices=("brute", "closure"), default="brute")
    p.add_argument("--exclude-one", action="store_true")
    p.add_argument("--full-scan", action="store_true", help="brute force over every integer, not only odd multiples of 3")

    p = add("bound", help="count lower bound from one Novák witness")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--witness", type=_positive_int, required=True)

    p = add("dlower", help="certified lower bound for max omega(2^N+1), N <= x")
    p.add_argument("--max", type=_positive_int, required=True, dest="x")

    p = add("witness", help="the witness family (2^(3^n)+1)^k")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--k", type=_positive_int, required=True)

    p = add("zsig", help="primitive prime divisor of a^n + b^n")
    p.add_argument("--a", type=_positive_int, required=True)
    p.add_argument("--b", type=_positive_int, required=True)
    p.add_argument("--n", type=_positive_int, required=True)

    p = add("omega-lower", help="harvest distinct primes of 2^N + 1 from divisors of N")
    p.add_argument("--n", type=_positive_int, required=True, dest="N")

    p = add("primes", help="sieve Novák primes up to --max")
    p.add_argument("--max", type=_positive_int, required=True, dest="x")
    p.add_argument("--certify", action="store_true", help="emit and re-verify certificates")
    p.add_argument("--table1", action="store_true", help="factor p - 1 for the first 24 and flag Novák factors")

    p = add("orderstat", help="primes with ord_p(2) <= (p-1)/L")
    p.add_argument("--max", type=_positive_int, required=True, dest="x")
    p.add_argument("--L", type=float, required=True)

    p = add("carmichael", help="Novák-Carmichael numbers")
    csub = p.add_subparsers(dest="action", metavar="<action>")
    csub.required = True
    cp = csub.add_parser("check")
    _common(cp, suppress=True)
    cp.add_argument("n", type=_positive_int)
    cp = csub.add_parser("list")
    _common(cp, suppress=True)
    cp.add_argument("--max", type=_positive_int, required=True, dest="x")

    p = add("pset", help="the prime sets P_n and P_inf")
    p.add_argument("--level", required=True)
    p.add_argument("--max", type=_positive_int, required=True, dest="x")

    p = add("saturate", help="lcm saturation from a prime of P_inf")
    p.add_argument("--p", type=_positive_int, required=True)

    p = add("conj", help="counting table for P_inf and P_n")
    p.add_argument("--grid", required=True, help="comma separated x values")
    p.add_argument("--levels", type=int, default=4)

    p = add("divseq", help="divisibility sequences a^n +- b^n")
    dsub = p.add_subparsers(dest="action", metavar="<action>")
    dsub.required = True
    for name in ("check", "selfdiv"):
        dp = dsub.add_parser(name)
        _common(dp, suppress=True)
        dp.add_argument("--spec", help="key = value spec file (family, a, b, sign, growth_base)")
        dp.add_argument("--a", type=int)
        dp.add_argument("--b", type=int)
        sg = dp.add_mutually_exclusive_group()
        sg.add_argument("--plus", dest="sign", action="store_const", const=1)
        sg.add_argument("--minus", dest="sign", action="store_const", const=-1)
        if name == "check":
            dp.add_argument("--bound", type=_positive_int, required=True)
        else:
            dp.add_argument("--max", type=_positive_int, required=True, dest="x")

    p = add("cache", help="factor cache administration")
    ksub = p.add_subparsers(dest="action", metavar="<action>")
    ksub.required = True
    kp = ksub.add_parser("verify")
    _common(kp, suppress=True)
    kp.add_argument("paths", nargs="+")
    kp = ksub.add_parser("merge")
    _common(kp, suppress=True)
    kp.add_argument("paths", nargs="+")
    kp.add_argument("--out", required=True)
    kp.add_argument("--refine", action="store_true", help="combine differing records of the same n")
    kp = ksub.add_parser("stats")
    _common(kp, suppress=True)
    kp.add_argument("paths", nargs="+")
    kp = ksub.add_parser("seed")
    _common(kp, suppress=True)
    kp.add_argument("--max", type=_positive_int, required=True, dest="x")
    kp.add_argument("--out", required=True)
    return parser


def _s(n: int) -> str:
    return str(n)


class Output:
    """Collects one result and renders it as human text, JSON or CSV."""

    def __init__(self, command: str, config: RunConfig):
        self.command = command
        self.config = config
        self.fields: dict = {}
        self.rows: list[dict] | None = None
        self.lines: list[str] = []

    def render(self) -> str:
        fmt = self.config.format
        if fmt == "json":
            obj = {"schema_version": SCHEMA_VERSION, "command": self.command, "config": self.config.as_dict()}
            obj.update(self.fields)
            return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"
        if fmt == "csv":
            if self.rows is None:
                raise UsageError(f"CSV output is only available for list-shaped results, not {self.command!r}")
            buf = io.StringIO()
            cols = list(self.rows[0]) if self.rows else ["value"]
            w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
            w.writeheader()
            w.writerows(self.rows)
            return buf.getvalue()
        return "".join(line + "\n" for line in self.lines)


def _load_cache(config: RunConfig) -> FactorCache | None:
    if not config.cache:
        return None
    path = Path(config.cache)
    if not path.exists():
        raise InvalidArgument(f"cache file {path} does not exist")
    return FactorCache.load(path)


def _cmd_check(args, out: Output, cfg, budget, cache):
    ok = numbers.is_novak(args.n)
    out.fields = {"n": _s(args.n), "is_novak": ok}
    out.lines = [f"{args.n} is {'' if ok else 'not '}a Novák number"]


def _cmd_list(args, out: Output, cfg, budget, cache):
    include_one = cfg.include_one and not args.exclude_one
    if args.method == "brute":
        rep = numbers.enumerate_brute(args.x, include_one, args.full_scan, cfg.workers)
    else:
        rep = numbers.enumerate_closure(args.x, budget, cache, include_one)
        if not rep.exhaustive:
            oracle = numbers.enumerate_brute(args.x, include_one, workers=cfg.workers)
            rep.unreached = sorted(set(oracle.elements) - set(rep.elements))
    out.fields = {
        "x": _s(args.x),
        "method": args.method,
        "include_one": include_one,
        "count": rep.count,
        "elements": [_s(v) for v in rep.elements],
        "exhaustive": rep.exhaustive,
        "unreached": [_s(v) for v in rep.unreached],
    }
    out.rows = [{"index": i + 1, "n": v} for i, v in enumerate(rep.elements)]
    out.lines = [f"Novák numbers <= {args.x} ({args.method}, 1 {'included' if include_one else 'excluded'}): {rep.count}"]
    out.lines += [f"{i + 1:6d}  {v}" for i, v in enumerate(rep.elements)]
    if rep.unreached:
        out.lines.append(f"unreached by closure: {' '.join(map(str, rep.unreached))}")


def _cmd_bound(args, out: Output, cfg, budget, cache):
    n = args.witness
    if not numbers.is_novak(n):
        raise InvalidArgument(f"{n} is not a Novák number")
    primes_found, complete = numbers.omega_certified(n, budget, cache)
    k = len(primes_found)
    value = numbers.lemma6_bound(args.x, n, k)
    out.fields = {"x": _s(args.x), "witness": _s(n), "omega_lower": k, "omega_exact": complete, "bound": value}
    out.lines = [
        f"witness {n}: omega(2^{n}+1) {'=' if complete else '>='} {k}",
        f"(ln(x/N)/N)^k = {value:.6g} for x = {args.x}",
    ]
    if args.x <= 10**7:
        count = numbers.enumerate_brute(args.x, workers=cfg.workers).count
        holds = numbers.lemma6_holds(count, value)
        out.fields.update(count=count, holds=holds)
        out.lines.append(f"count of Novák numbers <= x: {count} ({'>=' if holds else '<'} bound)")


def _cmd_dlower(args, out: Output, cfg, budget, cache):
    res = numbers.d_lower(args.x, budget, cache)
    out.fields = {"x": _s(args.x), "value": res.value, "witness": _s(res.witness), "exact": res.exact, "primes": [_s(p) for p in res.primes]}
    out.lines = [f"d({args.x}) >= {res.value} via N = {res.witness}{' (exact)' if res.exact else ''}"]


def _cmd_witness(args, out: Output, cfg, budget, cache):
    res = numbers.witness_family(args.n, args.k, cfg.size_ceiling_bits)
    out.fields = {"n": args.n, "k": args.k, "N": _s(res.N.n), "omega_lower": res.omega_lower, "proof": res.N.proof}
    out.lines = [f"N = (2^(3^{args.n})+1)^{args.k} = {res.N.n}", f"omega(2^N+1) >= {res.omega_lower}"]


def _cmd_zsig(args, out: Output, cfg, budget, cache):
    res = zsigmondy.primitive_prime(args.a, args.b, args.n, budget)
    out.fields = {"a": _s(args.a), "b": _s(args.b), "n": args.n, "prime": None if res.prime is None else _s(res.prime), "exceptional": res.exceptional}
    if res.exceptional:
        out.lines = [f"{args.a}^{args.n}+{args.b}^{args.n}: exceptional case, no primitive prime"]
    else:
        out.lines = [f"primitive prime of {args.a}^{args.n}+{args.b}^{args.n}: {res.prime}"]


def _cmd_omega_lower(args, out: Output, cfg, budget, cache):
    res = zsigmondy.omega_lower_via_tau(args.N, budget)
    out.fields = {
        "N": _s(args.N),
        "bound": res.bound,
        "primes": [_s(p) for p in res.primes],
        "by_divisor": {_s(d): _s(p) for d, p in sorted(res.by_divisor.items())},
        "missing": [_s(d) for d in res.missing],
    }
    out.lines = [f"omega(2^{args.N}+1) >= {res.bound}"]
    out.lines += [f"  d = {d}: {p}" for d, p in sorted(res.by_divisor.items())]
    if res.missing:
        out.lines.append(f"  no prime certified for d in {list(res.missing)}")


def _cmd_primes(args, out: Output, cfg, budget, cache):
    rep = primes.sieve(args.x, budget)
    out.fields = {
        "x": _s(args.x),
        "count": rep.pi_N,
        "primes": [_s(q) for q in rep.values],
        "undecided": [_s(q) for q in rep.undecided],
        "ratio": rep.ratio,
    }
    out.rows = [{"index": i + 1, "q": c.q, "order": c.order.order} for i, c in enumerate(rep.primes)]
    ratio = "n/a" if rep.ratio is None else f"{rep.ratio:.6f}"
    out.lines = [f"Novák primes <= {args.x}: {rep.pi_N}  (pi_N ln^2 x / (x lnln x) = {ratio})"]
    out.lines += [f"{i + 1:4d}  {c.q:>10d}  ord_q(2) = {c.order.order}" for i, c in enumerate(rep.primes)]
    if rep.undecided:
        out.lines.append(f"undecided: {' '.join(map(str, rep.undecided))}")
    if args.certify:
        bad = [c.q for c in rep.primes if not primes.verify_certificate(c)]
        if bad:
            raise CounterexampleError(f"certificates failed verification: {bad}")
        out.fields["certificates"] = [c.to_json() for c in rep.primes]
        out.lines += [json.dumps(c.to_json(), separators=(",", ":")) for c in rep.primes]
    if args.table1:
        rows = primes.table1_report(budget, args.x)
        out.fields["table1"] = [
            {"p": _s(r.p), "p_minus_1": [[_s(q), e] for q, e in r.p_minus_1], "flags": list(r.flags)} for r in rows
        ]
        out.rows = [{"p": r.p, "p_minus_1": r.render()} for r in rows]
        out.lines.append("")
        out.lines.append("p - 1 for the first Novák primes (*bold* = 2 or a Novák prime):")
        out.lines += [f"{r.p:>10d}  {r.render()}" for r in rows]


def _cmd_orderstat(args, out: Output, cfg, budget, cache):
    st = primes.order_statistic(args.x, args.L)
    out.fields = {"x": _s(st.x), "L": st.L, "count": st.count, "pi_x": st.pi_x, "fraction": st.fraction, "reference": st.reference, "warning": st.warning}
    out.rows = [{"x": st.x, "L": st.L, "count": st.count, "pi_x": st.pi_x, "fraction": st.fraction, "reference": st.reference}]
    out.lines = [f"#{{p <= {st.x}: ord_p(2) <= (p-1)/{st.L:g}}} = {st.count} of {st.pi_x}; fraction {st.fraction:.6f} vs 1/L = {st.reference:.6f}"]
    if st.warning:
        out.lines.append(f"warning: {st.warning}")


def _cmd_carmichael(args, out: Output, cfg, budget, cache):
    if args.action == "check":
        ok = carmichael.is_novak_carmichael(args.n, budget)
        out.fields = {"n": _s(args.n), "is_novak_carmichael": ok}
        out.lines = [f"{args.n} is {'' if ok else 'not '}a Novák-Carmichael number"]
    else:
        elems = carmichael.enumerate_carmichael(args.x)
        out.fields = {"x": _s(args.x), "count": len(elems), "elements": [_s(v) for v in elems]}
        out.rows = [{"index": i + 1, "n": v} for i, v in enumerate(elems)]
        out.lines = [f"Novák-Carmichael numbers <= {args.x}: {len(elems)}"] + [f"{i + 1:6d}  {v}" for i, v in enumerate(elems)]


def _cmd_pset(args, out: Output, cfg, budget, cache):
    if args.level == "inf":
        rep = carmichael.p_infinity(args.x, budget)
    else:
        try:
            level = int(args.level)
        except ValueError:
            raise InvalidArgument(f"--level must be a non-negative integer or 'inf', got {args.level!r}") from None
        rep = carmichael.p_set(level, args.x, budget)
    out.fields = {"level": rep.level_name, "x": _s(args.x), "count": len(rep.primes), "primes": [_s(p) for p in rep.primes], "undecided": [_s(p) for p in rep.undecided]}
    out.rows = [{"index": i + 1, "p": p} for i, p in enumerate(rep.primes)]
    out.lines = [f"P_{rep.level_name} up to {args.x}: {len(rep.primes)}", " ".join(map(str, rep.primes))]


def _cmd_saturate(args, out: Output, cfg, budget, cache):
    tr = carmichael.saturate(args.p, budget, cfg.saturation_ceiling_bits)
    out.fields = {"p": _s(tr.p), "steps": [_s(s) for s in tr.steps], "A": _s(tr.A), "N": _s(tr.N)}
    out.lines = [f"steps: {' -> '.join(map(str, tr.steps))}", f"A = {tr.A} = 2 * {tr.N}"]


def _cmd_conj(args, out: Output, cfg, budget, cache):
    try:
        grid = [int(v) for v in args.grid.split(",") if v.strip()]
    except ValueError:
        raise InvalidArgument(f"bad --grid {args.grid!r}") from None
    rows = carmichael.conjecture_counts(grid, args.levels, budget)
    out.fields = {"rows": [{"x": _s(r.x), "p_inf": r.p_inf, "p_levels": list(r.p_levels)} for r in rows]}
    out.rows = [{"x": r.x, "p_inf": r.p_inf, **{f"P_{i}": c for i, c in enumerate(r.p_levels)}} for r in rows]
    head = "x".rjust(12) + "  P_inf" + "".join(f"  P_{i}".rjust(8) for i in range(args.levels + 1))
    out.lines = [head] + [f"{r.x:>12d}  {r.p_inf:5d}" + "".join(f"{c:8d}" for c in r.p_levels) for r in rows]


def _divseq_spec(args) -> divseq.DivSeqSpec:
    if args.spec:
        return divseq.parse_spec_file(Path(args.spec).read_text())
    if args.a is None or args.b is None:
        raise InvalidArgument("give --a and --b, or --spec")
    return divseq.power_family(args.a, args.b, args.sign or -1)


def _cmd_divseq(args, out: Output, cfg, budget, cache):
    spec = _divseq_spec(args)
    if args.action == "check":
        rep = divseq.check_axioms(spec, args.bound)
        out.fields = {
            "spec": spec.name,
            "bound": rep.bound,
            "truncated_at": rep.truncated_at,
            "axioms": {
                k: {"status": v.status, "counterexample": None if v.counterexample is None else [_s(c) for c in v.counterexample], "exceptions": v.exceptions}
                for k, v in rep.verdicts.items()
            },
        }
        out.lines = [f"{spec.name}, n <= {rep.bound}"]
        for k, v in rep.verdicts.items():
            extra = ""
            if v.counterexample is not None:
                extra = f"  counterexample {v.counterexample}"
            if k == "zsigmondy":
                extra = f"  exceptions {v.exceptions}"
            out.lines.append(f"  {k:14s} {v.status}{extra}")
    else:
        res = divseq.self_divisors(spec, args.x, workers=cfg.workers)
        out.fields = {"spec": spec.name, "x": _s(args.x), "U": res.U, "elements": [_s(v) for v in res.elements], "skipped": [_s(v) for v in res.skipped]}
        out.rows = [{"index": i + 1, "n": v} for i, v in enumerate(res.elements)]
        out.lines = [f"n <= {args.x} with n | u_n for {spec.name}: {res.U}", " ".join(map(str, res.elements))]


def _cmd_cache(args, out: Output, cfg, budget, cache):
    if args.action == "verify":
        total = 0
        for path in args.paths:
            total += len(FactorCache.load(path).verify())
        out.fields = {"paths": args.paths, "records": total, "ok": True}
        out.lines = [f"{total} records verified"]
    elif args.action == "merge":
        merged = FactorCache()
        for path in args.paths:
            merged = merged.merge(FactorCache.load(path), allow_refine=args.refine)
        merged.save(args.out)
        out.fields = {"out": args.out, "records": len(merged)}
        out.lines = [f"wrote {len(merged)} records to {args.out}"]
    elif args.action == "stats":
        merged = FactorCache()
        for path in args.paths:
            merged = merged.merge(FactorCache.load(path), allow_refine=True)
        complete, partial = merged.coverage()
        out.fields = {"records": len(merged), "complete": [_s(n) for n in complete], "partial": [_s(n) for n in partial]}
        out.rows = [{"n": n, "complete": n in set(complete)} for n in merged]
        out.lines = [f"{len(merged)} records, {len(complete)} complete, {len(partial)} partial", "complete n: " + " ".join(map(str, complete))]
        if partial:
            out.lines.append("partial n: " + " ".join(map(str, partial)))
    else:
        target = Path(args.out)
        seeded = FactorCache.load(target) if target.exists() else FactorCache(path=target)
        for n in range(1, args.x + 1):
            seeded.put(n, arith.factor_two_power_plus_one(n, budget, seeded))
        seeded.save(target)
        complete, partial = seeded.coverage()
        out.fields = {"out": args.out, "records": len(seeded), "complete": len(complete), "partial": [_s(n) for n in partial]}
        out.lines = [f"seeded {len(seeded)} records into {args.out} ({len(complete)} complete)"]


COMMANDS = {
    "check": _cmd_check,
    "list": _cmd_list,
    "bound": _cmd_bound,
    "dlower": _cmd_dlower,
    "witness": _cmd_witness,
    "zsig": _cmd_zsig,
    "omega-lower": _cmd_omega_lower,
    "primes": _cmd_primes,
    "orderstat": _cmd_orderstat,
    "carmichael": _cmd_carmichael,
    "pset": _cmd_pset,
    "saturate": _cmd_saturate,
    "conj": _cmd_conj,
    "divseq": _cmd_divseq,
    "cache": _cmd_cache,
}


def _config_from_args(args) -> RunConfig:
    text = Path(args.config).read_text() if getattr(args, "config", None) else None
    return RunConfig.from_sources(
        text,
        cache=getattr(args, "cache", None),
        trial_bound=getattr(args, "trial_bound", None),
        rho_iterations=getattr(args, "rho_iterations", None),
        size_ceiling_bits=getattr(args, "size_ceiling_bits", None),
        workers=getattr(args, "workers", None),
        format=getattr(args, "format", None),
    )


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        cache = _load_cache(cfg) if args.command != "cache" else None
        name = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
        out = Output(name, cfg)
        COMMANDS[args.command](args, out, cfg, cfg.budget(), cache)
        stdout.write(out.render())
        return 0
    except CounterexampleError as exc:
        print(f"novak: counterexample: {exc}", file=stderr)
        return 1
    except (CacheProductError, BudgetExceeded, SizeLimitExceeded) as exc:
        print(f"novak: {exc}", file=stderr)
        return 3
    except (InvalidArgument, CacheError, OSError) as exc:
        print(f"novak: {exc}", file=stderr)
        return 2
    except NovakError as exc:
        print(f"novak: {exc}", file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
