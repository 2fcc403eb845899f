import pytest
from hypothesis import given, settings, strategies as st

from novak import arith
from novak.cache import FactorCache, format_record, parse_record, refine
from novak.errors import CacheError, CacheFormatError, CacheProductError


def test_parse_complete_and_partial():
    n, fac = parse_record("2+ 9: 3^3 19")
    assert n == 9 and fac.as_dict() == {3: 3, 19: 1} and fac.complete
    n, fac = parse_record("2+ 18: 5^1 C52429")
    assert n == 18 and not fac.complete and fac.cofactor == 52429 == 13 * 37 * 109
    n, fac = parse_record("2+ 3: C9")
    assert n == 3 and fac.factors == () and fac.cofactor == 9


@pytest.mark.parametrize(
    "line, exc",
    [
        ("2+ 9 3^3 19", CacheFormatError),
        ("2+ 9: 3^3 x", CacheFormatError),
        ("2+ 9: 9^1 57", CacheFormatError),
        ("2+ 9: 3^2 3^1 19", CacheFormatError),
        ("2+ 3: 3", CacheProductError),
        ("2+ 2: C5", CacheFormatError),
        ("2+ 9: 3^3 C19", CacheFormatError),
    ],
)
def test_parse_rejects(line, exc):
    with pytest.raises(exc):
        parse_record(line, 4, "f.txt")


def test_error_carries_line_number():
    with pytest.raises(CacheError) as info:
        FactorCache.parse("# header\n2+ 1: 3\n2+ 2: 7\n")
    assert info.value.line_no == 3
    assert "3" in str(info.value)


@given(st.integers(min_value=1, max_value=70))
@settings(deadline=None)
def test_format_parse_roundtrip(n):
    fac = arith.factor_two_power_plus_one(n)
    line = format_record(n, fac)
    assert parse_record(line) == (n, fac)


def test_refine_combines_partials():
    value = 2**18 + 1  # 5 * 13 * 37 * 109
    a = arith.FactoredInteger.from_parts(value, {5: 1}, value // 5)
    b = arith.FactoredInteger.from_parts(value, {13: 1}, value // 13)
    r = refine(a, b)
    assert r.as_dict() == {5: 1, 13: 1} and r.cofactor == 37 * 109


def test_merge_conflicts_and_refine(tmp_path):
    value = 2**18 + 1
    a = FactorCache({18: arith.FactoredInteger.from_parts(value, {5: 1}, value // 5)})
    b = FactorCache({18: arith.FactoredInteger.from_parts(value, {13: 1}, value // 13)})
    with pytest.raises(CacheError):
        a.merge(b)
    merged = a.merge(b, allow_refine=True)
    assert merged.get(18).as_dict() == {5: 1, 13: 1}
    same = a.merge(FactorCache({18: a.get(18)}))
    assert len(same) == 1


def test_save_load_and_coverage(tmp_path):
    cache = FactorCache()
    for n in range(1, 30):
        cache.put(n, arith.factor_two_power_plus_one(n))
    path = tmp_path / "c.txt"
    cache.save(path)
    loaded = FactorCache.load(path)
    assert loaded.dumps() == cache.dumps()
    complete, partial = loaded.coverage()
    assert complete == list(range(1, 30)) and partial == []
    assert loaded.verify() == list(range(1, 30))


def test_cache_used_by_factorizer():
    value = 2**81 + 1
    fac = arith.factor_two_power_plus_one(81)
    cache = FactorCache({81: fac})
    assert arith.factor_two_power_plus_one(81, cache=cache) == fac
    assert 272010961 in cache.candidate_primes(value)


def test_from_env(tmp_path, monkeypatch):
    path = tmp_path / "env.txt"
    path.write_text("2+ 3: 3^2\n")
    monkeypatch.setenv("NOVAK_CACHE", str(path))
    assert FactorCache.from_env().get(3).as_dict() == {3: 2}
    monkeypatch.delenv("NOVAK_CACHE")
    assert FactorCache.from_env() is None
