import math
from pathlib import Path

import pytest

from bykov_lab.caches.disk_cache import DiskCache, DiskCacheConfig
from bykov_lab.caches.in_mem_cache import InMemCache
from bykov_lab.core.cache import Record, make_json_key

RECORD: Record = {
    "tau1": 0.3,
    "tau2": 0.0,
    "exponents": [0.001, -0.002, -1.0],
    "radial": math.nan,
    "nonneg": 2,
    "color": "yellow",
    "error": None,
}


@pytest.fixture
def cache(tmp_path: Path) -> DiskCache:
    return DiskCache(DiskCacheConfig(db_dir=tmp_path))


def _same(a: Record, b: Record) -> bool:
    return a.keys() == b.keys() and all(
        (isinstance(a[k], float) and math.isnan(a[k]) and math.isnan(b[k])) or a[k] == b[k] for k in a
    )


def test_store_and_lookup(cache: DiskCache) -> None:
    key = make_json_key({"params": {"tau1": 0.3, "tau2": 0.0}, "x0": [0.1, 0.1, 0.0, -0.99]})
    cache.store(key, RECORD)
    found = cache.lookup(key)
    assert found is not None
    assert _same(found, RECORD)
    assert (cache.stats.hits, cache.stats.misses, cache.stats.stores) == (1, 0, 1)


def test_lookup_with_no_match(cache: DiskCache) -> None:
    assert cache.lookup(make_json_key({"tau1": 0.5})) is None
    assert cache.stats.misses == 1


def test_records_survive_reopening(tmp_path: Path) -> None:
    config = DiskCacheConfig(db_dir=tmp_path)
    with DiskCache(config) as first:
        first.store("k", RECORD)
    with DiskCache(config) as second:
        found = second.lookup("k")
    assert found is not None and found["color"] == "yellow"


def test_key_is_canonical() -> None:
    assert make_json_key({"b": 1, "a": [0.1, 2]}) == make_json_key({"a": [0.1, 2], "b": 1}) == '{"a":[0.1,2],"b":1}'


def test_in_mem_cache_returns_copies() -> None:
    cache = InMemCache()
    cache.store("k", RECORD)
    found = cache.lookup("k")
    assert found is not None
    found["color"] = "red"
    again = cache.lookup("k")
    assert again is not None and again["color"] == "yellow"
    assert (cache.stats.hits, cache.stats.stores) == (2, 1)
