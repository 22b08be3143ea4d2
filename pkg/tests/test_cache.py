from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor

from topmatch.cache import ResultCache


def test_disabled_cache(tmp_path):
    c = ResultCache(None)
    c.put("op", "k", [1], 5)
    assert c.get("op", "k", [1]) is None


def test_round_trip_with_infinity(tmp_path):
    c = ResultCache(tmp_path)
    value = {"eta": math.inf, "list": [1, -math.inf, "x"]}
    c.put("eta", "g", {"n": 3}, value)
    assert c.get("eta", "g", {"n": 3}) == value
    assert c.hits == 1


def test_key_sensitivity(tmp_path):
    c = ResultCache(tmp_path)
    c.put("op", "k", [1], 1)
    assert c.get("op", "k", [2]) is None
    assert c.get("other", "k", [1]) is None
    assert c.misses == 2


def test_one_file_per_record(tmp_path):
    c = ResultCache(tmp_path)
    for i in range(5):
        c.put("op", "k", [i], i)
    files = sorted(os.listdir(tmp_path))
    assert len(files) == 5 and all(f.endswith(".json") and len(f) == 64 + 5 for f in files)
    rec = json.loads((tmp_path / files[0]).read_text())
    assert set(rec) == {"operation", "key", "params", "value"}


def test_fetch_computes_once(tmp_path):
    c = ResultCache(tmp_path)
    calls = []
    for _ in range(3):
        assert c.fetch("op", "k", [], lambda: calls.append(1) or 42) == 42
    assert len(calls) == 1


def test_corrupt_record_is_a_miss(tmp_path):
    c = ResultCache(tmp_path)
    c.put("op", "k", [], 1)
    path = tmp_path / f"{c.digest('op', 'k', [])}.json"
    path.write_text("{trunc")
    assert c.get("op", "k", []) is None


def test_concurrent_writers(tmp_path):
    c = ResultCache(tmp_path)
    with ThreadPoolExecutor(8) as pool:
        list(pool.map(lambda i: c.put("op", "same", [], {"v": 7}), range(64)))
    assert os.listdir(tmp_path) == [f"{c.digest('op', 'same', [])}.json"]
    assert c.get("op", "same", []) == {"v": 7}
