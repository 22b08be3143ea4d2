"""Write-once JSON result cache shared by concurrent workers."""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from pathlib import Path


def _encode(value):
    if isinstance(value, float) and math.isinf(value):
        return {"__inf__": 1 if value > 0 else -1}
    if isinstance(value, dict):
        return {k: _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def _decode(value):
    if isinstance(value, dict):
        if set(value) == {"__inf__"}:
            return math.inf * value["__inf__"]
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


class ResultCache:
    """One JSON file per record, named by the SHA-256 of the key.

    Writes go to a temporary file in the same directory followed by an atomic
    rename, so readers never see partial records and racing writers of the
    same key leave one complete copy.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        self.hits = 0
        self.misses = 0
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def digest(operation: str, key: str, params) -> str:
        blob = json.dumps([operation, key, _encode(params)], sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, digest: str) -> Path:
        return self.dir / f"{digest}.json"

    def get(self, operation: str, key: str, params):
        if self.dir is None:
            return None
        path = self._path(self.digest(operation, key, params))
        try:
            with open(path) as fh:
                record = json.load(fh)
        except (FileNotFoundError, json.JSONDecodeError):
            self.misses += 1
            return None
        self.hits += 1
        return _decode(record["value"])

    def put(self, operation: str, key: str, params, value) -> None:
        if self.dir is None:
            return
        digest = self.digest(operation, key, params)
        record = {"operation": operation, "key": key, "params": _encode(params), "value": _encode(value)}
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh, sort_keys=True)
            os.replace(tmp, self._path(digest))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def fetch(self, operation: str, key: str, params, compute):
        value = self.get(operation, key, params)
        if value is None:
            value = compute()
            self.put(operation, key, params, value)
        return value
