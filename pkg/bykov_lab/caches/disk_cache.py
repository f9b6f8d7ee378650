import json
from dataclasses import dataclass
from pathlib import Path

import diskcache

from bykov_lab.core.cache import Cache, Record


@dataclass(kw_only=True)
class DiskCacheConfig:
    db_dir: str | Path = Path("cache/spectra/")
    size_limit: int = 2**30
    """Bytes kept on disk before diskcache starts culling the least recently stored records."""


class DiskCache(Cache):
    """SQLite-backed store that outlives a sweep.

    Records are stored as JSON text, one row per key.
    """

    def __init__(self, config: DiskCacheConfig | None = None):
        super().__init__()
        self.config = config or DiskCacheConfig()
        self._store = diskcache.Cache(str(self.config.db_dir), size_limit=self.config.size_limit)

    def _load(self, key: str) -> Record | None:
        text = self._store.get(key, default=None)
        if text is None:
            return None
        record: Record = json.loads(text)
        return record

    def _save(self, key: str, record: Record) -> None:
        self._store.set(key, json.dumps(record))

    def close(self) -> None:
        self._store.close()
