import json
from abc import ABC, abstractmethod
from dataclasses import dataclass
from types import TracebackType
from typing import Any

Record = dict[str, Any]
"""A JSON-compatible mapping; NaN values are allowed."""


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    stores: int = 0


class Cache(ABC):
    """Store of finished results keyed by the canonical JSON of their inputs.

    Subclasses provide raw access through `_load`/`_save`; `lookup` and `store` keep the counters.
    """

    def __init__(self) -> None:
        self.stats = CacheStats()

    def lookup(self, key: str) -> Record | None:
        """Return a copy of the record stored under `key`, or None."""
        record = self._load(key)
        if record is None:
            self.stats.misses += 1
        else:
            self.stats.hits += 1
        return record

    def store(self, key: str, record: Record) -> None:
        self._save(key, record)
        self.stats.stores += 1

    @abstractmethod
    def _load(self, key: str) -> Record | None:
        raise NotImplementedError

    @abstractmethod
    def _save(self, key: str, record: Record) -> None:
        raise NotImplementedError

    def close(self) -> None:
        """Release the underlying storage. A no-op unless the store holds external resources."""

    def __enter__(self) -> "Cache":
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()


def make_json_key(d: Record) -> str:
    """Canonical, human-readable key: sorted keys, no whitespace, floats in repr form."""
    return json.dumps(d, sort_keys=True, separators=(",", ":"))
