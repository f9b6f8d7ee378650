from bykov_lab.core.cache import Cache, Record


class InMemCache(Cache):
    """Dict-backed store local to one process."""

    def __init__(self) -> None:
        super().__init__()
        self._records: dict[str, Record] = {}

    def _load(self, key: str) -> Record | None:
        record = self._records.get(key)
        return None if record is None else dict(record)

    def _save(self, key: str, record: Record) -> None:
        self._records[key] = dict(record)
