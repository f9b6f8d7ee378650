from bykov_lab.caches.disk_cache import DiskCache, DiskCacheConfig
from bykov_lab.caches.in_mem_cache import InMemCache

__all__ = ["DiskCache", "DiskCacheConfig", "InMemCache"]
