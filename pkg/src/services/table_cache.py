"""
Table Cache Service
Memoizes representation matrices, Clebsch-Gordan tables and twist matrices.
Concurrent readers never block; builders are serialized per cache.
"""

import logging
import threading
from typing import Any, Callable, Dict, Hashable, Optional

from src.utils.logging import log_table_activity

logger = logging.getLogger(__name__)


class TableCache:
    """In-process cache for immutable computed tables"""

    def __init__(self, name: str):
        self.name = name
        self._entries: Dict[Hashable, Any] = {}
        # Reentrant: a builder may consult the same cache for smaller keys
        self._lock = threading.RLock()
        # Leaf lock for the counters; never held while building
        self._count_lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[Any]:
        """
        Get a cached table

        Args:
            key: Hashable table key

        Returns:
            The cached value, or None if absent
        """
        return self._entries.get(key)

    def get_or_build(self, key: Hashable, builder: Callable[[], Any]) -> Any:
        """
        Get a cached table, building and storing it on a miss

        Args:
            key: Hashable table key
            builder: Zero-argument callable producing the table

        Returns:
            The cached or freshly built value
        """
        value = self._entries.get(key)
        if value is not None:
            self._count(hit=True)
            log_table_activity(self.name, key, "hit")
            return value

        with self._lock:
            value = self._entries.get(key)
            if value is not None:
                self._count(hit=True)
                return value
            self._count(hit=False)
            value = builder()
            self._entries[key] = value
            log_table_activity(self.name, key, "built")
            return value

    def _count(self, hit: bool):
        with self._count_lock:
            if hit:
                self.hits += 1
            else:
                self.misses += 1

    def clear(self) -> int:
        """
        Drop every cached entry

        Returns:
            int: Number of entries removed
        """
        with self._lock:
            count = len(self._entries)
            self._entries.clear()
            logger.debug(f"Cache {self.name} cleared ({count} entries)")
            return count

    def stats(self) -> Dict[str, Any]:
        with self._count_lock:
            hits, misses = self.hits, self.misses
        return {
            "name": self.name,
            "entries": len(self._entries),
            "hits": hits,
            "misses": misses,
        }


_registry: Dict[str, TableCache] = {}


def get_cache(name: str) -> TableCache:
    """Named process-wide cache"""
    cache = _registry.get(name)
    if cache is None:
        cache = _registry.setdefault(name, TableCache(name))
    return cache


def cache_stats() -> Dict[str, Dict[str, Any]]:
    return {name: cache.stats() for name, cache in sorted(_registry.items())}


def clear_all_caches():
    for cache in _registry.values():
        cache.clear()
