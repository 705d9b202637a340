"""LRU cache for computed digit-sum distributions."""

import threading
import time
from collections import OrderedDict
from typing import Any, Dict, Hashable, List, Optional

from src.core.logging import logger


class LRUResultCache(OrderedDict):
    """LRU cache keyed by the arguments of an exact computation.

    Distributions for large r cost F_{l+2} + r carry-engine steps, so the
    CLI's verify pass and the HTTP routes share one cache.
    """

    def __init__(self, capacity: int):
        """Initialize cache with given capacity.

        Args:
            capacity: Maximum number of results to keep
        """
        super().__init__()
        self.capacity = max(1, capacity)
        self.hits = 0
        self.misses = 0
        self.last_access_times: Dict[Hashable, float] = {}
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        """Get a result and mark it most recently used.

        Args:
            key: Cache key (e.g. ("mu", 4, False))

        Returns:
            Cached value or None if not found
        """
        with self._lock:
            if key in self:
                self.move_to_end(key)
                self.last_access_times[key] = time.time()
                self.hits += 1
                logger.debug(f"Cache HIT: {key} ({len(self)}/{self.capacity} entries)")
                return super().__getitem__(key)
            self.misses += 1
            logger.debug(f"Cache MISS: {key} ({len(self)}/{self.capacity} entries)")
            return None

    def put(self, key: Hashable, value: Any) -> None:
        """Store a result, evicting the least recently used entry when full.

        Args:
            key: Cache key
            value: Result to cache
        """
        with self._lock:
            exists = key in self
            super().__setitem__(key, value)
            self.move_to_end(key)
            self.last_access_times[key] = time.time()

            if not exists and len(self) > self.capacity:
                old_key, _ = self.popitem(last=False)
                self.last_access_times.pop(old_key, None)
                logger.debug(f"Cache full, evicted {old_key} to make room for {key}")

    def clear(self) -> None:
        with self._lock:
            super().clear()
            self.last_access_times.clear()
            self.hits = 0
            self.misses = 0

    def get_status(self) -> dict:
        """Get current cache status.

        Returns:
            Dictionary with capacity, size, keys and hit counters
        """
        keys: List[str] = [str(k) for k in self.keys()]
        return {
            "capacity": self.capacity,
            "size": len(self),
            "keys": keys,
            "hits": self.hits,
            "misses": self.misses,
            "utilization": f"{len(self)}/{self.capacity} ({int(len(self) / self.capacity * 100)}%)",
        }
