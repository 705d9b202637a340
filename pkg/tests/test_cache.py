"""Tests for the LRU result cache."""

import threading

from src.core.cache import LRUResultCache


class TestLRUResultCache:
    """Tests for LRU cache functionality."""

    def test_cache_initialization(self):
        """Test cache initializes with correct capacity."""
        cache = LRUResultCache(capacity=5)
        assert cache.capacity == 5
        assert len(cache) == 0

    def test_cache_min_capacity(self):
        """Test cache enforces minimum capacity of 1."""
        cache = LRUResultCache(capacity=0)
        assert cache.capacity == 1

    def test_cache_put_and_get(self):
        """Test basic put and get operations."""
        cache = LRUResultCache(capacity=3)
        result = object()
        cache.put(("mu", 4, False), result)
        assert cache.get(("mu", 4, False)) is result

    def test_cache_get_nonexistent(self):
        """Test getting non-existent key returns None."""
        cache = LRUResultCache(capacity=3)
        assert cache.get(("mu", 4, False)) is None

    def test_cache_eviction(self):
        """Test that cache evicts oldest item when at capacity."""
        cache = LRUResultCache(capacity=2)
        cache.put(("mu", 1, False), "a")
        cache.put(("mu", 2, False), "b")
        cache.put(("mu", 3, False), "c")  # Should evict r=1

        assert cache.get(("mu", 1, False)) is None
        assert cache.get(("mu", 2, False)) == "b"
        assert cache.get(("mu", 3, False)) == "c"

    def test_cache_lru_ordering(self):
        """Test that a lookup protects an entry from eviction."""
        cache = LRUResultCache(capacity=2)
        cache.put("a", 1)
        cache.put("b", 2)
        cache.get("a")
        cache.put("c", 3)  # Should evict b

        assert "a" in cache
        assert "b" not in cache

    def test_cache_update_existing(self):
        """Test that re-putting a key replaces it without evicting."""
        cache = LRUResultCache(capacity=2)
        cache.put("a", 1)
        cache.put("b", 2)
        cache.put("a", 10)

        assert len(cache) == 2
        assert cache.get("a") == 10
        assert cache.get("b") == 2

    def test_cache_status(self):
        """Test status reporting."""
        cache = LRUResultCache(capacity=4)
        cache.put(("mu", 7, True), "x")
        cache.get(("mu", 7, True))
        cache.get("missing")

        status = cache.get_status()
        assert status["capacity"] == 4
        assert status["size"] == 1
        assert status["keys"] == ["('mu', 7, True)"]
        assert status["hits"] == 1
        assert status["misses"] == 1
        assert status["utilization"] == "1/4 (25%)"

    def test_cache_clear(self):
        """Test clear drops entries and counters."""
        cache = LRUResultCache(capacity=2)
        cache.put("a", 1)
        cache.get("a")
        cache.clear()

        assert len(cache) == 0
        assert cache.hits == 0
        assert cache.last_access_times == {}

    def test_cache_concurrent_puts(self):
        """Test concurrent writers never exceed capacity."""
        cache = LRUResultCache(capacity=8)

        def worker(offset):
            for i in range(200):
                cache.put(offset * 1000 + i, i)
                cache.get(offset * 1000 + i)

        threads = [threading.Thread(target=worker, args=(t,)) for t in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        assert len(cache) == 8
        assert len(cache.last_access_times) == 8
