"""
Run-wide counters and kernel timings.

Monte Carlo kernels add to ``samples_drawn``, ``samples_resampled`` and
``planes_rejected``; ``track_time`` wraps each public estimator. Shards of one
run share the collector, so every update takes the lock.
"""

import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import datetime
from functools import wraps
from typing import Dict, Iterator


@dataclass
class _Timing:
    count: int = 0
    total_ms: float = 0.0
    min_ms: float = float("inf")
    max_ms: float = 0.0

    def add(self, elapsed_ms: float) -> None:
        self.count += 1
        self.total_ms += elapsed_ms
        self.min_ms = min(self.min_ms, elapsed_ms)
        self.max_ms = max(self.max_ms, elapsed_ms)

    def stats(self) -> Dict[str, float]:
        if not self.count:
            return {"count": 0, "avg": 0, "min": 0, "max": 0}
        return {
            "count": self.count,
            "avg": round(self.total_ms / self.count, 2),
            "min": round(self.min_ms, 2),
            "max": round(self.max_ms, 2),
        }


class MetricsCollector:
    def __init__(self):
        self._lock = threading.Lock()
        self._counters: Dict[str, int] = {}
        self._timings: Dict[str, _Timing] = {}

    def increment(self, counter: str, value: int = 1) -> None:
        with self._lock:
            self._counters[counter] = self._counters.get(counter, 0) + int(value)

    def record_timing(self, name: str, elapsed_ms: float) -> None:
        with self._lock:
            self._timings.setdefault(name, _Timing()).add(elapsed_ms)

    def get_counter(self, counter: str) -> int:
        with self._lock:
            return self._counters.get(counter, 0)

    def get_timer_stats(self, name: str) -> Dict[str, float]:
        with self._lock:
            return self._timings.get(name, _Timing()).stats()

    def rejection_rate(self) -> float:
        """Share of drawn samples that had to be redrawn as non-generic."""
        drawn = self.get_counter("samples_drawn")
        return self.get_counter("samples_resampled") / drawn if drawn else 0.0

    def get_summary(self) -> Dict:
        with self._lock:
            counters = dict(self._counters)
            timers = {k: t.stats() for k, t in self._timings.items()}
        return {"timestamp": datetime.now().isoformat(), "counters": counters, "timers": timers}

    def reset(self) -> None:
        with self._lock:
            self._counters.clear()
            self._timings.clear()


metrics = MetricsCollector()


@contextmanager
def timed(name: str) -> Iterator[None]:
    start = time.perf_counter()
    try:
        yield
    finally:
        metrics.record_timing(name, (time.perf_counter() - start) * 1000)


def track_time(name: str):
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            with timed(name):
                return func(*args, **kwargs)

        return wrapper

    return decorator
