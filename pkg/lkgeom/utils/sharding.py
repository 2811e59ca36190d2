"""
Deterministic sharded Monte Carlo.

The sample budget is split across workers; worker ``w`` draws from
``default_rng([seed, w])`` and the shard results are merged in worker order,
so output depends only on (seed, workers), never on scheduling.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

T = TypeVar("T")


def shard_sizes(samples: int, workers: int) -> List[int]:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def worker_rng(seed: int, worker_index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, worker_index])


def run_sharded(
    kernel: Callable[[np.random.Generator, int], T],
    samples: int,
    seed: int,
    workers: int = 1,
) -> List[T]:
    """Run ``kernel(rng, n)`` on every shard; results come back in worker order."""
    workers = max(1, int(workers))
    sizes = shard_sizes(int(samples), workers)
    if workers == 1:
        return [kernel(worker_rng(seed, 0), sizes[0])]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(kernel, worker_rng(seed, w), sizes[w]) for w in range(workers)]
        return [f.result() for f in futures]


def sum_shards(parts: Sequence[np.ndarray]) -> np.ndarray:
    total = np.zeros_like(np.asarray(parts[0], dtype=float))
    for p in parts:
        total = total + np.asarray(p, dtype=float)
    return total


def chunked(n: int, chunk: int):
    """Yield chunk lengths summing to n."""
    done = 0
    while done < n:
        step = min(chunk, n - done)
        yield step
        done += step
