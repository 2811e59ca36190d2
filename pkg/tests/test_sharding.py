"""
Tests for deterministic sharded Monte Carlo.
"""

import numpy as np
import pytest

from lkgeom.utils.sharding import chunked, run_sharded, shard_sizes, sum_shards, worker_rng


def _kernel(rng, count):
    return np.array([rng.random(count).sum(), count])


@pytest.mark.unit
class TestSharding:
    def test_sizes_cover_budget(self):
        assert shard_sizes(10, 3) == [4, 3, 3]
        assert sum(shard_sizes(100_001, 7)) == 100_001

    def test_chunks(self):
        assert list(chunked(10, 4)) == [4, 4, 2]
        assert list(chunked(0, 4)) == []

    def test_worker_streams_differ(self):
        a = worker_rng(5, 0).random(3)
        b = worker_rng(5, 1).random(3)
        assert not np.allclose(a, b)
        assert np.array_equal(a, worker_rng(5, 0).random(3))

    def test_negative_seed_accepted(self):
        worker_rng(-1, 0).random()

    def test_reproducible_per_worker_count(self):
        one = sum_shards(run_sharded(_kernel, 1_000, seed=9, workers=4))
        two = sum_shards(run_sharded(_kernel, 1_000, seed=9, workers=4))
        assert np.array_equal(one, two)
        assert one[1] == 1_000

    def test_single_worker_order(self):
        parts = run_sharded(_kernel, 10, seed=1, workers=1)
        assert len(parts) == 1
