"""
Unit tests for Grassmannian sampling and frame helpers.
"""

import numpy as np
import pytest
from scipy.stats import chisquare

from lkgeom.adapter.error.error import DomainError
from lkgeom.service.grassmann import (
    complete_frame,
    complete_frames,
    random_rotation,
    sample_frames,
    sample_grassmannian,
)


@pytest.mark.unit
class TestSampleGrassmannian:
    """Orthonormality, determinism and the invariant measure."""

    def test_orthonormal_columns(self):
        U = sample_grassmannian(2, 4, seed=1)
        assert U.shape == (4, 2)
        assert np.allclose(U.T @ U, np.eye(2), atol=1e-12)

    def test_same_seed_same_frame(self):
        assert np.array_equal(sample_grassmannian(3, 5, seed=7), sample_grassmannian(3, 5, seed=7))

    def test_zero_dimensional_plane(self):
        assert sample_grassmannian(0, 3).shape == (3, 0)

    def test_bad_dimensions(self):
        with pytest.raises(DomainError):
            sample_grassmannian(4, 3)

    def test_lines_are_isotropic(self):
        """E[u_1^2] = 1/n for a uniform line in R^n."""
        rng = np.random.default_rng(3)
        frames = sample_frames(1, 3, 20000, rng)
        m = float(np.mean(frames[:, 0, 0] ** 2))
        assert m == pytest.approx(1.0 / 3.0, abs=0.015)

    def test_line_angles_are_uniform(self):
        frames = np.array([sample_grassmannian(1, 2, seed)[:, 0] for seed in range(3200)])
        angles = np.arctan2(frames[:, 1], frames[:, 0]) % np.pi
        counts, _ = np.histogram(angles, bins=16, range=(0.0, np.pi))
        assert chisquare(counts).pvalue > 1e-3


@pytest.mark.unit
class TestFrameCompletion:
    def test_complement_is_orthogonal(self):
        U = sample_grassmannian(2, 5, seed=2)
        W = complete_frame(U)
        assert W.shape == (5, 3)
        assert np.allclose(U.T @ W, 0.0, atol=1e-12)
        assert np.allclose(W.T @ W, np.eye(3), atol=1e-12)

    def test_batched_completion(self):
        rng = np.random.default_rng(4)
        U = sample_frames(1, 3, 10, rng)
        W = complete_frames(U)
        assert W.shape == (10, 3, 2)
        assert np.allclose(np.einsum("cnk,cnl->ckl", U, W), 0.0, atol=1e-12)

    def test_full_frame_has_empty_complement(self):
        assert complete_frame(np.eye(3)).shape == (3, 0)


@pytest.mark.unit
class TestRandomRotation:
    def test_special_orthogonal(self):
        R = random_rotation(3, seed=11)
        assert np.allclose(R.T @ R, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0)
