"""Random states and subspaces for tests and randomized suites."""

from __future__ import annotations

import numpy as np

from .linalg import DensityMatrix


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density_matrix(
    dim: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Trace-normalized Wishart state; full rank unless ``rank`` caps it."""
    k = dim if rank is None else rank
    factor = complex_gaussian(rng, (dim, k))
    mat = factor @ factor.conj().T
    return DensityMatrix(mat / np.trace(mat).real)


def random_state_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    vec = complex_gaussian(rng, dim)
    return vec / np.linalg.norm(vec)


def random_pure_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    vec = random_state_vector(dim, rng)
    return DensityMatrix(np.outer(vec, vec.conj()))


def random_orthonormal(dim: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """dim x k matrix with orthonormal columns (QR of a complex Gaussian)."""
    q, _ = np.linalg.qr(complex_gaussian(rng, (dim, k)))
    return q[:, :k]
