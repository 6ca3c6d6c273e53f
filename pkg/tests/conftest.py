import numpy as np
import pytest

from qmht.linalg import DensityMatrix


def pure(vec) -> DensityMatrix:
    v = np.asarray(vec, dtype=complex)
    v = v / np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()))


def diagonal(probs) -> DensityMatrix:
    return DensityMatrix(np.diag(np.asarray(probs, dtype=float)).astype(complex))


@pytest.fixture
def zero_state():
    return pure([1.0, 0.0])


@pytest.fixture
def one_state():
    return pure([0.0, 1.0])


@pytest.fixture
def plus_state():
    return pure([1.0, 1.0])
