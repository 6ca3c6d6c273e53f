"""Dense complex Hermitian linear algebra for finite-dimensional hypothesis states.

Everything here is a pure function over immutable values; instances are safe
to share across workers.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionLimitError

HERMITICITY_ATOL = 1e-12
EIGENVALUE_ZERO_RTOL = 1e-12
DENSITY_TRACE_ATOL = 1e-10
DENSITY_EIG_FLOOR = -1e-10
DEFAULT_DENSE_LIMIT = 16384
DENSE_LIMIT_ENV = "QMHT_DENSE_LIMIT"


def dense_limit() -> int:
    """Largest dense dimension d**n the tensor-power machinery will touch."""
    raw = os.environ.get(DENSE_LIMIT_ENV)
    if raw is None:
        return DEFAULT_DENSE_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{DENSE_LIMIT_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError(f"{DENSE_LIMIT_ENV} must be positive, got {value}")
    return value


class HermitianMatrix:
    """A square complex matrix equal to its conjugate transpose.

    Construction symmetrizes the input; inputs whose asymmetry exceeds
    1e-12 (relative to the largest entry) are rejected.
    """

    __slots__ = ("mat",)

    def __init__(self, mat) -> None:
        arr = np.array(mat, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"expected a nonempty square matrix, got shape {arr.shape}")
        scale = max(1.0, float(np.abs(arr).max()))
        asym = float(np.abs(arr - arr.conj().T).max())
        if asym > HERMITICITY_ATOL * scale:
            raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
        out = (arr + arr.conj().T) / 2.0
        out.setflags(write=False)
        self.mat = out

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


class DensityMatrix:
    """Unit-trace positive semidefinite Hermitian matrix: one hypothesis state."""

    __slots__ = ("base", "_spectrum")

    def __init__(self, mat) -> None:
        base = mat if isinstance(mat, HermitianMatrix) else HermitianMatrix(mat)
        trace = float(np.trace(base.mat).real)
        if abs(trace - 1.0) > DENSITY_TRACE_ATOL:
            raise ValueError(f"trace must equal 1 within {DENSITY_TRACE_ATOL}, got {trace!r}")
        low = float(np.linalg.eigvalsh(base.mat)[0])
        if low < DENSITY_EIG_FLOOR:
            raise ValueError(f"matrix has negative eigenvalue {low:.3e}")
        self.base = base
        self._spectrum = None

    @property
    def mat(self) -> np.ndarray:
        return self.base.mat

    @property
    def dim(self) -> int:
        return self.base.dim

    def spectrum(self) -> "SpectralDecomposition":
        """Cached spectral decomposition, tiny negative eigenvalues clamped to zero."""
        if self._spectrum is None:
            dec = spectral_decompose(self.base)
            vals = np.maximum(dec.eigenvalues, 0.0)
            vals.setflags(write=False)
            self._spectrum = SpectralDecomposition(vals, dec.vectors)
        return self._spectrum

    def rank(self) -> int:
        return len(self.spectrum().positive_indices())

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns.

    Zero eigenvalues are kept with their multiplicity, so ``vectors`` is always
    a full unitary basis of the source space.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ self.vectors.conj().T

    def positive_indices(self) -> np.ndarray:
        """Indices of eigenvalues strictly above the relative zero threshold."""
        return np.flatnonzero(self.eigenvalues > eigenvalue_zero_threshold(self.eigenvalues))


def eigenvalue_zero_threshold(eigenvalues: np.ndarray) -> float:
    """An eigenvalue at or below this counts as zero (1e-12 times the largest magnitude)."""
    arr = np.asarray(eigenvalues, dtype=float)
    top = float(np.abs(arr).max()) if arr.size else 0.0
    return EIGENVALUE_ZERO_RTOL * top


def _normalize_phase(vec: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first component above 1e-12 is real and positive."""
    nonzero = np.flatnonzero(np.abs(vec) > 1e-12)
    if nonzero.size:
        pivot = vec[nonzero[0]]
        vec = vec * (pivot.conjugate() / abs(pivot))
    return vec


def _lex_key(vec: np.ndarray) -> tuple:
    return tuple(float(part) for re, im in zip(vec.real, vec.imag) for part in (re, im))


def _tie_break_order(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Reorder equal-eigenvalue runs by ascending lexicographic key of the vectors."""
    tol = EIGENVALUE_ZERO_RTOL * max(1.0, float(np.abs(values).max()))
    order: list[int] = []
    start = 0
    while start < len(values):
        stop = start
        while stop + 1 < len(values) and values[start] - values[stop + 1] <= tol:
            stop += 1
        group = list(range(start, stop + 1))
        if len(group) > 1:
            group.sort(key=lambda j: _lex_key(vectors[:, j]))
        order.extend(group)
        start = stop + 1
    return np.array(order, dtype=np.intp)


def spectral_decompose(h: HermitianMatrix) -> SpectralDecomposition:
    """Eigendecomposition in descending eigenvalue order with deterministic conventions.

    Every eigenvector gets the positive-first-component phase; runs of equal
    eigenvalues are ordered by the ascending lexicographic key of the
    phase-normalized vectors, making repeated runs reproducible.
    """
    values, vectors = np.linalg.eigh(h.mat)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    for k in range(vectors.shape[1]):
        vectors[:, k] = _normalize_phase(vectors[:, k])
    order = _tie_break_order(values, vectors)
    values = values[order]
    vectors = vectors[:, order]
    values.setflags(write=False)
    vectors.setflags(write=False)
    return SpectralDecomposition(values, vectors)


def fractional_power(rho: DensityMatrix, t: float) -> HermitianMatrix:
    """Support-restricted matrix power: eigenvalues map to lam**t with 0**t == 0.

    The convention holds for every t in [0, 1]; at t == 0 the result is the
    support projection.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"exponent must lie in [0, 1], got {t}")
    dec = rho.spectrum()
    threshold = eigenvalue_zero_threshold(dec.eigenvalues)
    powered = np.zeros_like(dec.eigenvalues)
    positive = dec.eigenvalues > threshold
    powered[positive] = dec.eigenvalues[positive] ** t
    return HermitianMatrix((dec.vectors * powered) @ dec.vectors.conj().T)


def positive_part_and_support(a: HermitianMatrix) -> tuple[HermitianMatrix, HermitianMatrix]:
    """Strictly positive spectral part of ``a`` and the projector onto its eigenspace."""
    dec = spectral_decompose(a)
    threshold = eigenvalue_zero_threshold(dec.eigenvalues)
    keep = dec.eigenvalues > threshold
    kept = dec.vectors[:, keep]
    positive = (kept * dec.eigenvalues[keep]) @ kept.conj().T
    support = kept @ kept.conj().T
    dim = a.dim
    if not keep.any():
        positive = np.zeros((dim, dim), dtype=complex)
        support = np.zeros((dim, dim), dtype=complex)
    return HermitianMatrix(positive), HermitianMatrix(support)


@dataclass(frozen=True)
class PowerEigenpair:
    """One eigenvalue of an n-fold tensor power, stored as a product plus index tuple.

    The implied eigenvector is the Kronecker product of the indexed base
    eigenvectors and is never materialized here.
    """

    value: float
    index_tuple: tuple[int, ...]


def iter_power_eigenpairs(eigenvalues: Sequence[float], n: int) -> Iterator[PowerEigenpair]:
    """Yield all d**n product eigenpairs in descending value order.

    A max-heap merges the index lattice lazily; equal values come out in
    ascending index-tuple order.
    """
    values = np.asarray(eigenvalues, dtype=float)
    d = len(values)
    if n < 1:
        raise ValueError(f"copy number must be positive, got {n}")
    if d < 1:
        return
    start = (0,) * n
    heap = [(-math.prod(values[j] for j in start), start)]
    seen = {start}
    while heap:
        negative, tup = heapq.heappop(heap)
        yield PowerEigenpair(-negative, tup)
        for t in range(n):
            j = tup[t] + 1
            if j < d:
                child = tup[:t] + (j,) + tup[t + 1:]
                if child not in seen:
                    seen.add(child)
                    heapq.heappush(heap, (-math.prod(values[k] for k in child), child))


def kron_power_eigenpairs(
    rho: DensityMatrix, n: int, limit: int | None = None
) -> list[PowerEigenpair]:
    """All eigenpairs of the n-fold tensor power of ``rho``, descending by value."""
    cap = dense_limit() if limit is None else limit
    if rho.dim ** n > cap:
        raise DimensionLimitError(f"{rho.dim}**{n} exceeds the dense limit {cap}")
    return list(iter_power_eigenpairs(rho.spectrum().eigenvalues, n))


def power_eigenvector(dec: SpectralDecomposition, index_tuple: Sequence[int]) -> np.ndarray:
    """Materialize the Kronecker-product eigenvector for one index tuple."""
    out = np.ones(1, dtype=complex)
    for j in index_tuple:
        out = np.kron(out, dec.vectors[:, j])
    return out


def gram_min_eigenvalue(vectors: Sequence[np.ndarray]) -> tuple[HermitianMatrix, float]:
    """Gram matrix of a vector family and its smallest eigenvalue."""
    if len(vectors) == 0:
        raise ValueError("need at least one vector")
    stacked = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    gram = HermitianMatrix(stacked.conj().T @ stacked)
    lam_min = float(np.linalg.eigvalsh(gram.mat)[0])
    return gram, lam_min
