"""Dense complex linear-algebra kernels.

Everything else in the package treats these functions as its oracle, so they
are kept deliberately thin: validation plus a call into LAPACK (via numpy).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.stats import unitary_group

from .errors import InputDomainError

__all__ = [
    "SingularSpectrum",
    "as_matrix",
    "singular_values",
    "smallest_singular_value",
    "operator_norm",
    "norm_2x2",
    "eigenvalues",
    "numerical_rank",
    "multiset_distance",
    "random_unitary",
]


def as_matrix(M) -> np.ndarray:
    """Validate ``M`` as a square, finite, complex matrix and return a complex128 copy."""
    try:
        arr = np.array(M, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise InputDomainError(f"cannot interpret input as a complex matrix: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InputDomainError(f"expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputDomainError("matrix has non-finite entries")
    return arr


@dataclass(frozen=True)
class SingularSpectrum:
    values: np.ndarray
    left_vector_min: np.ndarray
    right_vector_min: np.ndarray

    @property
    def s_max(self) -> float:
        return float(self.values[0])

    @property
    def s_min(self) -> float:
        return float(self.values[-1])


def singular_values(M) -> SingularSpectrum:
    """All singular values (weakly decreasing) plus the unit singular vectors of the smallest."""
    M = as_matrix(M)
    U, _, Vh = np.linalg.svd(M)
    # values from the no-vector driver so they agree bit-for-bit with operator_norm / smallest_singular_value
    s = np.linalg.svd(M, compute_uv=False)
    return SingularSpectrum(values=s, left_vector_min=U[:, -1].copy(), right_vector_min=Vh[-1].conj())


def smallest_singular_value(M) -> float:
    M = as_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def operator_norm(M) -> float:
    """Spectral norm, i.e. the largest singular value."""
    M = as_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False)[0])


def norm_2x2(M) -> float:
    """Closed-form spectral norm of a 2x2 matrix from the trace and determinant of M*M.

    ``||M||**2 = (tr + sqrt(tr**2 - 4 det)) / 2`` with ``tr = Tr(M*M)`` and
    ``det = det(M*M)``. The discriminant is evaluated as
    ``(G11 - G22)**2 + 4 |G12|**2`` for ``G = M M*``, which is the same number
    without the cancellation that hits equal singular values.
    """
    M = as_matrix(M)
    if M.shape != (2, 2):
        raise InputDomainError(f"norm_2x2 needs a 2x2 matrix, got {M.shape}")
    (a, b), (c, d) = M
    g11 = abs(a) ** 2 + abs(b) ** 2
    g22 = abs(c) ** 2 + abs(d) ** 2
    g12 = a * np.conj(c) + b * np.conj(d)
    disc = (g11 - g22) ** 2 + 4.0 * abs(g12) ** 2
    return float(np.sqrt((g11 + g22 + np.sqrt(disc)) / 2.0))


def eigenvalues(M) -> np.ndarray:
    """Eigenvalues with algebraic multiplicity (backward stable, LAPACK ``zgeev``)."""
    M = as_matrix(M)
    return np.linalg.eigvals(M)


def numerical_rank(M, tol: float | None = None) -> int:
    """Number of singular values above ``tol`` (default ``n * 1e-12 * ||M||``)."""
    M = as_matrix(M)
    s = np.linalg.svd(M, compute_uv=False)
    if tol is None:
        tol = M.shape[0] * 1e-12 * s[0]
    if tol < 0:
        raise InputDomainError("tol must be nonnegative")
    return int(np.sum(s > tol))


def multiset_distance(a, b) -> float:
    """Largest pairwise gap under the minimum-weight perfect matching of two multisets.

    Eigenvalue ordering is not canonical, so comparisons go through an
    optimal assignment rather than sorting.
    """
    a = np.ravel(np.asarray(a, dtype=complex))
    b = np.ravel(np.asarray(b, dtype=complex))
    if a.shape != b.shape:
        raise ValueError(f"multisets differ in size: {a.size} vs {b.size}")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary."""
    if n == 1:
        return np.exp(2j * np.pi * rng.random((1, 1)))
    return unitary_group.rvs(n, random_state=rng)
