"""Closed-form pseudospectra of 2x2 matrices.

A non-diagonalizable 2x2 matrix has an exactly circular pseudospectrum of
radius ``sqrt(C eps + eps**2)``. For two distinct eigenvalues the boundary is
the zero set of a quartic in ``|z - lambda_1|`` and ``|z - lambda_2|``, and the
component radii along the line through the eigenvalues have closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InputDomainError, MergedComponentsError
from .numkernel import as_matrix, operator_norm


class Kind(str, Enum):
    DEFECTIVE = "Defective"
    DISTINCT = "DistinctDiagonalizable"
    SCALAR = "ScalarMultipleOfIdentity"


@dataclass(frozen=True)
class TwoByTwoClassification:
    kind: Kind
    lambda1: complex
    lambda2: complex
    V: np.ndarray
    theta: float  # nan unless kind is DISTINCT
    matrix: np.ndarray

    @property
    def gamma(self) -> complex:
        return self.lambda1 - self.lambda2

    @property
    def y(self) -> float:
        return abs(self.gamma)


def _null_vector(M: np.ndarray) -> np.ndarray:
    """Unit kernel vector of a rank-one 2x2 matrix, taken from its larger row."""
    cands = [np.array([M[0, 1], -M[0, 0]]), np.array([M[1, 1], -M[1, 0]])]
    v = max(cands, key=np.linalg.norm)
    return v / np.linalg.norm(v)


def eigenvector_angle(V: np.ndarray) -> float:
    """Angle in (0, pi/2] between the columns of ``V``.

    ``sin = |det V| / (|v1||v2|)`` and ``cos = |v1* v2| / (|v1||v2|)``; the
    complex Lagrange identity makes the two consistent.
    """
    v1, v2 = V[:, 0], V[:, 1]
    return math.atan2(abs(v1[0] * v2[1] - v2[0] * v1[1]), abs(np.vdot(v1, v2)))


def classify(A) -> TwoByTwoClassification:
    A = as_matrix(A)
    if A.shape != (2, 2):
        raise InputDomainError(f"classify needs a 2x2 matrix, got {A.shape}")
    tol = 1e-10 * (1.0 + operator_norm(A) ** 2)
    tr = A[0, 0] + A[1, 1]
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    disc = tr * tr - 4.0 * det
    if abs(disc) > tol:
        root = np.sqrt(disc)
        l1, l2 = (tr + root) / 2.0, (tr - root) / 2.0
        I = np.eye(2)
        V = np.column_stack([_null_vector(A - l1 * I), _null_vector(A - l2 * I)])
        return TwoByTwoClassification(Kind.DISTINCT, complex(l1), complex(l2), V, eigenvector_angle(V), A)
    lam = complex(tr / 2.0)
    N = A - lam * np.eye(2)
    if np.linalg.norm(N, 2) <= tol:
        return TwoByTwoClassification(Kind.SCALAR, lam, lam, np.eye(2, dtype=complex), float("nan"), A)
    # Jordan chain: v2 is any vector with N v2 != 0, v1 = N v2 spans the kernel
    col = int(np.argmax(np.linalg.norm(N, axis=0)))
    v2 = np.zeros(2, dtype=complex)
    v2[col] = 1.0
    V = np.column_stack([N @ v2, v2])
    return TwoByTwoClassification(Kind.DEFECTIVE, lam, lam, V, float("nan"), A)


def defective_coefficient(V) -> float:
    """``(|a|^2 + |c|^2) / |ad - bc|`` for ``V = [[a, b], [c, d]]``."""
    V = np.asarray(V, dtype=complex)
    a, b, c, d = V[0, 0], V[0, 1], V[1, 0], V[1, 1]
    return float((abs(a) ** 2 + abs(c) ** 2) / abs(a * d - b * c))


def defective_xy_coefficient(V) -> float:
    """``||X Y||`` for ``X = (a, c)^T`` and ``Y = (-c, a) / (ad - bc)``.

    ``X Y`` has rank one with ``||Y|| = ||X|| / |ad - bc|``, so the norm reduces
    to ``(|a|^2 + |c|^2) / |ad - bc|``, evaluated in that exact order.
    """
    V = np.asarray(V, dtype=complex)
    a, b, c, d = V[0, 0], V[0, 1], V[1, 0], V[1, 1]
    X = np.array([a, c])
    det = a * d - b * c
    return float((abs(X[0]) ** 2 + abs(X[1]) ** 2) / abs(det))


def defective_radius(cls: TwoByTwoClassification, eps: float) -> float:
    """Exact radius of the pseudospectral disk of a defective 2x2 matrix."""
    if cls.kind is not Kind.DEFECTIVE:
        raise ValueError(f"defective_radius needs a defective matrix, got {cls.kind.value}")
    C = defective_coefficient(cls.V)
    return math.sqrt(C * eps + eps * eps)


def boundary_residual(cls: TwoByTwoClassification, z: complex | np.ndarray, eps: float):
    """Quartic whose zero set is the boundary of the pseudospectrum.

    ``(eps^2 - |z-l1|^2)(eps^2 - |z-l2|^2) - eps^2 |l1-l2|^2 cot^2(theta)``.
    Negative inside the pseudospectrum near each eigenvalue and positive
    outside (checked on fixtures in the test-suite). Works elementwise on
    arrays of ``z``.
    """
    z = np.asarray(z, dtype=complex)
    e2 = eps * eps
    if cls.kind is Kind.SCALAR:
        return (e2 - np.abs(z - cls.lambda1) ** 2) ** 2
    if cls.kind is not Kind.DISTINCT:
        raise ValueError("boundary_residual is defined for diagonalizable matrices")
    cot2 = 1.0 / math.tan(cls.theta) ** 2
    return ((e2 - np.abs(z - cls.lambda1) ** 2) * (e2 - np.abs(z - cls.lambda2) ** 2)
            - e2 * cls.y ** 2 * cot2)


def residual_scale(cls: TwoByTwoClassification, eps: float) -> float:
    """Natural size ``eps^2 y^2 (1 + cot^2 theta)`` of the quartic near its zero set."""
    return eps * eps * cls.y ** 2 / math.sin(cls.theta) ** 2


def merge_threshold(y: float, theta: float) -> float:
    """Smallest eps at which the two eigenvalue components touch: ``y (csc - cot) / 2``."""
    return 0.5 * y * (1.0 / math.sin(theta) - 1.0 / math.tan(theta))


def rmax_rmin_closed_form(y: float, theta: float, eps: float) -> tuple[float, float]:
    """Extreme distances from an eigenvalue to its component boundary.

    The maximum is attained on the side facing the other eigenvalue, the
    minimum on the far side. Written in cancellation-free form:
    ``r_max = 2 eps (y csc - eps) / (y + sqrt(R-))``,
    ``r_min = 2 eps (y csc + eps) / (y + sqrt(R+))`` with
    ``R± = y^2 + 4 eps^2 ± 4 y eps csc``.
    """
    if not (0.0 < theta <= math.pi / 2):
        raise ValueError("theta must lie in (0, pi/2]")
    csc = 1.0 / math.sin(theta)
    r_minus = y * y + 4 * eps * eps - 4 * y * eps * csc
    if r_minus < 0:
        raise MergedComponentsError(f"eps={eps:g} exceeds merge threshold {merge_threshold(y, theta):g}")
    r_plus = y * y + 4 * eps * eps + 4 * y * eps * csc
    r_max = 2 * eps * (y * csc - eps) / (y + math.sqrt(r_minus))
    r_min = 2 * eps * (y * csc + eps) / (y + math.sqrt(r_plus))
    return r_max, r_min


def ratio_first_order(y: float, theta: float, eps: float) -> float:
    """First-order expansion ``1 + 2 cos(theta) cot(theta) eps / y`` of ``r_max / r_min``."""
    return 1.0 + 2.0 * math.cos(theta) ** 2 / math.sin(theta) * eps / y


def xy_norm(cls: TwoByTwoClassification, which: int = 0) -> float:
    """``||X Y||`` for eigenvalue ``which`` of a diagonalizable 2x2 matrix, via the norm oracle."""
    Vinv = np.linalg.inv(cls.V)
    return operator_norm(np.outer(cls.V[:, which], Vinv[which]))


def eigen_data(cls: TwoByTwoClassification) -> list[tuple[complex, list[int], np.ndarray, np.ndarray]]:
    """Per-eigenvalue ``(lambda, block_sizes, X, Y)`` with ``Y`` taken from rows of ``V^-1``."""
    Vinv = np.linalg.inv(cls.V)
    if cls.kind is Kind.DEFECTIVE:
        # X = first column of V, Y = last row of V^-1
        return [(cls.lambda1, [2], cls.V[:, :1].copy(), Vinv[1:].copy())]
    if cls.kind is Kind.SCALAR:
        return [(cls.lambda1, [1, 1], np.eye(2, dtype=complex), np.eye(2, dtype=complex))]
    return [(cls.lambda1, [1], cls.V[:, :1].copy(), Vinv[:1].copy()),
            (cls.lambda2, [1], cls.V[:, 1:].copy(), Vinv[1:].copy())]
