"""Fixture generators shared by the test modules."""

from __future__ import annotations

import numpy as np

# criterion number -> (passed, detail); printed by conftest at session end
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(number: int, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = (bool(passed), detail)


def crandn(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def well_conditioned_2x2(rng, max_cond: float = 20.0) -> np.ndarray:
    while True:
        V = crandn(rng, 2, 2)
        if np.linalg.cond(V) < max_cond:
            return V


def defective_fixture(rng):
    """``(A, V, lam)`` with ``A = V J V^-1`` and ``J`` a 2x2 Jordan block."""
    V = well_conditioned_2x2(rng)
    lam = complex(crandn(rng, 1)[0])
    J = np.array([[lam, 1.0], [0.0, lam]])
    return V @ J @ np.linalg.inv(V), V, lam


def distinct_fixture(rng):
    """``(A, V, (l1, l2))`` with well-separated eigenvalues and unit eigenvector columns."""
    V = well_conditioned_2x2(rng, 8.0)
    V = V / np.linalg.norm(V, axis=0)
    l1, l2 = crandn(rng, 2)
    while abs(l1 - l2) < 0.5:
        l2 = crandn(rng, 1)[0]
    return V @ np.diag([l1, l2]) @ np.linalg.inv(V), V, (complex(l1), complex(l2))


def angle_between(v1, v2) -> float:
    c = abs(np.vdot(v1, v2)) / (np.linalg.norm(v1) * np.linalg.norm(v2))
    return float(np.arccos(min(c, 1.0)))


def normal_fixture(rng, n: int = 4, min_gap: float = 0.2):
    from pseudospectra.numkernel import random_unitary

    while True:
        lam = crandn(rng, n)
        gaps = np.abs(lam[:, None] - lam[None, :]) + np.eye(n) * 1e9
        if gaps.min() > min_gap:
            break
    Q = random_unitary(n, rng)
    return Q @ np.diag(lam) @ Q.conj().T, lam


def shift_matrix(size: int) -> np.ndarray:
    return np.diag(np.ones(size - 1), 1).astype(complex)


def random_bidiagonal(rng, N=None, k=None, repeated: bool | None = None):
    """Random periodic bidiagonal spec with log-uniform magnitudes in [1e-2, 1e2] and random phases."""
    from pseudospectra import PeriodicBidiagonal

    if k is None:
        k = int(rng.integers(1, 5))
    if N is None:
        N = int(rng.integers(k, 13))
    k = min(k, N)

    def coef(size):
        mag = 10.0 ** rng.uniform(-2, 2, size)
        return mag * np.exp(2j * np.pi * rng.random(size))

    diag = list(coef(k))
    if repeated and k >= 2:
        i, j = rng.choice(k, 2, replace=False)
        diag[max(i, j)] = diag[min(i, j)]
    return PeriodicBidiagonal(N, tuple(diag), tuple(coef(N - 1)))
