"""Periodic upper-bidiagonal matrices.

With every superdiagonal entry nonzero, each eigenvalue ``a`` of a bidiagonal
matrix owns a single Jordan block whose size is the number of times ``a``
occurs on the diagonal. Right and left eigenvectors then have explicit
product formulas, which give the small-eps disk radii ``(C_j eps)^(1/n_j)``
with ``C_j = ||v_j|| ||u_j||`` directly from the coefficients.

Positions are 1-based in the public API (``ell``) to match the usual
indexing of the diagonal ``a_1 ... a_k``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .asymptotics import Disk, DiskUnionBound, BoundKind, EigenBlocks, JordanStructure
from .errors import DecoupleFirstError, InputDomainError

log = logging.getLogger(__name__)

RESIDUAL_CHECK = 1e-8


@dataclass(frozen=True)
class PeriodicBidiagonal:
    N: int
    diag_period: tuple[complex, ...]
    superdiag: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "diag_period", tuple(complex(a) for a in self.diag_period))
        object.__setattr__(self, "superdiag", tuple(complex(b) for b in self.superdiag))
        if self.N < 1 or not (1 <= self.k <= self.N):
            raise InputDomainError(f"need 1 <= k <= N, got k={self.k}, N={self.N}")
        if len(self.superdiag) != self.N - 1:
            raise InputDomainError(f"superdiagonal must have N-1={self.N - 1} entries, got {len(self.superdiag)}")
        if not all(np.isfinite(x) for x in self.diag_period + self.superdiag):
            raise InputDomainError("non-finite coefficient")

    @property
    def k(self) -> int:
        return len(self.diag_period)

    @property
    def n(self) -> int:
        """Number of complete periods, from ``N = k n + r`` with ``0 < r <= k``."""
        return (self.N - 1) // self.k

    @property
    def r(self) -> int:
        return self.N - self.k * self.n

    def diagonal(self) -> np.ndarray:
        return np.array([self.diag_period[i % self.k] for i in range(self.N)], dtype=complex)

    def realize(self) -> np.ndarray:
        return np.diag(self.diagonal()) + np.diag(np.array(self.superdiag, dtype=complex), 1)

    def first_positions(self) -> list[int]:
        """1-based positions ``ell`` in the period where a diagonal value first appears."""
        seen, out = set(), []
        for i, a in enumerate(self.diag_period):
            if a not in seen:
                seen.add(a)
                out.append(i + 1)
        return out

    def multiplicity(self, a: complex) -> int:
        return int(np.sum(self.diagonal() == a))


@dataclass(frozen=True)
class EigenvectorPair:
    eigenvalue: complex
    right: np.ndarray
    left: np.ndarray
    block_size: int
    fallback_used: bool = False

    @property
    def coefficient(self) -> float:
        return float(np.linalg.norm(self.right) * np.linalg.norm(self.left))


def realize(spec: PeriodicBidiagonal) -> np.ndarray:
    return spec.realize()


def decouple(spec: PeriodicBidiagonal) -> list[PeriodicBidiagonal]:
    """Split at every zero superdiagonal entry into a direct sum of bidiagonal pieces.

    Pieces are stored with one full period (``k`` = piece length).
    """
    d = spec.diagonal()
    b = spec.superdiag
    cuts = [i + 1 for i, x in enumerate(b) if x == 0]
    if not cuts:
        return [spec]
    pieces = []
    for lo, hi in zip([0] + cuts, cuts + [spec.N]):
        pieces.append(PeriodicBidiagonal(hi - lo, tuple(d[lo:hi]), tuple(b[lo:hi - 1])))
    return pieces


def _f(x: complex) -> complex:
    return x if x != 0 else 1.0


def _check(spec: PeriodicBidiagonal, ell: int) -> tuple[np.ndarray, np.ndarray, complex]:
    if any(x == 0 for x in spec.superdiag):
        raise DecoupleFirstError("zero superdiagonal entry; decouple() first")
    if not 1 <= ell <= spec.k:
        raise InputDomainError(f"ell must lie in 1..{spec.k}")
    a = spec.diag_period[ell - 1]
    if a in spec.diag_period[:ell - 1]:
        raise InputDomainError(f"position {ell} is not the first occurrence of {a}")
    return spec.diagonal(), np.array(spec.superdiag, dtype=complex), a


def right_eigenvector(spec: PeriodicBidiagonal, ell: int) -> np.ndarray:
    """``v_i = (b_i ... b_{ell-1}) / (f(a_ell - a_i) ... f(a_ell - a_{ell-1}))`` for ``i < ell``,
    ``v_ell = 1`` and zeros below."""
    d, b, a = _check(spec, ell)
    v = np.zeros(spec.N, dtype=complex)
    e = ell - 1
    v[e] = 1.0
    for i in range(e):
        v[i] = np.prod(b[i:e]) / np.prod([_f(a - d[m]) for m in range(i, e)])
    return v


def _left_formula(d: np.ndarray, b: np.ndarray, e: int, a: complex) -> np.ndarray:
    """Closed-form left eigenvector with the chain normalisation built into ``mu``.

    ``p`` is the last diagonal occurrence of ``a``. Entries before ``p`` vanish;
    for ``t >= p``, ``u_t = mu * (b_p ... b_{t-1}) * prod_{m>t} f(a - a_m)`` with
    ``mu = (b_ell ... b_{p-1}) prod_{m<ell} f(a - a_m) / prod_{all m} f(a - a_m)``.
    Differences are taken as ``a - a_m``; that orientation is what makes
    ``u A = a u`` hold entrywise.
    """
    N = d.size
    p = int(np.nonzero(d == a)[0][-1])
    fac = np.array([_f(a - d[m]) for m in range(N)])
    mu = np.prod(b[e:p]) * np.prod(fac[:e]) / np.prod(fac)
    u = np.zeros(N, dtype=complex)
    for t in range(p, N):
        u[t] = mu * np.prod(b[p:t]) * np.prod(fac[t + 1:])
    return u


def _relative_left_residual(A: np.ndarray, u: np.ndarray, a: complex) -> float:
    scale = np.linalg.norm(A, 2) * np.linalg.norm(u)
    return float(np.linalg.norm(u @ A - a * u) / scale) if scale else 0.0


def eigenvector_pair(spec: PeriodicBidiagonal, ell: int) -> EigenvectorPair:
    """Right and left eigenvectors for the eigenvalue first appearing at position ``ell``.

    The left vector comes from the closed form; if its residual exceeds
    ``RESIDUAL_CHECK`` the left null vector of ``A - aI`` is used instead,
    rescaled to the formula's first nonzero entry, and the event is logged.
    """
    d, b, a = _check(spec, ell)
    A = spec.realize()
    v = right_eigenvector(spec, ell)
    u = _left_formula(d, b, ell - 1, a)
    fallback = False
    res = _relative_left_residual(A, u, a)
    if not res <= RESIDUAL_CHECK:
        U, _, _ = np.linalg.svd(A - a * np.eye(spec.N))
        w = U[:, -1].conj()
        nz = np.flatnonzero(np.abs(u) > 0)
        if nz.size and abs(w[nz[0]]) > 0:
            w = w * (u[nz[0]] / w[nz[0]])
        log.warning("left eigenvector formula mismatch at ell=%d (residual %.3g); using null vector", ell, res)
        u, fallback = w, True
    return EigenvectorPair(a, v, u, spec.multiplicity(a), fallback)


def left_eigenvector(spec: PeriodicBidiagonal, ell: int) -> np.ndarray:
    return eigenvector_pair(spec, ell).left


def eigenvector_pairs(spec: PeriodicBidiagonal) -> list[EigenvectorPair]:
    return [eigenvector_pair(spec, ell) for ell in spec.first_positions()]


def jordan_structure_of(spec: PeriodicBidiagonal) -> JordanStructure:
    """One Jordan block per distinct diagonal value, of size equal to its multiplicity."""
    if any(x == 0 for x in spec.superdiag):
        raise DecoupleFirstError("zero superdiagonal entry; decouple() first")
    eigen = tuple(EigenBlocks(p.eigenvalue, (p.block_size,), p.right[:, None], p.left[None, :])
                  for p in eigenvector_pairs(spec))
    return JordanStructure(spec.realize(), eigen)


def asymptotic_disks(spec: PeriodicBidiagonal, eps: float | None = None) -> DiskUnionBound:
    """Disks ``(a_j, C_j, n_j)`` with ``C_j = ||v_j|| ||u_j||``; decoupled pieces contribute separately."""
    disks = []
    for piece in decouple(spec):
        disks.extend(Disk(p.eigenvalue, p.coefficient, p.block_size) for p in eigenvector_pairs(piece))
    return DiskUnionBound(tuple(disks), BoundKind.AUDIT)
