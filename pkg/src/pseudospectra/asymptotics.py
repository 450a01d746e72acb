"""Small-eps disk bounds for pseudospectra.

As eps -> 0 the component of the eps-pseudospectrum around an eigenvalue
``lam`` shrinks to a disk of radius ``(C eps)^(1/n)``, where ``n`` is the largest
Jordan block size at ``lam`` and ``C = ||X Y||`` with ``X`` (columns) and
``Y`` (rows) the right and left eigenvectors that head and tail the maximal
Jordan chains, paired so that ``Q P = I`` in the Jordan decomposition.

Jordan structure is only ever supplied analytically (explicit Jordan sums,
bidiagonal matrices, 2x2 matrices); generic dense input gets Bauer-Fike
bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (InputDomainError, OrthogonalPairError, RepeatedEigenvalueError,
                     SingularMatrixError, UnsupportedStructureError)
from .numkernel import as_matrix, eigenvalues, numerical_rank, operator_norm, singular_values
from .pseudospec import Region, boundary_crossings, compute_grid, component_restrict


# -- structures ---------------------------------------------------------------


@dataclass(frozen=True)
class EigenBlocks:
    """Jordan data for one eigenvalue: block sizes and the maximal-chain eigenvectors."""

    eigenvalue: complex
    block_sizes: tuple[int, ...]
    X: np.ndarray  # N x ell, right eigenvectors
    Y: np.ndarray  # ell x N, left eigenvectors

    @property
    def n(self) -> int:
        return self.block_sizes[0]

    @property
    def ell(self) -> int:
        return sum(1 for b in self.block_sizes if b == self.block_sizes[0])


@dataclass(frozen=True)
class JordanStructure:
    matrix: np.ndarray = field(repr=False)
    eigen: tuple[EigenBlocks, ...]

    def __post_init__(self):
        total = sum(sum(e.block_sizes) for e in self.eigen)
        if total != self.matrix.shape[0]:
            raise InputDomainError(f"block sizes sum to {total}, matrix has dimension {self.matrix.shape[0]}")

    def blocks_for(self, lam: complex) -> EigenBlocks:
        return min(self.eigen, key=lambda e: abs(e.eigenvalue - lam))

    @property
    def eigenvalues(self) -> list[complex]:
        return [e.eigenvalue for e in self.eigen]


@dataclass(frozen=True)
class JordanSum:
    """Direct sum of Jordan blocks given as ``(eigenvalue, size)`` pairs."""

    blocks: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        if not self.blocks or any(int(s) < 1 for _, s in self.blocks):
            raise InputDomainError("Jordan sum needs at least one block, all sizes >= 1")

    @property
    def dimension(self) -> int:
        return sum(int(s) for _, s in self.blocks)

    def realize(self) -> np.ndarray:
        N = self.dimension
        A = np.zeros((N, N), dtype=complex)
        pos = 0
        for lam, size in self.blocks:
            for i in range(size):
                A[pos + i, pos + i] = lam
                if i + 1 < size:
                    A[pos + i, pos + i + 1] = 1.0
            pos += size
        return A


def jordan_block(N: int, lam: complex = 0.0) -> np.ndarray:
    return JordanSum(((lam, N),)).realize()


class BoundKind(str, Enum):
    AUDIT = "AuditAsymptotic"
    BAUER_FIKE_V = "BauerFikeKappaV"
    BAUER_FIKE_LAMBDA = "BauerFikeKappaLambda"
    JORDAN_LOWER = "JordanLower"


@dataclass(frozen=True)
class Disk:
    center: complex
    coefficient: float
    exponent: int


@dataclass(frozen=True)
class DiskUnionBound:
    disks: tuple[Disk, ...]
    kind: BoundKind

    def radius(self, disk: Disk, eps: float) -> float:
        if self.kind in (BoundKind.AUDIT, BoundKind.JORDAN_LOWER):
            return (disk.coefficient * eps) ** (1.0 / disk.exponent)
        return disk.coefficient * eps

    def radii(self, eps: float) -> list[float]:
        return [self.radius(d, eps) for d in self.disks]

    def contains(self, z, eps: float) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        hit = np.zeros(z.shape, dtype=bool)
        for d in self.disks:
            hit |= np.abs(z - d.center) < self.radius(d, eps)
        return hit

    def as_dict(self, eps_list: Sequence[float] = ()) -> dict:
        return {
            "kind": self.kind.value,
            "disks": [{"center": [d.center.real, d.center.imag], "coefficient": d.coefficient,
                       "exponent": d.exponent,
                       "radii": {f"{e:.17g}": self.radius(d, e) for e in eps_list}}
                      for d in self.disks],
        }


# -- condition numbers and Bauer-Fike -----------------------------------------


def condition_number_matrix(V) -> float:
    """``kappa(V) = s_max(V) / s_min(V)``."""
    s = singular_values(V).values
    if s[-1] <= 1e-12 * s[0]:
        raise SingularMatrixError("eigenvector matrix is singular to working precision")
    return float(s[0] / s[-1])


def condition_number_eigenvalue(u, v) -> float:
    """``kappa(lam) = ||u|| ||v|| / |u* v|`` for left/right eigenvectors ``u``, ``v``."""
    u = np.ravel(np.asarray(u, dtype=complex))
    v = np.ravel(np.asarray(v, dtype=complex))
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    ip = abs(np.vdot(u, v))
    if ip < 1e-14 * nu * nv:
        raise OrthogonalPairError("left and right eigenvectors are orthogonal")
    return float(nu * nv / ip)


def bauer_fike_disks(A, V, eps: float) -> DiskUnionBound:
    """Disks of radius ``eps * kappa(V)`` around every eigenvalue of ``A = V D V^-1``."""
    A, V = as_matrix(A), as_matrix(V)
    kappa = condition_number_matrix(V)
    lam = np.diag(np.linalg.solve(V, A @ V))
    return DiskUnionBound(tuple(Disk(complex(l), kappa, 1) for l in lam), BoundKind.BAUER_FIKE_V)


def eigen_decomposition(A):
    """Eigenvalues, right eigenvectors (columns) and left eigenvectors (rows of ``V^-1``)."""
    A = as_matrix(A)
    lam, V = np.linalg.eig(A)
    return lam, V, np.linalg.inv(V)


def bauer_fike_eigenvalue_disks(A, eps: float) -> DiskUnionBound:
    """Disks ``B(lam_j, eps N kappa(lam_j))`` for a matrix with N distinct eigenvalues."""
    A = as_matrix(A)
    N = A.shape[0]
    lam = eigenvalues(A)
    gap = min((abs(lam[i] - lam[j]) for i in range(N) for j in range(i)), default=math.inf)
    if gap <= 1e-8 * operator_norm(A):
        raise RepeatedEigenvalueError(f"eigenvalues not distinct (min gap {gap:.3g})")
    lam, V, W = eigen_decomposition(A)
    disks = []
    for j in range(N):
        kappa = condition_number_eigenvalue(W[j].conj(), V[:, j])
        disks.append(Disk(complex(lam[j]), N * kappa, 1))
    return DiskUnionBound(tuple(disks), BoundKind.BAUER_FIKE_LAMBDA)


# -- Jordan structure and the AUDiT coefficient --------------------------------


def _jordan_sum_structure(js: JordanSum) -> JordanStructure:
    A = js.realize()
    N = A.shape[0]
    groups: dict[complex, list[tuple[int, int]]] = {}
    pos = 0
    for lam, size in js.blocks:
        groups.setdefault(complex(lam), []).append((size, pos))
        pos += size
    eigen = []
    for lam, blocks in groups.items():
        blocks.sort(key=lambda b: -b[0])
        n = blocks[0][0]
        heads = [start for size, start in blocks if size == n]
        X = np.zeros((N, len(heads)), dtype=complex)
        Y = np.zeros((len(heads), N), dtype=complex)
        for k, start in enumerate(heads):
            X[start, k] = 1.0
            Y[k, start + n - 1] = 1.0
        eigen.append(EigenBlocks(lam, tuple(b[0] for b in blocks), X, Y))
    return JordanStructure(A, tuple(eigen))


def jordan_structure_analytic(obj) -> JordanStructure:
    """Exact Jordan data for a structured input.

    Accepts a :class:`JordanSum`, a periodic bidiagonal description, or a
    2x2 matrix. Anything else raises :class:`UnsupportedStructureError`;
    numerical Jordan detection is ill-posed and deliberately not attempted.
    """
    from . import bidiagonal, two_by_two

    if isinstance(obj, JordanSum):
        return _jordan_sum_structure(obj)
    if isinstance(obj, bidiagonal.PeriodicBidiagonal):
        return bidiagonal.jordan_structure_of(obj)
    if isinstance(obj, two_by_two.TwoByTwoClassification):
        cls = obj
    else:
        arr = np.asarray(obj)
        if arr.shape != (2, 2):
            raise UnsupportedStructureError(
                "no analytic Jordan structure for generic dense input; use Bauer-Fike bounds")
        cls = two_by_two.classify(arr)
    eigen = tuple(EigenBlocks(lam, tuple(sizes), X, Y) for lam, sizes, X, Y in two_by_two.eigen_data(cls))
    return JordanStructure(cls.matrix, eigen)


def audit_coefficient(js: JordanStructure, lam: complex) -> float:
    """``C = ||X Y||`` for the eigenvalue nearest ``lam``."""
    b = js.blocks_for(lam)
    return operator_norm(b.X @ b.Y)


def audit_disks(js: JordanStructure, eps: float | None = None) -> DiskUnionBound:
    """One disk ``(lam, C, n)`` per eigenvalue; radius at eps is ``(C eps)^(1/n)``."""
    disks = tuple(Disk(b.eigenvalue, audit_coefficient(js, b.eigenvalue), b.n) for b in js.eigen)
    return DiskUnionBound(disks, BoundKind.AUDIT)


def generic_audit_coefficient(A, lam: complex, n: int) -> float:
    """Numerical ``||X Y||`` for an eigenvalue of geometric multiplicity one.

    Independent of any closed form: ``x`` and ``y`` are singular vectors of
    ``A - lam I`` and the chain normalisation comes from solving
    ``(A - lam I)^(n-1) w = x``, giving ``C = ||x|| ||y|| / |y w|``.
    """
    A = as_matrix(A)
    M = A - lam * np.eye(A.shape[0])
    U, _, Vh = np.linalg.svd(M)
    x = Vh[-1].conj()
    y = U[:, -1].conj()
    P = np.linalg.matrix_power(M, n - 1)
    w = np.linalg.lstsq(P, x, rcond=None)[0]
    return float(np.linalg.norm(x) * np.linalg.norm(y) / abs(y @ w))


def jordan_lower_bound(N: int, eps: float) -> float:
    """Radius ``(eps (1 + eps)^(N-1))^(1/N)`` of a disk inside the pseudospectrum of an N x N Jordan block."""
    if N < 1 or eps <= 0:
        raise ValueError("need N >= 1 and eps > 0")
    return (eps * (1.0 + eps) ** (N - 1)) ** (1.0 / N)


def jordan_lower_disks(js: JordanStructure, eps: float) -> DiskUnionBound:
    """Inner disks at ``eps`` from the largest Jordan block of each eigenvalue.

    Only valid when that block is a literal Jordan block of the matrix (a
    Jordan sum), since the bound is not similarity invariant. The
    coefficient is ``(1 + eps)^(n-1)`` so the radius matches
    :func:`jordan_lower_bound`.
    """
    return DiskUnionBound(tuple(Disk(b.eigenvalue, (1.0 + eps) ** (b.n - 1), b.n) for b in js.eigen),
                          BoundKind.JORDAN_LOWER)


def lidskii_predictions(lam: complex, gammas, n: int, eps: float) -> np.ndarray:
    """First-order perturbed eigenvalues ``lam + (gamma_j eps)^(1/n)`` over all n-th roots."""
    gammas = np.ravel(np.asarray(gammas, dtype=complex))
    if gammas.size == 0 or n < 1:
        raise ValueError("need at least one gamma and n >= 1")
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    base = (gammas * eps) ** (1.0 / n)
    return (lam + base[:, None] * roots[None, :]).ravel()


def worst_perturbation(js: JordanStructure, lam: complex) -> np.ndarray:
    """Unit-norm ``E = v u*`` from the top singular pair of ``X Y``; maximises the Lidskii gamma."""
    b = js.blocks_for(lam)
    U, _, Vh = np.linalg.svd(b.X @ b.Y)
    return np.outer(Vh[0].conj(), U[:, 0].conj())


def lidskii_gammas(js: JordanStructure, lam: complex, E) -> np.ndarray:
    b = js.blocks_for(lam)
    return np.linalg.eigvals(b.Y @ np.asarray(E, dtype=complex) @ b.X)


# -- finite rank ----------------------------------------------------------------


@dataclass(frozen=True)
class FiniteRankBound:
    m: int
    exponent: int
    holds: bool
    coefficient: float
    reference_eps: float
    measured: dict  # eps -> max dist(z, sigma(A)) / eps^(1/exponent) over grid members


def _distinct(values: np.ndarray, tol: float) -> list[complex]:
    out: list[complex] = []
    for v in values:
        if all(abs(v - w) > tol for w in out):
            out.append(complex(v))
    return out


def _max_member_distance(A, spectrum, eps, radius, resolution, use_crossings):
    """Largest distance to ``spectrum`` over grid members of the eps-pseudospectrum.

    Local windows of half-width ``2 * radius`` are centred on each eigenvalue and
    widened until no member touches the window edge.
    """
    worst = 0.0
    for c in spectrum:
        R = radius
        for _ in range(60):
            grid = compute_grid(A, Region.around(c, 2 * R, resolution))
            inside = grid.sigma_min < eps
            edge = inside[0].any() or inside[-1].any() or inside[:, 0].any() or inside[:, -1].any()
            if edge:
                R *= 2
                continue
            if not inside.any():
                R /= 4
                continue
            break
        if use_crossings:
            seed = grid.region.nearest_index(c)
            if inside[seed]:
                pts = boundary_crossings(component_restrict(grid, eps, c))
            else:
                pts = grid.z[inside]
        else:
            pts = grid.z[inside]
        if pts.size:
            d = np.min(np.abs(pts[:, None] - np.asarray(spectrum)[None, :]), axis=1)
            worst = max(worst, float(d.max()))
    return worst


def finite_rank_bound(A, eps: Sequence[float] | float = (1e-5, 1e-7), reference_eps: float = 1e-3,
                      resolution: int = 201, rank_tol: float | None = None) -> FiniteRankBound:
    """Check ``sigma_eps(A) in sigma(A) + B(0, C eps^(1/(m+1)))`` with ``m = rank(A)``.

    ``C`` is calibrated at ``reference_eps`` from edge-interpolated boundary
    crossings of the grid, then every grid member at the validation ``eps``
    values must lie within the calibrated radius.
    """
    A = as_matrix(A)
    eps_list = [eps] if np.isscalar(eps) else list(eps)
    m = numerical_rank(A, rank_tol)
    p = m + 1
    norm = max(operator_norm(A), 1.0)
    spectrum = _distinct(eigenvalues(A), 1e-8 * norm)
    r0 = reference_eps ** (1.0 / p)
    ref = _max_member_distance(A, spectrum, reference_eps, r0, resolution, use_crossings=True)
    C = ref / r0
    measured = {}
    holds = True
    for e in eps_list:
        d = _max_member_distance(A, spectrum, e, max(C, 1e-3) * e ** (1.0 / p), resolution, use_crossings=False)
        measured[e] = d / e ** (1.0 / p)
        holds &= d <= C * e ** (1.0 / p)
    return FiniteRankBound(m, p, bool(holds), C, reference_eps, measured)
