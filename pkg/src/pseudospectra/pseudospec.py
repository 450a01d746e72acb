"""Grid-based epsilon-pseudospectra.

The resolvent norm ``||(zI - A)^{-1}||`` equals ``1 / s_min(zI - A)``, so every
set-valued question here is answered by sampling the smallest singular value
of ``zI - A`` on a rectangular grid and reading off level sets.
"""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from scipy.linalg import block_diag
from scipy.optimize import brentq, minimize_scalar

from .errors import LevelNotPresentError, ResourceLimitError, SeedOutsideLevelSetError
from .numkernel import as_matrix, eigenvalues, singular_values

log = logging.getLogger(__name__)

INFINITY_THRESHOLD = 1e-300
DEFAULT_GRID_BUDGET = 5e9  # nx * ny * n**3
_CHUNK_ENTRIES = 4_000_000  # complex entries per batched SVD call


@dataclass(frozen=True)
class Region:
    """Rectangular window of the complex plane sampled on an ``nx`` x ``ny`` grid."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    nx: int = 400
    ny: int = 400

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError(f"degenerate region {self}")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2x2")

    @classmethod
    def around(cls, center: complex, half_width: float, nx: int = 400, ny: int | None = None) -> "Region":
        c = complex(center)
        return cls(c.real - half_width, c.real + half_width, c.imag - half_width, c.imag + half_width,
                   nx, nx if ny is None else ny)

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.nx)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.ny)

    @property
    def spacing(self) -> tuple[float, float]:
        return ((self.re_max - self.re_min) / (self.nx - 1), (self.im_max - self.im_min) / (self.ny - 1))

    @property
    def cell_diameter(self) -> float:
        return math.hypot(*self.spacing)

    def points(self) -> np.ndarray:
        """Complex grid, indexed ``[i, j]`` with ``i`` along the real axis."""
        return self.re[:, None] + 1j * self.im[None, :]

    def nearest_index(self, z: complex) -> tuple[int, int]:
        dre, dim = self.spacing
        i = int(round((z.real - self.re_min) / dre))
        j = int(round((z.imag - self.im_min) / dim))
        return min(max(i, 0), self.nx - 1), min(max(j, 0), self.ny - 1)

    def as_dict(self) -> dict:
        return {"re_min": self.re_min, "re_max": self.re_max, "im_min": self.im_min,
                "im_max": self.im_max, "nx": self.nx, "ny": self.ny}


@dataclass(frozen=True)
class ResolventGrid:
    region: Region
    sigma_min: np.ndarray  # shape (nx, ny)
    matrix: np.ndarray = field(repr=False)

    @property
    def matrix_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def z(self) -> np.ndarray:
        return self.region.points()


@dataclass(frozen=True)
class ContourSet:
    epsilon: float
    polylines: list[np.ndarray]
    closed_flags: list[bool]

    def __len__(self):
        return len(self.polylines)

    def vertices(self) -> np.ndarray:
        if not self.polylines:
            return np.empty(0, dtype=complex)
        return np.concatenate(self.polylines)


@dataclass(frozen=True)
class Component:
    """Grid points of one connected component of ``{s_min < eps}``."""

    grid: ResolventGrid
    epsilon: float
    mask: np.ndarray
    seed: tuple[int, int]

    @property
    def touches_border(self) -> bool:
        m = self.mask
        return bool(m[0].any() or m[-1].any() or m[:, 0].any() or m[:, -1].any())

    def points(self) -> np.ndarray:
        return self.grid.z[self.mask]


@dataclass(frozen=True)
class ComponentExtents:
    center: complex
    r_min: float
    r_max: float
    angle_min: float = float("nan")
    angle_max: float = float("nan")

    @property
    def ratio(self) -> float:
        return self.r_max / self.r_min


# -- pointwise quantities ---------------------------------------------------


def _shifted(A: np.ndarray, z: complex) -> np.ndarray:
    return z * np.eye(A.shape[0]) - A


def sigma_min_at(A, z: complex) -> float:
    A = as_matrix(A)
    return float(np.linalg.svd(_shifted(A, z), compute_uv=False)[-1])


def resolvent_norm(A, z: complex) -> float:
    """``||(zI - A)^{-1}||``; ``inf`` when ``zI - A`` is singular to working precision."""
    s = sigma_min_at(A, z)
    if s < INFINITY_THRESHOLD:
        return math.inf
    return 1.0 / s


def is_in_pseudospectrum(A, z: complex, eps: float) -> bool:
    """Strict membership test ``s_min(zI - A) < eps``; boundary points are excluded."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    return sigma_min_at(A, z) < eps


def pseudoeigenvector(A, z: complex) -> np.ndarray:
    """Unit vector ``v`` minimising ``||(zI - A) v||`` (right singular vector of ``s_min``)."""
    A = as_matrix(A)
    return singular_values(_shifted(A, z)).right_vector_min


def sigma_min_field(A, zs, workers: int = 1) -> np.ndarray:
    """``s_min(zI - A)`` for every ``z`` in the array ``zs`` (any shape)."""
    A = as_matrix(A)
    zs = np.asarray(zs, dtype=complex)
    flat = zs.ravel()
    n = A.shape[0]
    eye = np.eye(n)
    chunk = max(1, _CHUNK_ENTRIES // (n * n))

    def run(start: int) -> np.ndarray:
        block = flat[start:start + chunk, None, None] * eye - A
        return np.linalg.svd(block, compute_uv=False)[:, -1]

    starts = range(0, flat.size, chunk)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]
    out = np.concatenate(parts) if parts else np.empty(0)
    return out.reshape(zs.shape)


def compute_grid(A, region: Region, budget: float = DEFAULT_GRID_BUDGET, workers: int = 1) -> ResolventGrid:
    """Sample ``s_min(zI - A)`` on every point of ``region``."""
    A = as_matrix(A)
    n = A.shape[0]
    work = float(region.nx) * region.ny * n ** 3
    if work > budget:
        raise ResourceLimitError(f"grid needs ~{work:.3g} flops-equivalent, budget is {budget:.3g}")
    sig = sigma_min_field(A, region.points(), workers=workers)
    sig.setflags(write=False)
    A.setflags(write=False)
    return ResolventGrid(region=region, sigma_min=sig, matrix=A)


# -- contours -----------------------------------------------------------------

# corners of cell (i, j): 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
# edges: 0 = c0-c1, 1 = c1-c2, 2 = c3-c2, 3 = c0-c3
_CORNER_EDGES = {0: (0, 3), 1: (0, 1), 2: (1, 2), 3: (2, 3)}


def _edge_key(i: int, j: int, e: int) -> tuple[str, int, int]:
    if e == 0:
        return ("h", i, j)
    if e == 1:
        return ("v", i + 1, j)
    if e == 2:
        return ("h", i, j + 1)
    return ("v", i, j)


def extract_contours(grid: ResolventGrid, eps: float) -> ContourSet:
    """Marching-squares polylines of the level set ``s_min = eps``.

    Vertices sit on cell edges, placed by linear interpolation of the sampled
    values. Saddle cells are resolved with the mean of the four corners.
    Polylines that do not leave the region come back closed.
    """
    s = grid.sigma_min
    lo, hi = float(s.min()), float(s.max())
    if not (lo < eps < hi):
        raise LevelNotPresentError(f"eps={eps:g} outside sampled range [{lo:g}, {hi:g}]")
    inside = s < eps
    h_cross = inside[:-1, :] != inside[1:, :]
    v_cross = inside[:, :-1] != inside[:, 1:]
    cell_hit = h_cross[:, :-1] | h_cross[:, 1:] | v_cross[:-1, :] | v_cross[1:, :]

    links: dict[tuple, list[tuple]] = defaultdict(list)
    for i, j in zip(*np.nonzero(cell_hit)):
        corners = (inside[i, j], inside[i + 1, j], inside[i + 1, j + 1], inside[i, j + 1])
        crossed = [e for e in range(4) if corners[e] != corners[(e + 1) % 4]]
        # edge e joins corners e and e+1, except edge 2 (c3-c2) and 3 (c0-c3), same pairs
        if len(crossed) == 2:
            pairs = [tuple(crossed)]
        else:
            center_in = (s[i, j] + s[i + 1, j] + s[i + 1, j + 1] + s[i, j + 1]) / 4.0 < eps
            # isolate the corners that are not joined through the cell centre
            isolated = [c for c in range(4) if corners[c] != center_in]
            pairs = [_CORNER_EDGES[c] for c in isolated]
        for e1, e2 in pairs:
            k1, k2 = _edge_key(i, j, e1), _edge_key(i, j, e2)
            links[k1].append(k2)
            links[k2].append(k1)

    re, im = grid.region.re, grid.region.im

    def point(key) -> complex:
        kind, i, j = key
        if kind == "h":
            v0, v1 = s[i, j], s[i + 1, j]
            t = (eps - v0) / (v1 - v0)
            return complex(re[i] + t * (re[i + 1] - re[i]), im[j])
        v0, v1 = s[i, j], s[i, j + 1]
        t = (eps - v0) / (v1 - v0)
        return complex(re[i], im[j] + t * (im[j + 1] - im[j]))

    visited: set = set()
    polylines: list[np.ndarray] = []
    closed: list[bool] = []

    def walk(start) -> list:
        chain = [start]
        visited.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in links[cur] if k != prev and k not in visited]
            if not nxt:
                return chain
            prev, cur = cur, nxt[0]
            visited.add(cur)
            chain.append(cur)

    # open chains start at degree-1 nodes on the region border
    for key in sorted(k for k, v in links.items() if len(v) == 1):
        if key in visited:
            continue
        chain = walk(key)
        polylines.append(np.array([point(k) for k in chain]))
        closed.append(False)
    for key in sorted(links):
        if key in visited:
            continue
        chain = walk(key)
        pts = [point(k) for k in chain]
        pts.append(pts[0])
        polylines.append(np.array(pts))
        closed.append(True)
    return ContourSet(epsilon=float(eps), polylines=polylines, closed_flags=closed)


# -- components and radii ---------------------------------------------------


def component_restrict(grid: ResolventGrid, eps: float, lam: complex) -> Component:
    """4-connected component of ``{s_min < eps}`` containing the grid point nearest ``lam``."""
    seed = grid.region.nearest_index(complex(lam))
    inside = grid.sigma_min < eps
    if not inside[seed]:
        raise SeedOutsideLevelSetError(
            f"grid point nearest {lam} has s_min={grid.sigma_min[seed]:.3g} >= eps={eps:.3g}")
    labels, _ = ndimage.label(inside)  # default structuring element is 4-connectivity
    mask = labels == labels[seed]
    return Component(grid=grid, epsilon=float(eps), mask=mask, seed=seed)


def count_components(grid: ResolventGrid, eps: float) -> int:
    _, count = ndimage.label(grid.sigma_min < eps)
    return int(count)


def boundary_crossings(component: Component) -> np.ndarray:
    """Edge-interpolated level crossings between component points and their outside neighbours."""
    g = component.grid
    s, z, m, eps = g.sigma_min, g.z, component.mask, component.epsilon
    pts = []
    for axis in (0, 1):
        a = [slice(None), slice(None)]
        b = [slice(None), slice(None)]
        a[axis], b[axis] = slice(None, -1), slice(1, None)
        a, b = tuple(a), tuple(b)
        for p, q in ((a, b), (b, a)):
            sel = m[p] & ~m[q] & (s[q] >= eps)
            sp, sq = s[p][sel], s[q][sel]
            t = (eps - sp) / (sq - sp)
            pts.append(z[p][sel] + t * (z[q][sel] - z[p][sel]))
    return np.concatenate(pts)


def ray_crossing(A, lam: complex, angle: float, eps: float, r_guess: float, step: float,
                 rtol: float = 1e-12) -> float:
    """Radius where ``s_min`` first reaches ``eps`` along the ray from ``lam`` at ``angle``.

    Brackets around ``r_guess`` (widening as needed) then solves with Brent's method.
    """
    A = as_matrix(A)
    d = np.exp(1j * angle)

    def g(r: float) -> float:
        return sigma_min_at(A, lam + r * d) - eps

    lo = max(r_guess - 2 * step, 0.25 * r_guess)
    while g(lo) >= 0:
        lo *= 0.5
        if lo < 1e-300:
            return 0.0
    hi = r_guess + 2 * step
    for _ in range(200):
        if g(hi) >= 0:
            break
        lo, hi = hi, hi * 1.5
    else:
        raise RuntimeError("no level crossing found along ray")
    return brentq(g, lo, hi, xtol=rtol * hi, rtol=4 * np.finfo(float).eps, maxiter=200)


def radial_extents(component: Component, lam: complex, refine: bool = True, candidates: int = 3,
                   scan: int = 64) -> ComponentExtents:
    """Largest and smallest distance from ``lam`` to the component boundary.

    Without ``refine`` the answer comes straight from the edge-interpolated
    grid crossings. With it, ray roots are taken at the best grid directions
    and at ``scan`` evenly spaced angles; the best few are then polished by a
    bounded search over angle. The uniform scan matters for nearly circular
    components, where grid noise alone can point at the wrong side.
    """
    lam = complex(lam)
    if component.touches_border:
        log.warning("component touches the region border; radii may be truncated")
    pts = boundary_crossings(component)
    dist = np.abs(pts - lam)
    ang = np.angle(pts - lam)
    order = np.argsort(dist)
    if not refine:
        return ComponentExtents(lam, float(dist[order[0]]), float(dist[order[-1]]),
                                float(ang[order[0]]), float(ang[order[-1]]))

    A = component.grid.matrix
    eps = component.epsilon
    step = component.grid.region.cell_diameter
    r_typ = float(np.median(dist))

    def radius(phi: float, guess: float) -> float:
        return ray_crossing(A, lam, phi, eps, guess, step)

    # (angle, radius) samples: grid extremes plus a uniform sweep
    seeds = [(float(ang[k]), radius(float(ang[k]), float(dist[k])))
             for k in np.concatenate([order[:candidates], order[::-1][:candidates]])]
    for phi in np.linspace(-math.pi, math.pi, scan, endpoint=False):
        idx = int(np.argmin(np.abs(np.angle(np.exp(1j * (ang - phi))))))
        seeds.append((float(phi), radius(float(phi), float(dist[idx]))))
    width = max(2 * math.pi / scan, 2.0 * step / max(r_typ, 1e-300))

    def polish(sign: float) -> tuple[float, float]:
        best = sorted(seeds, key=lambda t: sign * t[1])[:candidates]
        best_phi, best_r = best[0]
        for phi0, r0 in best:
            res = minimize_scalar(lambda p: sign * radius(p, r0), bounds=(phi0 - width, phi0 + width),
                                  method="bounded", options={"xatol": 1e-10})
            if res.fun < sign * best_r:
                best_r, best_phi = sign * res.fun, float(res.x)
        return best_r, math.remainder(best_phi, 2 * math.pi)

    r_min, a_min = polish(1.0)
    r_max, a_max = polish(-1.0)
    return ComponentExtents(lam, float(r_min), float(r_max), a_min, a_max)


def measure_extents(A, lam: complex, eps: float, half_width: float, resolution: int = 161,
                    refine: bool = True) -> ComponentExtents:
    """Radial extents of the component around ``lam`` from a local grid of the given half-width."""
    grid = compute_grid(A, Region.around(lam, half_width, resolution))
    comp = component_restrict(grid, eps, lam)
    return radial_extents(comp, lam, refine=refine)


# -- perturbations and direct sums -------------------------------------------


def sample_perturbed_eigenvalues(A, eps: float, trials: int, seed: int) -> np.ndarray:
    """Eigenvalues of ``A + E`` for random ``E`` with ``||E|| = u * eps``, ``u ~ U(0, 1)``.

    Directions are complex Ginibre, so the perturbations fill the open ball
    ``||E|| < eps`` rather than its shell.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    A = as_matrix(A)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    out = np.empty(trials * n, dtype=complex)
    for t in range(trials):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        u = 0.0
        while u == 0.0:
            u = rng.random()
        E = G * (u * eps / np.linalg.norm(G, 2))
        out[t * n:(t + 1) * n] = eigenvalues(A + E)
    return out


def direct_sum(A1, A2) -> np.ndarray:
    return block_diag(as_matrix(A1), as_matrix(A2))


def default_region(A, eps_list, nx: int = 400, ny: int | None = None, radius_hint: float | None = None) -> Region:
    """Square window centred on the eigenvalue centroid.

    Half-width is ``1.5 * (spread + r)`` where ``r`` estimates the largest
    pseudospectral radius: ``radius_hint`` if given, else ``max eps * kappa(V)``
    capped by the always-valid bound ``||A - cI|| + eps``.
    """
    A = as_matrix(A)
    lam = eigenvalues(A)
    c = complex(lam.mean())
    spread = float(np.max(np.abs(lam - c)))
    eps_max = float(max(eps_list))
    cap = float(np.linalg.norm(A - c * np.eye(A.shape[0]), 2)) + eps_max
    if radius_hint is None:
        _, V = np.linalg.eig(A)
        kappa = np.linalg.cond(V)
        radius_hint = eps_max * kappa if np.isfinite(kappa) else cap
    r = min(radius_hint, cap)
    half = 1.5 * (spread + max(r, eps_max))
    return Region.around(c, half, nx, ny)
