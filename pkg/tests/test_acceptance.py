"""Acceptance checks; each test records one PASS/FAIL line shown in the pytest summary."""

import math

import numpy as np
import pytest

from helpers import (angle_between, defective_fixture, distinct_fixture, normal_fixture, random_bidiagonal,
                     record, shift_matrix)
from pseudospectra import JordanSum, PeriodicBidiagonal, asymptotics as asy, bidiagonal as bd, two_by_two as tbt
from pseudospectra.numkernel import multiset_distance, smallest_singular_value
from pseudospectra.pseudospec import (Region, compute_grid, direct_sum, extract_contours, measure_extents,
                                      pseudoeigenvector, sample_perturbed_eigenvalues, sigma_min_field)


def smin(A, z):
    return smallest_singular_value(z * np.eye(A.shape[0]) - A)


def test_01_defective_2x2_disk_is_exact():
    rng = np.random.default_rng(101)
    worst = 0.0
    for _ in range(10):
        A, V, lam = defective_fixture(rng)
        C = tbt.defective_coefficient(V)
        cls = tbt.classify(A)
        assert cls.kind is tbt.Kind.DEFECTIVE
        for eps in (1e-2, 1e-4, 1e-6):
            R = math.sqrt(C * eps + eps * eps)
            # classification-derived radius agrees with the generating decomposition
            assert tbt.defective_radius(cls, eps) == pytest.approx(R, rel=1e-9)
            for phi in np.arange(16) * 2 * np.pi / 16:
                worst = max(worst, abs(smin(A, lam + R * np.exp(1j * phi)) / eps - 1))
    ok = worst < 1e-6
    record(1, ok, f"max |s_min/eps - 1| = {worst:.2e} (tol 1e-6)")
    assert ok


def test_02_distinct_2x2_quartic_on_grid_contours():
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(5):
        A, V, (l1, l2) = distinct_fixture(rng)
        theta = angle_between(V[:, 0], V[:, 1])
        y = abs(l1 - l2)
        eps = 0.3 * tbt.merge_threshold(y, theta)
        r_max, _ = tbt.rmax_rmin_closed_form(y, theta, eps)
        c = (l1 + l2) / 2
        half = y / 2 + 1.5 * r_max
        grid = compute_grid(A, Region.around(c, half, 400, 400))
        verts = extract_contours(grid, eps).vertices()
        assert verts.size > 0
        q = (eps ** 2 - np.abs(verts - l1) ** 2) * (eps ** 2 - np.abs(verts - l2) ** 2) \
            - eps ** 2 * y ** 2 / math.tan(theta) ** 2
        scale = eps ** 2 * y ** 2 * (1 + 1 / math.tan(theta) ** 2)
        worst = max(worst, float(np.max(np.abs(q)) / scale))
        cls = tbt.classify(A)
        np.testing.assert_allclose(tbt.boundary_residual(cls, verts, eps), q, atol=1e-9 * scale)
    ok = worst < 1e-3
    record(2, ok, f"max |quartic| / scale = {worst:.2e} (tol 1e-3)")
    assert ok


def test_03_ratio_expansion_is_second_order():
    eps_list = np.array([1e-2, 1e-3, 1e-4])
    slopes = []
    for theta in (math.pi / 3, math.pi / 4, math.pi / 6):
        diff = []
        for eps in eps_list:
            r_max, r_min = tbt.rmax_rmin_closed_form(1.0, theta, eps)
            first = 1 + 2 * math.cos(theta) * (math.cos(theta) / math.sin(theta)) * eps
            diff.append(abs(r_max / r_min - first))
        slopes.append(np.polyfit(np.log10(eps_list), np.log10(diff), 1)[0])
    ok = all(abs(s - 2.0) <= 0.2 for s in slopes)
    record(3, ok, "log-log slopes " + ", ".join(f"{s:.3f}" for s in slopes) + " (target 2.0 +- 0.2)")
    assert ok


def test_04_normal_matrix_components_are_disks():
    rng = np.random.default_rng(404)
    A, lam = normal_fixture(rng, 4)
    eps = 1e-2
    worst_ratio, worst_r = 0.0, 0.0
    for l in lam:
        ext = measure_extents(A, l, eps, half_width=3 * eps, resolution=161)
        worst_ratio = max(worst_ratio, ext.r_max / ext.r_min - 1)
        worst_r = max(worst_r, abs(ext.r_max / eps - 1))
    ok = worst_ratio < 1e-3 and worst_r < 1e-4
    record(4, ok, f"max r_max/r_min - 1 = {worst_ratio:.2e} (tol 1e-3); max |r_max/eps - 1| = {worst_r:.2e} (tol 1e-4)")
    assert ok


def _audit_cases():
    for N in (2, 3, 4):
        yield f"J{N}(0)", jordan_block(N), asy.audit_disks(asy.jordan_structure_analytic(JordanSum(((0.0, N),))))
    spec = PeriodicBidiagonal(6, (0.0, 1.0, 2.0j), (1.0, 0.5, 2.0, 1.0, 1.5))
    yield "bidiagonal N=6 k=3", spec.realize(), bd.asymptotic_disks(spec)


def jordan_block(N):
    return asy.jordan_block(N, 0.0)


def test_05_audit_radii_converge():
    lines, ok = [], True
    for name, A, bound in _audit_cases():
        for disk in bound.disks:
            errs = []
            for eps in (1e-3, 1e-6, 1e-9):
                rho = bound.radius(disk, eps)
                ext = measure_extents(A, disk.center, eps, half_width=2.5 * rho)
                lo, hi = ext.r_min / rho, ext.r_max / rho
                errs.append(max(abs(lo - 1), abs(hi - 1)))
                if eps == 1e-6:
                    ok &= 0.8 <= lo and hi <= 1.25
            ok &= errs[0] > errs[1] > errs[2]
            lines.append(f"{name} @ {disk.center:.3g}: " + " > ".join(f"{e:.1e}" for e in errs))
    record(5, ok, "max |r/(C eps)^(1/n) - 1| at eps=1e-3,1e-6,1e-9: " + "; ".join(lines))
    assert ok


def test_06_jordan_block_contains_lower_bound_disk():
    violations = 0
    for N in (2, 3, 5):
        for lam in (0.0, 1.0 - 0.5j):
            A = asy.jordan_block(N, lam)
            for eps in (1e-2, 1e-4):
                r = 0.999 * asy.jordan_lower_bound(N, eps)
                assert r == pytest.approx(0.999 * (eps * (1 + eps) ** (N - 1)) ** (1 / N), rel=1e-15)
                for phi in np.arange(8) * 2 * np.pi / 8:
                    violations += not smin(A, lam + r * np.exp(1j * phi)) < eps
    record(6, violations == 0, f"{violations} membership violations over 96 points")
    assert violations == 0


def _lidskii_mismatch(A, js, lam, eps, n):
    E = asy.worst_perturbation(js, lam)
    gammas = asy.lidskii_gammas(js, lam, E)
    pred = asy.lidskii_predictions(lam, gammas[np.argmax(np.abs(gammas))], n, eps)
    got = np.linalg.eigvals(A + eps * E)
    return multiset_distance(got, pred) / eps ** (1 / n)


def test_07_lidskii_prediction_error_shrinks():
    js = asy.jordan_structure_analytic(JordanSum(((0.0, 3),)))
    A = js.matrix
    m = {eps: _lidskii_mismatch(A, js, 0.0, eps, 3) for eps in (1e-3, 1e-6, 1e-9)}
    drop = m[1e-3] / m[1e-9]
    ok = drop >= 10
    record(7, ok, "J3(0), worst E: mismatch/eps^(1/3) = "
           + ", ".join(f"{v:.1e}" for v in m.values()) + f"; drop {drop:.2g}x (need >= 10x)")
    assert ok


def test_07b_lidskii_on_similarity_transformed_jordan_block():
    # companion to criterion 7 with the same eigenvalue structure but a non-trivial basis
    rng = np.random.default_rng(707)
    S = np.eye(3) + 0.3 * (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    A = S @ asy.jordan_block(3) @ np.linalg.inv(S)
    X = S[:, :1]
    Y = np.linalg.inv(S)[2:, :]
    js = asy.JordanStructure(A, (asy.EigenBlocks(0j, (3,), X, Y),))
    m = [_lidskii_mismatch(A, js, 0.0, eps, 3) for eps in (1e-3, 1e-6, 1e-9)]
    assert m[0] / m[2] >= 10
    assert m[0] > m[1] > m[2]


def test_08_bidiagonal_eigenvector_formulas():
    rng = np.random.default_rng(808)
    worst, fallbacks_distinct, fallbacks_repeated, n_pairs = 0.0, 0, 0, 0
    for t in range(50):
        repeated = t % 2 == 1
        spec = random_bidiagonal(rng, repeated=repeated)
        A = spec.realize()
        scale = np.linalg.norm(A, 2)
        for p in bd.eigenvector_pairs(spec):
            n_pairs += 1
            rv = np.linalg.norm(A @ p.right - p.eigenvalue * p.right) / (scale * np.linalg.norm(p.right))
            rl = np.linalg.norm(p.left @ A - p.eigenvalue * p.left) / (scale * np.linalg.norm(p.left))
            worst = max(worst, rv, rl)
            if p.fallback_used:
                if repeated:
                    fallbacks_repeated += 1
                else:
                    fallbacks_distinct += 1
    ok = worst < 1e-10 and fallbacks_distinct == 0
    record(8, ok, f"{n_pairs} eigenpairs, max relative residual {worst:.1e} (tol 1e-10); "
                  f"fallbacks: {fallbacks_distinct} distinct, {fallbacks_repeated} repeated")
    assert ok


def _definition_fixtures(rng):
    yield asy.jordan_block(3)
    yield defective_fixture(rng)[0]
    yield rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    yield PeriodicBidiagonal(5, (0.0, 1.0), (1.0, 2.0, 0.5, 1.0)).realize()
    yield normal_fixture(rng, 3)[0]


def test_09_perturbed_eigenvalues_and_pseudoeigenvectors():
    rng = np.random.default_rng(909)
    eps = 1e-2
    samples, members_ok, witnesses, witness_max = 0, True, 0, 0.0
    for idx, A in enumerate(_definition_fixtures(rng)):
        n = A.shape[0]
        pts = sample_perturbed_eigenvalues(A, eps, trials=-(-2000 // n), seed=idx)
        samples += pts.size
        s = sigma_min_field(A, pts)
        members_ok &= bool(np.all(s < eps))
        for z in pts[:200]:
            v = pseudoeigenvector(A, z)
            assert np.linalg.norm(v) == pytest.approx(1.0)
            witness_max = max(witness_max, np.linalg.norm((z * np.eye(n) - A) @ v) / eps)
            witnesses += 1
    ok = members_ok and samples >= 10_000 and witnesses >= 1000 and witness_max < 1
    record(9, ok, f"{samples} perturbed eigenvalues all members: {members_ok}; "
                  f"{witnesses} witnesses, max ||(z-A)v||/eps = {witness_max:.3f}")
    assert ok


def test_10_direct_sum_and_decoupling():
    rng = np.random.default_rng(1010)
    worst = 0.0
    for t in range(10):
        if t < 5:
            A1 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            A2 = asy.jordan_block(int(rng.integers(1, 4)), complex(rng.standard_normal()))
            A = direct_sum(A1, A2)
            parts = [A1, A2]
        else:
            spec = random_bidiagonal(rng, N=8, k=3)
            sup = list(spec.superdiag)
            for cut in rng.choice(len(sup), 2, replace=False):
                sup[cut] = 0.0
            spec = PeriodicBidiagonal(spec.N, spec.diag_period, tuple(sup))
            A = spec.realize()
            parts = [p.realize() for p in bd.decouple(spec)]
        for z in 3 * (rng.standard_normal(20) + 1j * rng.standard_normal(20)):
            whole = smin(A, z)
            split = min(smin(P, z) for P in parts)
            worst = max(worst, abs(whole - split) / max(1.0, whole))
    ok = worst < 1e-12
    record(10, ok, f"max |s_min(whole) - min s_min(parts)| = {worst:.1e} (tol 1e-12)")
    assert ok


def test_11_finite_rank_sharpness():
    lines, ok = [], True
    for m in (1, 2, 3):
        A = shift_matrix(m + 1)
        for eps in (1e-3, 1e-5):
            r = 0.999 * eps ** (1 / (m + 1))
            grid = compute_grid(A, Region.around(0.0, 1.2 * r, 121, 121))
            inside = np.abs(grid.z) <= r
            ok &= bool(np.all(grid.sigma_min[inside] < eps))
        fr = asy.finite_rank_bound(A, eps=(1e-5, 1e-7))
        ok &= fr.m == m and fr.exponent == m + 1 and fr.holds
        lines.append(f"m={m}: C={fr.coefficient:.4f}, measured " +
                     ", ".join(f"{k:g}:{v:.4f}" for k, v in fr.measured.items()))
    record(11, ok, "; ".join(lines))
    assert ok


def test_12_coefficients_agree_across_modules():
    rng = np.random.default_rng(1212)
    worst = 0.0
    # shared fixture: a Jordan block written as a k=1 bidiagonal matrix
    for N in (2, 3, 5):
        spec = PeriodicBidiagonal(N, (0.5,), (1.0,) * (N - 1))
        C_bd = bd.eigenvector_pair(spec, 1).coefficient
        C_js = asy.audit_coefficient(asy.jordan_structure_analytic(JordanSum(((0.5, N),))), 0.5)
        worst = max(worst, abs(C_bd / C_js - 1))
    for t in range(10):
        spec = random_bidiagonal(rng, N=int(rng.integers(4, 9)), k=3, repeated=t % 2 == 1)
        js = asy.jordan_structure_analytic(spec)
        for p in bd.eigenvector_pairs(spec):
            oracle = asy.generic_audit_coefficient(spec.realize(), p.eigenvalue, p.block_size)
            worst = max(worst, abs(p.coefficient / asy.audit_coefficient(js, p.eigenvalue) - 1),
                        abs(p.coefficient / oracle - 1))
    exact = True
    for _ in range(10):
        A, V, _ = defective_fixture(rng)
        exact &= tbt.defective_xy_coefficient(V) == tbt.defective_coefficient(V)
        cls = tbt.classify(A)
        Cxy = asy.audit_coefficient(asy.jordan_structure_analytic(cls), cls.lambda1)
        worst = max(worst, abs(Cxy / tbt.defective_coefficient(cls.V) - 1))
    ok = worst < 1e-8 and exact
    record(12, ok, f"max relative coefficient gap {worst:.1e} (tol 1e-8); 2x2 expressions identical: {exact}")
    assert ok
