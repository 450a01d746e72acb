"""Command-line front end.

    pseudospectra grid     --input M.json --out DIR [--region a,b,c,d] [--resolution NX,NY]
    pseudospectra contour  --input M.json --out DIR --eps 1e-1,1e-2 [--region ...] [--resolution ...]
    pseudospectra bounds   --input M.json --out DIR --eps 1e-2,1e-4
    pseudospectra verify   --input M.json --out DIR --eps 1e-2,1e-4 [--trials 200] [--seed 0]

Exit status: 0 success, 1 a hard check failed, 2 bad input, 3 grid budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import asymptotics as asy
from . import bidiagonal as bd
from . import two_by_two as tbt
from .errors import (InputDomainError, LevelNotPresentError, MergedComponentsError, PseudospectraError,
                     ResourceLimitError, SeedOutsideLevelSetError)
from .matrixfile import MatrixFile
from .numkernel import eigenvalues, numerical_rank, operator_norm
from .pseudospec import (DEFAULT_GRID_BUDGET, Region, compute_grid, component_restrict, default_region,
                         extract_contours, pseudoeigenvector, radial_extents, sample_perturbed_eigenvalues,
                         sigma_min_field)
from .svg import render

log = logging.getLogger("pseudospectra")

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def fmt(x: float) -> str:
    """17 significant digits: exact double round-trip."""
    return f"{x:.17g}"


@dataclass
class Check:
    name: str
    passed: bool
    hard: bool = True
    measured: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "hard": self.hard, "measured": self.measured}


@dataclass
class RunReport:
    input_digest: str
    operation: str
    parameters: dict
    outputs: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def hard_failures(self) -> list:
        return [c for c in self.checks if c.hard and not c.passed]

    def as_dict(self) -> dict:
        return {"input_digest": self.input_digest, "operation": self.operation, "parameters": self.parameters,
                "outputs": self.outputs, "checks": [c.as_dict() for c in self.checks], "notes": self.notes,
                "passed": not self.hard_failures}


# -- parsing helpers -------------------------------------------------------------


def _floats(text: str, count: int | None, what: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: expected comma-separated numbers, got {text!r}")
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"{what}: expected {count} values, got {len(vals)}")
    return vals


def parse_eps(text: str) -> list[float]:
    vals = _floats(text, None, "--eps")
    if not vals or any(not (v > 0 and math.isfinite(v)) for v in vals):
        raise argparse.ArgumentTypeError("--eps: values must be positive and finite")
    return vals


def parse_region(text: str) -> list[float]:
    return _floats(text, 4, "--region")


def parse_resolution(text: str) -> tuple[int, int]:
    vals = _floats(text, 2, "--resolution")
    if any(v != int(v) or v < 2 for v in vals):
        raise argparse.ArgumentTypeError("--resolution: expected two integers >= 2")
    return int(vals[0]), int(vals[1])


# -- shared computations -----------------------------------------------------------


def predicted_radii(mf: MatrixFile, A: np.ndarray, eps: float) -> dict[complex, tuple[str, float]]:
    """Best available per-eigenvalue radius estimate at ``eps`` and the formula it came from."""
    structure = mf.structure()
    out: dict[complex, tuple[str, float]] = {}
    if structure is not None:
        bound = (bd.asymptotic_disks(structure) if isinstance(structure, bd.PeriodicBidiagonal)
                 else asy.audit_disks(asy.jordan_structure_analytic(structure)))
        for d in bound.disks:
            r = bound.radius(d, eps)
            if d.center not in out or out[d.center][1] < r:
                out[d.center] = ("audit", r)
        return out
    if A.shape == (2, 2):
        cls = tbt.classify(A)
        if cls.kind is tbt.Kind.DEFECTIVE:
            return {cls.lambda1: ("defective_exact", tbt.defective_radius(cls, eps))}
        if cls.kind is tbt.Kind.SCALAR:
            return {cls.lambda1: ("normal", eps)}
        try:
            r_max, _ = tbt.rmax_rmin_closed_form(cls.y, cls.theta, eps)
        except MergedComponentsError:
            return {cls.lambda1: ("merged", math.nan), cls.lambda2: ("merged", math.nan)}
        return {cls.lambda1: ("closed_form", r_max), cls.lambda2: ("closed_form", r_max)}
    lam, V = np.linalg.eig(A)
    if is_normal(A):
        return {complex(l): ("normal", eps) for l in lam}
    kappa = np.linalg.cond(V)
    r = eps * kappa if np.isfinite(kappa) and kappa < 1e12 else math.nan
    return {complex(l): ("bauer_fike", r) for l in lam}


def is_normal(A: np.ndarray) -> bool:
    scale = max(operator_norm(A), 1e-300) ** 2
    return float(np.linalg.norm(A @ A.conj().T - A.conj().T @ A, 2)) <= 1e-12 * scale


def region_for(args, mf: MatrixFile, A: np.ndarray, eps_list) -> Region:
    nx, ny = args.resolution
    if args.region is not None:
        a, b, c, d = args.region
        return Region(a, b, c, d, nx, ny)
    hint = None
    if mf.structure() is not None or A.shape == (2, 2):
        radii = [r for _, r in predicted_radii(mf, A, max(eps_list)).values() if math.isfinite(r)]
        hint = max(radii) if radii else None
    return default_region(A, eps_list, nx, ny, radius_hint=hint)


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- commands ------------------------------------------------------------------------


def cmd_grid(args) -> int:
    mf = MatrixFile.load(args.input)
    A = mf.matrix()
    eps_list = args.eps or [0.1]
    region = region_for(args, mf, A, eps_list)
    grid = compute_grid(A, region, budget=args.budget, workers=args.workers)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    z = grid.z
    rows = ((fmt(z[i, j].real), fmt(z[i, j].imag), fmt(grid.sigma_min[i, j]))
            for i in range(region.nx) for j in range(region.ny))
    _write_csv(out / "grid.csv", ("re", "im", "sigma_min"), rows)
    header = {"schema_version": "1.0", "region": region.as_dict(), "resolution": [region.nx, region.ny],
              "matrix_digest": mf.digest(), "matrix_dim": grid.matrix_dim, "columns": ["re", "im", "sigma_min"]}
    (out / "grid.json").write_text(json.dumps(header, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_contour(args) -> int:
    mf = MatrixFile.load(args.input)
    A = mf.matrix()
    eps_list = sorted(args.eps)
    region = region_for(args, mf, A, eps_list)
    grid = compute_grid(A, region, budget=args.budget, workers=args.workers)
    sets = []
    for e in eps_list:
        try:
            sets.append(extract_contours(grid, e))
        except LevelNotPresentError as exc:
            print(f"warning: skipping eps={e:g}: {exc}", file=sys.stderr)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    pid = 0
    for cs in sets:
        for poly in cs.polylines:
            rows.extend((fmt(cs.epsilon), pid, k, fmt(z.real), fmt(z.imag)) for k, z in enumerate(poly))
            pid += 1
    _write_csv(out / "contours.csv", ("epsilon", "polyline_id", "vertex_index", "re", "im"), rows)
    (out / "contours.svg").write_text(render(sets, eigenvalues(A), region))
    return EXIT_OK


def bounds_report(mf: MatrixFile, eps_list) -> dict:
    A = mf.matrix()
    structure = mf.structure()
    bounds, notes = [], []
    if structure is not None or A.shape == (2, 2):
        if isinstance(structure, bd.PeriodicBidiagonal):
            bounds.append(bd.asymptotic_disks(structure).as_dict(eps_list))
        else:
            js = asy.jordan_structure_analytic(structure if structure is not None else A)
            bounds.append(asy.audit_disks(js).as_dict(eps_list))
            if isinstance(structure, asy.JordanSum):
                bounds.append({"kind": asy.BoundKind.JORDAN_LOWER.value, "disks": [
                    {"center": [b.eigenvalue.real, b.eigenvalue.imag], "exponent": b.n,
                     "radii": {fmt(e): asy.jordan_lower_bound(b.n, e) for e in eps_list}} for b in js.eigen]})
    else:
        notes.append("generic dense input: no analytic Jordan structure, asymptotic disks not reported")
    lam, V = np.linalg.eig(A)
    try:
        bounds.append(asy.bauer_fike_disks(A, V, eps_list[0]).as_dict(eps_list))
    except PseudospectraError as exc:
        notes.append(f"Bauer-Fike kappa(V) bound unavailable: {exc}")
    try:
        bounds.append(asy.bauer_fike_eigenvalue_disks(A, eps_list[0]).as_dict(eps_list))
    except PseudospectraError as exc:
        notes.append(f"Bauer-Fike kappa(lambda) bound unavailable: {exc}")
    m = numerical_rank(A)
    return {"input_digest": mf.digest(), "eps": eps_list, "bounds": bounds,
            "finite_rank": {"rank": m, "exponent_denominator": m + 1}, "notes": notes}


def cmd_bounds(args) -> int:
    mf = MatrixFile.load(args.input)
    eps_list = sorted(args.eps)
    report = bounds_report(mf, eps_list)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bounds.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _extents(A, lam, eps, guess, resolution):
    half = 2.5 * guess
    for _ in range(6):
        grid = compute_grid(A, Region.around(lam, half, resolution))
        comp = component_restrict(grid, eps, lam)
        if not comp.touches_border:
            return radial_extents(comp, lam)
        half *= 2
    raise SeedOutsideLevelSetError("component keeps touching the window border")


def verify_report(mf: MatrixFile, eps_list, trials: int, seed: int, resolution: int = 161) -> RunReport:
    A = mf.matrix()
    report = RunReport(mf.digest(), "verify", {"eps": eps_list, "trials": trials, "seed": seed,
                                                "resolution": resolution})
    lam_all, V = np.linalg.eig(A)
    kappa = np.linalg.cond(V)
    diagonalizable = bool(np.isfinite(kappa) and kappa < 1e12)
    for e in eps_list:
        pts = sample_perturbed_eigenvalues(A, e, trials, seed)
        s = sigma_min_field(A, pts)
        report.checks.append(Check(f"perturbed_eigenvalues_are_members[eps={e:g}]", bool(np.all(s < e)),
                                   measured={"samples": int(pts.size), "max_sigma_min_over_eps": float(s.max() / e)}))
        witness = [float(np.linalg.norm((z * np.eye(A.shape[0]) - A) @ pseudoeigenvector(A, z)))
                   for z in pts[:1000]]
        report.checks.append(Check(f"pseudoeigenvector_witness[eps={e:g}]", max(witness) < e,
                                   measured={"max_residual_over_eps": max(witness) / e}))
        if diagonalizable:
            d = np.min(np.abs(pts[:, None] - lam_all[None, :]), axis=1)
            report.checks.append(Check(f"bauer_fike_containment[eps={e:g}]", bool(np.all(d < e * kappa)),
                                       measured={"kappa_V": float(kappa), "max_dist_over_radius": float(d.max() / (e * kappa))}))

    for e in eps_list:
        predictions = predicted_radii(mf, A, e)
        centers = list(predictions)
        for lam, (source, r_pred) in predictions.items():
            if source == "merged":
                report.notes.append(f"eps={e:g}: eigenvalue components have merged; per-eigenvalue radii undefined")
                break
            if not math.isfinite(r_pred) or source == "bauer_fike":
                continue
            others = [abs(lam - c) for c in centers if c != lam]
            if others and 2.2 * r_pred >= min(others):
                report.notes.append(f"eps={e:g}: component at {lam:.6g} not isolated; extents skipped")
                continue
            name = f"[eps={e:g}, lambda={lam.real:.6g}{lam.imag:+.6g}j]"
            try:
                ext = _extents(A, lam, e, r_pred, resolution)
            except (SeedOutsideLevelSetError, ResourceLimitError, RuntimeError) as exc:
                report.checks.append(Check("extents" + name, False, hard=False, measured={"error": str(exc)}))
                continue
            meas = {"r_min": ext.r_min, "r_max": ext.r_max, "predicted": r_pred}
            if source == "normal":
                ok = ext.r_max / ext.r_min - 1 < 1e-3 and abs(ext.r_max / e - 1) < 1e-4
                report.checks.append(Check("normal_disk" + name, ok, measured=meas))
            elif source == "defective_exact":
                err = max(abs(ext.r_max / r_pred - 1), abs(ext.r_min / r_pred - 1))
                report.checks.append(Check("defective_radius" + name, err < 1e-2, measured={**meas, "rel_err": err}))
            elif source == "closed_form":
                cls = tbt.classify(A)
                r_max, r_min = tbt.rmax_rmin_closed_form(cls.y, cls.theta, e)
                err = max(abs(ext.r_max / r_max - 1), abs(ext.r_min / r_min - 1))
                report.checks.append(Check("closed_form_extents" + name, err < 1e-3,
                                           measured={**meas, "closed_r_max": r_max, "closed_r_min": r_min,
                                                     "rel_err": err}))
            else:
                lo, hi = ext.r_min / r_pred, ext.r_max / r_pred
                report.checks.append(Check("audit_band" + name, 0.8 <= lo and hi <= 1.25, hard=e <= 1e-6,
                                           measured={**meas, "r_min_ratio": lo, "r_max_ratio": hi}))
    return report


def cmd_verify(args) -> int:
    mf = MatrixFile.load(args.input)
    eps_list = sorted(args.eps)
    report = verify_report(mf, eps_list, args.trials, args.seed, resolution=args.resolution[0])
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "report.json"
    report.outputs.append(str(path))
    path.write_text(json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n")
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}{'' if c.hard else ' (soft)'}  {c.name}")
    return EXIT_INVARIANT if report.hard_failures else EXIT_OK


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pseudospectra", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "grid": (cmd_grid, "sample s_min(zI - A) on a grid (CSV + JSON header)"),
        "contour": (cmd_contour, "extract eps-level contours (CSV + SVG)"),
        "bounds": (cmd_bounds, "disk bounds as JSON"),
        "verify": (cmd_verify, "cross-check definitions and formulas against the grid"),
    }
    for name, (fn, help_) in specs.items():
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--input", required=True, help="matrix JSON file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--eps", type=parse_eps, required=name in ("contour", "bounds", "verify"),
                       help="comma-separated eps values")
        p.add_argument("--region", type=parse_region, default=None, help="re_min,re_max,im_min,im_max")
        default_res = (161, 161) if name == "verify" else (400, 400)
        p.add_argument("--resolution", type=parse_resolution, default=default_res, help="NX,NY")
        p.add_argument("--trials", type=int, default=200)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=float, default=DEFAULT_GRID_BUDGET, help="max nx*ny*n^3")
        p.add_argument("--workers", type=int, default=1)
    return parser


def _glue_region(argv) -> list[str]:
    """Rewrite ``--region -1,1,-1,1`` as ``--region=-1,1,-1,1`` so argparse does not read it as a flag."""
    out, it = [], iter(argv)
    for a in it:
        if a == "--region":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--region={nxt}")
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(_glue_region(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputDomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PseudospectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
