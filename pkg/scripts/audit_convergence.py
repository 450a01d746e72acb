"""Tabulate r(eps) / (C eps)^(1/n) for Jordan blocks and a periodic bidiagonal matrix.

Both the largest and smallest boundary distance are reported; they should
approach 1 as eps decreases.
"""

import numpy as np

from pseudospectra import asymptotics as asy, bidiagonal as bd
from pseudospectra.bidiagonal import PeriodicBidiagonal
from pseudospectra.pseudospec import Region, component_restrict, compute_grid, radial_extents

EPS = (1e-2, 1e-3, 1e-4, 1e-6, 1e-8, 1e-10)


def extents(A, lam, eps, half_width, resolution=121, tries=5):
    """Grow the window until the component around lam fits inside it."""
    for _ in range(tries):
        comp = component_restrict(compute_grid(A, Region.around(lam, half_width, resolution)), eps, lam)
        if not comp.touches_border:
            break
        half_width *= 2
    return radial_extents(comp, lam)


def cases():
    for N in (2, 3, 4, 5):
        js = asy.jordan_structure_analytic(asy.JordanSum(((0.0, N),)))
        yield f"J{N}(0)", js.matrix, asy.audit_disks(js)
    spec = PeriodicBidiagonal(6, (0.0, 1.0, 2.0j), (1.0, 0.5, 2.0, 1.0, 1.5))
    yield "bidiag N=6 k=3", spec.realize(), bd.asymptotic_disks(spec)
    spec = PeriodicBidiagonal(7, (1.0, 2.0, 1.0), (1.0,) * 6)
    yield "bidiag N=7 (1,2,1)", spec.realize(), bd.asymptotic_disks(spec)


def main():
    print(f"{'matrix':<20}{'lambda':>10}{'C':>10}{'n':>3}  " + "".join(f"{e:>18.0e}" for e in EPS))
    for name, A, bound in cases():
        for d in bound.disks:
            cells = []
            for e in EPS:
                rho = bound.radius(d, e)
                ext = extents(A, d.center, e, 2.5 * rho)
                cells.append(f"{ext.r_min / rho:8.5f}/{ext.r_max / rho:8.5f}")
            lam = f"{d.center.real:.3g}{d.center.imag:+.3g}j"
            print(f"{name:<20}{lam:>10}{d.coefficient:>10.4f}{d.exponent:>3}  " + "".join(f"{c:>18}" for c in cells))


if __name__ == "__main__":
    main()
