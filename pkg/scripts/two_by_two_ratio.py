"""Shape of the eps-pseudospectrum of a diagonalizable 2x2 matrix.

For eigenvector angle theta and eigenvalue gap 1, compares the exact
r_max / r_min against its first-order expansion and against grid-measured
radii, and prints the log-log slope of the expansion error.
"""

import math

import numpy as np

from pseudospectra import two_by_two as tbt
from pseudospectra.pseudospec import measure_extents

EPS = np.array([1e-2, 1e-3, 1e-4, 1e-5])


def main():
    for theta in (math.pi / 3, math.pi / 4, math.pi / 6, math.pi / 12):
        V = np.array([[1, math.cos(theta)], [0, math.sin(theta)]])
        A = V @ np.diag([0.0, 1.0]) @ np.linalg.inv(V)
        print(f"theta = {theta:.4f}  merge at eps* = {tbt.merge_threshold(1.0, theta):.4g}")
        errs = []
        for eps in EPS:
            r_max, r_min = tbt.rmax_rmin_closed_form(1.0, theta, eps)
            first = tbt.ratio_first_order(1.0, theta, eps)
            ext = measure_extents(A, 0.0, eps, 1.5 * r_max)
            errs.append(abs(r_max / r_min - first))
            print(f"  eps={eps:.0e}  exact ratio {r_max / r_min:.10f}  first order {first:.10f}  "
                  f"grid ratio {ext.ratio:.10f}")
        slope = np.polyfit(np.log10(EPS), np.log10(errs), 1)[0]
        print(f"  slope of |exact - first order| vs eps: {slope:.3f}")


if __name__ == "__main__":
    main()
