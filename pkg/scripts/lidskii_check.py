"""Compare eigenvalues of A + eps E with first-order predictions lam + (gamma eps)^(1/n).

For the Jordan block itself, the worst-case E makes the characteristic
polynomial exactly z^n = eps, so the prediction is exact and the mismatch is
round-off. A similarity-transformed block shows the expected O(eps^(2/n))
correction.
"""

import numpy as np

from pseudospectra import asymptotics as asy
from pseudospectra.numkernel import multiset_distance

EPS = (1e-3, 1e-6, 1e-9, 1e-12)


def mismatch(A, js, n, eps):
    E = asy.worst_perturbation(js, 0)
    g = asy.lidskii_gammas(js, 0, E)
    pred = asy.lidskii_predictions(0, g[np.argmax(np.abs(g))], n, eps)
    return multiset_distance(np.linalg.eigvals(A + eps * E), pred) / eps ** (1 / n)


def main():
    n = 3
    js = asy.jordan_structure_analytic(asy.JordanSum(((0.0, n),)))
    rng = np.random.default_rng(707)
    S = np.eye(n) + 0.3 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
    B = S @ js.matrix @ np.linalg.inv(S)
    jb = asy.JordanStructure(B, (asy.EigenBlocks(0j, (n,), S[:, :1], np.linalg.inv(S)[n - 1:]),))
    print(f"{'eps':>8}  {'J3(0)':>12}  {'S J3(0) S^-1':>14}")
    for eps in EPS:
        print(f"{eps:8.0e}  {mismatch(js.matrix, js, n, eps):12.3e}  {mismatch(B, jb, n, eps):14.3e}")


if __name__ == "__main__":
    main()
