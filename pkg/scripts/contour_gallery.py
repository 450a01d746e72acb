"""Render eps-contours for a few small matrices into SVG files.

    python3 scripts/contour_gallery.py --out figures/
"""

import argparse
from pathlib import Path

import numpy as np

from pseudospectra import asymptotics as asy
from pseudospectra.errors import LevelNotPresentError
from pseudospectra.numkernel import eigenvalues, random_unitary
from pseudospectra.pseudospec import Region, compute_grid, extract_contours
from pseudospectra.svg import render

EPS = (1e-1, 10 ** -1.5, 1e-2)


def gallery():
    rng = np.random.default_rng(0)
    lam = np.array([0, 1, 0.5 + 0.8j, -0.6 + 0.3j])
    Q = random_unitary(4, rng)
    yield "normal", Q @ np.diag(lam) @ Q.conj().T, Region(-1, 1.5, -0.6, 1.3, 300, 230)
    V = np.array([[1, np.cos(0.5)], [0, np.sin(0.5)]])
    yield "diagonalizable_2x2", V @ np.diag([0, 1]) @ np.linalg.inv(V), Region(-0.6, 1.6, -0.8, 0.8, 300, 220)
    yield "jordan_4", asy.jordan_block(4), Region.around(0, 0.9, 300)
    yield "triangular_3x3", np.array([[1, 2, 0], [0, 2j, 1], [0, 0, -1]]), Region(-2, 2, -1, 3, 300, 300)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="figures")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, A, region in gallery():
        grid = compute_grid(A, region)
        sets = []
        for e in EPS:
            try:
                sets.append(extract_contours(grid, e))
            except LevelNotPresentError:
                pass
        path = out / f"{name}.svg"
        path.write_text(render(sets, eigenvalues(A), region, title=name))
        print(f"{path}: " + ", ".join(f"eps={c.epsilon:.3g}: {len(c)} polylines" for c in sets))


if __name__ == "__main__":
    main()
