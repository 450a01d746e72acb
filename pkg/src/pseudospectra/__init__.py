"""Epsilon-pseudospectra of dense complex matrices: grids, contours, closed forms and small-eps disk bounds."""

from . import asymptotics, bidiagonal, numkernel, pseudospec, two_by_two
from .asymptotics import JordanSum, jordan_block
from .bidiagonal import PeriodicBidiagonal
from .pseudospec import Region, compute_grid, extract_contours, is_in_pseudospectrum, resolvent_norm

__all__ = [
    "asymptotics", "bidiagonal", "numkernel", "pseudospec", "two_by_two",
    "JordanSum", "jordan_block", "PeriodicBidiagonal", "Region",
    "compute_grid", "extract_contours", "is_in_pseudospectrum", "resolvent_norm",
]
