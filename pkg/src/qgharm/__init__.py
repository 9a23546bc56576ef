"""Harmonic analysis on compact matrix quantum groups of Kac type.

Fusion rings and growth data of the supported groups, noncommutative lp
norms of Fourier coefficients, classical Weyl quadrature for central
elements, free-group operator-norm brackets, semigroup ultracontractivity
scans, and inequality verification batteries.
"""

__version__ = "0.1.0"

from . import classical, errors, fourier, freegroup, groups, semigroup, verify  # noqa: F401
