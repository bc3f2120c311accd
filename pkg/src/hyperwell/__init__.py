"""Bound states of the hyperbolic double-well family ``-v sinh^2m(z) / cosh^(2m+2)(z)``.

Closed forms for m = 0, quasi-exact polynomial states for m = 2, an
asymptotic-iteration solver for m = 0, 1, 2 and a floating-point
finite-difference reference solver.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .aim import AimOptions, AimProblem, aim_find_eigenvalues, m1_series_coefficients, m1_wavefunction
from .errors import (
    DomainError,
    HyperwellError,
    IterationBudgetError,
    NoSuchStateError,
    PoleAtCenterError,
    SufficiencyError,
    TruncationError,
    UsageError,
)
from .exact_pt import pt_eigenvalue, pt_spectrum, pt_wavefunction
from .fd_oracle import GridSpec, fd_spectrum
from .heun import HeunCoefficients, PolynomialSolution, build_solution, recurrence_P, solve_polynomial
from .potential import (PhysicalSpec, PotentialSpec, potential_minimum, potential_value, sector_state_count,
                        to_dimensionless)
from .precision import BigReal, TaylorSeries, working_precision
from .qes import QesPair, qes_enumerate, qes_epsilon, qes_wavefunction
from .states import EigenResult, Parity

__all__ = [
    "AimOptions", "AimProblem", "BigReal", "DomainError", "EigenResult", "GridSpec", "HeunCoefficients",
    "HyperwellError", "IterationBudgetError", "NoSuchStateError", "Parity", "PhysicalSpec", "PoleAtCenterError",
    "PolynomialSolution", "PotentialSpec", "QesPair", "SufficiencyError", "TaylorSeries", "TruncationError",
    "UsageError", "aim_find_eigenvalues", "build_solution", "fd_spectrum", "m1_series_coefficients",
    "m1_wavefunction", "potential_minimum", "potential_value", "pt_eigenvalue", "pt_spectrum", "pt_wavefunction",
    "qes_enumerate", "qes_epsilon", "qes_wavefunction", "recurrence_P", "sector_state_count", "solve_polynomial",
    "to_dimensionless",
    "working_precision",
]
