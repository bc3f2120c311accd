"""Finite-difference reference spectrum in hardware floating point.

``-psi'' + V psi`` is discretized with the three-point stencil on
``[-L, L]`` with Dirichlet ends, giving a symmetric tridiagonal matrix whose
lowest eigenvalues are found by Sturm-sequence bisection.  Nothing here
touches the arbitrary-precision code, so the oracle shares no failure
modes with the solvers it checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True)
class GridSpec:
    L: float = 15.0
    points: int = 8001

    def __post_init__(self):
        if not self.L >= 10:
            raise UsageError(f"grid half-width L must be >= 10, got {self.L}")
        if self.points < 2001 or self.points % 2 == 0:
            raise UsageError(f"grid needs an odd point count >= 2001, got {self.points}")

    @property
    def h(self) -> float:
        return 2 * self.L / (self.points - 1)

    def interior(self) -> np.ndarray:
        """Nodes strictly inside ``(-L, L)``; the end values are pinned to zero."""
        return -self.L + self.h * np.arange(1, self.points - 1)

    def refined(self) -> "GridSpec":
        return GridSpec(self.L, 2 * self.points - 1)


def potential_array(m: int, v: float, z: np.ndarray) -> np.ndarray:
    return -v * np.tanh(z) ** (2 * m) / np.cosh(z) ** 2


def hamiltonian(m: int, v: float, grid: GridSpec):
    """``(diagonal, off_diagonal)`` of the discretized Hamiltonian."""
    h2 = grid.h**2
    diag = 2.0 / h2 + potential_array(m, float(v), grid.interior())
    off = np.full(diag.size - 1, -1.0 / h2)
    return diag, off


def sturm_count(diag: np.ndarray, off: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each shift."""
    shifts = np.asarray(shifts, dtype=float)
    off2 = off**2
    tiny = np.finfo(float).tiny
    d = diag[0] - shifts
    count = (d < 0).astype(int)
    for i in range(1, diag.size):
        d = np.where(d == 0, tiny, d)
        d = diag[i] - shifts - off2[i - 1] / d
        count += d < 0
    return count


def tridiagonal_lowest(diag: np.ndarray, off: np.ndarray, k: int, tol: float = 1e-13) -> np.ndarray:
    """The ``k`` smallest eigenvalues by simultaneous bisection."""
    n = diag.size
    if not 1 <= k <= n:
        raise UsageError(f"requested {k} eigenvalues of a {n} x {n} matrix")
    radius = np.zeros(n)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    lo = np.full(k, float(np.min(diag - radius)))
    hi = np.full(k, float(np.max(diag + radius)))
    index = np.arange(k)
    while True:
        width = hi - lo
        if np.all(width <= tol * np.maximum(1.0, np.abs(lo))):
            break
        mid = 0.5 * (lo + hi)
        below = sturm_count(diag, off, mid) > index
        hi = np.where(below, mid, hi)
        lo = np.where(below, lo, mid)
        if np.all(mid == lo) and np.all(mid == hi):
            break
    return 0.5 * (lo + hi)


def fd_spectrum(spec, grid: GridSpec | None = None, k: int = 1) -> list[float]:
    """The ``k`` lowest eigenvalues for a ``PotentialSpec``-like ``(m, v)``."""
    grid = grid or GridSpec()
    diag, off = hamiltonian(spec.m, float(spec.v), grid)
    return [float(x) for x in tridiagonal_lowest(diag, off, k)]


def bound_states(spec, grid: GridSpec | None = None, k_max: int = 64) -> list[float]:
    """All negative eigenvalues among the lowest ``k_max``."""
    values = fd_spectrum(spec, grid, k_max)
    return [x for x in values if x < 0]


def _thomas(sub, diag, sup, rhs):
    n = diag.size
    c = np.empty(n - 1)
    d = np.empty(n)
    c[0] = sup[0] / diag[0]
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - sub[i - 1] * c[i - 1]
        if i < n - 1:
            c[i] = sup[i] / denom
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / denom
    for i in range(n - 2, -1, -1):
        d[i] -= c[i] * d[i + 1]
    return d


def eigenvector(diag: np.ndarray, off: np.ndarray, eigenvalue: float, sweeps: int = 3) -> np.ndarray:
    """Unit eigenvector by inverse iteration about a slightly perturbed shift."""
    shift = eigenvalue - 1e-10 * max(1.0, abs(eigenvalue))
    x = np.ones(diag.size) / math.sqrt(diag.size)
    # a random-free start that overlaps both parities
    x[: diag.size // 2] *= 0.5
    for _ in range(sweeps):
        x = _thomas(off, diag - shift, off, x)
        x /= np.linalg.norm(x)
    return x


def reflection_overlap(vec: np.ndarray) -> float:
    """``<psi, R psi> / <psi, psi>``; +1 for even states, -1 for odd."""
    return float(np.dot(vec, vec[::-1]) / np.dot(vec, vec))


def richardson(spec, grid: GridSpec | None = None, k: int = 1) -> list[float]:
    """Second-order extrapolation ``(4 E(h/2) - E(h)) / 3``."""
    grid = grid or GridSpec()
    coarse = fd_spectrum(spec, grid, k)
    fine = fd_spectrum(spec, grid.refined(), k)
    return [(4 * f - c) / 3 for c, f in zip(coarse, fine)]
