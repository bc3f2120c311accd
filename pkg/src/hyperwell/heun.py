"""Polynomial solutions of the confluent Heun-type equation

    (a2 z^2 + a1 z) f'' + (b2 z^2 + b1 z + b0) f' - (tau1 z + tau0) f = 0.

A degree-N solution needs ``tau1 = N * b2``; it exists iff ``P_{N+1}(tau0)``
vanishes, where ``P_k`` follow a three-term recurrence.  The recurrence is
evaluated numerically at each ``tau0``, never expanded symbolically.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import mpmath as mp

from .errors import DomainError, SufficiencyError, UsageError
from .precision import to_mpf
from .roots import find_roots, linspace


@dataclass(frozen=True)
class HeunCoefficients:
    a1: mp.mpf
    a2: mp.mpf
    b0: mp.mpf
    b1: mp.mpf
    b2: mp.mpf
    tau0: mp.mpf = mp.mpf(0)
    tau1: mp.mpf = mp.mpf(0)

    def __post_init__(self):
        for f in dataclasses.fields(self):
            object.__setattr__(self, f.name, to_mpf(getattr(self, f.name)))

    def replace(self, **changes) -> "HeunCoefficients":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class PolynomialSolution:
    N: int
    coeffs: tuple
    tau0: mp.mpf
    P_values: tuple

    def __call__(self, z):
        return mp.polyval(self.coeffs[::-1], to_mpf(z))

    def derivative(self, z, order: int = 1):
        c = list(self.coeffs)
        for _ in range(order):
            c = [k * c[k] for k in range(1, len(c))] or [mp.mpf(0)]
        return mp.polyval(c[::-1], to_mpf(z))


def necessary_tau1(N: int, b2) -> mp.mpf:
    if N < 0:
        raise UsageError("polynomial degree N must be non-negative")
    return N * to_mpf(b2)


def recurrence_P(coeffs: HeunCoefficients, N: int, tau0=None) -> list:
    """``[P_0, ..., P_{N+1}]`` at ``tau0`` (defaults to ``coeffs.tau0``)."""
    if N < 0:
        raise UsageError("polynomial degree N must be non-negative")
    t = coeffs.tau0 if tau0 is None else to_mpf(tau0)
    a1, a2, b0, b1, b2 = coeffs.a1, coeffs.a2, coeffs.b0, coeffs.b1, coeffs.b2
    prev, cur = mp.mpf(0), mp.mpf(1)
    out = [cur]
    for k in range(N + 1):
        nxt = (t - k * (k - 1) * a2 - k * b1) * cur + k * b2 * (N - k + 1) * ((k - 1) * a1 + b0) * prev
        prev, cur = cur, nxt
        out.append(cur)
    return out


def sufficiency_residual(P_values) -> mp.mpf:
    """``|P_{N+1}|`` relative to the largest ``|P_k|``, k <= N+1."""
    scale = max(abs(p) for p in P_values)
    return abs(P_values[-1]) / scale


def sufficiency_tolerance() -> mp.mpf:
    return mp.mpf(10) ** (-(mp.mp.dps // 2))


def find_tau0_roots(coeffs: HeunCoefficients, N: int, bracket, points: int = 512, tol=None) -> list:
    """Real ``tau0`` in ``bracket`` where ``P_{N+1}(tau0)`` changes sign.

    ``coeffs.tau0`` is ignored; ``coeffs.tau1`` is not consulted either since
    the recurrence already assumes ``tau1 = N * b2``.
    """
    lo, hi = (to_mpf(x) for x in bracket)
    if not (mp.isfinite(lo) and mp.isfinite(hi)) or lo >= hi:
        raise UsageError("tau0 bracket must be a finite interval lo < hi")
    tol = mp.mpf(10) ** (-(mp.mp.dps - 10)) * max(1, abs(lo), abs(hi)) if tol is None else to_mpf(tol)
    roots = find_roots(lambda t: recurrence_P(coeffs, N, t)[-1], linspace(lo, hi, points), tol)
    # P_{N+1} has degree N+1 in tau0
    return roots[: N + 1]


def pochhammer_denominators(coeffs: HeunCoefficients, N: int) -> list:
    """``k! a1^k (b0/a1)_k`` for k = 0..N; all must be non-zero."""
    if coeffs.a1 == 0:
        raise DomainError("a1 must be non-zero")
    ratio = coeffs.b0 / coeffs.a1
    out = [mp.mpf(1)]
    acc = mp.mpf(1)
    for k in range(1, N + 1):
        # k * a1 * (ratio + k - 1) == k * ((k-1) a1 + b0)
        acc *= k * coeffs.a1 * (ratio + k - 1)
        out.append(acc)
    return out


def build_solution(coeffs: HeunCoefficients, N: int) -> PolynomialSolution:
    P = recurrence_P(coeffs, N)
    residual = sufficiency_residual(P)
    if residual > sufficiency_tolerance():
        raise SufficiencyError(
            f"P_{N + 1}(tau0) does not vanish (relative residual {mp.nstr(residual, 5)})", residual
        )
    if abs(coeffs.tau1 - necessary_tau1(N, coeffs.b2)) > sufficiency_tolerance() * max(1, abs(coeffs.b2) * N):
        raise SufficiencyError(f"necessary condition tau1 = {N} * b2 violated")
    denominators = pochhammer_denominators(coeffs, N)
    if any(d == 0 for d in denominators):
        raise DomainError("(b0/a1)_k vanishes for some k <= N; no polynomial solution of this form")
    c = tuple(P[k] / denominators[k] for k in range(N + 1))
    if N > 0 and abs(c[N]) <= sufficiency_tolerance() * max(abs(x) for x in c):
        raise SufficiencyError(f"leading coefficient c_{N} vanishes; solution is of lower degree")
    return PolynomialSolution(N, c, coeffs.tau0, tuple(P))


def ode_residual(coeffs: HeunCoefficients, sol: PolynomialSolution, z) -> mp.mpf:
    z = to_mpf(z)
    f0, f1, f2 = sol(z), sol.derivative(z), sol.derivative(z, 2)
    return (
        (coeffs.a2 * z**2 + coeffs.a1 * z) * f2
        + (coeffs.b2 * z**2 + coeffs.b1 * z + coeffs.b0) * f1
        - (coeffs.tau1 * z + coeffs.tau0) * f0
    )


def solve_polynomial(coeffs: HeunCoefficients, N: int, bracket, points: int = 512) -> list:
    """Every admissible degree-N solution with ``tau0`` in ``bracket``."""
    base = coeffs.replace(tau1=necessary_tau1(N, coeffs.b2))
    out = []
    for t in find_tau0_roots(base, N, bracket, points):
        try:
            out.append(build_solution(base.replace(tau0=t), N))
        except SufficiencyError:
            continue
    return out
