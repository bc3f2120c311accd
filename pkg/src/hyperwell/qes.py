"""Quasi-exact polynomial states of the m = 2 well.

For ``gamma = sqrt(v)/2`` the transformed equation has the confluent Heun
form handled in :mod:`hyperwell.heun`.  A degree-N polynomial solution
requires ``eps = -(sqrt(v) - 3 - 4 beta - 4N)^2 / 4`` and the vanishing of
``P_{N+1}``, which leaves a discrete set of strengths ``v``.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .errors import NoSuchStateError, SufficiencyError, UsageError
from .heun import HeunCoefficients, sufficiency_residual, sufficiency_tolerance
from .precision import to_mpf
from .roots import refine_root, sign, sign_change_brackets
from .states import Parity

DEFAULT_SCAN_POINTS = 4096
DEFAULT_SCAN_SPAN = 100


@dataclass(frozen=True)
class QesPair:
    N: int
    beta: Parity
    v: mp.mpf
    epsilon: mp.mpf
    P_values: tuple
    f_coeffs: tuple

    @property
    def sqrt_v(self) -> mp.mpf:
        return mp.sqrt(self.v)


def threshold(N: int, beta) -> mp.mpf:
    """``3 + 4 beta + 4N``: ``sqrt(v)`` must exceed it."""
    if N < 0:
        raise UsageError("polynomial degree N must be non-negative")
    return 3 + 4 * Parity.coerce(beta).value_mpf + 4 * N


def build_heun_coeffs_m2(beta, v, epsilon) -> HeunCoefficients:
    b = Parity.coerce(beta).value_mpf
    v, eps = to_mpf(v), to_mpf(epsilon)
    if not (eps < 0 and v > 0):
        raise UsageError("need epsilon < 0 and v > 0")
    a = mp.sqrt(-eps) / 2
    g = mp.sqrt(v) / 2
    return HeunCoefficients(
        a1=-2,
        a2=2,
        b0=-2 * (1 + 2 * a),
        b1=3 + 4 * a + 4 * b + 4 * g,
        b2=-4 * g,
        tau0=-(a + 2 * a**2 + 2 * b + 4 * a * b + 2 * g + 4 * a * g - 2 * g**2),
        tau1=-g * (2 * g - 3 - 4 * a - 4 * b),
    )


def qes_epsilon(N: int, beta, v) -> mp.mpf:
    v = to_mpf(v)
    c = threshold(N, beta)
    if not (v > 0 and mp.sqrt(v) > c):
        raise NoSuchStateError(
            f"a degree-{N} polynomial state needs sqrt(v) > {mp.nstr(c, 5)}", max_level=None
        )
    return -((mp.sqrt(v) - c) ** 2) / 4


def qes_recurrence_P(N: int, beta, v, epsilon) -> list:
    """``[P_0, ..., P_{N+1}]`` for the m = 2 problem at ``(v, epsilon)``."""
    if N < 0:
        raise UsageError("polynomial degree N must be non-negative")
    b = Parity.coerce(beta).value_mpf
    v, eps = to_mpf(v), to_mpf(epsilon)
    t = mp.sqrt(v)
    k_eps = mp.sqrt(-eps)
    prev, cur = mp.mpf(0), mp.mpf(1)
    out = [cur]
    for k in range(N + 1):
        diag = eps / 2 - k_eps / 2 * (1 + 4 * b + 4 * k + 2 * t) + v / 2 - (2 * b + k) * (1 + 2 * k) - (1 + 2 * k) * t
        prev, cur = cur, diag * cur + 4 * k * (N - k + 1) * t * (k_eps + k) * prev
        out.append(cur)
    return out


def f_coefficients(P_values, epsilon, N: int) -> tuple:
    """``c_k = P_k (-1/2)^k / (k! (1 + sqrt(-eps))_k)`` for k = 0..N."""
    base = 1 + mp.sqrt(-to_mpf(epsilon))
    out = []
    denom = mp.mpf(1)
    for k in range(N + 1):
        if k:
            denom *= -2 * k * (base + k - 1)
        out.append(P_values[k] / denom)
    return tuple(out)


def _last_P(N: int, beta, t) -> mp.mpf:
    c = threshold(N, beta)
    eps = -((t - c) ** 2) / 4
    return qes_recurrence_P(N, beta, t * t, eps)[-1]


def qes_pair(N: int, beta, v) -> QesPair:
    """Assemble and validate the pair at a strength ``v`` where ``P_{N+1}`` vanishes."""
    beta = Parity.coerce(beta)
    v = to_mpf(v)
    eps = qes_epsilon(N, beta, v)
    P = qes_recurrence_P(N, beta, v, eps)
    residual = sufficiency_residual(P)
    if residual > sufficiency_tolerance():
        raise SufficiencyError(
            f"P_{N + 1} does not vanish at v={mp.nstr(v, 20)} (relative residual {mp.nstr(residual, 5)})",
            residual,
        )
    return QesPair(N, beta, v, eps, tuple(P), f_coefficients(P, eps, N))


def scan_range(N: int, beta, t_max=None):
    """``(t_lo, t_hi)`` for the scan in ``t = sqrt(v)``; ``t_lo`` is excluded."""
    c = threshold(N, beta)
    hi = c + DEFAULT_SCAN_SPAN if t_max is None else to_mpf(t_max)
    return c, hi


def qes_enumerate(N: int, beta, t_max=None, points: int = DEFAULT_SCAN_POINTS) -> list[QesPair]:
    """All pairs with ``sqrt(v)`` in ``(3 + 4 beta + 4N, t_max]``, sorted by ``v``.

    Returns an empty list when the scan range holds no root.
    """
    beta = Parity.coerce(beta)
    lo, hi = scan_range(N, beta, t_max)
    if hi <= lo:
        return []
    step = (hi - lo) / points
    ts = [lo + step * i for i in range(1, points + 1)]
    f = lambda t: _last_P(N, beta, t)  # noqa: E731
    values = [f(t) for t in ts]
    tol = mp.mpf(10) ** (-(mp.mp.dps - 10)) * hi
    roots = [refine_root(f, a, b, tol, fa, fb)[0] for a, b, fa, fb in sign_change_brackets(ts, values)]
    roots += _double_roots(f, ts, values, tol)
    pairs = []
    for t in sorted(roots):
        try:
            pairs.append(qes_pair(N, beta, t * t))
        except SufficiencyError:
            continue
    return pairs


def _double_roots(f, ts, values, tol) -> list:
    """Tangential zeros: local minima of ``|P|`` without a sign change."""
    h = mp.mpf(10) ** (-(mp.mp.dps // 3))
    df = lambda t: (f(t + h) - f(t - h)) / (2 * h)  # noqa: E731
    found = []
    for i in range(1, len(ts) - 1):
        y0, y1, y2 = values[i - 1], values[i], values[i + 1]
        if sign(y0) != sign(y1) or sign(y1) != sign(y2) or y1 == 0:
            continue
        if not (abs(y1) < abs(y0) and abs(y1) < abs(y2)):
            continue
        d0, d2 = df(ts[i - 1]), df(ts[i + 1])
        if sign(d0) == sign(d2):
            continue
        t, _ = refine_root(df, ts[i - 1], ts[i + 1], tol, d0, d2)
        scale = max(abs(y0), abs(y2))
        if abs(f(t)) <= sufficiency_tolerance() * scale:
            found.append(t)
    return found


def qes_polynomial(pair: QesPair, eta) -> mp.mpf:
    return mp.polyval(list(pair.f_coeffs)[::-1], to_mpf(eta))


def qes_wavefunction(pair: QesPair, z) -> mp.mpf:
    """Unnormalized ``psi(z)`` of a quasi-exact state."""
    z = to_mpf(z)
    eta = mp.sech(z) ** 2
    gamma = mp.sqrt(pair.v) / 2
    psi = mp.sech(z) ** mp.sqrt(-pair.epsilon) * mp.exp(-gamma * eta) * qes_polynomial(pair, eta)
    if pair.beta is Parity.ODD:
        psi *= mp.tanh(z)
    return psi
