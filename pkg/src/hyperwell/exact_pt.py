"""Closed-form spectrum and wavefunctions of ``V = -v sech^2(z)`` (m = 0)."""
from __future__ import annotations

import mpmath as mp

from .errors import DomainError, NoSuchStateError
from .potential import exact_bound_state_count_pt
from .precision import to_mpf
from .states import EigenResult, Parity


def _level_bound(v, beta: Parity) -> mp.mpf:
    return (-1 - 4 * beta.value_mpf + mp.sqrt(1 + 4 * to_mpf(v))) / 4


def pt_eigenvalue(v, beta, n: int) -> mp.mpf:
    beta = Parity.coerce(beta)
    v = to_mpf(v)
    if n < 0:
        raise NoSuchStateError("level index must be non-negative", max_level=None)
    bound = _level_bound(v, beta)
    if not n < bound:
        count = exact_bound_state_count_pt(v, beta)
        raise NoSuchStateError(
            f"no level n={n} for v={mp.nstr(v, 15)}, beta={beta.label}; "
            f"{count} state(s) in this sector",
            max_level=count - 1 if count else None,
        )
    return -(-1 - 4 * beta.value_mpf - 4 * n + mp.sqrt(1 + 4 * v)) ** 2 / 4


def pt_spectrum(v, beta) -> list[EigenResult]:
    beta = Parity.coerce(beta)
    return [
        EigenResult(n, beta, pt_eigenvalue(v, beta, n), "exact")
        for n in range(exact_bound_state_count_pt(v, beta))
    ]


def gauss_2f1_terminating(neg_n: int, b, c, x) -> mp.mpf:
    """``2F1(-n, b; c; x)`` as the finite sum over k = 0..n."""
    n = -int(neg_n)
    if n < 0 or -n != neg_n:
        raise DomainError(f"first parameter must be a non-positive integer, got {neg_n!r}")
    b, c, x = to_mpf(b), to_mpf(c), to_mpf(x)
    term = mp.mpf(1)
    total = mp.mpf(1)
    for k in range(n):
        if c + k == 0:
            raise DomainError(f"(c)_k vanishes at k={k + 1}: c={mp.nstr(c, 15)}")
        term = term * (k - n) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
    return total


def pt_wavefunction(v, beta, n: int, z) -> mp.mpf:
    """Unnormalized ``psi_n(z)``."""
    beta = Parity.coerce(beta)
    z = to_mpf(z)
    kappa = mp.sqrt(-pt_eigenvalue(v, beta, n))
    sech = mp.sech(z)
    b = (mp.mpf(1) / 2 if beta is Parity.EVEN else mp.mpf(3) / 2) + kappa + n
    psi = sech**kappa * gauss_2f1_terminating(-n, b, 1 + kappa, sech**2)
    if beta is Parity.ODD:
        psi *= mp.tanh(z)
    return psi


def l2_norm(psi, L=25, points: int = 4001) -> mp.mpf:
    """Trapezoid estimate of ``sqrt(int_{-L}^{L} psi^2 dz)`` for plotting."""
    L = to_mpf(L)
    h = 2 * L / (points - 1)
    total = mp.mpf(0)
    for i in range(points):
        w = mp.mpf(1) / 2 if i in (0, points - 1) else mp.mpf(1)
        total += w * psi(-L + i * h) ** 2
    return mp.sqrt(total * h)
