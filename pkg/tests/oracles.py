"""Reference computations that share no code with the package.

* ``wronskian`` / ``oracle_eigenvalue``: the transformed equation is
  ``eta (eta - 1) f'' + P1 f' + P0 f = 0``.  The solution regular at
  ``eta = 0`` and the one regular at ``eta = 1`` are each summed as a
  Frobenius series and matched at ``eta = 1/2``; eigenvalues are the zeros
  of their Wronskian.  Unlike AIM this converges to full working precision.
* ``printed_constraints``: the explicit degree 1..4 constraint polynomials
  in ``tau0`` as typeset, for comparison with the three-term recurrence.
* ``exact_aim_constants``: lambda_n, s_n at ``eta = 1/2`` in exact rational
  arithmetic for a few iterations.
* ``schroedinger_residual``: ``max |-psi'' + V psi - eps psi|`` relative to
  ``max |psi|`` with mpmath's high-order numerical second derivative.
"""
from __future__ import annotations

import mpmath as mp
import sympy as sp


def _coefficient_polys(m, beta, v, eps, gamma):
    a = mp.sqrt(-eps) / 2
    g, b = gamma, beta
    if m == 0:
        A = (-4 * a**2 - 8 * a * b - 2 * a + 8 * b * g - 4 * b + 2 * g + v) / 4
    else:
        A = -(2 * a**2 + 4 * a * b + a - 4 * b * g + 2 * b - g) / 2
    B = -(-4 * a**2 - 8 * a * b - 8 * a * g - 2 * a - 4 * b - 4 * g + v) / 4
    C = -(g**2) + (v / 4 if m == 2 else 0)
    P2 = [mp.mpf(0), mp.mpf(-1), mp.mpf(1)]
    P1 = [-(2 * a + 1), (4 * b + 1) / mp.mpf(2) + (2 * a + 1) + 2 * g, -2 * g]
    P0 = [B, C - A - B, -C]
    return P2, P1, P0


def _shift(p, x0):
    out = [mp.mpf(0)] * len(p)
    for i, c in enumerate(p):
        for j in range(i + 1):
            out[j] += c * mp.binomial(i, j) * x0 ** (i - j)
    return out


def _frobenius(P2, P1, P0, x0, K):
    p2, p1, p0 = _shift(P2, x0), _shift(P1, x0), _shift(P0, x0)
    c = [mp.mpf(1)]
    for k in range(K):
        s = mp.mpf(0)
        i = k
        if 0 <= i < len(c):
            s += p2[2] * i * (i - 1) * c[i]
        for j in (1, 2):
            i = k - j + 1
            if 0 <= i < len(c):
                s += p1[j] * i * c[i]
        for j in (0, 1, 2):
            i = k - j
            if 0 <= i < len(c):
                s += p0[j] * c[i]
        c.append(-s / ((k + 1) * (k * p2[1] + p1[0])))
    return c


def wronskian(m, beta, v, eps, gamma=None, K=500):
    beta, v, eps = mp.mpf(beta), mp.mpf(v), mp.mpmathify(eps)
    if gamma is None:
        gamma = mp.sqrt(v) / 2 if m == 2 else mp.mpf(0)
    P2, P1, P0 = _coefficient_polys(m, beta, v, eps, gamma)
    f = _frobenius(P2, P1, P0, mp.mpf(0), K)
    g = _frobenius(P2, P1, P0, mp.mpf(1), K)
    h = mp.mpf(1) / 2
    fv = mp.polyval(f[::-1], h)
    fd = mp.polyval([c * i for i, c in enumerate(f)][1:][::-1], h)
    gv = mp.polyval(g[::-1], -h)
    gd = mp.polyval([c * i for i, c in enumerate(g)][1:][::-1], -h)
    return fv * gd - fd * gv


def oracle_eigenvalue(m, beta, v, guess, digits=130):
    """High-precision eigenvalue near ``guess`` (secant on the Wronskian)."""
    with mp.workdps(digits):
        root = mp.findroot(lambda e: wronskian(m, beta, v, e), mp.mpf(guess), verify=False)
        return +mp.re(root)


_t, _a1, _a2, _b0, _b1, _b2 = sp.symbols("tau0 a1 a2 b0 b1 b2")

_PRINTED = {
    1: _t**2 - _b1 * _t + _b0 * _b2,
    2: _t**3 - (2 * _a2 + 3 * _b1) * _t**2 + 2 * (_b1 * (_a2 + _b1) + (_a1 + 2 * _b0) * _b2) * _t
    - 4 * _b0 * (_a2 + _b1) * _b2,
    3: _t**4 - 2 * (4 * _a2 + 3 * _b1) * _t**3
    + (12 * _a2**2 + 26 * _a2 * _b1 + 11 * _b1**2 + 10 * (_a1 + _b0) * _b2) * _t**2
    - 6 * (_b1 * (_a2 + _b1) * (2 * _a2 + _b1) + (4 * _a1 * _a2 + 8 * _a2 * _b0 + 3 * _a1 * _b1 + 5 * _b0 * _b1) * _b2) * _t
    + 9 * _b0 * _b2 * (2 * (_a2 + _b1) * (2 * _a2 + _b1) + (2 * _a1 + _b0) * _b2),
    4: _t**5 - 10 * (2 * _a2 + _b1) * _t**4
    + (108 * _a2**2 + 130 * _a2 * _b1 + 35 * _b1**2 + 30 * _a1 * _b2 + 20 * _b0 * _b2) * _t**3
    - 2 * (72 * _a2**3 + 186 * _a2**2 * _b1 + 127 * _a2 * _b1**2 + 25 * _b1**3 + 138 * _a1 * _a2 * _b2
           + 134 * _a2 * _b0 * _b2 + 69 * _a1 * _b1 * _b2 + 60 * _b0 * _b1 * _b2) * _t**2
    + 8 * (18 * _a2**3 * _b1 + 33 * _a2**2 * _b1**2 + 18 * _a2 * _b1**3 + 3 * _b1**4 + 54 * _a1 * _a2**2 * _b2
           + 108 * _a2**2 * _b0 * _b2 + 66 * _a1 * _a2 * _b1 * _b2 + 110 * _a2 * _b0 * _b1 * _b2
           + 18 * _a1 * _b1**2 * _b2 + 26 * _b0 * _b1**2 * _b2 + 9 * _a1**2 * _b2**2 + 24 * _a1 * _b0 * _b2**2
           + 8 * _b0**2 * _b2**2) * _t
    - 32 * _b0 * _b2 * (18 * _a2**3 + 33 * _a2**2 * _b1 + 18 * _a2 * _b1**2 + 3 * _b1**3 + 21 * _a1 * _a2 * _b2
                        + 10 * _a2 * _b0 * _b2 + 9 * _a1 * _b1 * _b2 + 4 * _b0 * _b1 * _b2),
}

# the auxiliary quartic in the degree-4 solution
PRINTED_XI = (
    _t**4 - 2 * (4 * _a2 + 3 * _b1) * _t**3
    + (12 * _a2**2 + 26 * _a2 * _b1 + 11 * _b1**2 + 18 * _a1 * _b2 + 16 * _b0 * _b2) * _t**2
    - 2 * (6 * _a2**2 * _b1 + 9 * _a2 * _b1**2 + 3 * _b1**3 + 18 * _a1 * _a2 * _b2 + 34 * _a2 * _b0 * _b2
           + 15 * _a1 * _b1 * _b2 + 22 * _b0 * _b1 * _b2) * _t
    + 24 * _b0 * _b2 * (2 * _a2**2 + 3 * _a2 * _b1 + _b1**2 + 2 * _a1 * _b2 + _b0 * _b2)
)

_ARGS = (_t, _a1, _a2, _b0, _b1, _b2)
printed_constraints = {N: sp.lambdify(_ARGS, expr, modules="mpmath") for N, expr in _PRINTED.items()}
printed_xi = sp.lambdify(_ARGS, PRINTED_XI, modules="mpmath")


def exact_aim_constants(m, beta, v, eps, iterations, gamma=0):
    """``[(lambda_n(1/2), s_n(1/2)) for n = 0..iterations]`` as exact sympy numbers.

    ``eps`` must make ``sqrt(-eps)`` rational, for example ``-1`` or ``-9/4``.
    """
    eta = sp.symbols("eta")
    v, eps, b, g = sp.Rational(v), sp.Rational(eps), sp.Rational(beta), sp.Rational(gamma)
    a = sp.sqrt(-eps) / 2
    if m == 0:
        A = (-4 * a**2 - 8 * a * b - 2 * a + 8 * b * g - 4 * b + 2 * g + v) / 4
    else:
        A = -(2 * a**2 + 4 * a * b + a - 4 * b * g + 2 * b - g) / 2
    B = -(-4 * a**2 - 8 * a * b - 8 * a * g - 2 * a - 4 * b - 4 * g + v) / 4
    C = -(g**2) + (v / 4 if m == 2 else 0)
    lam0 = 2 * g - (4 * b + 1) / (2 * (eta - 1)) - (2 * a + 1) / eta
    s0 = C + A / (eta - 1) + B / eta
    lam, s = lam0, s0
    half = sp.Rational(1, 2)
    out = [(lam.subs(eta, half), s.subs(eta, half))]
    for _ in range(iterations):
        lam, s = sp.together(sp.diff(lam, eta) + s + lam0 * lam), sp.together(sp.diff(s, eta) + s0 * lam)
        out.append((sp.nsimplify(lam.subs(eta, half)), sp.nsimplify(s.subs(eta, half))))
    return out


def direct_schroedinger_equation_residual(m, v, eps, psi, zs):
    """Worst ``|-psi'' + V psi - eps psi|`` over ``zs`` divided by ``max |psi|``."""
    v, eps = mp.mpf(v), mp.mpf(eps)
    worst = mp.mpf(0)
    scale = max(abs(psi(z)) for z in zs)
    for z in zs:
        z = mp.mpf(z)
        V = -v * mp.tanh(z) ** (2 * m) * mp.sech(z) ** 2
        r = -mp.diff(psi, z, 2) + (V - eps) * psi(z)
        worst = max(worst, abs(r))
    return worst / scale
