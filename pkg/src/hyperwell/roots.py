"""Bracketing root search at arbitrary precision.

Roots are located by sign changes on a sample grid, narrowed by bisection
and then polished with Anderson-Bjorck (a secant step that keeps the
bracket).  A plain bisection step is forced whenever the secant fails to
halve the bracket, so the method never does worse than bisection.
"""
from __future__ import annotations

from typing import Callable, Sequence

import mpmath as mp

from .precision import to_mpf


def sign(x) -> int:
    return 0 if x == 0 else (1 if x > 0 else -1)


def linspace(a, b, points: int) -> list:
    a, b = to_mpf(a), to_mpf(b)
    step = (b - a) / (points - 1)
    return [a + i * step for i in range(points)]


def sign_change_brackets(xs: Sequence, fs: Sequence) -> list[tuple]:
    """``(a, b, f(a), f(b))`` for consecutive samples straddling zero.

    An exact zero at a sample yields the degenerate bracket ``(x, x, 0, 0)``.
    """
    out = []
    for i in range(len(xs) - 1):
        s0, s1 = sign(fs[i]), sign(fs[i + 1])
        if s0 == 0:
            out.append((xs[i], xs[i], fs[i], fs[i]))
        elif s1 != 0 and s0 != s1:
            out.append((xs[i], xs[i + 1], fs[i], fs[i + 1]))
    if len(fs) and sign(fs[-1]) == 0:
        out.append((xs[-1], xs[-1], fs[-1], fs[-1]))
    return out


def refine_root(
    f: Callable,
    a,
    b,
    tol,
    fa=None,
    fb=None,
    bisections: int = 4,
    max_evals: int = 400,
):
    """Shrink the sign-change bracket ``[a, b]`` of ``f`` to width ``tol``.

    Returns ``(root, f(root))``.
    """
    a, b, tol = to_mpf(a), to_mpf(b), to_mpf(tol)
    if a == b:
        return a, f(a) if fa is None else fa
    if a > b:
        a, b, fa, fb = b, a, fb, fa
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0:
        return a, fa
    if fb == 0:
        return b, fb
    if sign(fa) == sign(fb):
        raise ValueError("refine_root needs a sign change on [a, b]")

    evals = 0
    for _ in range(bisections):
        c = (a + b) / 2
        fc = f(c)
        evals += 1
        if fc == 0:
            return c, fc
        if sign(fc) == sign(fa):
            a, fa = c, fc
        else:
            b, fb = c, fc

    # x0 is the retained endpoint, x1 the latest iterate; signs differ.
    # f0 may be scaled down by Anderson-Bjorck; t0 keeps the true value.
    x0, f0, t0, x1, f1 = a, fa, fa, b, fb
    widths = [abs(x1 - x0)] * 2
    while abs(x1 - x0) > tol and evals < max_evals:
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        f2 = f(x2)
        evals += 1
        if f2 == 0 or abs(x2 - x1) <= tol:
            return x2, f2
        if sign(f2) == sign(f1):
            m = 1 - f2 / f1
            f0 = f0 * (m if m > 0 else mp.mpf(0.5))
        else:
            x0, f0, t0 = x1, f1, f1
        x1, f1 = x2, f2
        widths.append(abs(x1 - x0))
        if widths[-1] > widths[-3] / 2:
            mid = (x0 + x1) / 2
            fm = f(mid)
            evals += 1
            if fm == 0:
                return mid, fm
            if sign(fm) == sign(f1):
                x1, f1 = mid, fm
            else:
                x0, f0, t0 = mid, fm, fm
            widths.append(abs(x1 - x0))
    return (x0, t0) if abs(t0) < abs(f1) else (x1, f1)


def find_roots(f: Callable, xs: Sequence, tol, values: Sequence | None = None) -> list:
    """All sign-change roots of ``f`` on the sample grid ``xs``, ascending."""
    fs = [f(x) for x in xs] if values is None else values
    roots = [refine_root(f, a, b, tol, fa, fb)[0] for a, b, fa, fb in sign_change_brackets(xs, fs)]
    return sorted(roots)
