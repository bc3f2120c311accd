"""Arbitrary-precision reals and truncated Taylor series.

All numerics run on :mod:`mpmath` ``mpf`` values under the ambient
``mp.dps``.  :func:`working_precision` sets it for a block; the CLI and the
test-suite use it to pin 100 digits.  :class:`BigReal` is a thin value type
used where a number has to carry its own precision (serialization, reports).
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import mpmath as mp

from .errors import PoleAtCenterError, UsageError

DEFAULT_DIGITS = 100
MIN_DIGITS = 30
DIGITS_ENV = "HYPERWELL_DIGITS"


def default_digits() -> int:
    """Precision taken from ``$HYPERWELL_DIGITS`` or :data:`DEFAULT_DIGITS`."""
    raw = os.environ.get(DIGITS_ENV)
    if not raw:
        return DEFAULT_DIGITS
    try:
        digits = int(raw)
    except ValueError as exc:
        raise UsageError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from exc
    return check_digits(digits)


def check_digits(digits: int) -> int:
    if digits < MIN_DIGITS:
        raise UsageError(f"precision must be at least {MIN_DIGITS} digits, got {digits}")
    return digits


def working_precision(digits: int):
    """Context manager running the block at ``digits`` decimal digits."""
    return mp.workdps(check_digits(digits))


def to_mpf(x) -> mp.mpf:
    """Coerce ints, strings, floats, fractions and BigReals to ``mpf``."""
    if isinstance(x, BigReal):
        return x.value
    if isinstance(x, mp.mpf):
        return x
    if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, (int, float)):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def to_decimal_string(x, digits: int | None = None) -> str:
    """Locale-free decimal rendering with ``digits`` significant digits."""
    digits = mp.mp.dps if digits is None else digits
    return mp.nstr(to_mpf(x), digits, strip_zeros=False)


def from_decimal_string(text: str) -> mp.mpf:
    return mp.mpf(text.strip())


@dataclass(frozen=True)
class BigReal:
    """An ``mpf`` tagged with the number of decimal digits it is good to.

    Binary operations run at the larger of the two precisions.
    """

    value: mp.mpf
    precision: int = DEFAULT_DIGITS

    def __post_init__(self):
        check_digits(self.precision)
        with mp.workdps(self.precision):
            object.__setattr__(self, "value", +to_mpf(self.value))

    @classmethod
    def parse(cls, text: str, precision: int = DEFAULT_DIGITS) -> "BigReal":
        with mp.workdps(precision):
            return cls(from_decimal_string(text), precision)

    def __str__(self) -> str:
        with mp.workdps(self.precision):
            return to_decimal_string(self.value, self.precision)

    def _binary(self, other, fn):
        if not isinstance(other, BigReal):
            other = BigReal(other, self.precision)
        digits = max(self.precision, other.precision)
        with mp.workdps(digits):
            return BigReal(fn(self.value, other.value), digits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return BigReal(other, self.precision) - self

    def __rtruediv__(self, other):
        return BigReal(other, self.precision) / self

    def __neg__(self):
        return BigReal(-self.value, self.precision)

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class TaylorSeries:
    """Truncated power series ``sum coeffs[k] * x**k`` with ``x = eta - center``."""

    center: mp.mpf
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise UsageError("a Taylor series needs at least one coefficient")
        object.__setattr__(self, "coeffs", tuple(to_mpf(c) for c in self.coeffs))
        object.__setattr__(self, "center", to_mpf(self.center))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, value, center, order: int) -> "TaylorSeries":
        return cls(center, (to_mpf(value),) + (mp.mpf(0),) * order)

    def __call__(self, offset=0):
        offset = to_mpf(offset)
        if not offset:
            return self.coeffs[0]
        return mp.polyval(self.coeffs[::-1], offset)

    def truncate(self, order: int) -> "TaylorSeries":
        if order > self.order:
            return self.padded(order)
        return TaylorSeries(self.center, self.coeffs[: order + 1])

    def padded(self, order: int) -> "TaylorSeries":
        extra = max(0, order - self.order)
        return TaylorSeries(self.center, self.coeffs + (mp.mpf(0),) * extra)

    def _check_center(self, other: "TaylorSeries"):
        if self.center != other.center:
            raise UsageError(
                f"series centers differ: {mp.nstr(self.center, 15)} vs {mp.nstr(other.center, 15)}"
            )

    def add(self, other: "TaylorSeries", order: int | None = None) -> "TaylorSeries":
        self._check_center(other)
        order = max(self.order, other.order) if order is None else order
        a, b = self.padded(order).coeffs, other.padded(order).coeffs
        return TaylorSeries(self.center, tuple(a[k] + b[k] for k in range(order + 1)))

    def sub(self, other: "TaylorSeries", order: int | None = None) -> "TaylorSeries":
        return self.add(other.scale(-1), order)

    def mul(self, other: "TaylorSeries", order: int | None = None) -> "TaylorSeries":
        self._check_center(other)
        order = max(self.order, other.order) if order is None else order
        a, b = self.padded(order).coeffs, other.padded(order).coeffs
        out = []
        for k in range(order + 1):
            acc = mp.mpf(0)
            for i in range(k + 1):
                acc += a[i] * b[k - i]
            out.append(acc)
        return TaylorSeries(self.center, tuple(out))

    def scale(self, factor) -> "TaylorSeries":
        factor = to_mpf(factor)
        return TaylorSeries(self.center, tuple(factor * c for c in self.coeffs))

    def differentiate(self) -> "TaylorSeries":
        if self.order == 0:
            return TaylorSeries(self.center, (mp.mpf(0),))
        return TaylorSeries(
            self.center, tuple((k + 1) * self.coeffs[k + 1] for k in range(self.order))
        )

    __add__ = add
    __sub__ = sub
    __mul__ = mul

    def __neg__(self):
        return self.scale(-1)


_OPS = {"add": TaylorSeries.add, "sub": TaylorSeries.sub, "mul": TaylorSeries.mul}


def series_arith(a: TaylorSeries, b: TaylorSeries, op: str, order: int | None = None) -> TaylorSeries:
    """Apply ``op`` in {add, sub, mul}; the shorter operand is zero-padded."""
    try:
        fn = _OPS[op]
    except KeyError:
        raise UsageError(f"unknown series operation {op!r}; expected one of {sorted(_OPS)}") from None
    return fn(a, b, order)


def series_of_simple_pole(c, p, r0, order: int) -> TaylorSeries:
    """Taylor coefficients of ``c / (eta - p)`` about ``eta = r0``.

    ``c/(eta-p) = c/(d + x)`` with ``d = r0 - p``, so coefficient k is
    ``c * (-1)**k / d**(k+1)``.
    """
    c, p, r0 = to_mpf(c), to_mpf(p), to_mpf(r0)
    d = r0 - p
    if d == 0:
        raise PoleAtCenterError(f"pole at {mp.nstr(p, 15)} coincides with the expansion point")
    term = c / d
    coeffs = []
    for _ in range(order + 1):
        coeffs.append(term)
        term = -term / d
    return TaylorSeries(r0, tuple(coeffs))


def polynomial_series(poly_coeffs: Sequence, r0, order: int) -> TaylorSeries:
    """Re-expand ``sum poly_coeffs[j] * eta**j`` about ``r0``."""
    r0 = to_mpf(r0)
    out = [mp.mpf(0)] * (order + 1)
    for j, c in enumerate(poly_coeffs):
        c = to_mpf(c)
        for i in range(min(j, order) + 1):
            out[i] += c * mp.binomial(j, i) * r0 ** (j - i)
    return TaylorSeries(r0, tuple(out))


def differentiate(s: TaylorSeries) -> TaylorSeries:
    return s.differentiate()


def sum_series(terms: Iterable[TaylorSeries]) -> TaylorSeries:
    terms = list(terms)
    total = terms[0]
    for t in terms[1:]:
        total = total.add(t)
    return total
