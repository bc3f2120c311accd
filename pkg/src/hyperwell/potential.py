"""The hyperbolic potential family ``V_m(z; v) = -v sinh^2m(z) / cosh^(2m+2)(z)``."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .errors import UsageError
from .precision import to_mpf
from .states import Parity


@dataclass(frozen=True)
class PotentialSpec:
    """Family index ``m`` and dimensionless strength ``v``."""

    m: int
    v: mp.mpf

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise UsageError(f"family index m must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        v = to_mpf(self.v)
        if not v > 0:
            raise UsageError(f"potential strength v must be positive, got {self.v!r}")
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class PhysicalSpec:
    U0: mp.mpf
    d: mp.mpf
    mu: mp.mpf
    hbar: mp.mpf = mp.mpf(1)

    def __post_init__(self):
        for name in ("U0", "d", "mu", "hbar"):
            value = to_mpf(getattr(self, name))
            if not value > 0:
                raise UsageError(f"{name} must be positive, got {getattr(self, name)!r}")
            object.__setattr__(self, name, value)


def to_dimensionless(p: PhysicalSpec, m: int = 2):
    """Return ``(PotentialSpec, energy_scale)`` with ``E = epsilon * energy_scale``."""
    v = 2 * p.mu * p.U0 * p.d**2 / p.hbar**2
    energy_scale = p.hbar**2 / (2 * p.mu * p.d**2)
    return PotentialSpec(m, v), energy_scale


def potential_value(spec: PotentialSpec, z) -> mp.mpf:
    z = to_mpf(z)
    t = mp.tanh(z)
    # sinh^2m / cosh^(2m+2) = tanh^2m * sech^2; avoids overflow at large |z|.
    return -spec.v * t ** (2 * spec.m) * mp.sech(z) ** 2


def potential_minimum(spec: PotentialSpec):
    """``(z_min, V_min)`` with ``z_min >= 0``; the mirror ``-z_min`` is implied."""
    m = spec.m
    z_min = mp.acosh(1 + 2 * m) / 2
    # mpmath gives 0**0 == 1, which keeps the m = 0 limit V_min = -v.
    v_min = -spec.v * mp.mpf(m) ** m / mp.mpf(1 + m) ** (1 + m)
    return z_min, v_min


def half_integer_harmonic(k: int) -> mp.mpf:
    """``H_{k - 1/2}`` for ``k >= 1`` via ``H_{1/2} = 2 - 2 ln 2`` and ``H_{x+1} = H_x + 1/(x+1)``."""
    if k < 1:
        raise UsageError("half-integer harmonic numbers are defined here for k >= 1")
    h = 2 - 2 * mp.log(2)
    x = mp.mpf(1) / 2
    for _ in range(k - 1):
        x += 1
        h += 1 / x
    return h


def moment_integrals(spec: PotentialSpec):
    """``(I0, I2)``: integrals of ``V`` and ``z**2 V`` over the real line."""
    m, v = spec.m, spec.v
    i0 = -2 * v / (1 + 2 * m)
    total = mp.pi**2 / 24
    for j in range(m):
        k = m - j
        # H_{(2k-1)/2} = H_{k - 1/2}
        total += (mp.log(4) + half_integer_harmonic(k)) / (4 * k)
    i2 = -(4 * v / (2 * m + 1)) * total
    return i0, i2


def bound_state_upper_bound(spec: PotentialSpec) -> mp.mpf:
    """Real-valued right side of the count bound; the state count is strictly below it."""
    m, v = spec.m, spec.v
    total = 4 * mp.pi**2 / 3
    for j in range(m):
        k = m - j
        total += 8 * (mp.log(4) + half_integer_harmonic(k)) / k
    return 1 + mp.sqrt(v / (2 * m + 1)) * mp.root(total, 4)


def bound_from_moments(spec: PotentialSpec) -> mp.mpf:
    """The same bound assembled from the two moment integrals."""
    i0, i2 = moment_integrals(spec)
    return 1 + mp.sqrt(2) * mp.root(i2 * i0, 4)


def exact_bound_state_count_pt(v, beta) -> int:
    """Number of Poschl-Teller (m = 0) states in the parity sector ``beta``."""
    beta = Parity.coerce(beta).value_mpf
    v = to_mpf(v)
    if not v > 0:
        raise UsageError("v must be positive")
    x = (-1 - 4 * beta + mp.sqrt(1 + 4 * v)) / 4
    if x < 0:
        return 0
    count = 1 + int(mp.floor(x))
    # at x integer the top level sits exactly at threshold (epsilon = 0)
    if x == mp.floor(x):
        count -= 1
    return count


def sector_state_count(spec: PotentialSpec, beta) -> int:
    """Bound states of one parity sector by Sturm oscillation.

    The zero-energy solution started even (``psi(0)=1, psi'(0)=0``) or odd
    (``psi(0)=0, psi'(0)=1``) has as many zeros on ``z > 0`` as the sector
    has bound states.  It is integrated in double precision with classical
    RK4 out to where ``V`` is negligible; beyond that ``psi`` is linear, so
    one more zero lies ahead when ``psi`` and ``psi'`` have opposite signs.
    """
    parity = Parity.coerce(beta)
    m, v = spec.m, float(spec.v)
    depth = v * m**m / (1 + m) ** (1 + m)
    z_end = 0.5 * math.log(4.0 ** (m + 1) * v * 1e16) + 2
    h = 0.02 / max(1.0, math.sqrt(depth))
    steps = int(math.ceil(z_end / h))
    h = z_end / steps

    def accel(z, y):
        c = math.cosh(z)
        return -v * math.tanh(z) ** (2 * m) / (c * c) * y

    z = 0.0
    y, dy = (1.0, 0.0) if parity is Parity.EVEN else (0.0, 1.0)
    zeros = 0
    for _ in range(steps):
        k1y, k1d = dy, accel(z, y)
        k2y, k2d = dy + h / 2 * k1d, accel(z + h / 2, y + h / 2 * k1y)
        k3y, k3d = dy + h / 2 * k2d, accel(z + h / 2, y + h / 2 * k2y)
        k4y, k4d = dy + h * k3d, accel(z + h, y + h * k3y)
        y_next = y + h / 6 * (k1y + 2 * k2y + 2 * k3y + k4y)
        dy += h / 6 * (k1d + 2 * k2d + 2 * k3d + k4d)
        z += h
        if y != 0 and y_next * y < 0:
            zeros += 1
        y = y_next
    if y * dy < 0:
        zeros += 1
    return zeros
