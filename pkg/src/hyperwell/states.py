"""Parity sectors and the eigenvalue record shared by every solver."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .errors import UsageError


class Parity(enum.Enum):
    """``beta = 0`` selects even states, ``beta = 1/2`` odd ones."""

    EVEN = Fraction(0)
    ODD = Fraction(1, 2)

    @classmethod
    def coerce(cls, beta) -> "Parity":
        if isinstance(beta, Parity):
            return beta
        if isinstance(beta, str):
            text = beta.strip().lower()
            if text in ("even", "+"):
                return cls.EVEN
            if text in ("odd", "-"):
                return cls.ODD
            try:
                beta = Fraction(text)
            except ValueError:
                raise UsageError(f"parity must be 0 or 1/2, got {beta!r}") from None
        try:
            value = Fraction(beta) if not isinstance(beta, mp.mpf) else Fraction(str(beta))
        except (TypeError, ValueError):
            raise UsageError(f"parity must be 0 or 1/2, got {beta!r}") from None
        for member in cls:
            if member.value == value:
                return member
        raise UsageError(f"parity must be 0 or 1/2, got {beta!r}")

    @property
    def value_mpf(self) -> mp.mpf:
        return mp.mpf(self.value.numerator) / self.value.denominator

    @property
    def label(self) -> str:
        return "0" if self is Parity.EVEN else "0.5"


@dataclass(frozen=True)
class EigenResult:
    """One bound-state energy.

    ``n`` is the level index within the parity sector, counted by energy.
    ``method`` is ``"exact"``, ``"quasi-exact"`` or ``"aim"``.
    """

    n: int
    beta: Parity
    epsilon: mp.mpf
    method: str
    iterations: int | None = None
    residual: mp.mpf | None = None
    converged: bool = True
    flags: tuple = ()
    history: tuple = field(default=(), compare=False, repr=False)
