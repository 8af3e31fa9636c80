"""Exact scalars and the closed-form coefficient families alpha_r, beta_r.

All arithmetic is over :class:`fractions.Fraction`; nothing here ever rounds.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

Rational = Fraction

#: default deformation parameter and Planck-type constant
DEFAULT_Q = Fraction(2)
DEFAULT_HBAR = Fraction(1)


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


@dataclass(frozen=True)
class CoeffSpec:
    """Derivative-shift order of a local bracket family."""

    r: int

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 1:
            raise ValueError(f"order r must be a positive integer, got {self.r!r}")

    def alpha(self, k: int, l: int) -> Fraction:
        return alpha_coeff(self.r, k, l)

    def beta(self, k: int, l: int, m: int) -> Fraction:
        return beta_coeff(self.r, k, l, m)


def _check(r, *idx):
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if any(i < 0 for i in idx):
        raise ValueError(f"derivative orders must be nonnegative, got {idx}")


@lru_cache(maxsize=None)
def alpha_coeff(r: int, k: int, l: int) -> Fraction:
    """(k+r-1)! (l+r-1)! / ((k+l+2r-1)! (r-1)!)."""
    _check(r, k, l)
    return Fraction(factorial(k + r - 1) * factorial(l + r - 1),
                    factorial(k + l + 2 * r - 1) * factorial(r - 1))


@lru_cache(maxsize=None)
def beta_coeff(r: int, k: int, l: int, m: int) -> Fraction:
    """alpha_r(k, l) * alpha_r(k+l+r, m).

    In closed form this is (k+r-1)!(l+r-1)!(m+r-1)! / ((k+l+m+3r-1)! ((r-1)!)^2),
    visibly invariant under permutations of (k, l, m).
    """
    _check(r, k, l, m)
    return alpha_coeff(r, k, l) * alpha_coeff(r, k + l + r, m)


def beta_closed_form(r: int, k: int, l: int, m: int) -> Fraction:
    _check(r, k, l, m)
    return Fraction(
        factorial(k + r - 1) * factorial(l + r - 1) * factorial(m + r - 1),
        factorial(k + l + m + 3 * r - 1) * factorial(r - 1) ** 2)

