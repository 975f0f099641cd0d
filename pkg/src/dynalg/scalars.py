"""Exact complex numbers with rational real and imaginary parts.

The symbolic layers compare elements term by term, so their coefficient
field must be exact: two elements are equal exactly when their normal
forms coincide, and no rounding may creep into products or Fourier
weights.  ``RationalComplex`` wraps a pair of ``fractions.Fraction``
values and supports the field operations plus the few extras the
algebra needs (conjugation, exact squared modulus).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction, "RationalComplex"]


@dataclass(frozen=True)
class RationalComplex:
    """re + im*i with exact rational components."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def coerce(value: RationalLike) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, (int, Fraction)):
            return RationalComplex(Fraction(value))
        raise TypeError(f"cannot interpret {value!r} as an exact complex scalar")

    # ---- field operations -------------------------------------------------

    def __add__(self, other: RationalLike) -> "RationalComplex":
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: RationalLike) -> "RationalComplex":
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: RationalLike) -> "RationalComplex":
        return RationalComplex.coerce(other) - self

    def __mul__(self, other: RationalLike) -> "RationalComplex":
        other = RationalComplex.coerce(other)
        return RationalComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: RationalLike) -> "RationalComplex":
        other = RationalComplex.coerce(other)
        denom = other.re * other.re + other.im * other.im
        if denom == 0:
            raise ZeroDivisionError("division by zero scalar")
        return RationalComplex(
            (self.re * other.re + self.im * other.im) / denom,
            (self.im * other.re - self.re * other.im) / denom,
        )

    def __rtruediv__(self, other: RationalLike) -> "RationalComplex":
        return RationalComplex.coerce(other) / self

    def __neg__(self) -> "RationalComplex":
        return RationalComplex(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "RationalComplex":
        if exponent < 0:
            return ONE / (self ** (-exponent))
        out = ONE
        for _ in range(exponent):
            out = out * self
        return out

    # ---- structure ---------------------------------------------------------

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def abs_sq(self) -> Fraction:
        """|z|^2, exactly."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def qc(re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0) -> RationalComplex:
    """Shorthand constructor; accepts ints, Fractions and "p/q" strings."""
    return RationalComplex(Fraction(re), Fraction(im))


ZERO = RationalComplex(Fraction(0))
ONE = RationalComplex(Fraction(1))
