"""Exact scalars: rationals and Gaussian-rational complex numbers."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Tuple, Union

Rat = Fraction
RatLike = Union[int, Fraction]


def rat(value: Union[int, str, Fraction]) -> Fraction:
    """Parse a rational from an int, a Fraction or a 'p/q' string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class QC:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __add__(self, other: "QC") -> "QC":
        return QC(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "QC") -> "QC":
        return QC(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "QC":
        return QC(-self.re, -self.im)

    def scale(self, c: RatLike) -> "QC":
        return QC(self.re * c, self.im * c)

    def __rmul__(self, c: RatLike) -> "QC":
        return self.scale(c)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __repr__(self) -> str:
        return f"QC({self.re}, {self.im})"


QC_ZERO = QC()

CVector = Tuple[QC, ...]


def czero(dim: int) -> CVector:
    return tuple(QC_ZERO for _ in range(dim))


def cadd(a: CVector, b: CVector) -> CVector:
    return tuple(x + y for x, y in zip(a, b))


def csub(a: CVector, b: CVector) -> CVector:
    return tuple(x - y for x, y in zip(a, b))


def cscale(a: CVector, c: RatLike) -> CVector:
    return tuple(x.scale(c) for x in a)


def creal(vectors: Iterable[QC]) -> Tuple[Fraction, ...]:
    """Interleave a complex vector into its real coordinates (re, im, ...)."""
    out = []
    for z in vectors:
        out.append(z.re)
        out.append(z.im)
    return tuple(out)
