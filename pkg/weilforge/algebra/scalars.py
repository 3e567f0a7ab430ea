"""Coefficient fields.

Exact mode works over the Gaussian rationals ``QQ_I`` of sympy; float mode uses
Python ``complex`` with an absolute zero threshold.
"""

from dataclasses import dataclass
from typing import Any

import sympy
from sympy import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianElement

Scalar = Any


@dataclass(frozen=True)
class ScalarField:
    exact: bool = True
    tolerance: float = 0.0

    @property
    def zero(self) -> Scalar:
        return QQ_I.zero if self.exact else 0j

    @property
    def one(self) -> Scalar:
        return QQ_I.one if self.exact else 1 + 0j

    @property
    def imaginary_unit(self) -> Scalar:
        return QQ_I(0, 1) if self.exact else 1j

    def coerce(self, value: Scalar) -> Scalar:
        if self.exact:
            if isinstance(value, GaussianElement):
                return QQ_I.convert(value)
            if isinstance(value, complex | float):
                raise TypeError("floating coefficient in exact mode")
            if isinstance(value, sympy.Basic):
                return QQ_I.from_sympy(value)
            return QQ_I.convert(value)
        return to_complex(value)

    def conj(self, value: Scalar) -> Scalar:
        if self.exact:
            return QQ_I(value.x, -value.y)
        return value.conjugate()

    def is_zero(self, value: Scalar) -> bool:
        if self.exact:
            return not value
        return abs(value) <= self.tolerance

    def from_strings(self, re: str, im: str = "0") -> Scalar:
        real = sympy.Rational(re.strip())
        imag = sympy.Rational(im.strip())
        if self.exact:
            return QQ_I(QQ.from_sympy(real), QQ.from_sympy(imag))
        return complex(float(real), float(imag))

    def to_strings(self, value: Scalar) -> tuple[str, str]:
        if self.exact:
            return str(QQ.to_sympy(value.x)), str(QQ.to_sympy(value.y))
        value = complex(value)
        return repr(value.real), repr(value.imag)


EXACT = ScalarField()


def float_field(tolerance: float) -> ScalarField:
    return ScalarField(exact=False, tolerance=tolerance)


def to_complex(value: Scalar) -> complex:
    if isinstance(value, GaussianElement):
        return complex(float(QQ.to_sympy(value.x)), float(QQ.to_sympy(value.y)))
    if isinstance(value, sympy.Basic):
        return complex(value.evalf())
    return complex(value)


def common_field(first: ScalarField, second: ScalarField) -> ScalarField:
    if first.exact:
        return second
    if second.exact:
        return first
    return first if first.tolerance >= second.tolerance else second


def gaussian(re: int | str = 0, im: int | str = 0) -> Scalar:
    return EXACT.from_strings(str(re), str(im))
