"""Natural units (hbar = c = 1) with mass-dimension bookkeeping.

Every physical value is a :class:`Quantity` carrying a float and an integer
mass dimension: energy and mass are +1, length and time are -1, energy
density is +4. Conversions to centimetres and seconds happen only at the
I/O boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Real

import numpy as np

from .errors import DimensionError, DomainError

# 1 GeV^-1 expressed in cm (hbar*c).
GEV_INV_IN_CM = 1.973e-14
# 1 GeV^-1 expressed in s (hbar in GeV*s), four significant digits.
GEV_INV_IN_S = 6.582e-25

_HALF = Fraction(1, 2)
_THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class Quantity:
    """A finite real value with an integer mass dimension."""

    value: float
    dim: int = 0

    def __post_init__(self):
        if type(self.value) is float and type(self.dim) is int:
            if not math.isfinite(self.value):
                raise DomainError(f"quantity value must be finite, got {self.value!r}")
            return
        value = float(self.value)
        if not math.isfinite(value):
            raise DomainError(f"quantity value must be finite, got {self.value!r}")
        if isinstance(self.dim, bool) or not isinstance(self.dim, Integral):
            raise TypeError(f"dimension must be an integer, got {self.dim!r}")
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "dim", int(self.dim))

    def require(self, dim: int, what: str = "quantity") -> "Quantity":
        """Return self if its dimension is ``dim``; raise DimensionError otherwise."""
        if self.dim != dim:
            raise DimensionError(f"{what} has wrong mass dimension", dim, self.dim)
        return self

    def _coerce(self, other) -> "Quantity":
        if type(other) is Quantity:
            return other
        if type(other) in (int, float):
            return Quantity(float(other), 0)
        if isinstance(other, Quantity):
            return other
        if isinstance(other, bool):
            return NotImplemented
        if isinstance(other, Real):
            return Quantity(other, 0)
        return NotImplemented

    def _same_dim(self, other: "Quantity", op: str):
        if self.dim != other.dim:
            raise DimensionError(f"cannot {op} quantities of different dimension", self.dim, other.dim)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim + other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.value == 0.0:
            raise DomainError("division by a zero quantity")
        return Quantity(self.value / other.value, self.dim - other.dim)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, p):
        if type(p) is int:
            return Quantity(self.value**p, self.dim * p)
        if isinstance(p, bool):
            raise TypeError("boolean exponent")
        if isinstance(p, Integral):
            return Quantity(self.value ** int(p), self.dim * int(p))
        if isinstance(p, Fraction):
            num, den = p.numerator, p.denominator
            if den == 1:
                return self**num
            if (self.dim * num) % den:
                raise DimensionError(
                    f"rational power {p} of a dim-{self.dim} quantity has non-integer dimension"
                )
            if self.value < 0 and den % 2 == 0:
                raise DomainError(f"even root of negative value {self.value!r}")
            if den == 2:
                root = math.sqrt(self.value)
            elif den == 3:
                root = float(np.cbrt(self.value))
            else:
                root = math.copysign(abs(self.value) ** (1.0 / den), self.value)
            return Quantity(root**num, self.dim * num // den)
        raise TypeError(f"exponent must be an int or Fraction, got {type(p).__name__}")

    def sqrt(self) -> "Quantity":
        return self**_HALF

    def cbrt(self) -> "Quantity":
        return self**_THIRD

    def _cmp(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Quantity with {type(other).__name__}")
        self._same_dim(other, "compare")
        return other.value

    def __lt__(self, other):
        return self.value < self._cmp(other)

    def __le__(self, other):
        return self.value <= self._cmp(other)

    def __gt__(self, other):
        return self.value > self._cmp(other)

    def __ge__(self, other):
        return self.value >= self._cmp(other)

    def __float__(self):
        if self.dim != 0:
            raise DimensionError("only dimensionless quantities convert to float", 0, self.dim)
        return self.value

    def __repr__(self):
        return f"Quantity({self.value!r}, dim={self.dim})"


def gev(value: float, dim: int = 1) -> Quantity:
    """Shorthand for a quantity in powers of GeV."""
    return Quantity(value, dim)


def length_to_cm(q: Quantity) -> float:
    """Convert a length (GeV^-1) to centimetres."""
    q.require(-1, "length")
    return q.value * GEV_INV_IN_CM


def cm_to_length(cm: float) -> Quantity:
    """Convert centimetres to a length in GeV^-1."""
    return Quantity(cm / GEV_INV_IN_CM, -1)


def time_to_seconds(q: Quantity) -> float:
    """Convert a time (GeV^-1) to seconds."""
    q.require(-1, "time")
    return q.value * GEV_INV_IN_S


def hubble_from_cm_inverse(h: float) -> Quantity:
    """Convert an inverse length in cm^-1 (a Hubble rate over c) to GeV."""
    if not h > 0:
        raise DomainError(f"Hubble rate must be positive, got {h!r}")
    return Quantity(h * GEV_INV_IN_CM, 1)


@dataclass(frozen=True)
class Constants:
    M_Pl: Quantity
    G: Quantity
    H0: Quantity
    GeV_inv_in_cm: float
    GeV_inv_in_s: float
    proton_mass: Quantity
    electron_mass: Quantity
    # H0 as a Hubble length, informational only (see README).
    hubble_length_cm: float


def _build_constants() -> Constants:
    m_pl = Quantity(1.22e19, 1)
    return Constants(
        M_Pl=m_pl,
        G=1 / m_pl**2,
        H0=Quantity(0.769e-42, 1),
        GeV_inv_in_cm=GEV_INV_IN_CM,
        GeV_inv_in_s=GEV_INV_IN_S,
        proton_mass=Quantity(0.938, 1),
        electron_mass=Quantity(0.511e-3, 1),
        hubble_length_cm=1.3e28,
    )


CONSTANTS = _build_constants()
