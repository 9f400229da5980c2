"""Exact positive numbers of the form mant * 2^exp used as weight values.

Every built-in weight takes values that are powers of two with possibly
huge integer exponents; sums of such values are dyadic rationals.  A
rational mantissa and a rational exponent are kept as escapes for
user-supplied table weights and fractional decay rates.  Arithmetic and
comparisons never leave exact integer/rational arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


def _strip_twos_int(n: int) -> tuple[int, int]:
    # n = odd * 2^v, n > 0
    v = (n & -n).bit_length() - 1
    return v, n >> v


class Dyadic:
    """Immutable exact positive value ``mant * 2**exp2``.

    ``mant`` is odd-over-odd, so plain powers of two always have
    ``mant == 1``; ``exp2`` stays a Python int unless a genuinely
    fractional exponent is requested.
    """

    __slots__ = ("exp2", "mant")

    def __init__(self, exp2: Rational = 0, mant: Rational = 1):
        if isinstance(exp2, float) or isinstance(mant, float):
            raise TypeError("Dyadic is exact; pass int or Fraction, not float")
        if mant <= 0:
            raise ValueError(f"Dyadic values are strictly positive, got mantissa {mant}")
        if isinstance(mant, Fraction):
            if mant.denominator == 1:
                mant = mant.numerator
            else:
                vn, num = _strip_twos_int(mant.numerator)
                vd, den = _strip_twos_int(mant.denominator)
                exp2 = exp2 + (vn - vd)
                mant = Fraction(num, den) if den != 1 else num
        if isinstance(mant, int) and mant % 2 == 0:
            v, mant = _strip_twos_int(mant)
            exp2 = exp2 + v
        if isinstance(exp2, Fraction) and exp2.denominator == 1:
            exp2 = exp2.numerator
        object.__setattr__(self, "exp2", exp2)
        object.__setattr__(self, "mant", mant)

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Dyadic is immutable")

    @classmethod
    def pow2(cls, e: Rational) -> "Dyadic":
        """2**e without normalisation overhead (the hot constructor)."""
        if isinstance(e, Fraction) and e.denominator == 1:
            e = e.numerator
        d = object.__new__(cls)
        object.__setattr__(d, "exp2", e)
        object.__setattr__(d, "mant", 1)
        return d

    @classmethod
    def from_rational(cls, q: Rational) -> "Dyadic":
        q = Fraction(q)
        if q <= 0:
            raise ValueError(f"Dyadic values are strictly positive, got {q}")
        return cls(0, q)

    ONE: "Dyadic"

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, Dyadic):
            if self.mant == 1 and other.mant == 1:
                return Dyadic.pow2(self.exp2 + other.exp2)
            return Dyadic(self.exp2 + other.exp2,
                          Fraction(self.mant) * Fraction(other.mant))
        if isinstance(other, (int, Fraction)):
            return Dyadic(self.exp2, Fraction(self.mant) * Fraction(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dyadic):
            if self.mant == 1 and other.mant == 1:
                return Dyadic.pow2(self.exp2 - other.exp2)
            return Dyadic(self.exp2 - other.exp2,
                          Fraction(self.mant) / Fraction(other.mant))
        if isinstance(other, (int, Fraction)):
            return Dyadic(self.exp2, Fraction(self.mant) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("Dyadic exponentiation takes an integer power")
        if self.mant == 1:
            return Dyadic.pow2(self.exp2 * k)
        return Dyadic(self.exp2 * k, Fraction(self.mant) ** k)

    # -- order ---------------------------------------------------------

    def _cmp(self, other: "Dyadic") -> int:
        if self.mant == other.mant:
            a, b = self.exp2, other.exp2
            return (a > b) - (a < b)
        d = self.exp2 - other.exp2
        ratio = Fraction(other.mant) / Fraction(self.mant)  # compare 2^d vs ratio
        if isinstance(d, Fraction):
            a, b = d.numerator, d.denominator
            ratio = ratio ** b
        else:
            a = d
        lhs = Fraction(1 << a) if a >= 0 else Fraction(1, 1 << -a)
        return (lhs > ratio) - (lhs < ratio)

    @staticmethod
    def _coerce(other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, (int, Fraction)):
            return other  # sign handled by callers
        return None

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(o, Dyadic):
            if o <= 0:
                return False
            o = Dyadic.from_rational(o)
        return self._cmp(o) < 0

    def __le__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(o, Dyadic):
            if o <= 0:
                return False
            o = Dyadic.from_rational(o)
        return self._cmp(o) <= 0

    def __gt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(o, Dyadic):
            if o <= 0:
                return True
            o = Dyadic.from_rational(o)
        return self._cmp(o) > 0

    def __ge__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not isinstance(o, Dyadic):
            if o <= 0:
                return True
            o = Dyadic.from_rational(o)
        return self._cmp(o) >= 0

    def __eq__(self, other):
        if isinstance(other, Dyadic):
            return self.exp2 == other.exp2 and self.mant == other.mant
        if isinstance(other, (int, Fraction)):
            if other <= 0:
                return False
            try:
                return self.as_fraction() == other
            except ValueError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.exp2, self.mant))

    # -- conversions ---------------------------------------------------

    @property
    def is_one(self) -> bool:
        return self.exp2 == 0 and self.mant == 1

    def as_fraction(self) -> Fraction:
        """Exact value; raises for fractional exponents (irrational value)."""
        e = self.exp2
        if isinstance(e, Fraction):
            raise ValueError(f"2**({e}) is not rational")
        m = Fraction(self.mant)
        if e >= 0:
            return Fraction(m.numerator << e, m.denominator)
        return Fraction(m.numerator, m.denominator << -e)

    def __float__(self) -> float:
        e = float(self.exp2)
        if e > 16384:
            return float("inf")
        if e < -16384:
            return 0.0
        return float(Fraction(self.mant)) * 2.0 ** e

    def to_jsonable(self):
        """Exact JSON form: pure powers of two keep only the exponent."""
        e = self.exp2
        exp = e if isinstance(e, int) else [e.numerator, e.denominator]
        if self.mant == 1:
            return {"pow2": exp}
        m = Fraction(self.mant)
        return {"pow2": exp, "times": [m.numerator, m.denominator]}

    @classmethod
    def from_jsonable(cls, obj) -> "Dyadic":
        e = obj["pow2"]
        exp = Fraction(e[0], e[1]) if isinstance(e, list) else e
        if "times" in obj:
            t = obj["times"]
            return cls(exp, Fraction(t[0], t[1]))
        return cls.pow2(exp)

    def __repr__(self):
        if self.mant == 1:
            return f"2^{self.exp2}"
        return f"{self.mant}*2^{self.exp2}"


Dyadic.ONE = Dyadic.pow2(0)
