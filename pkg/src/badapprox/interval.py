"""Outward-rounded real intervals and rectangular complex boxes.

Thin value types over mpmath's raw interval kernels (``libmpi``).  Each value
carries its own working precision, so nothing here touches mpmath's global
context.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from mpmath.libmp import (
    fzero,
    from_int,
    from_rational,
    mpf_add,
    mpf_lt,
    mpf_le,
    mpf_gt,
    mpf_neg,
    mpf_sign,
    mpf_sub,
    mpf_shift,
    mpf_mul,
    mpf_div,
    round_ceiling,
    round_floor,
    round_nearest,
    to_float,
    to_rational,
    to_str,
)
from mpmath.libmp import libmpi

DEFAULT_PREC = 256

Rational = Union[int, Fraction]


def _rat_lo(x: Rational, prec: int):
    if isinstance(x, int):
        return from_int(x, prec, round_floor)
    return from_rational(x.numerator, x.denominator, prec, round_floor)


def _rat_hi(x: Rational, prec: int):
    if isinstance(x, int):
        return from_int(x, prec, round_ceiling)
    return from_rational(x.numerator, x.denominator, prec, round_ceiling)


def _mpf_fraction(v) -> Fraction:
    p, q = to_rational(v)
    return Fraction(int(p), int(q))


class RealInterval:
    """Closed interval [lo, hi] with binary-float endpoints."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi, prec: int = DEFAULT_PREC):
        self.lo = lo
        self.hi = hi
        self.prec = prec

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, x: Rational, prec: int = DEFAULT_PREC) -> RealInterval:
        if isinstance(x, int):
            v = from_int(x)
            return cls(v, v, prec)
        return cls(_rat_lo(x, prec), _rat_hi(x, prec), prec)

    @classmethod
    def from_bounds(cls, lo: Rational, hi: Rational, prec: int = DEFAULT_PREC) -> RealInterval:
        if lo > hi:
            raise ValueError("empty interval")
        return cls(_rat_lo(lo, prec), _rat_hi(hi, prec), prec)

    @classmethod
    def pi(cls, prec: int = DEFAULT_PREC) -> RealInterval:
        lo, hi = libmpi.mpi_pi(prec)
        return cls(lo, hi, prec)

    def _coerce(self, other) -> RealInterval:
        if isinstance(other, RealInterval):
            return other
        if isinstance(other, (int, Fraction)):
            return RealInterval.exact(other, self.prec)
        return NotImplemented

    def with_prec(self, prec: int) -> RealInterval:
        return RealInterval(self.lo, self.hi, prec)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        lo, hi = libmpi.mpi_add((self.lo, self.hi), (o.lo, o.hi), p)
        return RealInterval(lo, hi, p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        lo, hi = libmpi.mpi_sub((self.lo, self.hi), (o.lo, o.hi), p)
        return RealInterval(lo, hi, p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RealInterval(mpf_neg(self.hi), mpf_neg(self.lo), self.prec)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.prec, o.prec)
        lo, hi = libmpi.mpi_mul((self.lo, self.hi), (o.lo, o.hi), p)
        return RealInterval(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.contains_zero():
            raise ZeroDivisionError("interval division by an interval containing 0")
        p = max(self.prec, o.prec)
        lo, hi = libmpi.mpi_div((self.lo, self.hi), (o.lo, o.hi), p)
        return RealInterval(lo, hi, p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def square(self) -> RealInterval:
        lo, hi = libmpi.mpi_square((self.lo, self.hi), self.prec)
        return RealInterval(lo, hi, self.prec)

    def __abs__(self) -> RealInterval:
        lo, hi = libmpi.mpi_abs((self.lo, self.hi), self.prec)
        return RealInterval(lo, hi, self.prec)

    def sqrt(self) -> RealInterval:
        if mpf_lt(self.hi, fzero):
            raise ValueError("square root of a negative interval")
        lo = self.lo if mpf_gt(self.lo, fzero) else fzero
        lo, hi = libmpi.mpi_sqrt((lo, self.hi), self.prec)
        return RealInterval(lo, hi, self.prec)

    def exp(self) -> RealInterval:
        lo, hi = libmpi.mpi_exp((self.lo, self.hi), self.prec)
        return RealInterval(lo, hi, self.prec)

    def log(self) -> RealInterval:
        if not self.is_positive():
            raise ValueError("log of an interval not strictly positive")
        lo, hi = libmpi.mpi_log((self.lo, self.hi), self.prec)
        return RealInterval(lo, hi, self.prec)

    def cos_sin(self) -> tuple[RealInterval, RealInterval]:
        c, s = libmpi.mpi_cos_sin((self.lo, self.hi), self.prec)
        return RealInterval(*c, self.prec), RealInterval(*s, self.prec)

    # set operations -----------------------------------------------------

    def intersect(self, other: RealInterval) -> RealInterval:
        lo = other.lo if mpf_gt(other.lo, self.lo) else self.lo
        hi = other.hi if mpf_lt(other.hi, self.hi) else self.hi
        if mpf_gt(lo, hi):
            raise ValueError("intervals do not overlap")
        return RealInterval(lo, hi, max(self.prec, other.prec))

    def hull(self, other: RealInterval) -> RealInterval:
        lo = other.lo if mpf_lt(other.lo, self.lo) else self.lo
        hi = other.hi if mpf_gt(other.hi, self.hi) else self.hi
        return RealInterval(lo, hi, max(self.prec, other.prec))

    def overlaps(self, other: RealInterval) -> bool:
        return mpf_le(self.lo, other.hi) and mpf_le(other.lo, self.hi)

    def subset_of(self, other: RealInterval) -> bool:
        return mpf_le(other.lo, self.lo) and mpf_le(self.hi, other.hi)

    def contains(self, x: Rational) -> bool:
        return self.lower <= x <= self.upper

    def contains_zero(self) -> bool:
        return mpf_sign(self.lo) <= 0 <= mpf_sign(self.hi)

    def is_positive(self) -> bool:
        return mpf_sign(self.lo) > 0

    def is_negative(self) -> bool:
        return mpf_sign(self.hi) < 0

    def sign(self) -> int | None:
        """+1 / -1 when certified, 0 for the exact zero interval, else None."""
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        if mpf_sign(self.lo) == 0 and mpf_sign(self.hi) == 0:
            return 0
        return None

    def certainly_lt(self, other) -> bool:
        o = self._coerce(other)
        return mpf_lt(self.hi, o.lo)

    def certainly_le(self, other) -> bool:
        o = self._coerce(other)
        return mpf_le(self.hi, o.lo)

    # views --------------------------------------------------------------

    @property
    def lower(self) -> Fraction:
        return _mpf_fraction(self.lo)

    @property
    def upper(self) -> Fraction:
        return _mpf_fraction(self.hi)

    def mid(self):
        """Midpoint as a raw mpf value."""
        return mpf_shift(mpf_add(self.lo, self.hi, self.prec + 2, round_nearest), -1)

    def rad(self):
        """Upper bound on the half-width as a raw mpf value."""
        m = self.mid()
        a = mpf_sub(m, self.lo, 53, round_ceiling)
        b = mpf_sub(self.hi, m, 53, round_ceiling)
        return b if mpf_gt(b, a) else a

    def width(self) -> float:
        return to_float(mpf_sub(self.hi, self.lo, 53, round_ceiling))

    def __float__(self) -> float:
        return to_float(self.mid())

    def __repr__(self) -> str:
        dps = max(8, int(self.prec * 0.30103))
        return f"[{to_str(self.lo, dps)}, {to_str(self.hi, dps)}]"

    def __eq__(self, other):
        if not isinstance(other, RealInterval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    @staticmethod
    def maximum(*xs: RealInterval) -> RealInterval:
        """Enclosure of max(x1, ..., xn) over the box x1 x ... x xn."""
        lo, hi = xs[0].lo, xs[0].hi
        prec = xs[0].prec
        for x in xs[1:]:
            if mpf_gt(x.lo, lo):
                lo = x.lo
            if mpf_gt(x.hi, hi):
                hi = x.hi
            prec = max(prec, x.prec)
        return RealInterval(lo, hi, prec)

    @staticmethod
    def minimum(*xs: RealInterval) -> RealInterval:
        lo, hi = xs[0].lo, xs[0].hi
        prec = xs[0].prec
        for x in xs[1:]:
            if mpf_lt(x.lo, lo):
                lo = x.lo
            if mpf_lt(x.hi, hi):
                hi = x.hi
            prec = max(prec, x.prec)
        return RealInterval(lo, hi, prec)


class ComplexInterval:
    """Axis-aligned box re + i*im."""

    __slots__ = ("re", "im")

    def __init__(self, re: RealInterval, im: RealInterval):
        self.re = re
        self.im = im

    @classmethod
    def exact(cls, re: Rational, im: Rational = 0, prec: int = DEFAULT_PREC) -> ComplexInterval:
        return cls(RealInterval.exact(re, prec), RealInterval.exact(im, prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def _coerce(self, other):
        if isinstance(other, ComplexInterval):
            return other
        if isinstance(other, RealInterval):
            return ComplexInterval(other, RealInterval.exact(0, other.prec))
        if isinstance(other, (int, Fraction)):
            return ComplexInterval.exact(other, 0, self.prec)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexInterval(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RealInterval)):
            return ComplexInterval(self.re * other, self.im * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexInterval(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, RealInterval)):
            return ComplexInterval(self.re / other, self.im / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.abs_sq()
        return (self * o.conj()) / n

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def conj(self) -> ComplexInterval:
        return ComplexInterval(self.re, -self.im)

    def square(self) -> ComplexInterval:
        return ComplexInterval(self.re.square() - self.im.square(), 2 * (self.re * self.im))

    def abs_sq(self) -> RealInterval:
        return self.re.square() + self.im.square()

    def __abs__(self) -> RealInterval:
        if self.im.sign() == 0:
            return abs(self.re)
        if self.re.sign() == 0:
            return abs(self.im)
        return self.abs_sq().sqrt()

    def sqrt(self) -> ComplexInterval:
        """Enclosure of one square root, chosen continuously over the box.

        Off the closed negative real axis this is the principal root.  Boxes
        meeting the negative axis get the root with positive imaginary part.
        """
        if self.contains_zero():
            r = abs(self).sqrt()
            b = RealInterval(mpf_neg(r.hi), r.hi, r.prec)
            return ComplexInterval(b, b)
        r = abs(self)
        s = r + self.re
        if s.is_positive() and (self.re.is_positive() or not self.im.contains_zero()):
            re = (s / 2).sqrt()
            return ComplexInterval(re, self.im / (2 * re))
        t = r - self.re
        im = (t / 2).sqrt()
        return ComplexInterval(-self.im / (2 * im), im)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def intersect(self, other: ComplexInterval) -> ComplexInterval:
        return ComplexInterval(self.re.intersect(other.re), self.im.intersect(other.im))

    def overlaps(self, other: ComplexInterval) -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def subset_of(self, other: ComplexInterval) -> bool:
        return self.re.subset_of(other.re) and self.im.subset_of(other.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"({self.re!r} + {self.im!r}i)"

    def __eq__(self, other):
        if not isinstance(other, ComplexInterval):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))


Scalar = Union[RealInterval, ComplexInterval]


def iabs(x: Scalar) -> RealInterval:
    return abs(x)


def to_complex(x: Scalar) -> ComplexInterval:
    if isinstance(x, ComplexInterval):
        return x
    return ComplexInterval(x, RealInterval.exact(0, x.prec))


def contains_zero(x: Scalar) -> bool:
    return x.contains_zero()


def subset_of(x: Scalar, y: Scalar) -> bool:
    return x.subset_of(y)


def mpf_ratio(a, b, prec: int):
    """Nearest-rounded a/b for raw mpf values (non-certified helper)."""
    return mpf_div(a, b, prec, round_nearest)


def mpf_product(a, b, prec: int):
    return mpf_mul(a, b, prec, round_nearest)
