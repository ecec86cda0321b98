"""Exact arithmetic: rational polynomials, number fields Q[x]/(f), their elements,
and the CM conjugation.

Rationals are :class:`fractions.Fraction` throughout.  Square roots and CM
detection recover exact elements from certified numerical embeddings and then
confirm every candidate by exact arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, Union

from . import embed as _embed
from .errors import (
    MixedFields,
    NotCM,
    NotSquarefree,
    PrecisionExhausted,
    ReducibleDetected,
)
from .interval import DEFAULT_PREC, ComplexInterval, RealInterval

BigRational = Fraction
MAX_PREC = 4096

Number = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


# --------------------------------------------------------------------------
# polynomials over Q
# --------------------------------------------------------------------------


class RatPoly:
    """Polynomial over Q, coefficients in ascending degree, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def x(cls) -> RatPoly:
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def _coerce(self, other) -> RatPoly:
        if isinstance(other, RatPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return RatPoly([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = o.coeffs + (Fraction(0),) * (n - len(o.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RatPoly:
        out = RatPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __divmod__(self, other: RatPoly) -> tuple[RatPoly, RatPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return RatPoly(), RatPoly(rem)
        quo = [Fraction(0)] * dq
        lead = other.lc
        for k in range(dq - 1, -1, -1):
            c = rem[k + other.degree] / lead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return RatPoly(quo), RatPoly(rem[: other.degree])

    def __mod__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[1]

    def __floordiv__(self, other: RatPoly) -> RatPoly:
        return divmod(self, other)[0]

    def derivative(self) -> RatPoly:
        return RatPoly(k * c for k, c in enumerate(self.coeffs) if k)

    def monic(self) -> RatPoly:
        return RatPoly(c / self.lc for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatPoly([other])
        if not isinstance(other, RatPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_poly(self.coeffs, "x")

    # gcd machinery ------------------------------------------------------

    @staticmethod
    def gcd(a: RatPoly, b: RatPoly) -> RatPoly:
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    @staticmethod
    def xgcd(a: RatPoly, b: RatPoly) -> tuple[RatPoly, RatPoly, RatPoly]:
        """Return (g, s, t) with s*a + t*b = g and g monic."""
        r0, r1 = a, b
        s0, s1 = RatPoly([1]), RatPoly()
        t0, t1 = RatPoly(), RatPoly([1])
        while not r1.is_zero():
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        lead = r0.lc
        return r0.monic(), s0 * (1 / lead), t0 * (1 / lead)

    @staticmethod
    def resultant(a: RatPoly, b: RatPoly) -> Fraction:
        if a.is_zero() or b.is_zero():
            return Fraction(0)
        if b.degree == 0:
            return b.lc ** a.degree
        if a.degree < b.degree:
            sign = -1 if (a.degree * b.degree) % 2 else 1
            return sign * RatPoly.resultant(b, a)
        r = a % b
        if r.is_zero():
            return Fraction(0)
        sign = -1 if (a.degree * b.degree) % 2 else 1
        return sign * b.lc ** (a.degree - r.degree) * RatPoly.resultant(b, r)

    def discriminant(self) -> Fraction:
        d = self.degree
        sign = -1 if (d * (d - 1) // 2) % 2 else 1
        return sign * RatPoly.resultant(self, self.derivative()) / self.lc

    # real roots ---------------------------------------------------------

    def sturm_sequence(self) -> list[RatPoly]:
        seq = [self, self.derivative()]
        while not seq[-1].is_zero():
            seq.append(-(seq[-2] % seq[-1]))
        return seq[:-1]

    def count_real_roots(self) -> int:
        """Number of distinct real roots, by sign changes of the Sturm chain at +-infinity."""
        if self.degree < 1:
            return 0
        seq = self.sturm_sequence()

        def changes(signs):
            signs = [s for s in signs if s != 0]
            return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

        at_pos = [1 if p.lc > 0 else -1 for p in seq]
        at_neg = [(1 if p.lc > 0 else -1) * (-1 if p.degree % 2 else 1) for p in seq]
        return changes(at_neg) - changes(at_pos)

    def rational_roots(self) -> list[Fraction]:
        """Rational roots of a monic integral polynomial (rational root theorem)."""
        c = list(self.coeffs)
        roots = []
        while c and c[0] == 0:
            roots.append(Fraction(0))
            c.pop(0)
        if len(c) <= 1:
            return sorted(set(roots))
        c0 = abs(int(c[0]))
        p = RatPoly(c)
        for dv in _divisors(c0):
            for cand in (dv, -dv):
                if p(Fraction(cand)) == 0:
                    roots.append(Fraction(cand))
        return sorted(set(roots))


def _divisors(n: int) -> list[int]:
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return sorted(out)


def format_poly(coeffs: Sequence[Fraction], var: str) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    s = " + ".join(terms)
    return s.replace("+ -", "- ")


def _quartic_quadratic_factor(c: Sequence[int]) -> tuple[list[int], list[int]] | None:
    """Search x^4 + c3 x^3 + c2 x^2 + c1 x + c0 = (x^2 + a x + b)(x^2 + e x + d) over Z."""
    c0, c1, c2, c3 = c[0], c[1], c[2], c[3]
    if c0 == 0:
        return None
    for b in _divisors(abs(c0)):
        for b in (b, -b):
            d = c0 // b
            if b != d:
                num = c1 - c3 * b
                den = d - b
                if num % den:
                    continue
                a = num // den
                e = c3 - a
                if a * e + b + d == c2:
                    return [b, a, 1], [d, e, 1]
            else:
                # a + e = c3, a*e = c2 - 2b, and c1 = b*c3
                if c1 != b * c3:
                    continue
                disc = c3 * c3 - 4 * (c2 - 2 * b)
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r != disc or (c3 + r) % 2:
                    continue
                a = (c3 + r) // 2
                return [b, a, 1], [d, c3 - a, 1]
    return None


# --------------------------------------------------------------------------
# number fields
# --------------------------------------------------------------------------


class NumberField:
    """F = Q[x]/(f) for a monic, integral, squarefree f.

    ``integral_basis`` is a list of power-basis coordinate vectors spanning the
    order used for enumeration; it defaults to 1, theta, ..., theta^(d-1).
    """

    def __init__(self, poly, integral_basis: Sequence[Sequence] | None = None, var: str = "a"):
        f = poly if isinstance(poly, RatPoly) else RatPoly(poly)
        if f.degree < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        if f.lc != 1 or not f.is_integral():
            raise ValueError("defining polynomial must be monic with integer coefficients")
        if RatPoly.gcd(f, f.derivative()).degree > 0:
            raise NotSquarefree(f"{f} is not squarefree")
        self.poly = f
        self.degree = f.degree
        self.var = var
        self._check_irreducible_small()
        self.r = f.count_real_roots()
        self.s = (self.degree - self.r) // 2
        d = self.degree
        if integral_basis is None:
            basis = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
        else:
            basis = [tuple(_frac(x) for x in row) for row in integral_basis]
        self.basis: tuple[tuple[Fraction, ...], ...] = tuple(basis)
        self._basis_inverse = _invert(self.basis)
        # x^k mod f for k = d .. 2d-2, in power coordinates
        red = []
        cur = [Fraction(0)] * d
        top = [-c for c in f.coeffs[:-1]]
        cur = list(top)
        for _ in range(max(0, d - 1)):
            red.append(tuple(cur))
            carry = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            cur = [u + carry * t for u, t in zip(cur, top)]
        self._reduction = tuple(red)
        self._check_basis()

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], integral_basis=None) -> NumberField:
        return cls(RatPoly(coeffs), integral_basis)

    def _check_irreducible_small(self) -> None:
        f = self.poly
        roots = f.rational_roots()
        if roots and f.degree > 1:
            raise ReducibleDetected(f"{f} has the rational root {roots[0]}")
        if f.degree == 4:
            fac = _quartic_quadratic_factor([int(c) for c in f.coeffs])
            if fac is not None:
                raise ReducibleDetected(f"{f} = ({format_poly(fac[0], 'x')})({format_poly(fac[1], 'x')})")

    def _check_basis(self) -> None:
        one = self.one.basis_coords()
        if any(c.denominator != 1 for c in one):
            raise ValueError("integral basis does not contain 1 in its Z-span")
        elems = [self.elem(b) for b in self.basis]
        for u in elems:
            if not u.is_algebraic_integer():
                raise ValueError(f"basis element {u} is not an algebraic integer")
            for v in elems:
                if any(c.denominator != 1 for c in (u * v).basis_coords()):
                    raise ValueError("integral basis is not closed under multiplication")

    # equality / hashing on the defining data
    def _key(self):
        return (self.poly.coeffs, self.basis)

    def __eq__(self, other):
        if not isinstance(other, NumberField):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        return f"NumberField({self.poly}, signature=({self.r},{self.s}))"

    @property
    def signature(self) -> tuple[int, int]:
        return self.r, self.s

    @property
    def n_places(self) -> int:
        return self.r + self.s

    @cached_property
    def disc(self) -> int:
        return int(self.poly.discriminant())

    @property
    def is_power_basis(self) -> bool:
        d = self.degree
        return all(self.basis[i][j] == (i == j) for i in range(d) for j in range(d))

    # element construction -------------------------------------------------

    def elem(self, coords: Sequence) -> FieldElem:
        c = [_frac(x) for x in coords]
        if len(c) > self.degree:
            c = list((RatPoly(c) % self.poly).coeffs)
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElem(self, tuple(c))

    def __call__(self, x) -> FieldElem:
        if isinstance(x, FieldElem):
            if x.field != self:
                raise MixedFields("element belongs to a different field")
            return x
        if isinstance(x, (list, tuple)):
            return self.elem(x)
        return self.elem([_frac(x)])

    def from_basis(self, coords: Sequence[int]) -> FieldElem:
        d = self.degree
        out = [Fraction(0)] * d
        for c, row in zip(coords, self.basis):
            if c:
                for j in range(d):
                    out[j] += c * row[j]
        return FieldElem(self, tuple(out))

    @property
    def gen(self) -> FieldElem:
        return self.elem([0, 1]) if self.degree > 1 else self.elem([0])

    @property
    def one(self) -> FieldElem:
        return self.elem([1])

    @property
    def zero(self) -> FieldElem:
        return self.elem([])

    def basis_elems(self) -> list[FieldElem]:
        return [self.elem(b) for b in self.basis]

    def embeddings(self, prec: int = DEFAULT_PREC) -> _embed.EmbeddingSet:
        return _cached_roots(self, prec)


@lru_cache(maxsize=64)
def _cached_roots(field: NumberField, prec: int) -> _embed.EmbeddingSet:
    return _embed.isolate_roots(field, prec)


def _reduce(field: NumberField, c: list[Fraction]) -> list[Fraction]:
    d = field.degree
    out = list(c[:d]) + [Fraction(0)] * max(0, d - len(c))
    for k in range(d, len(c)):
        if c[k]:
            red = field._reduction[k - d]
            for j in range(d):
                out[j] += c[k] * red[j]
    return out


def _invert(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    n = len(rows)
    m = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for col in range(n):
        piv = next((i for i in range(col, n) if m[i][col] != 0), None)
        if piv is None:
            raise ValueError("integral basis is linearly dependent")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                fac = m[i][col]
                m[i] = [x - fac * y for x, y in zip(m[i], m[col])]
    return tuple(tuple(r[n:]) for r in m)


def nullspace(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Basis of {v : M v = 0} for a rational matrix M given by rows."""
    if not rows:
        return []
    m = [list(r) for r in rows]
    ncols = len(m[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        pv = m[row][col]
        m[row] = [x / pv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col] != 0:
                fac = m[i][col]
                m[i] = [x - fac * y for x, y in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


class FieldElem:
    """Immutable element of a NumberField, stored in the power basis of theta."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple[Fraction, ...]):
        self.field = field
        self.coords = coords

    def _coerce(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            if other.field is not self.field and other.field != self.field:
                raise MixedFields("operands live in different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.elem([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, tuple(a * other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = self.field.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        prod[i + j] += a * b
        return FieldElem(self.field, tuple(_reduce(self.field, prod)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a number field")
        g, s, _ = RatPoly.xgcd(self.poly(), self.field.poly)
        if g.degree > 0:
            raise ReducibleDetected(f"zero divisor found: gcd with f is {g}")
        return self.field.elem(s.coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElem(self.field, tuple(a / other for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> FieldElem:
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coords[0] == other and not any(self.coords[1:])
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def poly(self) -> RatPoly:
        return RatPoly(self.coords)

    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coords))

    def basis_coords(self) -> list[Fraction]:
        inv = self.field._basis_inverse
        d = self.field.degree
        return [sum((self.coords[j] * inv[j][k] for j in range(d)), Fraction(0)) for k in range(d)]

    def is_integral(self) -> bool:
        """Integral coordinates in the configured order's basis."""
        return all(c.denominator == 1 for c in self.basis_coords())

    def charpoly(self) -> RatPoly:
        """Characteristic polynomial of multiplication by self."""
        d = self.field.degree
        cols = []
        for k in range(d):
            e = self.field.elem([int(i == k) for i in range(d)])
            cols.append((self * e).coords)
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        return _charpoly(mat)

    def is_algebraic_integer(self) -> bool:
        return self.charpoly().is_integral()

    def norm(self) -> Fraction:
        cp = self.charpoly()
        return cp.coeffs[0] * (-1) ** self.field.degree

    def trace(self) -> Fraction:
        return -self.charpoly().coeffs[-2]

    def substitute(self, image: FieldElem) -> FieldElem:
        """Image of self under the ring map theta -> image."""
        out = image.field.zero
        for c in reversed(self.coords):
            out = out * image + c
        return out

    def __repr__(self) -> str:
        return format_poly(self.coords, self.field.var)

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coords]


def _charpoly(mat: list[list[Fraction]]) -> RatPoly:
    """det(x I - M) by the Faddeev-LeVerrier recursion."""
    n = len(mat)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = M * M_{k-1} + c_{n-k+1} I
        prod = [[sum(mat[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        mk = [[prod[i][j] + coeffs[n - k + 1] * ident[i][j] for j in range(n)] for i in range(n)]
        am = [[sum(mat[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return RatPoly(coeffs)


# --------------------------------------------------------------------------
# exact recovery from embeddings
# --------------------------------------------------------------------------


def _denominator_bound(field: NumberField, *elems: FieldElem) -> int:
    """Common denominator for power coordinates of any algebraic integer over elems.

    An algebraic integer b in F satisfies |disc f| * b in Z[theta].
    """
    den = 1
    for e in elems:
        den = math.lcm(den, e.denominator())
    return den * abs(field.disc)


def square_root_search(a: FieldElem, E: _embed.EmbeddingSet | None = None, *,
                       max_prec: int = MAX_PREC) -> tuple[FieldElem | None, dict]:
    """Decide whether a is a square in its field, returning (root or None, certificate)."""
    F = a.field
    if a.is_zero():
        return a, {"method": "zero"}
    E = E if E is not None else F.embeddings()
    L = a.denominator()
    D = L * abs(F.disc)
    while True:
        vals = _embed.embed(a, E)
        pending = False
        notes = []
        for i in range(F.r):
            sg = vals[i].sign()
            if sg == -1:
                return None, {
                    "method": "negative at a real place",
                    "place": i,
                    "precision_bits": E.precision,
                }
            if sg is None:
                pending = True
        if not pending:
            roots = [v.sqrt() for v in vals]
            found = None
            for pattern in itertools.product((1, -1), repeat=len(roots) - 1):
                signs = (1,) + pattern
                w = _embed.expand_places(E, [r * s for r, s in zip(roots, signs)])
                status, coords = _embed.reconstruct(E, w, D)
                if status == "ambiguous":
                    pending = True
                    break
                if status == "none":
                    notes.append({"signs": list(signs), "reason": coords})
                    continue
                b = F.elem([Fraction(c) for c in coords])
                if b * b == a:
                    found = b
                    break
                notes.append({"signs": list(signs), "reason": "candidate failed exact squaring"})
            if not pending:
                if found is not None:
                    return found, {"method": "reconstruction", "root": found.to_strings()}
                return None, {
                    "method": "exhausted sign patterns",
                    "denominator_bound": D,
                    "patterns": notes,
                    "precision_bits": E.precision,
                }
        if E.precision * 2 > max_prec:
            raise PrecisionExhausted(f"square test for {a} unresolved at {E.precision} bits")
        E = E.refine(E.precision * 2)


def is_square(a: FieldElem, E: _embed.EmbeddingSet | None = None, *,
              max_prec: int = MAX_PREC) -> FieldElem | None:
    """Return b with b*b == a, or None when a is certified not to be a square."""
    return square_root_search(a, E, max_prec=max_prec)[0]


# --------------------------------------------------------------------------
# CM structure
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CMStructure:
    field: NumberField
    conj_image: FieldElem
    fixed_subfield_basis: tuple[FieldElem, ...]

    @cached_property
    def _image_powers(self) -> tuple[FieldElem, ...]:
        out = [self.field.one]
        for _ in range(1, self.field.degree):
            out.append(out[-1] * self.conj_image)
        return tuple(out)

    def conj(self, a: FieldElem) -> FieldElem:
        if a.field != self.field:
            raise MixedFields("element is not in the CM field")
        d = self.field.degree
        out = [Fraction(0)] * d
        for c, pw in zip(a.coords, self._image_powers):
            if c:
                for j in range(d):
                    out[j] += c * pw.coords[j]
        return FieldElem(self.field, tuple(out))

    def is_fixed(self, a: FieldElem) -> bool:
        return self.conj(a) == a

    @property
    def subfield_degree(self) -> int:
        return len(self.fixed_subfield_basis)


def cm_structure(F: NumberField, E: _embed.EmbeddingSet | None = None, *,
                 max_prec: int = MAX_PREC) -> CMStructure:
    """Find the complex conjugation of a CM field as a field automorphism."""
    if F.r != 0:
        raise NotCM(f"field has {F.r} real places")
    E = E if E is not None else F.embeddings()
    D = abs(F.disc)
    while True:
        roots = E.all_roots()
        status, coords = _embed.reconstruct(E, [z.conj() for z in roots], D)
        if status == "none":
            raise NotCM(f"complex conjugation is not induced by an automorphism ({coords})")
        if status == "ok":
            break
        if E.precision * 2 > max_prec:
            raise PrecisionExhausted("CM detection unresolved")
        E = E.refine(E.precision * 2)
    beta = F.elem([Fraction(c) for c in coords])
    theta = F.gen
    if not F.poly(beta).is_zero():
        raise NotCM("reconstructed conjugate of theta is not a root of f")
    if beta == theta:
        raise NotCM("conjugation acts trivially")
    if beta.substitute(beta) != theta:
        raise NotCM("conjugation is not an involution")
    d = F.degree
    # kernel of (tau - id) on the power basis
    tau_cols = []
    pw = F.one
    for k in range(d):
        tau_cols.append((pw - F.elem([int(i == k) for i in range(d)])).coords)
        pw = pw * beta
    rows = [[tau_cols[k][i] for k in range(d)] for i in range(d)]
    ker = nullspace(rows)
    fixed = tuple(F.elem(v) for v in ker)
    if len(fixed) * 2 != d:
        raise NotCM("fixed subfield has the wrong degree")
    return CMStructure(F, beta, fixed)


def relative_norm(a: FieldElem, cm: CMStructure) -> FieldElem:
    """N_{F/E}(a) = a * conj(a)."""
    n = a * cm.conj(a)
    if not cm.is_fixed(n):
        raise AssertionError("relative norm is not fixed by conjugation")
    return n
