"""Certified embeddings F -> R^r x C^s.

Roots of the defining polynomial are located numerically (numpy seeds, Newton
polish in mpmath's raw complex arithmetic) and then certified: a disc of radius
``d * |f(x)| / |f'(x)|`` around any point x contains a root of f, so d pairwise
disjoint discs around d approximations isolate every root exactly once.  A disc
centred on the real axis that isolates a root isolates a real root.

Place ordering: real roots ascending, then one root from each complex pair
(positive imaginary part) ordered by real part, ties by imaginary part.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import TYPE_CHECKING, Sequence

import numpy as np
from mpmath.libmp import (
    from_float,
    from_int,
    fzero,
    mpf_abs,
    mpf_lt,
    mpf_neg,
    mpf_sub,
    round_nearest,
    to_float,
)
from mpmath.libmp.libmpc import mpc_abs, mpc_add, mpc_div, mpc_mul, mpc_sub

from .errors import PrecisionExhausted
from .interval import DEFAULT_PREC, ComplexInterval, RealInterval, Scalar

if TYPE_CHECKING:
    from .exactnum import FieldElem, NumberField

MAX_PREC = 4096

IntervalVec = tuple  # r RealIntervals followed by s ComplexIntervals


# --------------------------------------------------------------------------
# root isolation
# --------------------------------------------------------------------------


def _newton_polish(coeffs: Sequence[int], z, prec: int, steps: int = 200):
    """Newton iteration for a simple root, raw mpc in / raw mpc out."""
    cs = [(from_int(int(c)), fzero) for c in coeffs]
    wp = prec + 20
    eps_bits = prec + 4
    for _ in range(steps):
        p = cs[-1]
        dp = (fzero, fzero)
        for c in cs[-2::-1]:
            dp = mpc_add(mpc_mul(dp, z, wp, round_nearest), p, wp, round_nearest)
            p = mpc_add(mpc_mul(p, z, wp, round_nearest), c, wp, round_nearest)
        if dp == (fzero, fzero):
            return z
        step = mpc_div(p, dp, wp, round_nearest)
        z = mpc_sub(z, step, wp, round_nearest)
        sz = mpc_abs(step, 53)
        az = mpc_abs(z, 53)
        if sz == fzero:
            break
        if to_float(sz) <= 2.0 ** (-eps_bits) * max(1.0, to_float(az)):
            break
    return z


def _eval_with_derivative(coeffs: Sequence[Fraction], x):
    p = RealInterval.exact(0, x.prec) if isinstance(x, RealInterval) else ComplexInterval.exact(0, 0, x.prec)
    dp = p
    for c in reversed(coeffs):
        dp = dp * x + p
        p = p * x + c
    return p, dp


def _disc_radius(coeffs, x) -> RealInterval | None:
    d = len(coeffs) - 1
    fx, dfx = _eval_with_derivative(coeffs, x)
    den = abs(dfx)
    if not den.is_positive():
        return None
    rho = abs(fx) * d / den
    return RealInterval(rho.hi, rho.hi, rho.prec)


def _seeds_numpy(coeffs: Sequence[Fraction]) -> list[complex]:
    return list(np.roots([float(c) for c in reversed(coeffs)]))


def _seeds_mpmath(coeffs: Sequence[Fraction], prec: int) -> list[complex]:
    import mpmath

    with mpmath.workprec(prec):
        rts = mpmath.polyroots([mpmath.mpf(int(c)) for c in reversed(coeffs)],
                               maxsteps=400, extraprec=prec, error=False)
    return [complex(z) for z in rts]


def _try_isolate(coeffs: Sequence[Fraction], r: int, prec: int, seeds: list[complex]):
    d = len(coeffs) - 1
    reals = []   # (center raw mpf, radius RealInterval)
    cplx = []    # (center raw mpc, radius)
    for s in seeds:
        z0 = (from_float(float(s.real)), from_float(float(s.imag)))
        z = _newton_polish([int(c) for c in coeffs], z0, prec)
        X = ComplexInterval(RealInterval(z[0], z[0], prec), RealInterval(z[1], z[1], prec))
        rho = _disc_radius(coeffs, X)
        if rho is None:
            return None
        if not mpf_lt(rho.lo, mpf_abs(z[1])):
            xr = RealInterval(z[0], z[0], prec)
            rho_r = _disc_radius(coeffs, xr)
            if rho_r is None:
                return None
            reals.append((z[0], rho_r))
        elif z[1][0] == 0:  # positive imaginary part (mpf sign bit clear)
            cplx.append((z, rho))
    if len(reals) != r or len(reals) + 2 * len(cplx) != d:
        return None
    discs = []
    for c, rho in reals:
        discs.append((ComplexInterval(RealInterval(c, c, prec), RealInterval.exact(0, prec)), rho))
    for c, rho in cplx:
        ctr = ComplexInterval(RealInterval(c[0], c[0], prec), RealInterval(c[1], c[1], prec))
        discs.append((ctr, rho))
        discs.append((ctr.conj(), rho))
    for i in range(len(discs)):
        for j in range(i + 1, len(discs)):
            dist = abs(discs[i][0] - discs[j][0])
            if not (discs[i][1] + discs[j][1]).certainly_lt(dist):
                return None
    real_enc = []
    for c, rho in reals:
        x = RealInterval(c, c, prec)
        real_enc.append(RealInterval((x - rho).lo, (x + rho).hi, prec))
    cplx_enc = []
    for c, rho in cplx:
        re = RealInterval(c[0], c[0], prec)
        im = RealInterval(c[1], c[1], prec)
        box = ComplexInterval(RealInterval((re - rho).lo, (re + rho).hi, prec),
                              RealInterval((im - rho).lo, (im + rho).hi, prec))
        if not box.im.is_positive():
            return None
        cplx_enc.append(box)
    real_enc.sort(key=lambda iv: to_float(iv.mid()))
    cplx_enc.sort(key=functools.cmp_to_key(_cmp_complex))
    return tuple(real_enc), tuple(cplx_enc)


def _cmp_complex(a: ComplexInterval, b: ComplexInterval) -> int:
    if a.re.certainly_lt(b.re):
        return -1
    if b.re.certainly_lt(a.re):
        return 1
    if a.im.certainly_lt(b.im):
        return -1
    if b.im.certainly_lt(a.im):
        return 1
    return 0


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    """Certified enclosures of the roots of f, one per place."""

    field: "NumberField"
    real_roots: tuple[RealInterval, ...]
    complex_roots: tuple[ComplexInterval, ...]
    precision: int

    @property
    def r(self) -> int:
        return len(self.real_roots)

    @property
    def s(self) -> int:
        return len(self.complex_roots)

    @property
    def n_places(self) -> int:
        return self.r + self.s

    def roots(self) -> tuple[Scalar, ...]:
        return self.real_roots + self.complex_roots

    def all_roots(self) -> list[ComplexInterval]:
        """All d roots: real ones, then the chosen complex ones, then their conjugates."""
        out = [ComplexInterval(x, RealInterval.exact(0, x.prec)) for x in self.real_roots]
        out += list(self.complex_roots)
        out += [z.conj() for z in self.complex_roots]
        return out

    def refine(self, prec: int) -> EmbeddingSet:
        """Re-isolate at ``prec`` bits, intersected with the current enclosures."""
        if prec <= self.precision:
            return self
        fresh = isolate_roots(self.field, prec)
        reals = tuple(_match(old, fresh.real_roots) for old in self.real_roots)
        cplx = tuple(_match(old, fresh.complex_roots) for old in self.complex_roots)
        return EmbeddingSet(self.field, reals, cplx, prec)

    @cached_property
    def power_images(self) -> tuple[tuple[Scalar, ...], ...]:
        """power_images[i][k] encloses sigma_i(theta)^k."""
        d = self.field.degree
        out = []
        for x in self.roots():
            row = [_one_like(x, self.precision)]
            for _ in range(1, d):
                row.append(row[-1] * x)
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def basis_images(self) -> tuple[tuple[Scalar, ...], ...]:
        """basis_images[i][k] encloses sigma_i(b_k) for the integral basis b."""
        out = []
        for i in range(self.n_places):
            row = []
            for b in self.field.basis:
                row.append(_combine(b, self.power_images[i], self.precision, i < self.r))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def lagrange(self) -> tuple[tuple[ComplexInterval, ...], ...]:
        """lagrange[k][j]: weight of the value at root j in power coordinate k.

        For any element x, coords_k(x) = sum_j sigma_j(x) * lagrange[k][j],
        summing over all d roots in ``all_roots`` order.
        """
        f = self.field.poly.coeffs
        d = len(f) - 1
        cols = []
        for rho in self.all_roots():
            h = [None] * d
            h[d - 1] = ComplexInterval.exact(1, 0, self.precision)
            for k in range(d - 1, 0, -1):
                h[k - 1] = h[k] * rho + f[k]
            _, df = _eval_with_derivative(f, rho)
            cols.append([hk / df for hk in h])
        return tuple(tuple(cols[j][k] for j in range(d)) for k in range(d))

    @cached_property
    def basis_lagrange(self) -> tuple[tuple[ComplexInterval, ...], ...]:
        """Same as ``lagrange`` but for integral-basis coordinates."""
        inv = self.field._basis_inverse
        d = self.field.degree
        out = []
        for k in range(d):
            row = []
            for j in range(d):
                acc = ComplexInterval.exact(0, 0, self.precision)
                for m in range(d):
                    if inv[m][k]:
                        acc = acc + self.lagrange[m][j] * inv[m][k]
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def describe(self, digits: int = 20) -> list[str]:
        from .io import format_scalar

        return [format_scalar(x, digits) for x in self.roots()]


def _one_like(x: Scalar, prec: int) -> Scalar:
    if isinstance(x, ComplexInterval):
        return ComplexInterval.exact(1, 0, prec)
    return RealInterval.exact(1, prec)


def _combine(coords: Sequence[Fraction], images: Sequence[Scalar], prec: int, real: bool) -> Scalar:
    acc = RealInterval.exact(0, prec) if real else ComplexInterval.exact(0, 0, prec)
    for c, im in zip(coords, images):
        if c:
            acc = acc + (im * c if c != 1 else im)
    return acc


def _match(old, candidates):
    for c in candidates:
        if old.overlaps(c):
            return old.intersect(c)
    raise AssertionError("refined root enclosure does not meet the previous one")


def isolate_roots(field: "NumberField", precision: int = DEFAULT_PREC, *,
                  max_prec: int = MAX_PREC) -> EmbeddingSet:
    """Certified isolating enclosures for every root of the defining polynomial."""
    coeffs = field.poly.coeffs
    if field.degree == 1:
        root = RealInterval.exact(-coeffs[0], precision)
        return EmbeddingSet(field, (root,), (), precision)
    prec = precision
    while prec <= max_prec:
        seeds = _seeds_numpy(coeffs)
        res = _try_isolate(coeffs, field.r, prec, seeds)
        if res is None:
            res = _try_isolate(coeffs, field.r, prec, _seeds_mpmath(coeffs, prec))
        if res is not None:
            return EmbeddingSet(field, res[0], res[1], precision)
        prec *= 2
    raise PrecisionExhausted(f"could not isolate the roots of {field.poly} within {max_prec} bits")


# --------------------------------------------------------------------------
# embedding elements
# --------------------------------------------------------------------------


def embed(a: "FieldElem", E: EmbeddingSet) -> IntervalVec:
    """(sigma_1(a), ..., sigma_{r+s}(a)) as certified enclosures."""
    if a.field != E.field:
        from .errors import MixedFields

        raise MixedFields("element and embedding set belong to different fields")
    return tuple(_combine(a.coords, E.power_images[i], E.precision, i < E.r)
                 for i in range(E.n_places))


def embed_basis(coords: Sequence[int], E: EmbeddingSet) -> IntervalVec:
    """Embedding of sum_k coords[k] * b_k for the integral basis b."""
    return tuple(_combine(coords, E.basis_images[i], E.precision, i < E.r)
                 for i in range(E.n_places))


def house(a: "FieldElem", E: EmbeddingSet) -> RealInterval:
    """Enclosure of max_i |sigma_i(a)|."""
    return RealInterval.maximum(*(abs(v) for v in embed(a, E)))


def expand_places(E: EmbeddingSet, values: Sequence[Scalar]) -> list[ComplexInterval]:
    """Per-place values -> values at all d embeddings (``all_roots`` order)."""
    out = []
    for i, v in enumerate(values):
        if i < E.r:
            out.append(ComplexInterval(v, RealInterval.exact(0, v.prec)) if isinstance(v, RealInterval) else v)
        else:
            out.append(v)
    out += [values[i].conj() for i in range(E.r, E.n_places)]
    return out


def coordinates(E: EmbeddingSet, values: Sequence[ComplexInterval], basis: bool = True) -> list[ComplexInterval]:
    """Solve for (integral-basis or power-basis) coordinates from values at all d embeddings."""
    L = E.basis_lagrange if basis else E.lagrange
    d = len(values)
    out = []
    for k in range(d):
        acc = ComplexInterval.exact(0, 0, E.precision)
        for j in range(d):
            acc = acc + values[j] * L[k][j]
        out.append(acc)
    return out


def reconstruct(E: EmbeddingSet, values: Sequence[ComplexInterval], denominator: int):
    """Recover an element whose power coordinates have denominator dividing ``denominator``.

    Returns ("ok", [Fraction]), ("none", reason) when no such element has these
    embeddings, or ("ambiguous", None) when more precision is needed.
    """
    coords = coordinates(E, values, basis=False)
    out = []
    for k, c in enumerate(coords):
        scaled = c * denominator
        if not scaled.im.contains_zero():
            return "none", f"coordinate {k} is not real"
        lo = math.ceil(scaled.re.lower)
        hi = math.floor(scaled.re.upper)
        if lo > hi:
            return "none", f"coordinate {k} has no admissible numerator"
        if hi > lo:
            return "ambiguous", None
        out.append(Fraction(lo, denominator))
    return "ok", out


# --------------------------------------------------------------------------
# coordinate boxes
# --------------------------------------------------------------------------


def coordinate_bounds(E: EmbeddingSet, radii: Sequence) -> list[int]:
    """Integer bounds B_k with |c_k| <= B_k for every x = sum c_k b_k with |sigma_i(x)| <= radii[i]."""
    d = E.field.degree
    place_of = list(range(E.r)) + list(range(E.r, E.n_places)) * 2
    out = []
    for k in range(d):
        acc = RealInterval.exact(0, E.precision)
        for j in range(d):
            R = radii[place_of[j]]
            R = R if isinstance(R, RealInterval) else RealInterval.exact(Fraction(R), E.precision)
            acc = acc + abs(E.basis_lagrange[k][j]) * R
        out.append(math.floor(acc.upper))
    return out
