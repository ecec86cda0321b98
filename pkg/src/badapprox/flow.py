"""Shortest vectors along the diagonal trajectory of a target vector.

For t >= 0 the lattice pairs (q, p) of the order are sent to

    ( e^{-t} sigma(q),  e^{t} sigma(q z + p) )

and m(t) is the least value of max(e^{-t} max_i |q_i|, e^{t} max_i |q_i z_i + p_i|)
over nonzero pairs.  An approximation pair (p, q) of the approx module
corresponds to the lattice pair (q, -p).

A grid profile is a diagnostic.  Between grid points each factor moves by at
most e^{|dt|}, so m(t) >= m(t_k) e^{-step/2} on the half-cells around t_k,
which turns the grid minimum into a certified floor on the whole range.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import embed as _embed
from .approx import Approximant
from .embed import EmbeddingSet
from .errors import FactorZero
from .interval import ComplexInterval, RealInterval
from .lattice import lll, short_vectors
from .vectors import TargetVector


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    m: RealInterval
    witness: tuple[tuple[int, ...], tuple[int, ...]]   # lattice pair (q, p)
    candidates: int = 0


@dataclass(frozen=True)
class FlowProfile:
    points: tuple[TrajectoryPoint, ...]
    inf_m: RealInterval
    inf_t: float
    threshold: float
    dips: tuple[float, ...]
    local_minima: tuple[tuple[float, float], ...]
    certified_floor: RealInterval

    @property
    def verdict_hint(self) -> str:
        if self.dips:
            return f"dip-detected at t = {self.dips[0]:.4g}"
        return "bounded-looking"


def _t_interval(t, prec: int) -> RealInterval:
    if isinstance(t, RealInterval):
        return t
    return RealInterval.exact(Fraction(t), prec)


class _Setup:
    """Float images of the basis and of z, plus interval helpers, for one z."""

    def __init__(self, z: TargetVector, E: EmbeddingSet):
        if z.precision != E.precision:
            z = z.refine(E.precision)
        self.z, self.E = z, E
        self.d = E.field.degree
        self.n = E.n_places
        self.zf = [complex(c) if isinstance(c, ComplexInterval) else complex(float(c), 0.0) for c in z.components]
        self.bf = [[complex(b) if isinstance(b, ComplexInterval) else complex(float(b), 0.0)
                    for b in E.basis_images[i]] for i in range(self.n)]

    def blocks(self, vals: Sequence[complex]) -> list[float]:
        out = []
        for i, v in enumerate(vals):
            out += [v.real] if i < self.E.r else [v.real, v.imag]
        return out

    def images(self, coords: Sequence[int]) -> list[complex]:
        return [sum(c * b for c, b in zip(coords, self.bf[i])) for i in range(self.n)]

    def float_value(self, qc, pc, tf: float) -> float:
        qv, pv = self.images(qc), self.images(pc)
        a = math.exp(-tf) * max(abs(x) for x in qv)
        b = math.exp(tf) * max(abs(q * z + p) for q, z, p in zip(qv, self.zf, pv))
        return max(a, b)

    def interval_value(self, qc, pc, em: RealInterval, ep: RealInterval) -> RealInterval:
        qv = _embed.embed_basis(qc, self.E)
        pv = _embed.embed_basis(pc, self.E)
        a = RealInterval.maximum(*(abs(x) for x in qv)) * em
        b = RealInterval.maximum(*(abs(q * z + p) for q, z, p in zip(qv, self.z.components, pv))) * ep
        return RealInterval.maximum(a, b)

    def certify(self, cands, t) -> TrajectoryPoint:
        T = _t_interval(t, self.E.precision)
        ep = T.exp()
        em = RealInterval.exact(1, self.E.precision) / ep
        best = None
        m = None
        for qc, pc in map(_canonical_pair, cands):
            v = self.interval_value(qc, pc, em, ep)
            m = v if m is None else RealInterval.minimum(m, v)
            key = (float(v.upper), qc, pc)
            if best is None or key < best[0]:
                best = (key, (tuple(qc), tuple(pc)))
        return TrajectoryPoint(float(T), m, best[1], len(cands))


def _canonical_pair(pair):
    """Representative of +-(q, p) whose first nonzero coordinate is positive."""
    qc, pc = (tuple(int(c) for c in x) for x in pair)
    first = next(c for c in qc + pc if c)
    if first < 0:
        qc, pc = tuple(-c for c in qc), tuple(-c for c in pc)
    return qc, pc


def _shortlist(setup: _Setup, found, tf: float, slack: float = 1e-6):
    vals = [(setup.float_value(qc, pc, tf), qc, pc) for qc, pc in found]
    top = min(v for v, _, _ in vals)
    return [(qc, pc) for v, qc, pc in vals if v <= top * (1 + slack) + 1e-300]


def mahler_min(z: TargetVector, t, E: EmbeddingSet | None = None) -> TrajectoryPoint:
    """m(t) by LLL reduction and Fincke-Pohst enumeration (any real t is accepted).

    Every lattice vector of sup-value <= beta has Euclidean length <= beta sqrt(2n),
    so enumerating that ball around an LLL upper bound beta is exhaustive.
    Enumeration runs in floating point; the near-optimal candidates are then
    evaluated in interval arithmetic.
    """
    E = E if E is not None else z.field.embeddings(z.precision)
    S = _Setup(z, E)
    tf = float(t)
    d, n = S.d, S.n
    em, ep = math.exp(-tf), math.exp(tf)
    rows = []
    for k in range(d):
        bq = [S.bf[i][k] for i in range(n)]
        rows.append(S.blocks([em * b for b in bq]) + S.blocks([ep * b * zi for b, zi in zip(bq, S.zf)]))
    for k in range(d):
        bp = [S.bf[i][k] for i in range(n)]
        rows.append([0.0] * d + S.blocks([ep * b for b in bp]))
    red, U = lll(rows)

    def coords(x):
        c = [sum(xi * U[i][j] for i, xi in enumerate(x)) for j in range(2 * d)]
        return tuple(c[:d]), tuple(c[d:])

    beta = min(S.float_value(*coords([int(i == j) for j in range(2 * d)]), tf) for i in range(2 * d))
    radius = beta * math.sqrt(2 * n) * (1 + 1e-9)
    found = [coords(x) for x in short_vectors(red, radius)]
    return S.certify(_shortlist(S, found, tf), t)


def _centre(S: _Setup, inv, qc) -> list[float]:
    """Real coordinates of -q z in the integral basis."""
    target = [-q * zz for q, zz in zip(S.images(qc), S.zf)]
    full = target + [target[i].conjugate() for i in range(S.E.r, S.n)]
    return [sum(full[j] * complex(inv[k][j]) for j in range(S.d)).real for k in range(S.d)]


def _nearest_p(S: _Setup, inv, qc) -> tuple[int, ...]:
    return tuple(round(c) for c in _centre(S, inv, qc))


def mahler_min_bnb(z: TargetVector, t, E: EmbeddingSet | None = None) -> TrajectoryPoint:
    """Reference m(t) by exhaustive search over coordinate boxes.

    Seed beta with the pair (0, 1) and the pairs (k, p) for rational integers
    1 <= k <= e^t with p nearest to -k z; every improving pair has |q_i| <= beta e^t and |q_i z_i + p_i| <= beta e^{-t}, which bounds the
    coordinates of q and of p + q z.
    """
    E = E if E is not None else z.field.embeddings(z.precision)
    S = _Setup(z, E)
    tf = float(t)
    d = S.d
    one = tuple(int(c) for c in E.field.one.basis_coords())
    zero = (0,) * d
    inv = E.basis_lagrange
    beta = S.float_value(zero, one, tf)
    for k in range(1, math.ceil(math.exp(tf)) + 1):
        qc = tuple(k * c for c in one)
        pc = _nearest_p(S, inv, qc)
        beta = min(beta, S.float_value(qc, pc, tf))
    beta *= 1 + 1e-9
    qb = _embed.coordinate_bounds(E, [Fraction(beta * math.exp(tf))] * S.n)
    pb = _embed.coordinate_bounds(E, [Fraction(beta * math.exp(-tf))] * S.n)
    found = []
    for qc in itertools.product(*(range(-B, B + 1) for B in qb)):
        # canonical sign on q (q = 0 handled with p's sign below)
        first = next((c for c in qc if c), 0)
        if first < 0:
            continue
        qv = S.images(qc)
        if math.exp(-tf) * max(abs(x) for x in qv) > beta:
            continue
        centre = _centre(S, inv, qc)
        ranges = [range(math.floor(c - B) - 1, math.ceil(c + B) + 2) for c, B in zip(centre, pb)]
        for pc in itertools.product(*ranges):
            if first == 0 and (not any(pc) or next(c for c in pc if c) < 0):
                continue
            v = S.float_value(qc, pc, tf)
            if v <= beta:
                found.append((v, tuple(qc), tuple(pc)))
    top = min(v for v, _, _ in found)
    cands = [(qc, pc) for v, qc, pc in found if v <= top * (1 + 1e-6) + 1e-300]
    return S.certify(cands, t)


def profile(z: TargetVector, t_grid: Sequence[float], E: EmbeddingSet | None = None, *,
            threshold: float = 0.2) -> FlowProfile:
    grid = [float(t) for t in t_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    E = E if E is not None else z.field.embeddings(z.precision)
    pts = tuple(mahler_min(z, t, E) for t in grid)
    inf_m = RealInterval.minimum(*(p.m for p in pts))
    inf_i = min(range(len(pts)), key=lambda i: float(pts[i].m.upper))
    thr = RealInterval.exact(Fraction(threshold), E.precision)
    dips = tuple(p.t for p in pts if p.m.certainly_lt(thr))
    fl = [float(p.m) for p in pts]
    minima = tuple((pts[i].t, fl[i]) for i in range(1, len(pts) - 1) if fl[i] < fl[i - 1] and fl[i] <= fl[i + 1])
    # half-cell radius around each grid point
    floors = []
    for i, p in enumerate(pts):
        left = (grid[i] - grid[i - 1]) / 2 if i else 0.0
        right = (grid[i + 1] - grid[i]) / 2 if i + 1 < len(grid) else 0.0
        h = RealInterval.exact(Fraction(max(left, right)), E.precision)
        floors.append(p.m * (-h).exp())
    floor = RealInterval.minimum(*floors)
    return FlowProfile(pts, inf_m, pts[inf_i].t, threshold, dips, minima, floor)


@dataclass(frozen=True)
class BalanceRecord:
    t_star: RealInterval
    house: RealInterval
    distance: RealInterval
    quality: RealInterval
    point: TrajectoryPoint

    @property
    def holds(self) -> bool:
        """m(t*)^2 <= quality is not contradicted by the enclosures."""
        return not self.quality.certainly_lt(self.point.m.square())


def balance_check(z: TargetVector, a: Approximant, E: EmbeddingSet | None = None) -> BalanceRecord:
    """At t* = (1/2) ln(X / Y) the pair (q, -p) has value sqrt(XY), so m(t*)^2 <= X Y."""
    E = E if E is not None else z.field.embeddings(z.precision)
    zc = z.components if z.precision == E.precision else z.refine(E.precision).components
    qv, pv = _embed.embed(a.q, E), _embed.embed(a.p, E)
    diffs = [abs(q * zi - p) for q, zi, p in zip(qv, zc, pv)]
    if any(dv.contains_zero() for dv in diffs):
        raise FactorZero("q z - p vanishes (or is not certified nonzero) at some place")
    X = RealInterval.maximum(*(abs(x) for x in qv))
    Y = RealInterval.maximum(*diffs)
    tstar = (X.log() - Y.log()) * Fraction(1, 2)
    pt = mahler_min(z, tstar, E)
    return BalanceRecord(tstar, X, Y, X * Y, pt)
