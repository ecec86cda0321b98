"""Approximation quality of a target vector by ratios p/q of integers of F.

The quality of a pair is

    max_i |q_i| * max_i |q_i z_i - p_i|

over the places of F.  Pairs are enumerated by the house of q; for each q the
inner minimisation over p rounds the coordinates of q*z and then searches every
offset in {-1, 0, 1}^d around the rounded point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from . import embed as _embed
from .embed import EmbeddingSet
from .errors import NotAnisotropic, NotAZero
from .exactnum import FieldElem, NumberField
from .forms import AnisotropyVerdict, Form, QuadForm, Status, anisotropy, evaluate_at, place_coefficients
from .interval import ComplexInterval, RealInterval, Scalar
from .vectors import TargetVector


@dataclass(frozen=True)
class Approximant:
    p: FieldElem
    q: FieldElem

    def __post_init__(self):
        if self.q.is_zero():
            raise ValueError("q must be nonzero")
        if not (self.p.is_integral() and self.q.is_integral()):
            raise ValueError("p and q must be integral")

    @classmethod
    def from_coords(cls, F: NumberField, p: Sequence[int], q: Sequence[int]) -> Approximant:
        return cls(F.from_basis(p), F.from_basis(q))

    def coords(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (tuple(int(c) for c in self.p.basis_coords()), tuple(int(c) for c in self.q.basis_coords()))


@dataclass(frozen=True)
class PairValue:
    """Everything computed for one pair (p, q)."""

    q: tuple[int, ...]
    p: tuple[int, ...]
    house: RealInterval
    quality: RealInterval
    distance: RealInterval   # max_i |z_i - p_i / q_i|
    naive: RealInterval      # max_i |q_i|^2 * max_i |z_i - p_i / q_i|

    @property
    def regime(self) -> str:
        one = RealInterval.exact(1, self.distance.prec)
        if self.distance.certainly_le(one):
            return "near"
        if one.certainly_lt(self.distance):
            return "far"
        return "boundary"


def _vals(z: TargetVector, E: EmbeddingSet) -> tuple[Scalar, ...]:
    if z.precision != E.precision:
        z = z.refine(E.precision)
    return z.components


def _evaluate(zv, E: EmbeddingSet, qc, pc, qv=None, house=None) -> PairValue:
    qv = qv if qv is not None else _embed.embed_basis(qc, E)
    pv = _embed.embed_basis(pc, E)
    mods = [abs(x) for x in qv]
    house = house if house is not None else RealInterval.maximum(*mods)
    diffs = [abs(q * zi - p) for q, zi, p in zip(qv, zv, pv)]
    dmax = RealInterval.maximum(*diffs)
    dist = RealInterval.maximum(*(d / m for d, m in zip(diffs, mods)))
    return PairValue(tuple(qc), tuple(pc), house, house * dmax, dist, house.square() * dist)


def quality(z: TargetVector, a: Approximant, E: EmbeddingSet | None = None) -> RealInterval:
    """Certified enclosure of max_i |q_i| * max_i |q_i z_i - p_i|."""
    E = E if E is not None else z.field.embeddings(z.precision)
    pc, qc = a.coords()
    return _evaluate(_vals(z, E), E, qc, pc).quality


def _rounded_p(zv, qv, E: EmbeddingSet) -> list[int]:
    targets = _embed.expand_places(E, [q * zi for q, zi in zip(qv, zv)])
    coords = _embed.coordinates(E, targets, basis=True)
    return [int(round((c.re.lower + c.re.upper) / 2)) for c in coords]


def _offsets(d: int):
    return list(itertools.product((-1, 0, 1), repeat=d))


def _candidates(zv, qc, qv, E: EmbeddingSet) -> list[tuple[int, ...]]:
    base = _rounded_p(zv, qv, E)
    return [tuple(b + o for b, o in zip(base, off)) for off in _offsets(len(base))]


def _key(v: PairValue):
    return (float(v.quality), v.q, v.p)


def best_p(z: TargetVector, q: FieldElem, E: EmbeddingSet | None = None) -> FieldElem:
    """Heuristic closest vector: round the coordinates of q*z, then try all neighbours.

    Minimises max_i |q_i z_i - p_i| over the offset box; outside it no claim is made.
    """
    E = E if E is not None else z.field.embeddings(z.precision)
    zv = _vals(z, E)
    qc = tuple(int(c) for c in q.basis_coords())
    qv = _embed.embed_basis(qc, E)
    best = None
    for pc in _candidates(zv, qc, qv, E):
        v = _evaluate(zv, E, qc, pc, qv)
        if best is None or v.quality.certainly_lt(best.quality) or (
                v.quality.overlaps(best.quality) and _key(v) < _key(best)):
            best = v
    return z.field.from_basis(best.p)


def _canonical(c: Sequence[int]) -> bool:
    for x in c:
        if x:
            return x > 0
    return False


def enumerate_q_coords(F: NumberField, E: EmbeddingSet, T) -> Iterator[tuple[tuple[int, ...], tuple, RealInterval]]:
    """(coords, embedding, house) for every q != 0 with house(q) <= T, one of each pair +-q.

    Lexicographic order on integral-basis coordinates.  A q is dropped only when
    its house is certified to exceed T.
    """
    if T < 1:
        raise ValueError("bound must be at least 1")
    Tq = Fraction(T)
    bounds = _embed.coordinate_bounds(E, [Tq] * E.n_places)
    Ti = RealInterval.exact(Tq, E.precision)
    for c in itertools.product(*(range(-B, B + 1) for B in bounds)):
        if not _canonical(c):
            continue
        qv = _embed.embed_basis(c, E)
        h = RealInterval.maximum(*(abs(x) for x in qv))
        if Ti.certainly_lt(h):
            continue
        yield c, qv, h


def enumerate_q(F: NumberField, E: EmbeddingSet | None, T) -> Iterator[FieldElem]:
    E = E if E is not None else F.embeddings()
    for c, _, _ in enumerate_q_coords(F, E, T):
        yield F.from_basis(c)


# --------------------------------------------------------------------------
# Liouville certificate
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LiouvilleCertificate:
    """Lower bound C' on the quality, valid when max_i |z_i - p_i/q_i| <= 1."""

    kappa: tuple[RealInterval, ...]
    lam: int
    C_prime: RealInterval
    denominator: int
    form_kind: str
    verdict: AnisotropyVerdict
    regime: str = "max_i |z_i - p_i/q_i| <= 1"

    def to_dict(self, digits: int = 20) -> dict:
        from .io import format_interval

        return {
            "kappa": [format_interval(k, digits) for k in self.kappa],
            "lambda": self.lam,
            "C_prime": format_interval(self.C_prime, digits),
            "denominator_cleared": self.denominator,
            "form_kind": self.form_kind,
            "regime": self.regime,
            "anisotropy": self.verdict.to_dict(),
        }


def _common_denominator(form: Form) -> int:
    return math.lcm(*(x.denominator for e in form.coefficients for x in e.basis_coords()))


def liouville_certificate(J: Form, z: TargetVector, E: EmbeddingSet | None = None, *,
                          verdict: AnisotropyVerdict | None = None) -> LiouvilleCertificate:
    """C' = 1 / max_i kappa_i for J with coefficients scaled into the order.

    For 0 != J(p, q) integral, 1 <= max_i |J_i(p_i, q_i)| <= max_i |q_i| kappa_i |q_i z_i - p_i|,
    where kappa_i bounds the Lipschitz constant of t -> J_i(t, 1) on the unit disc at z_i.
    """
    E = E if E is not None else z.field.embeddings(z.precision)
    zv = _vals(z, E)
    verdict = verdict if verdict is not None else anisotropy(J, E)
    if verdict.status is not Status.ANISOTROPIC:
        raise NotAnisotropic(f"form is {verdict.status.value}; no lower bound follows")
    for i, res in enumerate(evaluate_at(J, E, zv)):
        if not res.contains_zero():
            raise NotAZero(f"component {i} is not on the zero set of the form")
    D = _common_denominator(J)
    Js = J.scaled(D) if D != 1 else J
    kappa = []
    for (A, B, C), zi in zip(place_coefficients(Js, E), zv):
        if isinstance(J, QuadForm):
            k = abs(A * zi * 2 + B) + abs(A) * 2
        else:
            k = abs(A) * (abs(zi) * 2 + 1) + abs(B) * 2
        kappa.append(k)
    kmax = RealInterval.maximum(*kappa)
    return LiouvilleCertificate(tuple(kappa), 1, RealInterval.exact(1, E.precision) / kmax, D, J.kind, verdict)


# --------------------------------------------------------------------------
# scanning
# --------------------------------------------------------------------------


@dataclass
class QualityReport:
    bound: Fraction
    order: str
    precision: int
    thresholds: tuple[float, ...]
    min_quality: RealInterval | None = None
    witness: PairValue | None = None
    near_min: PairValue | None = None
    far_min: PairValue | None = None
    tail_min: PairValue | None = None
    naive_min: RealInterval | None = None
    below_counts: dict = field(default_factory=dict)
    n_q: int = 0
    n_pairs: int = 0
    small: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    certificate: LiouvilleCertificate | None = None
    violations: list = field(default_factory=list)

    def below(self) -> list[tuple[float, int]]:
        return [(c, self.below_counts.get(c, 0)) for c in self.thresholds]

    def merge(self, other: QualityReport) -> QualityReport:
        """Combine reports of two disjoint shards of the same scan."""
        out = QualityReport(self.bound, self.order, self.precision, self.thresholds, certificate=self.certificate)
        out.min_quality = _min_iv(self.min_quality, other.min_quality)
        out.witness = _better(self.witness, other.witness)
        out.near_min = _better(self.near_min, other.near_min)
        out.far_min = _better(self.far_min, other.far_min)
        out.tail_min = _better(self.tail_min, other.tail_min)
        out.naive_min = _min_iv(self.naive_min, other.naive_min)
        out.below_counts = {c: self.below_counts.get(c, 0) + other.below_counts.get(c, 0) for c in self.thresholds}
        out.n_q = self.n_q + other.n_q
        out.n_pairs = self.n_pairs + other.n_pairs
        out.small = sorted(self.small + other.small, key=lambda v: (v.q, v.p))
        out.rows = sorted(self.rows + other.rows, key=lambda v: v.q)
        out.violations = sorted(self.violations + other.violations, key=lambda v: (v.q, v.p))
        return out


def _min_iv(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return RealInterval.minimum(a, b)


def _better(a: PairValue | None, b: PairValue | None) -> PairValue | None:
    """The pair with smaller quality; overlapping enclosures fall back to coordinates."""
    if a is None:
        return b
    if b is None:
        return a
    if b.quality.certainly_lt(a.quality):
        return b
    if a.quality.certainly_lt(b.quality):
        return a
    return a if (a.q, a.p) <= (b.q, b.p) else b


def scan(z: TargetVector, T, thresholds: Sequence[float] = (), E: EmbeddingSet | None = None, *,
         certificate: LiouvilleCertificate | None = None, shard: tuple[int, int] = (0, 1),
         keep_rows: bool = True) -> QualityReport:
    """Minimum quality over all enumerated pairs with house(q) <= T.

    Counts record pairs whose quality is certified to be <= each threshold.
    ``shard = (k, K)`` restricts to every K-th q starting at k.
    """
    F = z.field
    E = E if E is not None else F.embeddings(z.precision)
    zv = _vals(z, E)
    ths = tuple(float(t) for t in thresholds)
    th_iv = {c: RealInterval.exact(Fraction(c), E.precision) for c in ths}
    cap = max(th_iv.values(), key=lambda v: v.upper) if th_iv else None
    rep = QualityReport(Fraction(T), "power basis Z[theta]" if F.is_power_basis else "given integral basis",
                        E.precision, ths, certificate=certificate)
    rep.below_counts = {c: 0 for c in ths}
    tail = RealInterval.exact(Fraction(T), E.precision).sqrt()
    k, K = shard
    for idx, (qc, qv, h) in enumerate(enumerate_q_coords(F, E, T)):
        if idx % K != k:
            continue
        rep.n_q += 1
        row = None
        for pc in _candidates(zv, qc, qv, E):
            v = _evaluate(zv, E, qc, pc, qv, h)
            rep.n_pairs += 1
            rep.min_quality = _min_iv(rep.min_quality, v.quality)
            rep.naive_min = _min_iv(rep.naive_min, v.naive)
            rep.witness = _better(rep.witness, v)
            row = _better(row, v)
            regime = v.regime
            if regime == "near":
                rep.near_min = _better(rep.near_min, v)
                if certificate is not None and v.quality.certainly_lt(certificate.C_prime):
                    rep.violations.append(v)
            elif regime == "far":
                rep.far_min = _better(rep.far_min, v)
            if tail.certainly_le(h):
                rep.tail_min = _better(rep.tail_min, v)
            for c, civ in th_iv.items():
                if v.quality.certainly_le(civ):
                    rep.below_counts[c] += 1
            if cap is not None and v.quality.certainly_le(cap):
                rep.small.append(v)
        if keep_rows:
            rep.rows.append(row)
    return rep


def dirichlet_count(z: TargetVector, C: float, T_grid: Sequence, E: EmbeddingSet | None = None) -> list[tuple]:
    """(T, number of pairs with house(q) <= T and quality certified <= C) for each T."""
    grid = sorted(Fraction(t) for t in T_grid)
    rep = scan(z, grid[-1], [C], E, keep_rows=False)
    out = []
    for T in grid:
        Ti = RealInterval.exact(T, rep.precision)
        out.append((T, sum(1 for v in rep.small if not Ti.certainly_lt(v.house))))
    return out
