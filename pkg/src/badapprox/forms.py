"""Binary quadratic and Hermitian forms over a number field.

    Q(x, y) = A x^2 + B x y + C y^2,            det Q = AC - B^2/4
    H(z, w) = A z z' + B' z w' + B z' w + C w w',  det H = AC - B B'

where ' is the CM conjugation, A and C are conjugation-fixed.  The group
SL_2 of the order acts by change of variables, Q^g(x, y) = Q(ax+by, cx+dy).
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

from . import embed as _embed
from .embed import EmbeddingSet
from .errors import DegenerateForm, MixedFields, PrecisionExhausted
from .exactnum import MAX_PREC, CMStructure, FieldElem, NumberField, relative_norm, square_root_search
from .hilbert import norm_obstructions
from .interval import ComplexInterval, RealInterval, Scalar


@dataclass(frozen=True)
class QuadForm:
    A: FieldElem
    B: FieldElem
    C: FieldElem

    kind = "quad"

    def __post_init__(self):
        f = self.A.field
        if self.B.field != f or self.C.field != f:
            raise MixedFields("form coefficients lie in different fields")

    @property
    def field(self) -> NumberField:
        return self.A.field

    @property
    def coefficients(self) -> tuple[FieldElem, FieldElem, FieldElem]:
        return self.A, self.B, self.C

    def scaled(self, k) -> QuadForm:
        return QuadForm(self.A * k, self.B * k, self.C * k)


@dataclass(frozen=True)
class HermForm:
    A: FieldElem
    B: FieldElem
    C: FieldElem
    cm: CMStructure = field(repr=False, compare=False)

    kind = "herm"

    def __post_init__(self):
        f = self.cm.field
        if any(x.field != f for x in (self.A, self.B, self.C)):
            raise MixedFields("form coefficients must lie in the CM field")
        if not (self.cm.is_fixed(self.A) and self.cm.is_fixed(self.C)):
            raise ValueError("A and C of a Hermitian form must be fixed by conjugation")

    @property
    def field(self) -> NumberField:
        return self.cm.field

    @property
    def coefficients(self) -> tuple[FieldElem, FieldElem, FieldElem]:
        return self.A, self.B, self.C

    def scaled(self, k) -> HermForm:
        return HermForm(self.A * k, self.B * k, self.C * k, self.cm)


Form = Union[QuadForm, HermForm]


@dataclass(frozen=True)
class GroupElem:
    """Element of SL_2 over the configured order."""

    a: FieldElem
    b: FieldElem
    c: FieldElem
    d: FieldElem

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("group element must have determinant 1")
        if not all(x.is_integral() for x in (self.a, self.b, self.c, self.d)):
            raise ValueError("group element entries must be integral")

    @classmethod
    def identity(cls, F: NumberField) -> GroupElem:
        return cls(F.one, F.zero, F.zero, F.one)

    def inverse(self) -> GroupElem:
        return GroupElem(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, o: GroupElem) -> GroupElem:
        return GroupElem(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)


def random_group_elem(F: NumberField, rng: random.Random, length: int = 4, height: int = 2) -> GroupElem:
    """Product of random elementary unipotent matrices."""
    g = GroupElem.identity(F)
    for i in range(length):
        t = F.from_basis([rng.randint(-height, height) for _ in range(F.degree)])
        if i % 2:
            u = GroupElem(F.one, t, F.zero, F.one)
        else:
            u = GroupElem(F.one, F.zero, t, F.one)
        g = g @ u
    return g


# --------------------------------------------------------------------------
# determinants and exact evaluation
# --------------------------------------------------------------------------


def quad_discriminant(Q: QuadForm) -> FieldElem:
    return Q.A * Q.C - Q.B * Q.B / 4


def herm_discriminant(H: HermForm) -> FieldElem:
    delta = H.A * H.C - relative_norm(H.B, H.cm)
    assert H.cm.is_fixed(delta)
    return delta


def discriminant(form: Form) -> FieldElem:
    return quad_discriminant(form) if isinstance(form, QuadForm) else herm_discriminant(form)


def evaluate(form: Form, p: FieldElem, q: FieldElem) -> FieldElem:
    """Exact value J(p, q)."""
    if isinstance(form, QuadForm):
        return form.A * p * p + form.B * p * q + form.C * q * q
    cj = form.cm.conj
    pc, qc = cj(p), cj(q)
    val = form.A * p * pc + cj(form.B) * p * qc + form.B * pc * q + form.C * q * qc
    assert form.cm.is_fixed(val)
    return val


def act(g: GroupElem, form: Form) -> Form:
    """The transformed form J^g(x, y) = J(ax + by, cx + dy)."""
    a, b, c, d = g.a, g.b, g.c, g.d
    if isinstance(form, QuadForm):
        A, B, C = form.coefficients
        return QuadForm(
            A * a * a + B * a * c + C * c * c,
            2 * A * a * b + B * (a * d + b * c) + 2 * C * c * d,
            A * b * b + B * b * d + C * d * d,
        )
    cj = form.cm.conj
    A, B, C = form.coefficients
    newB = A * cj(a) * b + cj(B) * b * cj(c) + B * cj(a) * d + C * cj(c) * d
    return HermForm(evaluate(form, a, c), newB, evaluate(form, b, d), form.cm)


# --------------------------------------------------------------------------
# numerical views
# --------------------------------------------------------------------------


def place_coefficients(form: Form, E: EmbeddingSet) -> list[tuple[Scalar, Scalar, Scalar]]:
    A, B, C = (_embed.embed(x, E) for x in form.coefficients)
    return list(zip(A, B, C))


def evaluate_at(form: Form, E: EmbeddingSet, zs: Sequence[Scalar]) -> list[Scalar]:
    """J_i(z_i, 1) at each place, as enclosures."""
    out = []
    for (A, B, C), z in zip(place_coefficients(form, E), zs):
        if isinstance(form, QuadForm):
            out.append((A * z + B) * z + C)
        else:
            zc = z.conj() if isinstance(z, ComplexInterval) else z
            Bc = B.conj() if isinstance(B, ComplexInterval) else B
            out.append(A * z * zc + Bc * z + B * zc + C)
    return out


def moebius(g: GroupElem, E: EmbeddingSet, zs: Sequence[Scalar]) -> list[Scalar]:
    """Place-wise linear fractional action g . (z_i) for finite points."""
    ga, gb, gc, gd = (_embed.embed(x, E) for x in (g.a, g.b, g.c, g.d))
    return [(a * z + b) / (c * z + d) for a, b, c, d, z in zip(ga, gb, gc, gd, zs)]


def place_signs(a: FieldElem, E: EmbeddingSet, places: Sequence[int], *, max_prec: int = MAX_PREC) -> list[int]:
    """Certified signs of the (real) values sigma_i(a) for i in ``places``."""
    if a.is_zero():
        return [0] * len(places)
    while True:
        vals = _embed.embed(a, E)
        signs = []
        for i in places:
            v = vals[i]
            re = v.re if isinstance(v, ComplexInterval) else v
            signs.append(re.sign())
        if None not in signs:
            return signs
        if E.precision * 2 > max_prec:
            raise PrecisionExhausted(f"sign of {a} unresolved at {E.precision} bits")
        E = E.refine(E.precision * 2)


def is_totally_indefinite(form: Form, E: EmbeddingSet | None = None) -> bool:
    """Quadratic: det < 0 at every real place.  Hermitian: det < 0 at every place."""
    delta = discriminant(form)
    if delta.is_zero():
        raise DegenerateForm("form has zero determinant")
    E = E if E is not None else form.field.embeddings()
    places = range(E.r) if isinstance(form, QuadForm) else range(E.n_places)
    return all(sg < 0 for sg in place_signs(delta, E, list(places)))


# --------------------------------------------------------------------------
# anisotropy
# --------------------------------------------------------------------------


class Status(enum.Enum):
    ANISOTROPIC = "anisotropic"
    ISOTROPIC = "isotropic"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class AnisotropyVerdict:
    status: Status
    certificate: dict
    witness: tuple[FieldElem, FieldElem] | None = None

    @property
    def anisotropic(self) -> bool:
        return self.status is Status.ANISOTROPIC

    def to_dict(self) -> dict:
        out = {"status": self.status.value, "certificate": self.certificate}
        if self.witness is not None:
            out["witness"] = [w.to_strings() for w in self.witness]
        return out


def _check_witness(form: Form, p: FieldElem, q: FieldElem) -> None:
    if (p.is_zero() and q.is_zero()) or not evaluate(form, p, q).is_zero():
        raise AssertionError("isotropy witness does not evaluate to zero")


def is_anisotropic_quad(Q: QuadForm, E: EmbeddingSet | None = None, *,
                        max_prec: int = MAX_PREC) -> AnisotropyVerdict:
    """Q is anisotropic exactly when -det(Q) is not a square in F."""
    F = Q.field
    delta = quad_discriminant(Q)
    if delta.is_zero():
        raise DegenerateForm("form has zero determinant")
    try:
        root, cert = square_root_search(-delta, E, max_prec=max_prec)
    except PrecisionExhausted as exc:
        return AnisotropyVerdict(Status.UNKNOWN, {"method": "square test", "reason": str(exc)})
    if root is None:
        return AnisotropyVerdict(Status.ANISOTROPIC, {"method": "-det is not a square", **cert,
                                                      "target": (-delta).to_strings()})
    # B^2 - 4AC = 4 * root^2, so Ax^2 + Bx + C has the root (-B + 2 root) / 2A
    if Q.A.is_zero():
        p, q = F.one, F.zero
    else:
        p, q = (-Q.B + 2 * root) / (2 * Q.A), F.one
    _check_witness(Q, p, q)
    return AnisotropyVerdict(Status.ISOTROPIC, {"method": "-det is a square", "sqrt": root.to_strings()}, (p, q))


def _imag_quadratic_disc(F: NumberField) -> int | None:
    if F.degree != 2 or F.r != 0:
        return None
    c, b = F.poly.coeffs[0], F.poly.coeffs[1]
    return int(b * b - 4 * c)


def _norm_search_quadratic(F: NumberField, n: Fraction, max_den: int, cap: int = 4_000_000):
    """Find x in F = Q(theta), theta^2 + b theta + c = 0, with N(x) = n.

    Writes x = (u + v theta) / w; for fixed v, w the norm equation is a quadratic
    in u whose discriminant must be a square.  Exhaustive for every w <= max_den.
    """
    c, b = F.poly.coeffs[0], F.poly.coeffs[1]
    D0 = b * b - 4 * c
    p, q = n.numerator, n.denominator
    work = 0
    for w in range(1, max_den + 1):
        # disc_u = D0 v^2 + 4 n w^2 >= 0  ->  v^2 <= 4 n w^2 / |D0|
        vmax = math.isqrt(int(4 * n * w * w / -D0)) + 1
        for v in range(0, vmax + 1):
            work += 1
            if work > cap:
                return None
            disc = q * q * (D0 * v * v) + 4 * p * q * w * w
            if disc < 0:
                continue
            disc = int(disc)
            s = math.isqrt(disc)
            if s * s != disc:
                continue
            for sg in (1, -1):
                num = q * b * v + sg * s
                if num % (2 * q) == 0:
                    u = num // (2 * q)
                    x = F.elem([Fraction(u, w), Fraction(v, w)])
                    if x.norm() == n:
                        return x
    return None


def _norm_search_box(cm: CMStructure, target: FieldElem, E: EmbeddingSet, max_den: int,
                     cap: int = 2_000_000):
    """Search x = y / w, y integral, w <= max_den, with x * conj(x) == target."""
    import itertools

    F = cm.field
    tvals = _embed.embed(target, E)
    for w in range(1, max_den + 1):
        radii = [(abs(v) * (w * w)).sqrt() for v in tvals]
        bounds = _embed.coordinate_bounds(E, radii)
        count = math.prod(2 * B + 1 for B in bounds)
        if count > cap:
            return None
        for y in itertools.product(*(range(-B, B + 1) for B in bounds)):
            x = F.from_basis(y) / w
            if relative_norm(x, cm) == target:
                return x
    return None


def is_anisotropic_herm(H: HermForm, E: EmbeddingSet | None = None, *, search_height: int = 12,
                        max_prec: int = MAX_PREC) -> AnisotropyVerdict:
    """H is anisotropic exactly when -det(H) is not a relative norm from F to E.

    Bounded search for a norm preimage everywhere; for imaginary quadratic F a
    complete decision by local Hilbert symbols.
    """
    F = H.field
    delta = herm_discriminant(H)
    if delta.is_zero():
        raise DegenerateForm("form has zero determinant")
    if H.A.is_zero():
        _check_witness(H, F.one, F.zero)
        return AnisotropyVerdict(Status.ISOTROPIC, {"method": "A = 0"}, (F.one, F.zero))
    target = -delta

    def witness_from(x: FieldElem) -> AnisotropyVerdict:
        # A*H(z, 1) = N(A z + B) + det, so z = (x - B) / A is a zero
        p = (x - H.B) / H.A
        _check_witness(H, p, F.one)
        return AnisotropyVerdict(Status.ISOTROPIC, {"method": "norm preimage", "preimage": x.to_strings()},
                                 (p, F.one))

    D0 = _imag_quadratic_disc(F)
    if D0 is not None:
        n = target.rational()
        if n <= 0:
            bad = ["inf"]
        else:
            bad = norm_obstructions(n, D0)
        if bad:
            return AnisotropyVerdict(Status.ANISOTROPIC, {
                "method": "Hilbert symbol obstruction",
                "norm_target": str(n),
                "field_discriminant": D0,
                "obstructions": [str(v) for v in bad],
            })
        # locally a norm everywhere, hence globally; find an explicit preimage
        max_den = max(search_height, 2 * math.isqrt(abs(D0) * abs(n.numerator) * n.denominator) + 2)
        x = _norm_search_quadratic(F, n, max_den)
        if x is None:
            return AnisotropyVerdict(Status.UNKNOWN, {
                "method": "Hilbert symbols report a norm but no preimage was found",
                "search_denominator": max_den,
            })
        return witness_from(x)

    E = E if E is not None else F.embeddings()
    x = _norm_search_box(H.cm, target, E, search_height)
    if x is not None:
        return witness_from(x)
    return AnisotropyVerdict(Status.UNKNOWN, {
        "method": "bounded norm search exhausted",
        "search_denominator": search_height,
        "reason": "local norm test is only implemented for imaginary quadratic fields",
    })


def anisotropy(form: Form, E: EmbeddingSet | None = None, **kw) -> AnisotropyVerdict:
    if isinstance(form, QuadForm):
        return is_anisotropic_quad(form, E, **{k: v for k, v in kw.items() if k == "max_prec"})
    return is_anisotropic_herm(form, E, **kw)
