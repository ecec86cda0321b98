"""Target vectors z in R^r x C^s.

Three constructions: the zeros of a binary quadratic form at every place, points
on the zero circles of a Hermitian form, and the algebraic family obtained by
placing exact unit-circle points on the circle |z - f|^2 = e.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

from . import embed as _embed
from .embed import EmbeddingSet
from .errors import (DegenerateForm, InfinityZero, LineNotCircle, NormObstructionMissing,
                     NotTotallyPositive)
from .exactnum import CMStructure, FieldElem, NumberField
from .forms import (Form, HermForm, QuadForm, Status, discriminant, evaluate_at, is_anisotropic_herm,
                    place_signs)
from .interval import ComplexInterval, RealInterval, Scalar


@dataclass(frozen=True)
class QuadSurd:
    """The real number a + b*sqrt(c) with a, b rational and c a positive integer."""

    a: Fraction
    b: Fraction = Fraction(0)
    c: int = 0

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.c < 0:
            raise ValueError("surd radicand must be nonnegative")
        r = math.isqrt(self.c)
        if r * r == self.c:
            object.__setattr__(self, "a", self.a + self.b * r)
            object.__setattr__(self, "b", Fraction(0))
            object.__setattr__(self, "c", 0)

    @classmethod
    def parse(cls, text) -> QuadSurd:
        """Accepts "a", "a+b*sqrt(c)", "a-b*sqrt(c)", "sqrt(c)" and rationals."""
        if isinstance(text, QuadSurd):
            return text
        if not isinstance(text, str):
            return cls(Fraction(text))
        s = text.replace(" ", "")
        if "sqrt(" not in s:
            return cls(Fraction(s))
        head, _, tail = s.partition("sqrt(")
        c = int(tail.rstrip(")"))
        head = head.rstrip("*")
        # split head into rational part and the coefficient of the surd
        cut = max(head.rfind("+", 1), head.rfind("-", 1))
        a, b = (head[:cut], head[cut:]) if cut > 0 else ("0", head)
        if b in ("", "+"):
            b = "1"
        elif b == "-":
            b = "-1"
        return cls(Fraction(a), Fraction(b), c)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def interval(self, prec: int) -> RealInterval:
        out = RealInterval.exact(self.a, prec)
        if self.b:
            out = out + RealInterval.exact(self.c, prec).sqrt() * self.b
        return out

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        return f"{self.a}{'+' if self.b > 0 else '-'}{abs(self.b)}*sqrt({self.c})"


@dataclass(frozen=True)
class CirclePoint:
    """A point on the unit circle.

    Exact form: u = (alpha + sign * i sqrt(4 - alpha^2)) / 2 with |alpha| <= 2.
    Exploratory form: u = exp(i angle) with angle a float (not an algebraic claim).
    """

    alpha: QuadSurd | None = None
    sign: int = 1
    angle: float | None = None

    def __post_init__(self):
        if (self.alpha is None) == (self.angle is None):
            raise ValueError("give exactly one of alpha or angle")
        if self.alpha is not None and not isinstance(self.alpha, QuadSurd):
            object.__setattr__(self, "alpha", QuadSurd.parse(self.alpha))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def exact(self) -> bool:
        return self.alpha is not None

    def value(self, prec: int) -> ComplexInterval:
        if self.alpha is not None:
            al = self.alpha.interval(prec)
            if self.alpha.is_rational:
                ok = abs(self.alpha.a) <= 2
            else:
                # irrational alpha never equals +-2, so the interval test decides
                ok = abs(al).certainly_lt(RealInterval.exact(2, prec))
            if not ok:
                raise ValueError(f"alpha = {self.alpha} is not in [-2, 2]")
            im = (RealInterval.exact(4, prec) - al.square()).sqrt() * self.sign
            half = Fraction(1, 2)
            return ComplexInterval(al * half, im * half)
        c, s = RealInterval.exact(Fraction(self.angle), prec).cos_sin()
        return ComplexInterval(c, s)

    def to_dict(self) -> dict:
        if self.alpha is not None:
            return {"alpha": str(self.alpha), "sign": self.sign}
        return {"angle": repr(self.angle)}

    @classmethod
    def from_dict(cls, d: dict) -> CirclePoint:
        if "alpha" in d:
            return cls(alpha=QuadSurd.parse(d["alpha"]), sign=int(d.get("sign", 1)))
        return cls(angle=float(d["angle"]))


@dataclass(frozen=True)
class TargetVector:
    """Certified components z_i, one per place, plus how they were obtained."""

    field: NumberField
    components: tuple[Scalar, ...]
    provenance: dict
    precision: int
    form: Form | None = None
    builder: Callable[[EmbeddingSet], tuple[Scalar, ...]] | None = field(default=None, repr=False, compare=False)

    @property
    def is_complex_place(self) -> list[bool]:
        return [isinstance(c, ComplexInterval) for c in self.components]

    def refine(self, prec: int) -> TargetVector:
        if self.builder is None:
            if prec <= self.precision:
                return self
            raise ValueError("this vector has fixed enclosures and cannot be refined")
        E = self.field.embeddings(prec)
        return TargetVector(self.field, self.builder(E), self.provenance, prec, self.form, self.builder)

    def residuals(self, E: EmbeddingSet | None = None) -> list[Scalar]:
        """Enclosures of J_i(z_i, 1); each contains 0 for form-derived vectors."""
        if self.form is None:
            raise ValueError("vector has no form provenance")
        E = E if E is not None else self.field.embeddings(self.precision)
        return evaluate_at(self.form, E, self.components)

    def floats(self) -> list[complex | float]:
        return [complex(c) if isinstance(c, ComplexInterval) else float(c) for c in self.components]


def _make(field: NumberField, E: EmbeddingSet, builder, provenance: dict, form=None) -> TargetVector:
    return TargetVector(field, builder(E), provenance, E.precision, form, builder)


# --------------------------------------------------------------------------
# quadratic zeros
# --------------------------------------------------------------------------


def quad_zeros(Q: QuadForm, E: EmbeddingSet | None, signs: Sequence[int]) -> TargetVector:
    """Component i is (-B_i + eps_i sqrt(B_i^2 - 4 A_i C_i)) / (2 A_i).

    If A = 0 the zeros are -C/B and infinity; eps = +1 selects the finite one,
    eps = -1 asks for infinity and raises InfinityZero.
    """
    F = Q.field
    E = E if E is not None else F.embeddings()
    signs = tuple(int(s) for s in signs)
    if len(signs) != E.n_places or any(s not in (1, -1) for s in signs):
        raise ValueError(f"need {E.n_places} signs, each +1 or -1")
    if discriminant(Q).is_zero():
        raise DegenerateForm("form has zero determinant")
    if Q.A.is_zero() and -1 in signs:
        raise InfinityZero("the requested zero is the point at infinity (A = 0)")
    r = E.r
    if any(sg > 0 for sg in place_signs(discriminant(Q), E, list(range(r)))):
        raise ValueError("form is not indefinite at every real place; real zeros do not exist")

    def build(E: EmbeddingSet):
        A, B, C = (_embed.embed(x, E) for x in Q.coefficients)
        out = []
        for i in range(E.n_places):
            if Q.A.is_zero():
                out.append(-C[i] / B[i])
                continue
            disc = B[i] * B[i] - A[i] * C[i] * 4
            root = disc.sqrt()
            out.append((-B[i] + root * signs[i]) / (A[i] * 2))
        return tuple(out)

    prov = {"kind": "quad_zeros", "form": _form_dict(Q), "signs": list(signs)}
    return _make(F, E, build, prov, Q)


# --------------------------------------------------------------------------
# Hermitian circles
# --------------------------------------------------------------------------


def herm_circle(H: HermForm, E: EmbeddingSet | None, params: Sequence[CirclePoint]) -> TargetVector:
    """Component i is -B_i/A_i + sqrt(-Delta_i)/|A_i| * u_i."""
    F = H.field
    E = E if E is not None else F.embeddings()
    params = tuple(params)
    if len(params) != E.n_places:
        raise ValueError(f"need {E.n_places} circle parameters")
    delta = discriminant(H)
    if delta.is_zero():
        raise DegenerateForm("form has zero determinant")
    if H.A.is_zero():
        raise LineNotCircle("A = 0: the zero set is a line, not a circle")
    if any(sg >= 0 for sg in place_signs(delta, E, list(range(E.n_places)))):
        raise ValueError("form is not totally indefinite")

    def build(E: EmbeddingSet):
        A, B = _embed.embed(H.A, E), _embed.embed(H.B, E)
        D = _embed.embed(delta, E)
        out = []
        for i in range(E.n_places):
            a = A[i].re
            centre = -B[i] / A[i]
            radius = (-D[i].re).sqrt() / abs(a)
            out.append(centre + params[i].value(E.precision) * radius)
        return tuple(out)

    prov = {"kind": "herm_circle", "form": _form_dict(H), "params": [p.to_dict() for p in params],
            "algebraic": all(p.exact for p in params)}
    return _make(F, E, build, prov, H)


def corollary_form(f: FieldElem, e: FieldElem, cm: CMStructure) -> HermForm:
    """The form (z - f w)(z - f w)' - e w w', whose zero circles are |z_i - f_i|^2 = e_i."""
    F = cm.field
    return HermForm(F.one, -f, f * cm.conj(f) - e, cm)


def corollary_vector(f: FieldElem, e: FieldElem, alphas: Sequence, signs: Sequence[int], cm: CMStructure,
                     E: EmbeddingSet | None = None, *, search_height: int = 12) -> TargetVector:
    """z_i = f_i + sqrt(e_i) (alpha_i + sign_i i sqrt(4 - alpha_i^2)) / 2.

    Requires e totally positive and not a relative norm; the result lies on the
    zero set of an anisotropic Hermitian form and is algebraic.
    """
    F = cm.field
    E = E if E is not None else F.embeddings()
    if not cm.is_fixed(e):
        raise NotTotallyPositive("e must lie in the fixed subfield")
    if any(sg <= 0 for sg in place_signs(e, E, list(range(E.n_places)))):
        raise NotTotallyPositive(f"{e} is not totally positive")
    verdict = is_anisotropic_herm(HermForm(F.one, F.zero, -e, cm), E, search_height=search_height)
    if verdict.status is not Status.ANISOTROPIC:
        raise NormObstructionMissing(
            f"{e} is a relative norm or undecided ({verdict.status.value}); the point is not certified")
    points = [CirclePoint(alpha=QuadSurd.parse(a), sign=int(s)) for a, s in zip(alphas, signs)]
    if len(points) != E.n_places:
        raise ValueError(f"need {E.n_places} alpha values and signs")
    H = corollary_form(f, e, cm)

    def build(E: EmbeddingSet):
        fv, ev = _embed.embed(f, E), _embed.embed(e, E)
        return tuple(fv[i] + points[i].value(E.precision) * ev[i].re.sqrt() for i in range(E.n_places))

    prov = {"kind": "corollary", "f": f.to_strings(), "e": e.to_strings(),
            "params": [p.to_dict() for p in points], "form": _form_dict(H),
            "anisotropy": verdict.to_dict(), "algebraic": True}
    return _make(F, E, build, prov, H)


# --------------------------------------------------------------------------
# external points
# --------------------------------------------------------------------------


Exact = Union[Fraction, int, str, QuadSurd, tuple]


def external_vector(F: NumberField, values: Sequence[Exact], prec: int = 256) -> TargetVector:
    """A vector given place by place as exact rationals or quadratic surds.

    Complex places take a pair (re, im).
    """
    E = F.embeddings(prec)
    if len(values) != E.n_places:
        raise ValueError(f"need {E.n_places} components")
    parsed = []
    for i, v in enumerate(values):
        if i < E.r:
            parsed.append(QuadSurd.parse(v))
        else:
            re, im = v if isinstance(v, (tuple, list)) else (v, 0)
            parsed.append((QuadSurd.parse(re), QuadSurd.parse(im)))

    def build(E: EmbeddingSet):
        out = []
        for i, v in enumerate(parsed):
            if i < E.r:
                out.append(v.interval(E.precision))
            else:
                out.append(ComplexInterval(v[0].interval(E.precision), v[1].interval(E.precision)))
        return tuple(out)

    prov = {"kind": "external",
            "values": [str(v) if i < E.r else [str(v[0]), str(v[1])] for i, v in enumerate(parsed)]}
    return _make(F, E, build, prov)


def _form_dict(form: Form) -> dict:
    return {"kind": form.kind, "A": form.A.to_strings(), "B": form.B.to_strings(), "C": form.C.to_strings()}
