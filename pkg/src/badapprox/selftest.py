"""Randomised structural checks shared by the CLI and the test suite.

Each check returns (name, passed, detail).  The verdicts must not depend on the
working precision.
"""

from __future__ import annotations

import random

from .approx import Approximant
from .exactnum import NumberField, cm_structure
from .flow import balance_check
from .forms import HermForm, QuadForm, act, discriminant, evaluate, random_group_elem
from .vectors import corollary_vector, quad_zeros


def _rand_elem(F: NumberField, rng: random.Random, h: int = 5):
    return F.from_basis([rng.randint(-h, h) for _ in range(F.degree)])


def _fields():
    return [
        NumberField.from_ints([-2, 0, 1]),
        NumberField.from_ints([1, 0, 1]),
        NumberField.from_ints([-2, 0, 0, 1]),
        NumberField.from_ints([1, -1, 1, -1, 1]),
    ]


def check_field_axioms(rng: random.Random, prec: int, trials: int = 25):
    bad = 0
    for F in _fields():
        for _ in range(trials):
            a, b, c = (_rand_elem(F, rng) for _ in range(3))
            bad += (a * b) * c != a * (b * c)
            bad += a * (b + c) != a * b + a * c
            bad += a + b != b + a
            if not a.is_zero():
                bad += a * a.inverse() != F.one
                bad += (a * b).norm() != a.norm() * b.norm()
    return "field axioms", bad == 0, f"{bad} failures"


def _forms():
    R2 = NumberField.from_ints([-2, 0, 1])
    K = NumberField.from_ints([1, 0, 1])
    cm = cm_structure(K)
    return [QuadForm(R2(1), R2(0), R2(-3)), QuadForm(R2([1, 1]), R2([0, 3]), R2(-7)),
            HermForm(K(1), K(0), K(-3), cm), HermForm(K(2), K([1, 1]), K(-3), cm)]


def check_delta_invariance(rng: random.Random, prec: int, n: int = 20):
    bad = 0
    for J in _forms():
        for _ in range(n):
            g = random_group_elem(J.field, rng, length=4, height=2)
            bad += discriminant(act(g, J)) != discriminant(J)
    return "determinant invariant under 20 random group elements", bad == 0, f"{bad} failures"


def check_action_evaluation(rng: random.Random, prec: int, n: int = 20):
    bad = 0
    for J in _forms():
        F = J.field
        for _ in range(n):
            g = random_group_elem(F, rng, length=3, height=2)
            x, y = _rand_elem(F, rng), _rand_elem(F, rng)
            bad += evaluate(act(g, J), x, y) != evaluate(J, g.a * x + g.b * y, g.c * x + g.d * y)
    return "action is change of variables", bad == 0, f"{bad} failures"


def check_balance(rng: random.Random, prec: int, n: int = 100):
    R2 = NumberField.from_ints([-2, 0, 1])
    Q1 = NumberField.from_ints([0, 1])
    vecs = [quad_zeros(QuadForm(R2(1), R2(0), R2(-3)), R2.embeddings(prec), (1, 1)),
            quad_zeros(QuadForm(Q1(1), Q1(-1), Q1(-1)), Q1.embeddings(prec), (1,))]
    bad = 0
    for k in range(n):
        z = vecs[k % 2]
        F = z.field
        q = _rand_elem(F, rng, 9)
        if q.is_zero():
            q = F.one
        p = _rand_elem(F, rng, 9)
        rec = balance_check(z, Approximant(p, q), F.embeddings(prec))
        bad += not rec.holds
    return "balance inequality m(t*)^2 <= quality on 100 random pairs", bad == 0, f"{bad} failures"


def check_refinement(rng: random.Random, prec: int):
    bad = 0
    for F in _fields():
        E1 = F.embeddings(prec)
        E2 = E1.refine(2 * prec)
        bad += not all(b.subset_of(a) for a, b in zip(E1.roots(), E2.roots()))
    K = NumberField.from_ints([1, 0, 1])
    z = corollary_vector(K(0), K(3), [1], [1], cm_structure(K), K.embeddings(prec))
    z2 = z.refine(2 * prec)
    bad += not all(b.subset_of(a) for a, b in zip(z.components, z2.components))
    bad += not all(r.contains_zero() for r in z2.residuals())
    return "enclosures nest under refinement", bad == 0, f"{bad} failures"


CHECKS = [check_field_axioms, check_delta_invariance, check_action_evaluation, check_balance, check_refinement]


def run_all(rng: random.Random, prec: int = 256):
    return [chk(rng, prec) for chk in CHECKS]
