from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from badapprox.errors import DegenerateForm
from badapprox.exactnum import NumberField, cm_structure
from badapprox.forms import (
    GroupElem, HermForm, QuadForm, Status, act, anisotropy, discriminant, evaluate, evaluate_at,
    is_anisotropic_herm, is_anisotropic_quad, is_totally_indefinite, moebius, random_group_elem,
)
from badapprox.hilbert import hilbert_symbol, legendre, norm_obstructions
from badapprox.vectors import CirclePoint, herm_circle, quad_zeros


def test_discriminant_examples(R2, GI, GI_cm, QQ):
    assert discriminant(QuadForm(R2(1), R2(0), R2(-3))) == R2(-3)
    assert discriminant(HermForm(GI(1), GI(0), GI(-3), GI_cm)) == GI(-3)
    assert discriminant(QuadForm(QQ(1), QQ(1), QQ(-1))) == QQ(Fraction(-5, 4))


def test_total_indefiniteness(R2, GI, GI_cm):
    assert is_totally_indefinite(QuadForm(R2(1), R2(0), R2(-3)))
    assert not is_totally_indefinite(QuadForm(R2(1), R2(0), -R2.gen))
    assert is_totally_indefinite(HermForm(GI(1), GI(0), GI(-3), GI_cm))


def test_quad_anisotropy_examples(R2, QQ):
    assert is_anisotropic_quad(QuadForm(R2(1), R2(0), R2(-3))).status is Status.ANISOTROPIC
    v = is_anisotropic_quad(QuadForm(R2(1), R2(0), R2(-2)))
    assert v.status is Status.ISOTROPIC
    p, q = v.witness
    assert evaluate(QuadForm(R2(1), R2(0), R2(-2)), p, q).is_zero()
    assert is_anisotropic_quad(QuadForm(QQ(1), QQ(-1), QQ(-1))).status is Status.ANISOTROPIC
    with pytest.raises(DegenerateForm):
        is_anisotropic_quad(QuadForm(QQ(1), QQ(2), QQ(1)))


def test_herm_anisotropy_examples(GI, GI_cm):
    v = is_anisotropic_herm(HermForm(GI(1), GI(0), GI(-3), GI_cm))
    assert v.status is Status.ANISOTROPIC
    assert "3" in v.certificate["obstructions"]
    for n in (2, 5):
        H = HermForm(GI(1), GI(0), GI(-n), GI_cm)
        v = is_anisotropic_herm(H)
        assert v.status is Status.ISOTROPIC
        assert evaluate(H, *v.witness).is_zero()


def test_hilbert_symbol_basics():
    assert legendre(-1, 3) == -1 and legendre(2, 7) == 1
    assert hilbert_symbol(3, -1, 3) == -1
    assert hilbert_symbol(3, -4, 2) == -1
    assert hilbert_symbol(-1, -1, "inf") == -1
    assert hilbert_symbol(2, -1, 2) == 1
    assert norm_obstructions(3, -4) == [2, 3]
    assert norm_obstructions(2, -4) == [] and norm_obstructions(5, -4) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(-30, 30).filter(bool), st.integers(-30, 30).filter(bool), st.sampled_from([2, 3, 5, 7, 11]))
def test_hilbert_product_formula_and_symmetry(a, b, p):
    assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)
    primes = [q for q in range(2, 32) if all(q % k for k in range(2, q))]
    prod = hilbert_symbol(a, b, "inf")
    for q in primes:
        prod *= hilbert_symbol(a, b, q)
    assert prod == 1


def test_evaluate_examples(R2, GI, GI_cm, QQ):
    assert evaluate(QuadForm(R2(1), R2(0), R2(-3)), R2(2), R2(1)) == R2(1)
    H = HermForm(GI(1), GI(0), GI(-3), GI_cm)
    assert evaluate(H, 1 + GI.gen, GI(1)) == GI(-1)
    Q = QuadForm(QQ(1), QQ(-1), QQ(-1))
    fib = [0, 1]
    while len(fib) < 13:
        fib.append(fib[-1] + fib[-2])
    for k in range(1, 11):
        assert evaluate(Q, QQ(fib[k + 1]), QQ(fib[k])) == QQ((-1) ** k)


def test_act_examples(R2):
    Q = QuadForm(R2(1), R2(0), R2(-3))
    assert act(GroupElem.identity(R2), Q).coefficients == Q.coefficients
    g = GroupElem(R2(1), R2(1), R2(0), R2(1))
    assert act(g, Q).coefficients == (R2(1), R2(2), R2(-2))


def _forms(R2, GI, GI_cm):
    return [QuadForm(R2(1), R2(0), R2(-3)), QuadForm(R2([1, 1]), R2([0, 3]), R2(-7)),
            HermForm(GI(1), GI(0), GI(-3), GI_cm), HermForm(GI(2), GI([1, 1]), GI(-3), GI_cm)]


R2_ = NumberField.from_ints([-2, 0, 1])
GI_ = NumberField.from_ints([1, 0, 1])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_delta_invariance_and_change_of_variables(seed):
    rng = random.Random(seed)
    for J in _forms(R2_, GI_, cm_structure(GI_)):
        F = J.field
        g = random_group_elem(F, rng, length=4, height=2)
        Jg = act(g, J)
        assert discriminant(Jg) == discriminant(J)
        x = F.elem([rng.randint(-5, 5) for _ in range(F.degree)])
        y = F.elem([rng.randint(-5, 5) for _ in range(F.degree)])
        assert evaluate(Jg, x, y) == evaluate(J, g.a * x + g.b * y, g.c * x + g.d * y)
        assert act(g.inverse(), Jg).coefficients == J.coefficients


def test_zero_set_equivariance(R2, GI, GI_cm):
    rng = random.Random(7)
    Q = QuadForm(R2(1), R2(0), R2(-3))
    H = HermForm(GI(1), GI(0), GI(-3), GI_cm)
    for _ in range(10):
        for J, z in ((Q, quad_zeros(Q, R2.embeddings(), (1, -1))),
                     (H, herm_circle(H, GI.embeddings(), [CirclePoint(Fraction(1, 3), 1)]))):
            E = J.field.embeddings()
            g = random_group_elem(J.field, rng, length=3, height=2)
            w = moebius(g.inverse(), E, z.components)
            for val in evaluate_at(act(g, J), E, w):
                assert val.contains_zero()


def test_brute_force_anisotropy_quad(R2, R5):
    # x^2 - 3y^2 over Z[sqrt2]: p = a + b sqrt2, q = c + d sqrt2 with coordinates <= 20
    h = 20
    r = np.arange(-h, h + 1, dtype=np.int64)
    a, b = (m.ravel() for m in np.meshgrid(r, r))
    # p^2 = (a^2 + 2b^2) + 2ab sqrt2
    P = {(int(u), int(v)) for u, v in zip(a * a + 2 * b * b, 2 * a * b)}
    Q3 = {(3 * int(u), 3 * int(v)) for u, v in zip(a * a + 2 * b * b, 2 * a * b) if u or v}
    assert not (P & Q3)   # p^2 = 3 q^2 has no solution with q != 0
    assert is_anisotropic_quad(QuadForm(R2(1), R2(0), R2(-3))).anisotropic


def test_brute_force_anisotropy_herm(GI, GI_cm):
    h = 20
    r = np.arange(-h, h + 1, dtype=np.int64)
    a, b = (m.ravel() for m in np.meshgrid(r, r))
    norms = set((a * a + b * b).tolist())
    for n, iso in ((3, False), (7, False), (2, True), (5, True), (6, False)):
        hit = any(m and n * m in norms for m in norms)
        v = is_anisotropic_herm(HermForm(GI(1), GI(0), GI(-n), GI_cm))
        assert (v.status is Status.ISOTROPIC) == hit == iso


def test_unknown_for_general_field(CYC10):
    cm = cm_structure(CYC10)
    H = HermForm(CYC10(1), CYC10(0), CYC10(-3), cm)
    v = anisotropy(H, search_height=1)
    assert v.status in (Status.UNKNOWN, Status.ISOTROPIC)
    if v.status is Status.ISOTROPIC:
        assert evaluate(H, *v.witness).is_zero()
