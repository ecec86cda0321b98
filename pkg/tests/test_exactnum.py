from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from badapprox.errors import NotCM, NotSquarefree, ReducibleDetected
from badapprox.exactnum import NumberField, RatPoly, cm_structure, is_square, relative_norm

x = sympy.Symbol("x")
small = st.integers(-6, 6)


def sym(poly: RatPoly):
    return sum(sympy.Rational(c.numerator, c.denominator) * x**k for k, c in enumerate(poly.coeffs))


@pytest.mark.parametrize("coeffs, sig", [([-5, 0, 1], (2, 0)), ([1, 0, 1], (0, 1)),
                                         ([1, -1, 1, -1, 1], (0, 2)), ([-2, 0, 0, 1], (1, 1))])
def test_signature(coeffs, sig):
    assert NumberField.from_ints(coeffs).signature == sig


def test_rejects_bad_polynomials():
    with pytest.raises(NotSquarefree):
        NumberField.from_ints([1, 2, 1])
    with pytest.raises(ReducibleDetected):
        NumberField.from_ints([-1, 0, 1])
    with pytest.raises(ReducibleDetected):
        NumberField.from_ints([2, 0, -3, 0, 1])   # (x^2 - 1)(x^2 - 2), caught by the root 1
    with pytest.raises(ReducibleDetected):
        NumberField.from_ints([6, 0, -5, 0, 1])   # (x^2 - 2)(x^2 - 3)
    with pytest.raises(ValueError):
        NumberField([1, 0, 2])


def test_spec_arithmetic_examples(R5, GI):
    r5 = R5.gen
    assert r5 * r5 == R5(5)
    i = GI.gen
    assert (1 + i).inverse() == (1 - i) / 2
    C = NumberField.from_ints([-2, 0, 0, 1])
    t = C.gen
    assert t.inverse() == t * t / 2


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=3, max_size=3), st.lists(small, min_size=3, max_size=3),
       st.lists(small, min_size=3, max_size=3))
def test_field_axioms_cubic(a, b, c):
    F = NumberField.from_ints([-2, 0, 0, 1])
    a, b, c = F.elem(a), F.elem(b), F.elem(c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    if not a.is_zero():
        assert a * a.inverse() == F.one
        assert (b / a) * a == b


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_norm_trace_match_sympy(coords):
    F = NumberField.from_ints([1, -1, 1, -1, 1])
    a = F.elem(coords)
    theta = sympy.Symbol("t")
    f = theta**4 - theta**3 + theta**2 - theta + 1
    g = sum(c * theta**k for k, c in enumerate(coords))
    # N(a) = Res(f, g) for monic f
    assert a.norm() == Fraction(int(sympy.resultant(f, g, theta)))
    assert a.charpoly().coeffs[-1] == 1


def test_discriminant_matches_sympy():
    for coeffs in ([-5, 0, 1], [1, 0, 1], [-2, 0, 0, 1], [1, -1, 1, -1, 1], [1, 1, 0, 1]):
        F = NumberField.from_ints(coeffs)
        assert F.disc == sympy.discriminant(sym(F.poly), x)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=3, max_size=5))
def test_sturm_count_matches_sympy(cs):
    cs = cs + [1]
    p = RatPoly(cs)
    if RatPoly.gcd(p, p.derivative()).degree > 0:
        return
    assert p.count_real_roots() == len(sympy.Poly(sym(p), x).real_roots())


def test_is_square_examples(R2):
    assert is_square(R2(Fraction(9, 4))) in (R2(Fraction(3, 2)), R2(Fraction(-3, 2)))
    root = is_square(R2(2))
    assert root is not None and root * root == R2(2)
    assert is_square(R2(3)) is None
    # independent oracle: x^2 - 2 splits mod 7 (3^2 = 2) while 3 is a non-residue mod 7
    assert pow(2, 3, 7) == 1 and pow(3, 3, 7) == 6


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=3, max_size=3))
def test_is_square_of_square(coords):
    F = NumberField.from_ints([-2, 0, 0, 1])
    a = F.elem(coords)
    b = is_square(a * a)
    assert b is not None and b * b == a * a


def test_cm_examples(GI, CYC10, R2):
    cm = cm_structure(GI)
    assert cm.conj(GI.gen) == -GI.gen
    assert cm.subfield_degree == 1
    cm10 = cm_structure(CYC10)
    t = CYC10.gen
    assert cm10.conj(t) == t.inverse() == 1 - t + t**2 - t**3
    assert cm10.subfield_degree == 2
    assert relative_norm(t, cm10) == CYC10.one
    assert relative_norm(1 + GI.gen, cm) == GI(2)
    assert relative_norm(GI.zero, cm) == GI.zero
    with pytest.raises(NotCM):
        cm_structure(R2)
    with pytest.raises(NotCM):
        cm_structure(NumberField.from_ints([1, 1, 0, 0, 1]))   # totally imaginary, not CM


@settings(max_examples=30, deadline=None)
@given(st.lists(small, min_size=4, max_size=4))
def test_conjugation_is_involution(coords):
    F = NumberField.from_ints([1, -1, 1, -1, 1])
    cm = cm_structure(F)
    a = F.elem(coords)
    assert cm.conj(cm.conj(a)) == a
    assert cm.is_fixed(relative_norm(a, cm))


def test_conjugation_is_complex_conjugation(CYC10):
    cm = cm_structure(CYC10)
    E = CYC10.embeddings()
    from badapprox.embed import embed

    a = CYC10.elem([2, -1, 3, 1])
    for u, v in zip(embed(a, E), embed(cm.conj(a), E)):
        assert v.overlaps(u.conj())


def test_integral_basis_golden():
    F = NumberField([-1, -1, 1], integral_basis=[[1, 0], [0, 1]])
    G = NumberField([-5, 0, 1], integral_basis=[[1, 0], [Fraction(1, 2), Fraction(1, 2)]])
    phi = G.from_basis([0, 1])
    assert phi * phi == phi + 1
    assert not G.is_power_basis and F.is_power_basis
    with pytest.raises(ValueError):
        NumberField([-5, 0, 1], integral_basis=[[1, 0], [0, Fraction(1, 2)]])
