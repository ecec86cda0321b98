from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from badapprox.approx import (
    Approximant, best_p, dirichlet_count, enumerate_q, liouville_certificate, quality, scan,
)
from badapprox.errors import NotAnisotropic, NotAZero
from badapprox.exactnum import NumberField, cm_structure
from badapprox.forms import HermForm, QuadForm, evaluate
from badapprox.vectors import QuadSurd, corollary_vector, external_vector, quad_zeros

QQ_ = NumberField.from_ints([0, 1])
PHI = quad_zeros(QuadForm(QQ_(1), QQ_(-1), QQ_(-1)), QQ_.embeddings(), (1,))
R2_ = NumberField.from_ints([-2, 0, 1])
SQ3 = quad_zeros(QuadForm(R2_(1), R2_(0), R2_(-3)), R2_.embeddings(), (1, 1))


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_quality_examples():
    assert abs(float(quality(PHI, Approximant(QQ_(2), QQ_(1)))) - 0.3819660112501051) < 1e-15
    val = quality(PHI, Approximant(QQ_(fib(11)), QQ_(fib(10))))
    mpmath.mp.dps = 40
    phi = (1 + mpmath.sqrt(5)) / 2
    ref = fib(10) * abs(fib(10) * phi - fib(11))
    assert abs(float(val) - float(ref)) < 1e-15 and abs(float(val) - 0.4472) < 1e-3
    assert quality(PHI, Approximant(QQ_(0), QQ_(1))).overlaps(PHI.components[0])


def test_best_p_examples():
    z = external_vector(QQ_, ["22/7"])
    assert best_p(z, QQ_(7)) == QQ_(22)
    assert best_p(PHI, QQ_(5)) == QQ_(8)
    assert best_p(SQ3, R2_.one) == R2_(2)


def test_best_p_brute_force():
    # compare with a plain search over the coordinate box for a few q in Z[sqrt2]
    s2, s3 = math.sqrt(2), math.sqrt(3)
    for qa, qb in [(1, 1), (3, -2), (5, 4), (2, 0)]:
        q1, q2 = qa + qb * s2, qa - qb * s2
        best = min(((max(abs(q1 * s3 - (a + b * s2)), abs(q2 * s3 - (a - b * s2))), (a, b))
                    for a in range(-40, 41) for b in range(-40, 41)))
        got = best_p(SQ3, R2_.elem([qa, qb]))
        assert tuple(int(c) for c in got.coords) == best[1]


def test_enumerate_q_examples():
    assert [int(q.rational()) for q in enumerate_q(QQ_, None, 10)] == list(range(1, 11))
    GI = NumberField.from_ints([1, 0, 1])
    got = {tuple(q.coords) for q in enumerate_q(GI, None, 2)}
    brute = {(a, b) for a in range(-2, 3) for b in range(-2, 3)
             if (a, b) != (0, 0) and a * a + b * b <= 4 and (a > 0 or (a == 0 and b > 0))}
    assert got == brute and len(got) == 6
    got = {tuple(q.coords) for q in enumerate_q(R2_, None, 3)}
    s2 = math.sqrt(2)
    brute = {(a, b) for a in range(-5, 6) for b in range(-5, 6)
             if (a, b) != (0, 0) and max(abs(a + b * s2), abs(a - b * s2)) <= 3 and (a > 0 or (a == 0 and b > 0))}
    assert got == brute and (1, 1) in got


def test_scan_rational_hits_zero():
    z = external_vector(QQ_, ["22/7"])
    rep = scan(z, 10)
    assert rep.min_quality.lower == 0 and rep.witness.q == (7,)
    counts = dirichlet_count(z, 0.1, [7, 14, 21, 28])
    assert [c for _, c in counts] == [1, 2, 3, 4]


def test_scan_golden_small():
    rep = scan(PHI, 100, [0.5])
    # the minimum over q <= 100 is q = 1, p = 2
    assert rep.witness.q == (1,) and rep.witness.p == (2,)
    assert [c for _, c in dirichlet_count(PHI, 0.5, [10, 100, 1000])] == [5, 10, 15]


def _cf_convergents(a, D, c, T):
    """Convergents p/q (q <= T) of (a + sqrt(D))/c by exact integer recurrences."""
    P, Dp, Q = a * abs(c), D * c * c, c * abs(c)
    s = math.isqrt(Dp)
    out = []
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        t = (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1
        h0, h1 = h1, t * h1 + h0
        k0, k1 = k1, t * k1 + k0
        if k1 > T:
            return out
        out.append((h1, k1))
        P = t * Q - P
        Q = (Dp - P * P) // Q


def test_continued_fraction_oracle():
    rng = random.Random(2024)
    mpmath.mp.dps = 60
    done = 0
    while done < 10:
        a, c, D = rng.randint(-9, 9), rng.choice([1, 2, 3, 5, -2, -3]), rng.randint(2, 60)
        if math.isqrt(D) ** 2 == D:
            continue
        done += 1
        z = external_vector(QQ_, [QuadSurd(Fraction(a, c), Fraction(1, c), D)])
        T = 300
        x = (a + mpmath.sqrt(D)) / c
        ref = min(q * abs(q * x - p) for p, q in _cf_convergents(a, D, c, T))
        rep = scan(z, T, keep_rows=False)
        lo, hi = rep.min_quality.lower, rep.min_quality.upper
        slack = mpmath.mpf(10) ** -50
        assert mpmath.mpf(lo.numerator) / lo.denominator - slack <= ref
        assert ref <= mpmath.mpf(hi.numerator) / hi.denominator + slack


def test_monotone_in_bound():
    prev = None
    for T in (5, 20, 50, 200):
        m = scan(PHI, T, keep_rows=False).min_quality
        if prev is not None:
            assert m.lower <= prev.upper
        prev = m


def test_naive_dominates_quality_and_merge():
    rep = scan(SQ3, 12)
    assert rep.naive_min.upper >= rep.min_quality.lower
    a = scan(SQ3, 12, shard=(0, 3))
    b = scan(SQ3, 12, shard=(1, 3))
    c = scan(SQ3, 12, shard=(2, 3))
    for m in (a.merge(b).merge(c), c.merge(a.merge(b)), b.merge(c).merge(a)):
        assert m.n_q == rep.n_q and m.n_pairs == rep.n_pairs
        assert m.min_quality == rep.min_quality
        assert (m.witness.q, m.witness.p) == (rep.witness.q, rep.witness.p)
        assert [r.q for r in m.rows] == [r.q for r in rep.rows]


def test_certificate_examples_and_soundness():
    cert = liouville_certificate(QuadForm(QQ_(1), QQ_(-1), QQ_(-1)), PHI)
    assert abs(float(cert.C_prime) - (math.sqrt(5) - 2)) < 1e-12
    cert = liouville_certificate(QuadForm(R2_(1), R2_(0), R2_(-3)), SQ3)
    assert abs(float(cert.C_prime) - 1 / (2 * math.sqrt(3) + 2)) < 1e-12
    rep = scan(SQ3, 20, certificate=cert)
    assert not rep.violations
    assert rep.near_min.quality.lower >= cert.C_prime.lower
    GI = NumberField.from_ints([1, 0, 1])
    cm = cm_structure(GI)
    z = corollary_vector(GI(0), GI(3), [1], [1], cm, GI.embeddings())
    cert = liouville_certificate(HermForm(GI(1), GI(0), GI(-3), cm), z)
    assert abs(float(cert.C_prime) - 1 / (2 * math.sqrt(3) + 1)) < 1e-12


def test_certificate_clears_denominators():
    Q = QuadForm(QQ_(Fraction(1, 2)), QQ_(Fraction(-1, 2)), QQ_(Fraction(-1, 2)))
    cert = liouville_certificate(Q, PHI)
    assert cert.denominator == 2
    assert abs(float(cert.C_prime) - (math.sqrt(5) - 2)) < 1e-12


def test_certificate_errors():
    with pytest.raises(NotAnisotropic):
        z = quad_zeros(QuadForm(R2_(1), R2_(0), R2_(-2)), R2_.embeddings(), (1, 1))
        liouville_certificate(QuadForm(R2_(1), R2_(0), R2_(-2)), z)
    with pytest.raises(NotAZero):
        liouville_certificate(QuadForm(QQ_(1), QQ_(-1), QQ_(-1)), external_vector(QQ_, ["sqrt(2)"]))


@settings(max_examples=30, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_anisotropic_form_never_vanishes(a, b, c, d):
    # exactness cross-check: x^2 - 3y^2 on integral pairs of Z[sqrt2]
    Q = QuadForm(R2_(1), R2_(0), R2_(-3))
    p, q = R2_.elem([a, b]), R2_.elem([c, d])
    if q.is_zero():
        return
    assert not evaluate(Q, p, q).is_zero()
