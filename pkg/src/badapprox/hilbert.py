"""Local Hilbert symbols over Q and the norm test for imaginary quadratic fields."""

from __future__ import annotations

from fractions import Fraction

from sympy import factorint


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p, by Euler's criterion."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _split(x: Fraction, p: int) -> tuple[int, Fraction]:
    """x = p^v * u with u a p-adic unit."""
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v, Fraction(num, den)


def hilbert_symbol(a, b, p) -> int:
    """(a, b)_p for nonzero rationals a, b; p a prime or the string "inf"."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol of zero")
    if p == "inf":
        return -1 if (a < 0 and b < 0) else 1
    alpha, u = _split(a, p)
    beta, v = _split(b, p)
    if p == 2:
        # 2-adic unit classes mod 8; den is odd so den^-1 = den mod 8
        um = (u.numerator * u.denominator) % 8
        vm = (v.numerator * v.denominator) % 8
        eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
        omega = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
        e = eps(um) * eps(vm) + alpha * omega(vm) + beta * omega(um)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    lu = legendre(u.numerator, p) * legendre(u.denominator, p)
    lv = legendre(v.numerator, p) * legendre(v.denominator, p)
    return sign * (lu ** (beta % 2)) * (lv ** (alpha % 2))


def relevant_places(*xs) -> list:
    """inf, 2 and every prime dividing a numerator or denominator of the xs."""
    primes = {2}
    for x in xs:
        x = Fraction(x)
        for n in (abs(x.numerator), x.denominator):
            if n > 1:
                primes.update(factorint(n))
    return ["inf"] + sorted(primes)


def norm_obstructions(n, disc) -> list:
    """Places v with (n, disc)_v = -1.

    n is a norm from Q(sqrt(disc)) exactly when this list is empty.
    """
    return [v for v in relevant_places(n, disc) if hilbert_symbol(n, disc, v) == -1]
