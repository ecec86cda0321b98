"""Floating-point LLL reduction and Fincke-Pohst enumeration for small dimensions.

Results are candidate lists only; callers re-evaluate every candidate in
interval arithmetic before claiming anything.
"""

from __future__ import annotations

import math
from typing import Sequence


def _dot(u: Sequence[float], v: Sequence[float]) -> float:
    return math.fsum(a * b for a, b in zip(u, v))


def _gram_schmidt(B: list[list[float]]):
    n = len(B)
    bstar: list[list[float]] = []
    mu = [[0.0] * n for _ in range(n)]
    norms = [0.0] * n
    for i in range(n):
        v = list(B[i])
        for j in range(i):
            mu[i][j] = _dot(B[i], bstar[j]) / norms[j]
            v = [a - mu[i][j] * b for a, b in zip(v, bstar[j])]
        bstar.append(v)
        norms[i] = _dot(v, v)
    return mu, norms


def lll(B: Sequence[Sequence[float]], delta: float = 0.99) -> tuple[list[list[float]], list[list[int]]]:
    """LLL-reduce the rows of B.

    Returns (reduced rows, U) with reduced = U * B and U unimodular.
    """
    B = [list(map(float, row)) for row in B]
    n = len(B)
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    k = 1
    mu, norms = _gram_schmidt(B)
    while k < n:
        for j in range(k - 1, -1, -1):
            c = round(mu[k][j])
            if c:
                B[k] = [a - c * b for a, b in zip(B[k], B[j])]
                U[k] = [a - c * b for a, b in zip(U[k], U[j])]
                mu, norms = _gram_schmidt(B)
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            U[k], U[k - 1] = U[k - 1], U[k]
            mu, norms = _gram_schmidt(B)
            k = max(k - 1, 1)
    return B, U


def short_vectors(B: Sequence[Sequence[float]], radius: float, limit: int = 200_000) -> list[list[int]]:
    """All nonzero integer x with |x B| <= radius (Euclidean), up to sign.

    Schnorr-Euchner style depth-first enumeration on the Gram-Schmidt data.
    """
    n = len(B)
    mu, norms = _gram_schmidt([list(r) for r in B])
    R2 = radius * radius
    out: list[list[int]] = []
    x = [0] * n

    def rec(i: int, partial: float):
        if len(out) > limit:
            raise RuntimeError("too many lattice vectors within the enumeration radius")
        c = -sum(mu[j][i] * x[j] for j in range(i + 1, n))
        room = R2 - partial
        if room < 0:
            return
        w = math.sqrt(room / norms[i]) if norms[i] > 0 else 0.0
        for xi in range(math.ceil(c - w - 1e-12), math.floor(c + w + 1e-12) + 1):
            x[i] = xi
            p = partial + (xi - c) ** 2 * norms[i]
            if p > R2 * (1 + 1e-12):
                continue
            if i == 0:
                if any(x):
                    out.append(list(x))
            else:
                rec(i - 1, p)
        x[i] = 0

    rec(n - 1, 0.0)
    # keep one of each +-x
    seen = []
    for v in out:
        first = next(a for a in v if a)
        if first > 0:
            seen.append(v)
    return seen
