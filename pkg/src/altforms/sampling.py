"""Seeded pseudorandom group elements, forms and multivectors."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from math import lcm

from .exterior import GLElement, KForm, KVector, blades

_DIAG = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(2, 3))


def random_gl(n: int, rng: random.Random, det_sign: Optional[int] = None, spread: int = 2,
              rational: bool = True) -> GLElement:
    """``P L U D`` with unitriangular ``L``, ``U`` and a signed diagonal ``D``.

    ``det_sign`` fixes the sign of the determinant when given.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    lower = [[int(i == j) for j in range(n)] for i in range(n)]
    upper = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            lower[i][j] = rng.randint(-spread, spread)
            upper[j][i] = rng.randint(-spread, spread)
    choices = _DIAG if rational else (Fraction(1),)
    diag = [rng.choice(choices) * rng.choice((1, -1)) for _ in range(n)]
    sign = 1
    for d in diag:
        sign *= 1 if d > 0 else -1
    # parity of the permutation
    seen, parity = [False] * n, 0
    for i in range(n):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            parity += length - 1
    sign *= -1 if parity % 2 else 1
    if det_sign is not None and sign != det_sign:
        diag[0] = -diag[0]
    # (P L U D)[i][j] = sum_t L[perm[i]][t] U[t][j] D[j]
    lu = [[sum(lower[i][t] * upper[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    den = lcm(*(d.denominator for d in diag))
    scale = [d.numerator * (den // d.denominator) for d in diag]
    rows = [[lu[perm[i]][j] * scale[j] for j in range(n)] for i in range(n)]
    return GLElement.from_integers(rows, den)


def random_alternating(cls, n: int, k: int, rng: random.Random, density: float = 1.0,
                       spread: int = 3):
    coeffs = {}
    for b in blades(n, k):
        if rng.random() < density:
            coeffs[b] = Fraction(rng.randint(-spread, spread), rng.choice((1, 1, 2, 3)))
    return cls(n, k, coeffs)


def random_form(n: int, k: int, rng: random.Random, **kw) -> KForm:
    return random_alternating(KForm, n, k, rng, **kw)


def random_multivector(n: int, k: int, rng: random.Random, **kw) -> KVector:
    return random_alternating(KVector, n, k, rng, **kw)
