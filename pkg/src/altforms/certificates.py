"""Offline discovery of negative-determinant stabilizer elements.

Catalogs ship the certificates found here as data; verification never
depends on a search succeeding.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional

from .exterior import GLElement, KVector
from .orbits import support, verify_negdet_certificate


def reflection_certificate(xi: KVector) -> Optional[GLElement]:
    """``a -> -a`` for a basis vector ``a`` outside the support, identity on a
    hyperplane containing the support.  Exists exactly when ``xi`` is degenerate."""
    n = xi.n
    w = support(xi)
    if w.dim == n:
        return None
    piv = set(w.pivots())
    free = [j for j in range(n) if j not in piv]
    a = free[0]
    # hyperplane = support + remaining free coordinate vectors; complete with e_a
    cols = [list(v) for v in w.basis]
    cols += [[Fraction(int(i == j)) for i in range(n)] for j in free[1:]]
    cols.append([Fraction(int(i == a)) for i in range(n)])
    m = GLElement([[cols[j][i] for j in range(n)] for i in range(n)])
    d = GLElement.diagonal([1] * (n - 1) + [-1])
    g = m @ d @ m.inverse()
    return g


def _signed_permutation(perm: List[int], signs: List[int]) -> GLElement:
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for j in range(n):
        rows[perm[j]][j] = signs[j]
    return GLElement(rows)


def _blade_permutations(xi: KVector) -> Iterator[List[int]]:
    """Permutations (0-based) mapping the set of blades of ``xi`` onto itself."""
    n = xi.n
    pattern = {frozenset(b) for b, _ in xi.items()}
    mags = {frozenset(b): abs(c) for b, c in xi.items()}
    perm = [-1] * n
    used = [False] * n

    def consistent(upto: int) -> bool:
        for b in pattern:
            if all(i - 1 <= upto for i in b):
                img = frozenset(perm[i - 1] + 1 for i in b)
                if img not in pattern or mags[img] != mags[b]:
                    return False
        return True

    def rec(i: int):
        if i == n:
            yield list(perm)
            return
        for v in range(n):
            if not used[v]:
                perm[i] = v
                used[v] = True
                if consistent(i):
                    yield from rec(i + 1)
                used[v] = False
        perm[i] = -1

    yield from rec(0)


def search_signed_permutations(xi: KVector, limit: int = 100000) -> Optional[GLElement]:
    """First signed permutation matrix with negative determinant fixing ``xi``."""
    n = xi.n
    tried = 0
    for perm in _blade_permutations(xi):
        for signs in product((1, -1), repeat=n):
            tried += 1
            if tried > limit:
                return None
            g = _signed_permutation(perm, list(signs))
            if verify_negdet_certificate(g, xi):
                return g
    return None


def find_negdet_certificate(xi: KVector) -> Optional[GLElement]:
    return reflection_certificate(xi) or search_signed_permutations(xi)
