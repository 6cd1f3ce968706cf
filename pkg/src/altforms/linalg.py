"""Exact linear algebra over the rationals.

Rank, null spaces and determinants are delegated to FLINT (``python-flint``)
after clearing denominators row by row, which leaves row spaces unchanged.
Signatures of symmetric matrices are computed here by congruence
diagonalization; a characteristic-polynomial route is kept for large
matrices on hot paths.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, List, Sequence, Tuple

import flint

Matrix = List[List[Fraction]]


def _integral_row(row: Sequence) -> List[int]:
    den = 1
    for x in row:
        d = getattr(x, "denominator", 1)
        if d != 1:
            den = lcm(den, d)
    if den == 1:
        return [int(x) for x in row]
    return [int(Fraction(x) * den) for x in row]


def to_fmpz(rows: Sequence[Sequence], ncols: int | None = None) -> flint.fmpz_mat:
    """Integral matrix with the same row space as ``rows``."""
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows or ncols == 0:
        return flint.fmpz_mat(len(rows), ncols)
    flat: List[int] = []
    for r in rows:
        flat.extend(_integral_row(r))
    return flint.fmpz_mat(len(rows), ncols, flat)


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    m = to_fmpz(rows, ncols)
    if m.ncols() == 0:
        return 0
    return m.rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{v : M v = 0}`` as primitive integer vectors."""
    rows = [r for r in rows]
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m = to_fmpz(rows, ncols)
    x, nullity = m.nullspace()
    basis = []
    for j in range(nullity):
        col = [int(x[i, j]) for i in range(ncols)]
        basis.append([Fraction(c) for c in col])
    return basis


def left_nullspace(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Basis of ``{w : w M = 0}``."""
    rows = list(rows)
    nrows = len(rows)
    if ncols == 0:
        return [[Fraction(int(i == j)) for j in range(nrows)] for i in range(nrows)]
    cols = [[rows[i][j] for i in range(nrows)] for j in range(ncols)]
    return nullspace(cols, nrows)


def rref(rows: Sequence[Sequence], ncols: int) -> List[List[Fraction]]:
    """Nonzero rows of the reduced row echelon form."""
    rows = list(rows)
    if not rows or ncols == 0:
        return []
    q = flint.fmpq_mat(to_fmpz(rows, ncols))
    r, rk = q.rref()
    out = []
    for i in range(rk):
        out.append([_from_fmpq(r[i, j]) for j in range(ncols)])
    return out


def _from_fmpq(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def det(matrix: Sequence[Sequence]) -> Fraction:
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    den = 1
    for row in matrix:
        for x in row:
            d = getattr(x, "denominator", 1)
            if d != 1:
                den = lcm(den, d)
    flat = [int(Fraction(x) * den) for row in matrix for x in row]
    return Fraction(int(flint.fmpz_mat(n, n, flat).det()), den ** n)


def integer_det(matrix: Sequence[Sequence[int]]) -> int:
    n = len(matrix)
    if n == 0:
        return 1
    return int(flint.fmpz_mat(n, n, [x for row in matrix for x in row]).det())


def inverse(matrix: Sequence[Sequence]) -> Matrix:
    n = len(matrix)
    q = flint.fmpq_mat(n, n, [flint.fmpq(Fraction(x).numerator, Fraction(x).denominator)
                              for row in matrix for x in row])
    inv = q.inv()
    return [[_from_fmpq(inv[i, j]) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((row[t] * b[t][j] for t in range(inner)), Fraction(0)) for j in range(cols)]
            for row in a]


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*a)]


def is_symmetric(a: Sequence[Sequence]) -> bool:
    n = len(a)
    return all(len(row) == n for row in a) and all(
        a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


def congruence_diagonalize(a: Sequence[Sequence]) -> List[Fraction]:
    """Diagonal entries of ``P^T A P`` for some invertible rational ``P``.

    Symmetric Gaussian elimination. When every remaining diagonal entry
    vanishes but an off-diagonal one does not, the pair ``(i, j)`` is
    mixed by ``e_i <- e_i + e_j`` which makes the ``(i, i)`` entry
    ``2 a_ij`` nonzero.
    """
    if not is_symmetric(a):
        raise ValueError("matrix is not symmetric")
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    diag: List[Fraction] = []
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and m[i][j] != 0), None)
            if pair is None:
                diag.extend(Fraction(0) for _ in active)
                break
            i, j = pair
            # row/column operation e_i <- e_i + e_j
            for t in range(n):
                m[i][t] += m[j][t]
            for t in range(n):
                m[t][i] += m[t][j]
            piv = i
        p = m[piv][piv]
        rest = [i for i in active if i != piv]
        row = m[piv]
        for i in rest:
            f = m[i][piv]
            if f == 0:
                continue
            f = f / p
            mi = m[i]
            for j in rest:
                if row[j]:
                    mi[j] -= f * row[j]
            mi[piv] = Fraction(0)
        for i in rest:
            m[piv][i] = Fraction(0)
        diag.append(p)
        active = rest
    return diag


def signature(a: Sequence[Sequence]) -> Tuple[int, int, int]:
    """Sylvester signature ``(positive, zero, negative)``."""
    d = congruence_diagonalize(a)
    return (sum(1 for x in d if x > 0), sum(1 for x in d if x == 0), sum(1 for x in d if x < 0))


def _sign_changes(coeffs: Iterable[int]) -> int:
    signs = [c > 0 for c in coeffs if c != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def signature_by_charpoly(a: Sequence[Sequence]) -> Tuple[int, int, int]:
    """Signature from the characteristic polynomial.

    A real symmetric matrix has a real-rooted characteristic polynomial, so
    Descartes' rule of signs counts its positive and negative roots exactly.
    """
    n = len(a)
    if n == 0:
        return (0, 0, 0)
    den = 1
    for row in a:
        for x in row:
            d = getattr(x, "denominator", 1)
            if d != 1:
                den = lcm(den, d)
    # one positive scalar for the whole matrix keeps the signature
    m = flint.fmpz_mat(n, n, [int(Fraction(x) * den) for row in a for x in row])
    coeffs = [int(c) for c in m.charpoly().coeffs()]  # ascending degree
    zero = next(i for i, c in enumerate(coeffs) if c != 0)
    pos = _sign_changes(coeffs)
    neg = _sign_changes(c if i % 2 == 0 else -c for i, c in enumerate(coeffs))
    return (pos, zero, neg)
