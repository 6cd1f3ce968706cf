"""Integer kernels behind the orbit invariants.

Everything here works on a coefficient vector of Python ints indexed like
``blades(n, k)``.  The index/sign tables depend only on ``(n, k)`` and are
built once.  Callers clear denominators first; every invariant computed
from these kernels is unchanged by a positive rescaling of the input.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd, lcm
from typing import Dict, List, Sequence, Tuple

import flint

from .exterior import Blade, _sort_with_sign, blade_index, blades

Table = Tuple[Tuple[Tuple[int, int, int], ...], ...]


def integral_coefficients(x) -> List[int]:
    """Coefficients of ``x`` times the (positive) lcm of their denominators."""
    n, k = x.n, x.k
    items = list(x._coeffs.items())
    den = lcm(1, *(getattr(c, "denominator", 1) for _, c in items))
    idx = blade_index(n, k)
    out = [0] * len(idx)
    for b, c in items:
        out[idx[b]] = c.numerator * (den // c.denominator)
    return out


@lru_cache(maxsize=None)
def tangent_table(n: int, k: int, form: bool) -> Table:
    """Per source blade ``s``: entries ``(row, col, sign)`` of ``E_ij . e_s``.

    Rows are ``(i - 1) n + (j - 1)``, columns index ``blades(n, k)``.
    """
    col = blade_index(n, k)
    table = []
    for s in blades(n, k):
        entries = []
        for p, a in enumerate(s):
            rest = s[:p] + s[p + 1:]
            for b in range(1, n + 1):
                if b != a and b in rest:
                    continue
                q = sum(1 for r in rest if r < b)
                t = rest[:q] + (b,) + rest[q:]
                sign = 1 if (p - q) % 2 == 0 else -1
                i, j = (a, b) if form else (b, a)
                entries.append(((i - 1) * n + (j - 1), col[t], sign))
        table.append(tuple(entries))
    return tuple(table)


@lru_cache(maxsize=None)
def contraction_table(n: int, k: int) -> Table:
    """Per blade ``s``: entries ``(i, col, sign)`` of ``iota_{e_i} e^s`` in grade ``k - 1``."""
    col = blade_index(n, k - 1)
    table = []
    for s in blades(n, k):
        table.append(tuple((i - 1, col[s[:p] + s[p + 1:]], 1 if p % 2 == 0 else -1)
                           for p, i in enumerate(s)))
    return tuple(table)


def _accumulate(coeffs: Sequence[int], table: Table, nrows: int, ncols: int) -> List[int]:
    flat = [0] * (nrows * ncols)
    for s, c in enumerate(coeffs):
        if c:
            for r, t, sign in table[s]:
                flat[r * ncols + t] += c if sign > 0 else -c
    return flat


def contraction_rank(coeffs: Sequence[int], n: int, k: int) -> int:
    """Rank of ``v -> iota_v x`` (equivalently, the dimension of the support)."""
    if k == 0 or not any(coeffs):
        return 0
    ncols = len(blades(n, k - 1))
    flat = _accumulate(coeffs, contraction_table(n, k), n, ncols)
    return flint.fmpz_mat(n, ncols, flat).rank()


def tangent_fmpz(coeffs: Sequence[int], n: int, k: int, form: bool = True) -> flint.fmpz_mat:
    ncols = len(blades(n, k))
    flat = _accumulate(coeffs, tangent_table(n, k, form), n * n, ncols)
    return flint.fmpz_mat(n * n, ncols, flat)


def stabilizer_basis(coeffs: Sequence[int], n: int, k: int, form: bool = True) -> List[List[int]]:
    """Basis of ``{X : X.x = 0}`` by primitive integer vectors, each ``X`` flattened row-major.

    FLINT's kernel vectors can carry huge common factors; dividing them out
    keeps the later Gram matrices small.
    """
    size = n * n
    if not any(coeffs):
        return [[int(i == j) for j in range(size)] for i in range(size)]
    ker, nullity = tangent_fmpz(coeffs, n, k, form).transpose().nullspace()
    basis = []
    for c in range(nullity):
        v = [int(ker[r, c]) for r in range(size)]
        g = gcd(*v)
        basis.append([x // g for x in v])
    return basis


def stabilizer_trace(coeffs: Sequence[int], n: int, k: int, form: bool = True) -> Tuple[int, Tuple[int, int, int]]:
    """Dimension of the stabilizer algebra and the signature of ``tr(XY)`` on it."""
    basis = stabilizer_basis(coeffs, n, k, form)
    return len(basis), trace_form_signature(basis, n)


def sign_counts(coeffs: Sequence[int]) -> Tuple[int, int, int]:
    """``(positive, zero, negative)`` roots of a real-rooted polynomial (ascending coefficients)."""
    zero = next(i for i, c in enumerate(coeffs) if c != 0)

    def changes(seq):
        signs = [c > 0 for c in seq if c != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return (changes(coeffs), zero, changes(c if i % 2 == 0 else -c for i, c in enumerate(coeffs)))


def trace_form_signature(basis: List[List[int]], n: int) -> Tuple[int, int, int]:
    """Signature of ``tr(XY)`` on the span of ``basis`` (a Lie algebra of n x n matrices)."""
    s = len(basis)
    if s == 0:
        return (0, 0, 0)
    k = flint.fmpz_mat(s, n * n, [v for b in basis for v in b])
    kt = flint.fmpz_mat(n * n, s, [b[j * n + i] for i in range(n) for j in range(n) for b in basis])
    gram = k * kt
    return sign_counts([int(c) for c in gram.charpoly().coeffs()])


@lru_cache(maxsize=None)
def b_form_table() -> Tuple[Tuple[int, int, Tuple[Tuple[int, int, int, int], ...]], ...]:
    """Cubic terms of ``B(e_i, e_j)`` for 3-forms on R^7.

    ``B_ij = sum sign * phi[a] * phi[b] * phi[c]`` over the listed blade
    indices, read off from ``iota_i e^A ^ iota_j e^B ^ e^C = sign e^{1..7}``.
    """
    n = 7
    bl = blades(n, 3)
    idx = blade_index(n, 3)
    out = []
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            terms: Dict[Tuple[int, int, int], int] = {}
            for a in bl:
                if i not in a:
                    continue
                pa = a.index(i)
                ra = a[:pa] + a[pa + 1:]
                for b in bl:
                    if j not in b:
                        continue
                    pb = b.index(j)
                    rb = b[:pb] + b[pb + 1:]
                    used = set(ra) | set(rb)
                    if len(used) < 4:
                        continue
                    c = tuple(x for x in range(1, n + 1) if x not in used)
                    sign, _ = _sort_with_sign(ra + rb + c)
                    sign *= (-1) ** (pa + pb)
                    key = (idx[a], idx[b], idx[c])
                    terms[key] = terms.get(key, 0) + sign
            out.append((i - 1, j - 1, tuple((a, b, c, s) for (a, b, c), s in terms.items() if s)))
    return tuple(out)


def b_matrix(coeffs: Sequence[int]) -> List[List[int]]:
    m = [[0] * 7 for _ in range(7)]
    for i, j, terms in b_form_table():
        v = 0
        for a, b, c, s in terms:
            ca = coeffs[a]
            if ca:
                cb = coeffs[b]
                if cb:
                    v += s * ca * cb * coeffs[c]
        m[i][j] = m[j][i] = v
    return m


def symmetric_signature(m: List[List[int]]) -> Tuple[int, int, int]:
    n = len(m)
    if n == 0:
        return (0, 0, 0)
    poly = flint.fmpz_mat(n, n, [v for row in m for v in row]).charpoly()
    return sign_counts([int(c) for c in poly.coeffs()])


def dual_coefficients(coeffs: Sequence[int], n: int, k: int) -> List[int]:
    """Coefficients of the inverse dual (for ``omega = e^{1..n}``) of a k-form."""
    return [s * coeffs[i] for i, s in _dual_table(n, k)]


@lru_cache(maxsize=None)
def _dual_table(n: int, k: int) -> Tuple[Tuple[int, int], ...]:
    idx = blade_index(n, k)
    out = []
    for t in blades(n, n - k):
        rest: Blade = tuple(i for i in range(1, n + 1) if i not in t)
        inv = sum(1 for a in t for u in rest if u < a)
        out.append((idx[rest], -1 if inv & 1 else 1))
    return tuple(out)


@lru_cache(maxsize=None)
def hitchin_table() -> Tuple[Tuple[int, int, int, int, int], ...]:
    """Quadratic terms ``(row, col, a, b, sign)`` of the Hitchin matrix of a 3-form on R^6.

    ``K e_i`` is defined by ``iota_{K e_i} e^{1..6} = iota_{e_i} alpha ^ alpha``.
    """
    n = 6
    bl = blades(n, 3)
    idx = blade_index(n, 3)
    terms: Dict[Tuple[int, int, int, int], int] = {}
    for i in range(1, n + 1):
        for a in bl:
            if i not in a:
                continue
            pa = a.index(i)
            ra = a[:pa] + a[pa + 1:]
            for b in bl:
                if set(ra) & set(b):
                    continue
                sign, five = _sort_with_sign(ra + b)
                (j,) = [x for x in range(1, n + 1) if x not in five]
                # iota_{e_j} e^{1..6} = (-1)^(j-1) e^{[6] - j}
                sign *= (-1) ** (pa + j - 1)
                key = (j - 1, i - 1, idx[a], idx[b])
                terms[key] = terms.get(key, 0) + sign
    return tuple(k + (s,) for k, s in terms.items() if s)


def hitchin_trace(coeffs: Sequence[int]) -> int:
    """``tr(K^2)`` for the Hitchin matrix ``K`` (six times the Hitchin quartic)."""
    k = [[0] * 6 for _ in range(6)]
    for r, c, a, b, s in hitchin_table():
        ca = coeffs[a]
        if ca:
            cb = coeffs[b]
            if cb:
                k[r][c] += s * ca * cb
    return sum(k[i][j] * k[j][i] for i in range(6) for j in range(6))


def annihilator_basis(coeffs: Sequence[int], n: int, k: int) -> List[List[int]]:
    """Integral basis of ``{v : iota_v x = 0}``."""
    if k == 0 or not any(coeffs):
        return [[int(i == j) for j in range(n)] for i in range(n)]
    ncols = len(blades(n, k - 1))
    flat = _accumulate(coeffs, contraction_table(n, k), n, ncols)
    ker, nullity = flint.fmpz_mat(n, ncols, flat).transpose().nullspace()
    return [[int(ker[r, c]) for r in range(n)] for c in range(nullity)]


def tangent_rank(coeffs: Sequence[int], n: int, k: int, form: bool = True) -> int:
    if not any(coeffs):
        return 0
    return tangent_fmpz(coeffs, n, k, form).rank()
