"""Exact exterior algebra on R^n.

Multivectors (``KVector``) and forms (``KForm``) of a single grade are stored
sparsely as ``{blade: Fraction}`` where a blade is a strictly increasing
tuple of 1-based indices.  ``e_S`` denotes the basis multivector and ``e^S``
the dual basis form, paired by ``<e^S, e_T> = delta_{S,T}``.

GL(n) acts on the left on multivectors and on the right on forms by
pullback::

    (g . alpha)(xi) = alpha(g . xi)

so ``act_on_form(g @ h, a) == act_on_form(h, act_on_form(g, a))``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, lcm
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import flint

from . import linalg

Blade = Tuple[int, ...]
Scalar = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Blade", "KVector", "KForm", "GLElement", "ParseError",
    "blades", "blade_index", "wedge_sign", "wedge", "contract_vector",
    "contract_multi", "contract_form", "act_on_multivector", "act_on_form",
    "evaluate", "volume_form", "volume_multivector", "parse_form",
    "format_form", "parse_matrix",
]


@lru_cache(maxsize=None)
def blades(n: int, k: int) -> Tuple[Blade, ...]:
    """All grade-``k`` blades of R^n in lexicographic order."""
    return tuple(combinations(range(1, n + 1), k))


@lru_cache(maxsize=None)
def blade_index(n: int, k: int) -> Dict[Blade, int]:
    return {b: i for i, b in enumerate(blades(n, k))}


def wedge_sign(s: Blade, t: Blade) -> Tuple[int, Blade]:
    """Sign and blade of ``e_s ^ e_t``; sign 0 when the blades overlap."""
    if set(s) & set(t):
        return 0, ()
    inversions = 0
    for a in s:
        for b in t:
            if a > b:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(s + t))


def _sort_with_sign(indices: Sequence[int]) -> Tuple[int, Blade]:
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(idx)


class _Alternating:
    __slots__ = ("n", "k", "_coeffs", "_hash")

    def __init__(self, n: int, k: int, coeffs: Optional[Mapping[Blade, Number]] = None):
        if n < 0 or not 0 <= k <= n:
            raise ValueError(f"grade {k} is not in 0..{n}")
        clean: Dict[Blade, Fraction] = {}
        for blade, c in (coeffs or {}).items():
            blade = tuple(blade)
            if len(blade) != k:
                raise ValueError(f"blade {blade} does not have grade {k}")
            if any(b >= a for a, b in zip(blade[1:], blade)) or (blade and not 1 <= blade[0]) \
                    or (blade and blade[-1] > n):
                raise ValueError(f"blade {blade} is not strictly increasing within 1..{n}")
            c = Fraction(c)
            if c:
                clean[blade] = c
        self.n = n
        self.k = k
        self._coeffs = clean
        self._hash = None

    @classmethod
    def _raw(cls, n: int, k: int, coeffs: Dict[Blade, Fraction]):
        obj = cls.__new__(cls)
        obj.n = n
        obj.k = k
        obj._coeffs = {b: c for b, c in coeffs.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n: int, k: int):
        return cls._raw(n, k, {})

    @classmethod
    def basis(cls, n: int, blade: Iterable[int], coefficient: Number = 1):
        sign, b = _sort_with_sign(tuple(blade))
        if sign == 0:
            raise ValueError(f"repeated index in blade {tuple(blade)}")
        return cls(n, len(b), {b: sign * Fraction(coefficient)})

    @classmethod
    def from_vector(cls, n: int, k: int, values: Sequence[Number]):
        """Build from dense coefficients in ``blades(n, k)`` order."""
        bl = blades(n, k)
        if len(values) != len(bl):
            raise ValueError("wrong number of coefficients")
        return cls._raw(n, k, {b: Fraction(v) for b, v in zip(bl, values)})

    @property
    def coeffs(self) -> Mapping[Blade, Fraction]:
        return dict(self._coeffs)

    def items(self) -> Iterator[Tuple[Blade, Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def __getitem__(self, blade: Iterable[int]) -> Fraction:
        return self._coeffs.get(tuple(blade), Fraction(0))

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def to_vector(self) -> List[Fraction]:
        return [self._coeffs.get(b, Fraction(0)) for b in blades(self.n, self.k)]

    def _check(self, other):
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if (other.n, other.k) != (self.n, self.k):
            raise ValueError(f"(n, k) mismatch: {(self.n, self.k)} vs {(other.n, other.k)}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._coeffs)
        for b, c in other._coeffs.items():
            out[b] = out.get(b, 0) + c
        return self._raw(self.n, self.k, out)

    def __neg__(self):
        return self._raw(self.n, self.k, {b: -c for b, c in self._coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar: Number):
        if isinstance(scalar, _Alternating):
            return NotImplemented
        s = Fraction(scalar)
        return self._raw(self.n, self.k, {b: s * c for b, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (type(other) is type(self) and other.n == self.n and other.k == self.k
                and other._coeffs == self._coeffs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.n, self.k, frozenset(self._coeffs.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, k={self.k}, {format_form(self)!r})"


class KVector(_Alternating):
    """Element of the k-th exterior power of R^n."""

    __slots__ = ()


class KForm(_Alternating):
    """Alternating k-form on R^n."""

    __slots__ = ()


def volume_form(n: int, coefficient: Number = 1) -> KForm:
    if not coefficient:
        raise ValueError("volume form must be nonzero")
    return KForm(n, n, {tuple(range(1, n + 1)): coefficient})


def volume_multivector(n: int, coefficient: Number = 1) -> KVector:
    return KVector(n, n, {tuple(range(1, n + 1)): coefficient})


def wedge(a: _Alternating, b: _Alternating) -> _Alternating:
    if type(a) is not type(b):
        raise TypeError("wedge needs two multivectors or two forms")
    if a.n != b.n:
        raise ValueError("ambient dimension mismatch")
    if a.k + b.k > a.n:
        raise ValueError(f"grade {a.k + b.k} exceeds dimension {a.n}")
    out: Dict[Blade, Fraction] = {}
    for s, x in a._coeffs.items():
        for t, y in b._coeffs.items():
            sign, u = wedge_sign(s, t)
            if sign:
                out[u] = out.get(u, 0) + sign * x * y
    return type(a)._raw(a.n, a.k + b.k, out)


def _contract_blades(t: Blade, s: Blade) -> Tuple[int, Blade]:
    """``iota_{e_t} e^s`` with the left factor of ``e_t`` inserted first."""
    if not set(t) <= set(s):
        return 0, ()
    rest = tuple(x for x in s if x not in t)
    inversions = sum(1 for a in t for u in rest if u < a)
    return (-1 if inversions & 1 else 1), rest


def contract_vector(v: KVector, alpha: KForm) -> KForm:
    if not isinstance(v, KVector) or v.k != 1:
        raise TypeError("first argument must be a grade-1 KVector")
    if alpha.k == 0:
        raise ValueError("cannot contract a vector into a 0-form")
    return contract_multi(v, alpha)


def contract_multi(xi: KVector, alpha: KForm) -> KForm:
    """``iota_xi alpha`` with ``iota_{x ^ z} = iota_z o iota_x``."""
    if not isinstance(xi, KVector) or not isinstance(alpha, KForm):
        raise TypeError("contract_multi(KVector, KForm)")
    if xi.n != alpha.n:
        raise ValueError("ambient dimension mismatch")
    if xi.k > alpha.k:
        raise ValueError(f"cannot contract grade {xi.k} into grade {alpha.k}")
    out: Dict[Blade, Fraction] = {}
    for t, x in xi._coeffs.items():
        for s, y in alpha._coeffs.items():
            sign, rest = _contract_blades(t, s)
            if sign:
                out[rest] = out.get(rest, 0) + sign * x * y
    return KForm._raw(alpha.n, alpha.k - xi.k, out)


def contract_form(beta: KForm, xi: KVector) -> KVector:
    """Contraction of a form into a multivector, same sign rule with roles swapped."""
    if beta.n != xi.n:
        raise ValueError("ambient dimension mismatch")
    if beta.k > xi.k:
        raise ValueError(f"cannot contract grade {beta.k} into grade {xi.k}")
    out: Dict[Blade, Fraction] = {}
    for t, x in beta._coeffs.items():
        for s, y in xi._coeffs.items():
            sign, rest = _contract_blades(t, s)
            if sign:
                out[rest] = out.get(rest, 0) + sign * x * y
    return KVector._raw(xi.n, xi.k - beta.k, out)


def evaluate(alpha: KForm, xi: KVector) -> Fraction:
    if (alpha.n, alpha.k) != (xi.n, xi.k):
        raise ValueError("evaluate needs equal n and k")
    small, big = (alpha, xi) if len(alpha) <= len(xi) else (xi, alpha)
    return sum((c * big._coeffs.get(b, 0) for b, c in small._coeffs.items()), Fraction(0))


class GLElement:
    """Invertible n x n rational matrix; column j is the image of e_j.

    The same class doubles as a plain element of gl(n) when built with
    ``invertible=False`` (used for infinitesimal actions).
    """

    __slots__ = ("n", "_matrix", "_det", "_int", "_den", "_inv")

    def __init__(self, rows: Sequence[Sequence[Number]], invertible: bool = True):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        matrix = tuple(tuple(x if type(x) is Fraction else Fraction(x) for x in r) for r in rows)
        den = 1
        for r in matrix:
            for x in r:
                if x.denominator != 1:
                    den = lcm(den, x.denominator)
        self._setup(n, tuple(tuple(int(x * den) for x in r) for r in matrix), den, invertible)
        self._matrix = matrix

    def _setup(self, n: int, ints, den: int, invertible: bool) -> None:
        self.n = n
        self._int = ints
        self._den = den
        self._matrix = None
        self._det = None
        self._inv = None
        if invertible and self.det == 0:
            raise ValueError("matrix is singular")

    @classmethod
    def from_integers(cls, rows: Sequence[Sequence[int]], den: int = 1) -> "GLElement":
        """The matrix ``rows / den`` for integer ``rows`` and a positive integer ``den``."""
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        if den < 1:
            raise ValueError("denominator must be positive")
        g = cls.__new__(cls)
        g._setup(n, tuple(tuple(int(x) for x in r) for r in rows), den, True)
        return g

    @property
    def matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        if self._matrix is None:
            den = self._den
            self._matrix = tuple(tuple(Fraction(x, den) for x in r) for r in self._int)
        return self._matrix

    @classmethod
    def identity(cls, n: int) -> "GLElement":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, n: int, lam: Number) -> "GLElement":
        return cls([[lam if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[Number]) -> "GLElement":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def det(self) -> Fraction:
        if self._det is None:
            self._det = linalg.integer_det(self._int) / Fraction(self._den) ** self.n
        return self._det

    def inverse(self) -> "GLElement":
        if self._inv is None:
            self._inv = GLElement(linalg.inverse(self.matrix))
        return self._inv

    def __matmul__(self, other: "GLElement") -> "GLElement":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return GLElement(linalg.matmul(self.matrix, other.matrix))

    def apply(self, v: Sequence[Number]) -> List[Fraction]:
        return [sum((a * Fraction(x) for a, x in zip(row, v)), Fraction(0)) for row in self.matrix]

    def transpose(self) -> "GLElement":
        return GLElement(linalg.transpose(self.matrix), invertible=self._det != 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, GLElement) and other.matrix == self.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"GLElement({format_matrix(self)!r})"


@lru_cache(maxsize=None)
def _laplace_table(n: int, m: int) -> Tuple[Tuple[int, int, int, int], ...]:
    """``(sub, j, out, sign)``: expanding a grade-``m`` minor along its first row.

    ``sub`` indexes a column set of size ``m - 1`` (0-based columns), ``j`` is
    the column taken by the first row and ``out`` the resulting column set.
    """
    sub_sets = list(combinations(range(n), m - 1))
    out_index = {c: i for i, c in enumerate(combinations(range(n), m))}
    table = []
    for si, cols in enumerate(sub_sets):
        for j in range(n):
            if j in cols:
                continue
            pos = sum(1 for c in cols if c < j)
            key = cols[:pos] + (j,) + cols[pos:]
            table.append((si, j, out_index[key], 1 if pos % 2 == 0 else -1))
    return tuple(table)


def _minors_along_rows(mat: Tuple[Tuple[int, ...], ...], rows: Blade, memo: Dict) -> List[int]:
    """All minors of ``mat`` with row set ``rows`` (0-based), indexed like
    ``combinations(range(n), len(rows))``."""
    if rows in memo:
        return memo[rows]
    n = len(mat)
    if not rows:
        res = [1]
    else:
        sub = _minors_along_rows(mat, rows[1:], memo)
        first = mat[rows[0]]
        res = [0] * comb(n, len(rows))
        for si, j, out, sign in _laplace_table(n, len(rows)):
            m = sub[si]
            if m:
                a = first[j]
                if a:
                    res[out] += a * m if sign > 0 else -a * m
    memo[rows] = res
    return res


def _integral(coeffs: Mapping[Blade, Fraction]) -> Tuple[Dict[Blade, int], int]:
    den = lcm(1, *(getattr(c, "denominator", 1) for c in coeffs.values()))
    return {b: c.numerator * (den // c.denominator) for b, c in coeffs.items()}, den


def _act(n: int, k: int, mat, coeffs: Mapping[Blade, Fraction], den: int) -> Dict[Blade, Fraction]:
    """``sum_S c_S minor(mat)[S, T]`` for every T, divided by ``den ** k``.

    Integer accumulation; one ``Fraction`` per output blade.  Grades above
    ``n / 2`` go through complementary minors of the adjugate.
    """
    ints, cden = _integral(coeffs)
    total = cden * den ** k
    if 2 * k > n and k < n:
        out, extra = _act_complement(n, k, mat, ints)
        total *= extra
    else:
        out = _act_integral(n, k, mat, ints)
    return {b: Fraction(v, total) for b, v in zip(blades(n, k), out) if v}


def _act_integral(n: int, k: int, mat, ints: Mapping[Blade, int]) -> List[int]:
    memo: Dict = {}
    out = [0] * comb(n, k)
    for s, c in ints.items():
        minors = _minors_along_rows(mat, tuple(i - 1 for i in s), memo)
        for t, m in enumerate(minors):
            if m:
                out[t] += c * m
    return out


@lru_cache(maxsize=None)
def _complement_signs(n: int, k: int) -> Tuple[Tuple[Blade, int], ...]:
    """Per blade ``S`` of grade k: its complement and ``(-1)^(sum of the complement)``."""
    full = range(1, n + 1)
    out = []
    for s in blades(n, k):
        rest = tuple(i for i in full if i not in s)
        out.append((rest, -1 if sum(rest) % 2 else 1))
    return tuple(out)


def _act_complement(n: int, k: int, mat, ints: Mapping[Blade, int]) -> Tuple[List[int], int]:
    """Jacobi's identity ``det(adj A)[I, J] = +-det(A)^(p-1) det A[J^c, I^c]``
    (``p = |I|``) turns grade-k minors of ``A`` into grade-(n-k) minors of
    ``adj(A)^T``.  Returns integer numerators and the extra denominator."""
    a = flint.fmpz_mat(n, n, [x for row in mat for x in row])
    d = int(a.det())
    inv = flint.fmpq_mat(a).inv()
    adj_t = tuple(tuple(int(inv[j, i] * d) for j in range(n)) for i in range(n))
    signs = _complement_signs(n, k)
    idx = blade_index(n, k)
    moved = {}
    for s, c in ints.items():
        rest, eps = signs[idx[s]]
        moved[rest] = eps * c
    low = _act_integral(n, n - k, adj_t, moved)
    low_idx = blade_index(n, n - k)
    out = [eps * low[low_idx[rest]] for rest, eps in signs]
    return out, d ** (n - k - 1)


def act_on_form(g: GLElement, alpha: KForm) -> KForm:
    """Pullback ``alpha o theta_{k,g}``: ``(g.a)_T = sum_S a_S det g[S, T]``."""
    if g.n != alpha.n:
        raise ValueError("dimension mismatch")
    return KForm._raw(alpha.n, alpha.k, _act(alpha.n, alpha.k, g._int, alpha._coeffs, g._den))


def act_on_multivector(g: GLElement, xi: KVector) -> KVector:
    """``(g.xi)_S = sum_T det g[S, T] xi_T``."""
    if g.n != xi.n:
        raise ValueError("dimension mismatch")
    gt = tuple(zip(*g._int))
    return KVector._raw(xi.n, xi.k, _act(xi.n, xi.k, gt, xi._coeffs, g._den))


# ---------------------------------------------------------------------------
# text formats

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<blade>e(?:\{[^}]*\}|\d+))|(?P<op>[-+*/])|(?P<bad>\S))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return out


def _parse_blade(tok: str, at: int, n: Optional[int]) -> Blade:
    if tok.startswith("e{"):
        body = tok[2:-1]
        parts = body.split(",")
        try:
            idx = [int(p.strip()) for p in parts]
        except ValueError:
            raise ParseError(f"bad index list in {tok!r}", at) from None
    else:
        idx = [int(ch) for ch in tok[1:]]
    if len(set(idx)) != len(idx):
        raise ParseError(f"duplicate index in {tok!r}", at)
    for i in idx:
        if i < 1 or (n is not None and i > n):
            raise ParseError(f"index {i} out of range 1..{n}", at)
    return tuple(idx)


def parse_form(text: str, n: Optional[int] = None, k: Optional[int] = None, kind: str = "form"):
    """Parse ``"3/2*e123 - e{1,4,5}"`` into a KForm (or KVector with ``kind="vector"``).

    ``k`` is inferred from the blades and is only needed for the zero value.
    """
    cls = KForm if kind == "form" else KVector
    toks = _tokens(text)
    if not toks:
        raise ParseError("empty expression", 0)
    i = 0
    terms: List[Tuple[Fraction, Blade, int]] = []

    def expect_num():
        nonlocal i
        if i >= len(toks) or toks[i][0] != "num":
            at = toks[i][2] if i < len(toks) else len(text)
            raise ParseError("expected integer", at)
        v = int(toks[i][1])
        i += 1
        return v

    sign = 1
    if toks[0][0] == "op" and toks[0][1] in "+-":
        sign = -1 if toks[0][1] == "-" else 1
        i = 1
    while True:
        if i >= len(toks):
            raise ParseError("expected term", len(text))
        coef = Fraction(1)
        start = toks[i][2]
        has_num = False
        if toks[i][0] == "num":
            num = expect_num()
            den = 1
            if i < len(toks) and toks[i] == ("op", "/", toks[i][2]):
                i += 1
                den = expect_num()
                if den == 0:
                    raise ParseError("zero denominator", toks[i - 1][2])
            coef = Fraction(num, den)
            has_num = True
            if i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*":
                i += 1
                if i >= len(toks) or toks[i][0] != "blade":
                    raise ParseError("expected blade after '*'", toks[i][2] if i < len(toks) else len(text))
        if i < len(toks) and toks[i][0] == "blade":
            blade = _parse_blade(toks[i][1], toks[i][2], n)
            i += 1
        elif has_num:
            blade = ()
        else:
            raise ParseError("expected coefficient or blade", start)
        terms.append((sign * coef, blade, start))
        if i >= len(toks):
            break
        if toks[i][0] != "op" or toks[i][1] not in "+-":
            raise ParseError(f"unexpected {toks[i][1]!r}", toks[i][2])
        sign = -1 if toks[i][1] == "-" else 1
        i += 1

    grades = {len(b) for c, b, _ in terms if not (c == 0 and b == ())}
    if len(grades) > 1:
        raise ParseError("terms of mixed grade", terms[-1][2])
    grade = grades.pop() if grades else None
    if k is not None:
        if grade is not None and grade != k:
            raise ParseError(f"expression has grade {grade}, expected {k}", 0)
        grade = k
    if grade is None:
        raise ParseError("grade of the zero expression is ambiguous; pass k", 0)
    if n is None:
        n = max((max(b) for _, b, _ in terms if b), default=grade)
    if grade > n:
        raise ParseError(f"grade {grade} exceeds dimension {n}", 0)
    out: Dict[Blade, Fraction] = {}
    for c, b, at in terms:
        if b == () and grade != 0:
            if c == 0:
                continue
            raise ParseError("scalar term in an expression of positive grade", at)
        s, sb = _sort_with_sign(b)
        out[sb] = out.get(sb, 0) + s * c
    return cls._raw(n, grade, out)


def _format_blade(b: Blade, braces: bool) -> str:
    if not braces and all(i < 10 for i in b):
        return "e" + "".join(str(i) for i in b)
    return "e{" + ",".join(str(i) for i in b) + "}"


def format_form(value: _Alternating, braces: bool = False) -> str:
    """Canonical text: lexicographic blades, unit coefficients elided."""
    parts: List[str] = []
    for b, c in value.items():
        mag = abs(c)
        if b == ():
            body = str(mag)
        elif mag == 1:
            body = _format_blade(b, braces)
        else:
            body = f"{mag}*{_format_blade(b, braces)}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


def parse_matrix(text: str) -> GLElement:
    """``"1,0;1/2,1"`` or a JSON array of arrays of rational strings."""
    import json

    text = text.strip()
    if text.startswith("["):
        rows = json.loads(text)
        return GLElement([[Fraction(str(x)) for x in r] for r in rows])
    rows = [[Fraction(x.strip()) for x in r.split(",")] for r in text.split(";") if r.strip()]
    return GLElement(rows)


def format_matrix(g: GLElement) -> str:
    return ";".join(",".join(str(x) for x in row) for row in g.matrix)
