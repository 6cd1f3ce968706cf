"""GL-orbit predicates and invariants of forms and multivectors.

Stability is decided algebraically: the orbit of ``x`` is open exactly when
the infinitesimal action ``X -> X.x`` of gl(n) is onto, i.e. when the
tangent rank equals ``C(n, k)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

import flint

from . import _kernels, linalg
from .exterior import (
    Blade, GLElement, KForm, KVector, act_on_form, act_on_multivector, blade_index,
    blades, contract_multi, wedge, volume_form,
)

Alternating = Union[KForm, KVector]
Signature = Tuple[int, int, int]


# ---------------------------------------------------------------------------
# subspaces

class Subspace:
    """Subspace of R^n held as the nonzero rows of a reduced echelon basis."""

    __slots__ = ("n", "basis")

    def __init__(self, n: int, vectors: Sequence[Sequence] = ()):
        self.n = n
        rows = [list(v) for v in vectors]
        self.basis: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(r) for r in linalg.rref(rows, n))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return linalg.rank(list(self.basis) + [list(v)], self.n) == self.dim

    def pivots(self) -> List[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def image(self, g: GLElement) -> "Subspace":
        return Subspace(self.n, [g.apply(v) for v in self.basis])

    def vectors(self) -> List[KVector]:
        return [KVector.from_vector(self.n, 1, v) for v in self.basis]

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and (self.n, self.basis) == (other.n, other.basis)

    def __hash__(self) -> int:
        return hash((self.n, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, dim={self.dim})"


def _contraction_rows(x: Alternating) -> List[List[Fraction]]:
    """Matrix of ``v -> iota_v x``: row i holds ``iota_{e_i} x`` in grade k-1 coordinates."""
    n, k = x.n, x.k
    col = blade_index(n, k - 1)
    rows = [[Fraction(0)] * len(col) for _ in range(n)]
    for s, c in x.items():
        for p, i in enumerate(s):
            rest = s[:p] + s[p + 1:]
            rows[i - 1][col[rest]] += c if p % 2 == 0 else -c
    return rows


def annihilator(alpha: KForm) -> Subspace:
    """``{v : iota_v alpha = 0}``."""
    n = alpha.n
    if alpha.k == 0:
        return Subspace(n, [[int(i == j) for j in range(n)] for i in range(n)])
    rows = _contraction_rows(alpha)
    return Subspace(n, linalg.left_nullspace(rows, len(rows[0])))


def is_nondegenerate(alpha: KForm) -> bool:
    return annihilator(alpha).dim == 0


def support(xi: KVector) -> Subspace:
    """Smallest W with ``xi`` in the k-th exterior power of W."""
    n = xi.n
    if not xi:
        return Subspace(n)
    if xi.k == 0:
        return Subspace(n)
    rows = _contraction_rows(xi)
    cols = [[rows[i][u] for i in range(n)] for u in range(len(rows[0]))]
    return Subspace(n, cols)


# ---------------------------------------------------------------------------
# infinitesimal action

def _tangent_entries(x: Alternating):
    """Yield ``(i, j, blade, value)``: ``E_ij . x`` has ``value`` on ``blade``.

    ``E_ij`` maps ``e_j`` to ``e_i``. For forms the Leibniz rule moves an
    index ``i`` of a blade to ``j``; for multivectors it moves ``j`` to ``i``.
    """
    n = x.n
    form = isinstance(x, KForm)
    for s, c in x.items():
        for p, a in enumerate(s):
            rest = s[:p] + s[p + 1:]
            for b in range(1, n + 1):
                if b != a and b in rest:
                    continue
                # insert b into rest; parity of the shift from slot p
                q = sum(1 for r in rest if r < b)
                t = rest[:q] + (b,) + rest[q:]
                v = c if (p - q) % 2 == 0 else -c
                if form:
                    yield a, b, t, v
                else:
                    yield b, a, t, v


def infinitesimal_action(X: GLElement, x: Alternating) -> Alternating:
    """Derivative at the identity of the GL action, in the direction ``X``."""
    if X.n != x.n:
        raise ValueError("dimension mismatch")
    out: Dict[Blade, Fraction] = {}
    m = X.matrix
    for i, j, t, v in _tangent_entries(x):
        a = m[i - 1][j - 1]
        if a:
            out[t] = out.get(t, 0) + a * v
    return type(x)._raw(x.n, x.k, out)


def tangent_matrix(x: Alternating) -> flint.fmpz_mat:
    """Integral ``n^2 x C(n, k)`` matrix of ``X -> X.x`` (rows ``E_ij``, row-major).

    Scaled by a positive integer when ``x`` has non-integral coefficients.
    """
    return _kernels.tangent_fmpz(_kernels.integral_coefficients(x), x.n, x.k, isinstance(x, KForm))


def orbit_tangent_rank(x: Alternating) -> int:
    if not x:
        return 0
    return tangent_matrix(x).rank()


def is_stable(x: Alternating) -> bool:
    return orbit_tangent_rank(x) == comb(x.n, x.k)


def stabilizer_algebra(x: Alternating) -> List[List[List[Fraction]]]:
    """Basis of ``{X : X.x = 0}`` as integral n x n matrices."""
    n = x.n
    basis = _stabilizer_flat(x)
    return [[[Fraction(b[i * n + j]) for j in range(n)] for i in range(n)] for b in basis]


def _stabilizer_flat(x: Alternating) -> List[List[int]]:
    return _kernels.stabilizer_basis(_kernels.integral_coefficients(x), x.n, x.k, isinstance(x, KForm))


def stabilizer_trace_signature(x: Alternating) -> Signature:
    """Signature of ``(X, Y) -> tr(XY)`` on the stabilizer algebra.

    Conjugation preserves the trace form, so this is a GL-invariant that sees
    the real form of the stabilizer (it separates, for instance, split and
    compact type stabilizers of the same complex orbit).
    """
    coeffs = _kernels.integral_coefficients(x)
    return _kernels.stabilizer_trace(coeffs, x.n, x.k, isinstance(x, KForm))[1]


# ---------------------------------------------------------------------------
# duality

def _complement_sign(t: Blade, n: int) -> Tuple[int, Blade]:
    full = tuple(range(1, n + 1))
    rest = tuple(i for i in full if i not in t)
    inversions = sum(1 for a in t for u in rest if u < a)
    return (-1 if inversions & 1 else 1), rest


def hodge_dual(xi: KVector, omega: Optional[KForm] = None) -> KForm:
    """``c(xi) = iota_xi omega`` with ``omega`` defaulting to ``e^{1..n}``."""
    n = xi.n
    if omega is None:
        omega = volume_form(n)
    _check_volume(omega, n)
    # iota_{e_T} (sign e^T ^ e^R) = sign e^R, R the complement of T
    w = omega[tuple(range(1, n + 1))]
    out = {}
    for t, c in xi._coeffs.items():
        sign, rest = _complement_sign(t, n)
        out[rest] = sign * w * c
    return KForm._raw(n, n - xi.k, out)


def inverse_hodge_dual(rho: KForm, omega: Optional[KForm] = None) -> KVector:
    n = rho.n
    if omega is None:
        omega = volume_form(n)
    _check_volume(omega, n)
    w = omega[tuple(range(1, n + 1))]
    k = n - rho.k
    out = {}
    for t in blades(n, k):
        sign, rest = _complement_sign(t, n)
        c = rho[rest]
        if c:
            out[t] = c / (sign * w)
    return KVector._raw(n, k, out)


def _check_volume(omega: KForm, n: int) -> None:
    if not isinstance(omega, KForm) or omega.n != n or omega.k != n or not omega:
        raise ValueError(f"not a volume form on R^{n}")


# ---------------------------------------------------------------------------
# special invariants

@dataclass(frozen=True)
class SymmetricForm:
    matrix: Tuple[Tuple[Fraction, ...], ...]
    _signature: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if not linalg.is_symmetric(m):
            raise ValueError("matrix is not symmetric")
        object.__setattr__(self, "matrix", m)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def signature(self) -> Signature:
        if not self._signature:
            self._signature.append(linalg.signature(self.matrix))
        return self._signature[0]

    def congruent(self, g: GLElement) -> "SymmetricForm":
        """``g^T S g``."""
        a = g.matrix
        return SymmetricForm(linalg.matmul(linalg.transpose(a), linalg.matmul(self.matrix, a)))


def signature(s: SymmetricForm) -> Signature:
    return s.signature


def two_form_rank(alpha: KForm) -> int:
    if alpha.k != 2:
        raise ValueError("two_form_rank needs a 2-form")
    n = alpha.n
    gram = [[Fraction(0)] * n for _ in range(n)]
    for (i, j), c in alpha.items():
        gram[i - 1][j - 1] = c
        gram[j - 1][i - 1] = -c
    return linalg.rank(gram, n)


def _top_coefficient(x: Alternating) -> Fraction:
    return x[tuple(range(1, x.n + 1))]


def _as_form(x: Alternating) -> KForm:
    return x if isinstance(x, KForm) else KForm._raw(x.n, x.k, dict(x.items()))


def _unit(n: int, i: int) -> KVector:
    return KVector._raw(n, 1, {(i,): Fraction(1)})


def hitchin_matrix(alpha: KForm) -> List[List[Fraction]]:
    """``K`` with ``iota_{K v} omega = iota_v alpha ^ alpha`` for ``omega = e^{1..6}``."""
    if (alpha.n, alpha.k) != (6, 3):
        raise ValueError("the Hitchin invariant is defined for 3-forms on R^6")
    n = 6
    cols = []
    for i in range(1, n + 1):
        five = wedge(contract_multi(_unit(n, i), alpha), alpha)
        v = [Fraction(0)] * n
        for blade, c in five.items():
            (j,) = [x for x in range(1, n + 1) if x not in blade]
            # iota_{e_j} e^{1..6} = (-1)^(j-1) e^{[6] - j}
            v[j - 1] = c if (j - 1) % 2 == 0 else -c
        cols.append(v)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def hitchin_lambda(alpha: KForm) -> Fraction:
    k = hitchin_matrix(alpha)
    k2 = linalg.matmul(k, k)
    return sum(k2[i][i] for i in range(6)) / 6


def hitchin_invariant(alpha: KForm) -> int:
    """Sign of the Hitchin quartic: +1, 0 or -1."""
    lam = hitchin_lambda(alpha)
    return (lam > 0) - (lam < 0)


def b_form(phi: Alternating) -> SymmetricForm:
    """``B(u, v) e^{1..7} = iota_u phi ^ iota_v phi ^ phi`` for a 3-form on R^7.

    Multivectors are read as forms on the dual space through their
    coefficients.  Transformation law: ``B_{g.phi} = det(g) g^T B_phi g``.
    """
    phi = _as_form(phi)
    if (phi.n, phi.k) != (7, 3):
        raise ValueError("the B-form is defined for 3-forms on R^7")
    n = 7
    iotas = [contract_multi(_unit(n, i), phi) for i in range(1, n + 1)]
    tails = [wedge(iotas[j], phi) for j in range(n)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = _top_coefficient(wedge(iotas[i], tails[j]))
            m[i][j] = m[j][i] = v
    return SymmetricForm(m)


def pfaffian_sign(xi: KVector) -> int:
    """Sign of ``xi^(n/2)`` against ``e_{1..n}`` for a full-rank 2-vector, else 0."""
    n = xi.n
    if xi.k != 2 or n % 2:
        return 0
    power = KVector._raw(n, 0, {(): Fraction(1)})
    for _ in range(n // 2):
        power = wedge(power, xi)
    c = _top_coefficient(power)
    return (c > 0) - (c < 0)


# ---------------------------------------------------------------------------
# fingerprints

@dataclass(frozen=True)
class OrbitFingerprint:
    n: int
    k: int
    kernel_dim: int
    support_dim: int
    stabilizer_dim: int
    stable: bool
    special: Optional[Tuple[str, object]] = None
    restriction: Optional["OrbitFingerprint"] = None
    stabilizer_form: Optional[Signature] = None

    def to_dict(self) -> dict:
        special = None
        if self.special is not None:
            tag, value = self.special
            special = {"type": tag, "value": list(value) if isinstance(value, tuple) else value}
        return {
            "n": self.n,
            "k": self.k,
            "kernel_dim": self.kernel_dim,
            "support_dim": self.support_dim,
            "stabilizer_dim": self.stabilizer_dim,
            "stable": self.stable,
            "special": special,
            "restriction": self.restriction.to_dict() if self.restriction else None,
            "stabilizer_form": list(self.stabilizer_form) if self.stabilizer_form else None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _special(alpha: KForm, oriented: bool, coeffs: Optional[List[int]] = None) -> Optional[Tuple[str, object]]:
    n, k = alpha.n, alpha.k
    if coeffs is None:
        coeffs = _kernels.integral_coefficients(alpha)
    if k == 2:
        return ("two_form_rank", two_form_rank(alpha))
    if (n, k) == (6, 3):
        t = _kernels.hitchin_trace(coeffs)
        return ("hitchin_sign", (t > 0) - (t < 0))
    if (n, k) == (7, 3):
        # B scales by the cube of the positive denominator: same signature
        p, z, q = _kernels.symmetric_signature(_kernels.b_matrix(coeffs))
        return ("b_signature", (p, z, q) if oriented else (max(p, q), z, min(p, q)))
    if (n, k) == (7, 4):
        dual = _kernels.dual_coefficients(coeffs, 7, 4)
        # for every g the B-form of the dual 3-vector changes by a congruence
        # times det(g)^2 > 0, so the ordered signature is a full-GL invariant
        return ("b_signature", _kernels.symmetric_signature(_kernels.b_matrix(dual)))
    if n >= 5 and k == n - 2:
        xi = inverse_hodge_dual(alpha)
        sign = pfaffian_sign(xi) if n % 4 == 2 else 0
        return ("dual_two_vector", (two_form_rank(_as_form(xi)), sign))
    return None


def standard_restriction(alpha: KForm) -> KForm:
    """Rewrite ``alpha`` in a basis whose last vectors span its annihilator and drop them."""
    n, k = alpha.n, alpha.k
    ann = _kernels.annihilator_basis(_kernels.integral_coefficients(alpha), n, k)
    d = len(ann)
    piv = set(Subspace(n, ann).pivots())
    free = [i for i in range(n) if i not in piv]
    cols = [[int(i == f) for i in range(n)] for f in free] + ann
    g = GLElement([[cols[j][i] for j in range(n)] for i in range(n)])
    moved = act_on_form(g, alpha)
    return KForm._raw(n - d, k, dict(moved.items()))


def fingerprint(alpha: KForm, oriented: bool = True) -> OrbitFingerprint:
    n, k = alpha.n, alpha.k
    coeffs = _kernels.integral_coefficients(alpha)
    kernel = n - _kernels.contraction_rank(coeffs, n, k) if k else n
    supp = _kernels.contraction_rank(_kernels.dual_coefficients(coeffs, n, k), n, n - k)
    restriction = None
    if kernel and alpha:
        restriction = fingerprint(standard_restriction(alpha), oriented=False)
    # Outside 3 <= k <= n - 3 the orbits have classical normal forms that the
    # other fields already separate, and a degenerate orbit is pinned down by
    # its restriction; the trace form is only needed for the remaining ones.
    trace = None
    if 3 <= k <= n - 3 and not kernel:
        stab, trace = _kernels.stabilizer_trace(coeffs, n, k)
    else:
        stab = n * n - _kernels.tangent_rank(coeffs, n, k)
    return OrbitFingerprint(
        n=n, k=k, kernel_dim=kernel, support_dim=supp, stabilizer_dim=stab,
        stable=n * n - stab == comb(n, k), special=_special(alpha, oriented, coeffs),
        restriction=restriction, stabilizer_form=trace,
    )


# ---------------------------------------------------------------------------
# certificates and embeddings

def verify_negdet_certificate(g: GLElement, xi: KVector) -> bool:
    return g.n == xi.n and g.det < 0 and act_on_multivector(g, xi) == xi


def verify_reversal_certificate(g: GLElement, xi: KVector) -> bool:
    """True when ``g . xi = nu xi`` with ``nu det(g) < 0``.

    Then ``g . c(xi)`` is a negative multiple of ``c(xi)``, so ``c(xi)`` and
    ``-c(xi)`` share an orbit.
    """
    if g.n != xi.n:
        return False
    if not xi:
        return True
    image = act_on_multivector(g, xi)
    blade, c = next(iter(xi.items()))
    nu = image[blade] / c
    return nu * g.det < 0 and image == xi * nu


def embed_form(alpha: KForm) -> KForm:
    """``alpha`` on R^(n+1), with the new basis vector in its annihilator."""
    return KForm._raw(alpha.n + 1, alpha.k, dict(alpha.items()))
