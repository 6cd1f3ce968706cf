"""Orbit-analysis predicates and invariants."""

import json
import random
from fractions import Fraction
from math import comb, lcm
from pathlib import Path

import pytest

from altforms import _kernels
from altforms.certificates import find_negdet_certificate, reflection_certificate
from altforms.exterior import (
    GLElement, KForm, KVector, act_on_form, act_on_multivector, contract_multi, parse_form, volume_form,
    wedge,
)
from altforms.orbits import (
    SymmetricForm, annihilator, b_form, embed_form, fingerprint, hitchin_invariant, hitchin_lambda,
    hitchin_matrix, hodge_dual, infinitesimal_action, inverse_hodge_dual, is_nondegenerate, is_stable,
    orbit_tangent_rank, pfaffian_sign, stabilizer_algebra, stabilizer_trace_signature, support,
    two_form_rank, verify_negdet_certificate, verify_reversal_certificate,
)
from altforms.sampling import random_form, random_gl, random_multivector
from conftest import fraction_rank

GOLDEN = Path(__file__).parent / "golden"
G2 = "e123 + e145 + e167 + e246 - e257 - e347 - e356"


def form(text, n, k=None):
    return parse_form(text, n=n, k=k)


def unit_matrix(n, i, j):
    return GLElement([[int((a, b) == (i, j)) for b in range(n)] for a in range(n)], invertible=False)


# -- annihilator, support ---------------------------------------------------

def test_annihilator_examples():
    ann = annihilator(form("e123", 6))
    assert ann.dim == 3
    assert {tuple(v) for v in ann.basis} == {tuple(int(i == j) for i in range(6)) for j in (3, 4, 5)}
    assert annihilator(form("e12 + e34", 4)).dim == 0
    assert annihilator(form("0", 5, 2)).dim == 5


def test_nondegeneracy_examples():
    assert is_nondegenerate(form("e12 + e34 + e56", 6))
    assert not is_nondegenerate(form("e123", 6))
    assert is_nondegenerate(volume_form(7))


def test_annihilator_equivariance():
    r = random.Random(21)
    for _ in range(40):
        n = r.randint(3, 7)
        k = r.randint(1, n - 1)
        # a degenerate form: use only the first n - 1 coordinates
        alpha = embed_form(random_form(n - 1, k, r)) if r.random() < 0.5 else random_form(n, k, r)
        g = random_gl(n, r)
        assert annihilator(act_on_form(g, alpha)) == annihilator(alpha).image(g.inverse())


def test_support_is_smallest():
    r = random.Random(22)
    for _ in range(30):
        n = r.randint(3, 7)
        d = r.randint(1, n)
        k = r.randint(1, d)
        small = random_multivector(d, k, r)
        xi0 = KVector(n, k, dict(small.items()))
        g = random_gl(n, r)
        xi = act_on_multivector(g, xi0)
        w = support(xi)
        assert w.dim == support(xi0).dim <= d
        # in a basis starting with the support, xi only uses the first dim(W) indices
        piv = set(w.pivots())
        cols = [list(v) for v in w.basis] + [[int(i == j) for i in range(n)] for j in range(n) if j not in piv]
        basis_change = GLElement([[cols[j][i] for j in range(n)] for i in range(n)])
        moved = act_on_multivector(basis_change.inverse(), xi)
        assert all(max(b) <= w.dim for b, _ in moved.items())


# -- infinitesimal action and stability -------------------------------------

def derivative_at_zero(alpha, X):
    """d/dt act(I + tX, alpha) at t = 0, by exact Lagrange interpolation.

    ``t -> act(I + tX, alpha)`` is a polynomial of degree <= k; it is sampled
    at t = 0 and k + 1 small nonzero nodes.  With ``t_0 = 0`` the basis
    derivatives are ``l_0'(0) = -sum 1/t_j`` and, for i > 0,
    ``l_i'(0) = prod_{j != 0, i} (-t_j) / prod_{j != i} (t_i - t_j)``.
    """
    n, k = alpha.n, alpha.k
    nodes = [Fraction(0)] + [Fraction(1, 7 * (i + 1)) for i in range(k + 1)]
    out = alpha * -sum(1 / t for t in nodes[1:])
    for i, ti in enumerate(nodes[1:], start=1):
        num, den = Fraction(1), Fraction(1)
        for j, tj in enumerate(nodes):
            if j != i:
                den *= ti - tj
                if j != 0:
                    num *= -tj
        g = GLElement([[int(a == b) + ti * X.matrix[a][b] for b in range(n)] for a in range(n)])
        out = out + act_on_form(g, alpha) * (num / den)
    return out


def test_infinitesimal_action_matches_derivative():
    r = random.Random(23)
    for _ in range(25):
        n = r.randint(2, 5)
        k = r.randint(1, n)
        alpha = random_form(n, k, r)
        X = GLElement([[Fraction(r.randint(-2, 2)) for _ in range(n)] for _ in range(n)], invertible=False)
        assert infinitesimal_action(X, alpha) == derivative_at_zero(alpha, X)


def tangent_rank_oracle(x):
    n = x.n
    rows = []
    for i in range(n):
        for j in range(n):
            rows.append(infinitesimal_action(unit_matrix(n, i, j), x).to_vector())
    return fraction_rank(rows) if rows and rows[0] else 0


def test_tangent_rank_against_oracle():
    r = random.Random(24)
    for _ in range(40):
        n = r.randint(2, 6)
        k = r.randint(0, n)
        x = random_form(n, k, r, density=r.choice((0.3, 1.0)))
        assert orbit_tangent_rank(x) == tangent_rank_oracle(x)
        xi = random_multivector(n, k, r, density=0.5)
        assert orbit_tangent_rank(xi) == tangent_rank_oracle(xi)


def test_tangent_rank_examples():
    assert orbit_tangent_rank(form("0", 4, 2)) == 0
    assert orbit_tangent_rank(form("e12 + e34", 4)) == 6
    assert orbit_tangent_rank(form(G2, 7)) == 35


def test_stability_examples():
    for n in range(1, 10):
        assert is_stable(form("e1", n))
    assert not is_stable(form("e12", 4))
    assert is_stable(form("e12 + e34", 5))


def test_stabilizer_algebra_kills_form():
    alpha = form(G2, 7)
    basis = stabilizer_algebra(alpha)
    assert len(basis) == 14
    for X in basis:
        assert not infinitesimal_action(GLElement(X, invertible=False), alpha)


def test_stabilizer_trace_form():
    # split G2 (e123 + e456 type stabilizer sl3 + sl3) vs compact and split types
    assert stabilizer_trace_signature(form("e123 + e456", 6)) == (10, 0, 6)
    assert stabilizer_trace_signature(form("e135 - e146 - e236 - e245", 6)) == (8, 0, 8)
    # conjugation invariance
    r = random.Random(25)
    alpha = form(G2, 7)
    g = random_gl(7, r)
    assert stabilizer_trace_signature(act_on_form(g, alpha)) == stabilizer_trace_signature(alpha)


def test_trace_kernels_agree():
    r = random.Random(26)
    for n, k in ((6, 3), (7, 3), (7, 4)):
        x = random_form(n, k, r)
        coeffs = _kernels.integral_coefficients(x)
        basis = _kernels.stabilizer_basis(coeffs, n, k)
        assert _kernels.stabilizer_trace(coeffs, n, k) == (len(basis), _kernels.trace_form_signature(basis, n))


# -- duality ----------------------------------------------------------------

def test_hodge_dual_examples():
    assert hodge_dual(KVector.basis(7, (1, 2, 3))) == form("e4567", 7)
    assert hodge_dual(KVector(4, 0, {(): 1})) == volume_form(4)
    assert hodge_dual(KVector.basis(3, (2,))) == -form("e13", 3)


def test_hodge_dual_is_nested_contraction():
    r = random.Random(27)
    for _ in range(40):
        n = r.randint(1, 8)
        k = r.randint(0, n)
        xi = random_multivector(n, k, r)
        omega = volume_form(n, Fraction(r.choice((1, -2, 3)), r.choice((1, 5))))
        assert hodge_dual(xi, omega) == contract_multi(xi, omega)
        assert inverse_hodge_dual(hodge_dual(xi, omega), omega) == xi


def test_duality_equivariance_sample():
    r = random.Random(28)
    for _ in range(60):
        n = r.randint(1, 7)
        k = r.randint(0, n)
        g, xi = random_gl(n, r), random_multivector(n, k, r)
        assert act_on_form(g, hodge_dual(xi)) == hodge_dual(act_on_multivector(g.inverse(), xi)) * g.det


def test_scaling_identity():
    r = random.Random(29)
    lam = Fraction(-2, 3)
    for n, k in ((5, 2), (7, 4), (6, 6)):
        rho = random_form(n, k, r)
        assert act_on_form(GLElement.scalar(n, lam), rho) == rho * lam ** k


def test_stability_through_duality_between_extremes():
    r = random.Random(30)
    for _ in range(30):
        n = r.randint(2, 7)
        k = r.randint(1, n - 1)
        xi = random_multivector(n, k, r, density=r.choice((0.2, 1.0)))
        assert is_stable(xi) == is_stable(hodge_dual(xi))


def test_stability_through_duality_fails_at_extreme_degrees():
    """The top multivector has an open orbit; its dual is a scalar, whose orbit is a point."""
    for n in (2, 5):
        top = KVector(n, n, {tuple(range(1, n + 1)): 1})
        assert is_stable(top) and not is_stable(hodge_dual(top))
        one = KVector(n, 0, {(): 1})
        assert not is_stable(one) and is_stable(hodge_dual(one))


def test_volume_validation():
    with pytest.raises(ValueError):
        hodge_dual(KVector.basis(3, (1,)), form("e12", 3))


# -- special invariants -----------------------------------------------------

def test_two_form_rank_and_pfaffian():
    assert two_form_rank(form("e12 + e34", 8, 2)) == 4
    assert two_form_rank(form("0", 4, 2)) == 0
    assert pfaffian_sign(KVector(4, 2, {(1, 2): 1, (3, 4): 1})) == 1
    assert pfaffian_sign(KVector(4, 2, {(1, 2): 1, (3, 4): -1})) == -1
    assert pfaffian_sign(KVector(4, 2, {(1, 2): 1})) == 0


@pytest.mark.parametrize("text, sign", [
    ("e123 + e456", 1),
    ("e135 - e146 - e236 - e245", -1),
    ("e123", 0),
    ("0", 0),
])
def test_hitchin_signs(text, sign):
    alpha = form(text, 6, 3)
    assert hitchin_invariant(alpha) == sign
    t = _kernels.hitchin_trace(_kernels.integral_coefficients(alpha))
    assert (t > 0) - (t < 0) == sign


def test_hitchin_kernel_agrees_with_matrix_route():
    r = random.Random(31)
    for _ in range(30):
        alpha = random_form(6, 3, r, density=0.6)
        den = lcm(*(c.denominator for _, c in alpha.items()))
        k = hitchin_matrix(alpha)
        trace = sum(k[i][j] * k[j][i] for i in range(6) for j in range(6))
        assert trace == 6 * hitchin_lambda(alpha)
        # tr(K^2) is quartic in the coefficients, which the kernel scales by den
        assert _kernels.hitchin_trace(_kernels.integral_coefficients(alpha)) == trace * den ** 4


def test_hitchin_invariant_transforms_by_det_squared():
    r = random.Random(32)
    alpha = form("e135 - e146 - e236 - e245 + e123", 6)
    g = random_gl(6, r)
    assert hitchin_lambda(act_on_form(g, alpha)) == hitchin_lambda(alpha) * g.det ** 2


def test_g2_b_form_golden():
    golden = json.loads((GOLDEN / "g2_b_form.json").read_text())
    b = b_form(form(G2, 7))
    assert [[str(x) for x in row] for row in b.matrix] == golden["matrix"]
    assert list(b.signature) == golden["signature"]


def test_b_form_transformation_law():
    r = random.Random(33)
    for _ in range(5):
        phi = random_form(7, 3, r, density=0.5)
        g = random_gl(7, r)
        lhs = b_form(act_on_form(g, phi))
        rhs = b_form(phi).congruent(g)
        assert lhs.matrix == tuple(tuple(x * g.det for x in row) for row in rhs.matrix)


def test_b_kernel_agrees_up_to_positive_scale():
    r = random.Random(34)
    for _ in range(10):
        phi = random_form(7, 3, r, density=0.5)
        coeffs = _kernels.integral_coefficients(phi)
        fast = _kernels.b_matrix(coeffs)
        exact = b_form(phi).matrix
        ratios = {Fraction(fast[i][j]) / exact[i][j] for i in range(7) for j in range(7) if exact[i][j]}
        assert len(ratios) <= 1 and all(x > 0 for x in ratios)
        assert all((fast[i][j] == 0) == (exact[i][j] == 0) for i in range(7) for j in range(7))


def test_symmetric_form_congruence():
    s = SymmetricForm([[1, 2], [2, -1]])
    g = GLElement([[1, 3], [0, 2]])
    assert s.congruent(g).signature == s.signature == (1, 0, 1)
    with pytest.raises(ValueError):
        SymmetricForm([[1, 2], [0, 1]])


# -- fingerprints -----------------------------------------------------------

def test_fingerprint_golden():
    golden = json.loads((GOLDEN / "g2_fingerprint.json").read_text())
    assert fingerprint(form(G2, 7)).to_dict() == golden


def test_fingerprint_fields():
    fp = fingerprint(form("e12 + e34", 6))
    # support_dim is that of the dual multivector e1256 + e3456
    assert (fp.kernel_dim, fp.support_dim, fp.stable) == (2, 6, False)
    assert fingerprint(form("e123", 6)).support_dim == 3
    assert fp.special == ("two_form_rank", 4)
    assert fp.restriction is not None and fp.restriction.n == 4 and fp.restriction.kernel_dim == 0
    assert fingerprint(form("0", 6, 3)).restriction is None
    assert fingerprint(form(G2, 7)).restriction is None
    assert fingerprint(form(G2, 7)).stabilizer_dim == 14


def test_fingerprint_invariance_sample():
    r = random.Random(35)
    for text, n in ((G2, 7), ("e123 + e456", 6), ("e12345 + e12367 + e14567", 7), ("e123 + e145", 8)):
        alpha = form(text, n)
        base = fingerprint(alpha)
        for _ in range(5):
            assert fingerprint(act_on_form(random_gl(n, r, det_sign=1), alpha)) == base


def test_ordered_b_signature_swaps_under_negative_determinant():
    r = random.Random(36)
    alpha = form(G2, 7)
    p, z, q = fingerprint(alpha).special[1]
    assert (p, z, q) == (7, 0, 0)
    moved = fingerprint(act_on_form(random_gl(7, r, det_sign=-1), alpha))
    assert moved.special == ("b_signature", (q, z, p))
    assert fingerprint(act_on_form(random_gl(7, r, det_sign=-1), alpha), oriented=False) == \
        fingerprint(alpha, oriented=False)


# -- certificates and embedding ---------------------------------------------

def test_reflection_certificate():
    xi = KVector(5, 2, {(1, 2): 1, (3, 4): 1})
    g = reflection_certificate(xi)
    assert g is not None and g.det < 0
    assert verify_negdet_certificate(g, xi)
    assert reflection_certificate(KVector(4, 2, {(1, 2): 1, (3, 4): 1})) is None


def test_signed_permutation_search():
    xi = parse_form("e123 + e456", n=6, kind="vector")
    g = find_negdet_certificate(xi)
    assert g is not None and verify_negdet_certificate(g, xi)


def test_reversal_certificate():
    xi = KVector(4, 2, {(1, 2): 1, (3, 4): 1})
    swap = GLElement([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert swap.det > 0 and act_on_multivector(swap, xi) == -xi
    assert verify_reversal_certificate(swap, xi)
    assert not verify_reversal_certificate(GLElement.identity(4), xi)


def test_embed_form():
    alpha = embed_form(form("e12", 2))
    assert (alpha.n, alpha.k) == (3, 2)
    assert annihilator(alpha).dim == 1
    assert annihilator(alpha).contains([0, 0, 1])


def test_wedge_powers_of_two_form_detect_rank():
    alpha = form("e12 + e34 + e56", 6)
    assert wedge(wedge(alpha, alpha), alpha) == volume_form(6) * 6
