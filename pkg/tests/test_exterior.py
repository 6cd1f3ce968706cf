"""Exterior algebra: blades, wedge, contraction, actions and the text formats."""

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from altforms.exterior import (
    GLElement, KForm, KVector, ParseError, act_on_form, act_on_multivector, blades, contract_multi,
    contract_vector, evaluate, format_form, format_matrix, parse_form, parse_matrix, volume_form,
    volume_multivector, wedge,
)
from altforms.sampling import random_form, random_gl, random_multivector
from conftest import leibniz_det

FAST = settings(max_examples=40, deadline=None)


def vec(n, *blade_coeffs):
    return KVector(n, len(blade_coeffs[0][0]) if blade_coeffs else 0, dict(blade_coeffs))


def e(n, *idx):
    return KVector.basis(n, idx)


def f(n, *idx):
    return KForm.basis(n, idx)


@st.composite
def dims(draw, n_max=6):
    n = draw(st.integers(1, n_max))
    k = draw(st.integers(0, n))
    return n, k


@st.composite
def seeds(draw):
    return random.Random(draw(st.integers(0, 2 ** 32)))


# -- blades and wedge -------------------------------------------------------

def test_blade_enumeration():
    assert blades(4, 2) == tuple(combinations(range(1, 5), 2))
    assert blades(3, 0) == ((),)


def test_wedge_examples():
    assert wedge(e(3, 1), e(3, 2)) == e(3, 1, 2)
    assert wedge(e(3, 2), e(3, 1)) == -e(3, 1, 2)
    assert not wedge(e(4, 1, 2), e(4, 1, 2))
    assert wedge(f(5, 1, 3), f(5, 2)) == -f(5, 1, 2, 3)


def test_wedge_rejects_mixed_variance_and_overflow():
    with pytest.raises(TypeError):
        wedge(e(3, 1), f(3, 2))
    with pytest.raises(ValueError):
        wedge(e(2, 1, 2), e(2, 1))


@FAST
@given(n=st.integers(2, 6), r=seeds())
def test_wedge_antisymmetric_on_vectors(n, r):
    u, v = random_multivector(n, 1, r), random_multivector(n, 1, r)
    assert wedge(u, v) == -wedge(v, u)


@FAST
@given(n=st.integers(3, 7), r=seeds())
def test_wedge_associative(n, r):
    a, b, c = (random_form(n, 1, r) for _ in range(3))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


# -- contraction ------------------------------------------------------------

def test_contract_vector_examples():
    assert contract_vector(e(3, 1), f(3, 1, 2, 3)) == f(3, 2, 3)
    assert contract_vector(e(3, 2), f(3, 1, 2, 3)) == -f(3, 1, 3)
    assert not contract_vector(e(4, 4), f(4, 1, 2, 3))


def test_contract_multi_examples():
    assert contract_multi(e(3, 1, 2), f(3, 1, 2, 3)) == f(3, 3)
    assert contract_multi(e(2, 1, 2), f(2, 1, 2)) == KForm(2, 0, {(): 1})
    assert contract_multi(e(7, 1, 2, 3), f(7, *range(1, 8))) == f(7, 4, 5, 6, 7)


def test_contract_multi_composition_rule():
    """iota_{x ^ z} = iota_z o iota_x, checked against iterated vector contraction."""
    r = random.Random(7)
    for _ in range(30):
        n = r.randint(3, 6)
        k = r.randint(2, n)
        alpha = random_form(n, k, r)
        x, z = random_multivector(n, 1, r), random_multivector(n, 1, r)
        assert contract_multi(wedge(x, z), alpha) == contract_vector(z, contract_vector(x, alpha))


def test_contraction_errors():
    with pytest.raises(ValueError):
        contract_vector(e(3, 1), KForm(3, 0, {(): 1}))
    with pytest.raises(ValueError):
        contract_multi(e(3, 1, 2), f(3, 1))


def test_evaluate():
    assert evaluate(f(3, 1, 2), e(3, 1, 2)) == 1
    assert evaluate(f(3, 1, 2), e(3, 1, 3)) == 0
    r = random.Random(3)
    for _ in range(20):
        n = r.randint(1, 6)
        k = r.randint(0, n)
        alpha, xi = random_form(n, k, r), random_multivector(n, k, r)
        full = contract_multi(xi, alpha)
        assert evaluate(alpha, xi) == full[()]


# -- group actions ----------------------------------------------------------

def minors_oracle_form(g, alpha):
    """(g.alpha)_T = sum_S alpha_S det g[S, T], minors by the Leibniz formula."""
    m = g.matrix
    out = {}
    for t in blades(alpha.n, alpha.k):
        v = sum((c * leibniz_det([[m[i - 1][j - 1] for j in t] for i in s]) for s, c in alpha.items()),
                Fraction(0))
        if v:
            out[t] = v
    return KForm(alpha.n, alpha.k, out)


def wedge_of_columns_oracle(g, xi):
    """g.xi expanded through g(e_{s1}) ^ ... ^ g(e_{sk})."""
    n = xi.n
    cols = [KVector.from_vector(n, 1, [g.matrix[i][j] for i in range(n)]) for j in range(n)]
    total = KVector.zero(n, xi.k)
    for s, c in xi.items():
        term = KVector(n, 0, {(): 1})
        for i in s:
            term = wedge(term, cols[i - 1])
        total = total + term * c
    return total


def test_form_action_matches_leibniz_minors():
    r = random.Random(11)
    for _ in range(60):
        n = r.randint(1, 6)
        k = r.randint(0, n)
        g = random_gl(n, r)
        alpha = random_form(n, k, r)
        assert act_on_form(g, alpha) == minors_oracle_form(g, alpha)


def test_multivector_action_matches_defining_formula():
    r = random.Random(12)
    for _ in range(60):
        n = r.randint(1, 6)
        k = r.randint(0, n)
        g = random_gl(n, r)
        xi = random_multivector(n, k, r)
        assert act_on_multivector(g, xi) == wedge_of_columns_oracle(g, xi)


def test_high_grade_path_on_larger_dimensions():
    """Grades above n/2 take the adjugate route; compare with the defining formula."""
    r = random.Random(13)
    for n, k in ((7, 4), (7, 5), (8, 5), (8, 7), (9, 8)):
        g = random_gl(n, r)
        xi = random_multivector(n, k, r, density=0.3)
        assert act_on_multivector(g, xi) == wedge_of_columns_oracle(g, xi)


@FAST
@given(nk=dims(), r=seeds())
def test_right_action_law_on_forms(nk, r):
    n, k = nk
    g, h, alpha = random_gl(n, r), random_gl(n, r), random_form(n, k, r)
    assert act_on_form(g @ h, alpha) == act_on_form(h, act_on_form(g, alpha))


@FAST
@given(nk=dims(), r=seeds())
def test_left_action_law_on_multivectors(nk, r):
    n, k = nk
    g, h, xi = random_gl(n, r), random_gl(n, r), random_multivector(n, k, r)
    assert act_on_multivector(g @ h, xi) == act_on_multivector(g, act_on_multivector(h, xi))


@FAST
@given(nk=dims(), r=seeds())
def test_evaluation_identity(nk, r):
    n, k = nk
    g, alpha, xi = random_gl(n, r), random_form(n, k, r), random_multivector(n, k, r)
    assert evaluate(act_on_form(g, alpha), xi) == evaluate(alpha, act_on_multivector(g, xi))


@FAST
@given(n=st.integers(2, 6), r=seeds())
def test_action_compatible_with_wedge(n, r):
    p = r.randint(0, n)
    q = r.randint(0, n - p)
    g, a, b = random_gl(n, r), random_multivector(n, p, r), random_multivector(n, q, r)
    assert act_on_multivector(g, wedge(a, b)) == wedge(act_on_multivector(g, a), act_on_multivector(g, b))


@FAST
@given(n=st.integers(2, 6), r=seeds())
def test_contraction_naturality(n, r):
    k = r.randint(1, n)
    g, v = random_gl(n, r), random_multivector(n, 1, r)
    alpha, xi = random_form(n, k, r), random_multivector(n, k - 1, r)
    lhs = evaluate(contract_vector(act_on_multivector(g, v), alpha), act_on_multivector(g, xi))
    rhs = evaluate(contract_vector(v, act_on_form(g, alpha)), xi)
    assert lhs == rhs


def test_determinant_identity_200_transforms():
    r = random.Random(5)
    for _ in range(200):
        n = r.randint(1, 8)
        g = random_gl(n, r)
        assert act_on_form(g, volume_form(n)) == volume_form(n) * g.det
        assert g.det == leibniz_det(g.matrix) if n <= 6 else True


def test_scalar_and_diagonal_actions():
    lam = Fraction(3, 2)
    r = random.Random(9)
    for n, k in ((4, 2), (5, 3), (6, 6)):
        alpha, xi = random_form(n, k, r), random_multivector(n, k, r)
        assert act_on_form(GLElement.scalar(n, lam), alpha) == alpha * lam ** k
        assert act_on_multivector(GLElement.scalar(n, lam), xi) == xi * lam ** k
        assert act_on_form(GLElement.identity(n), alpha) == alpha
    d = GLElement.diagonal([2] + [1] * 4)
    assert act_on_multivector(d, e(5, 1, 2, 3)) == e(5, 1, 2, 3) * 2
    assert act_on_multivector(GLElement([[1, 2], [3, 4]]), e(2, 1)) == KVector(2, 1, {(1,): 1, (2,): 3})


def test_gl_element_validation():
    with pytest.raises(ValueError):
        GLElement([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        GLElement([[1, 2, 3], [4, 5, 6]])
    g = GLElement.from_integers([[2, 1], [0, 3]], 4)
    assert g.matrix == ((Fraction(1, 2), Fraction(1, 4)), (Fraction(0), Fraction(3, 4)))
    assert g.det == Fraction(3, 8)
    assert g @ g.inverse() == GLElement.identity(2)
    with pytest.raises(ValueError):
        act_on_form(g, f(3, 1))


# -- text formats -----------------------------------------------------------

def test_parse_examples():
    a = parse_form("e123 + e145", n=7)
    assert (a.n, a.k) == (7, 3)
    assert dict(a.items()) == {(1, 2, 3): 1, (1, 4, 5): 1}
    b = parse_form("3/2*e{1,2,3}")
    assert b[(1, 2, 3)] == Fraction(3, 2)
    assert parse_form("e21", n=2) == -f(2, 1, 2)
    assert parse_form("2 e12 - 1/3 e34", n=4)[(3, 4)] == Fraction(-1, 3)
    assert parse_form("e{10,11}", n=11).k == 2
    assert isinstance(parse_form("e1", n=2, kind="vector"), KVector)


@pytest.mark.parametrize("text, n, k, fragment", [
    ("e112", 3, None, "duplicate index"),
    ("e14", 3, None, "out of range"),
    ("e12 + e3", 3, None, "mixed grade"),
    ("e12 +", 3, None, "expected term"),
    ("e12 $ e34", 4, None, "unexpected character"),
    ("0", 3, None, "pass k"),
    ("1/0*e1", 2, None, "zero denominator"),
    ("e12", 3, 3, "expected 3"),
])
def test_parse_errors(text, n, k, fragment):
    with pytest.raises(ParseError, match=fragment) as info:
        parse_form(text, n=n, k=k)
    assert info.value.position >= 0


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_form("e12 + e1$", n=3)
    assert info.value.position == 8


def test_zero_and_scalars():
    z = parse_form("0", n=5, k=2)
    assert not z and (z.n, z.k) == (5, 2)
    assert format_form(z) == "0"
    assert parse_form("5", n=3) == KForm(3, 0, {(): 5})
    assert KForm.zero(3, 1) != KForm.zero(3, 2)


def test_format_canonical():
    a = KForm(7, 3, {(1, 4, 5): -1, (1, 2, 3): Fraction(3, 2)})
    assert format_form(a) == "3/2*e123 - e145"
    assert format_form(a, braces=True) == "3/2*e{1,2,3} - e{1,4,5}"
    assert format_form(KForm(10, 1, {(10,): 1})) == "e{10}"


@FAST
@given(nk=dims(7), r=seeds(), braces=st.booleans())
def test_format_parse_round_trip(nk, r, braces):
    n, k = nk
    alpha = random_form(n, k, r, density=0.5)
    assert parse_form(format_form(alpha, braces), n=n, k=k) == alpha


def test_matrix_formats():
    g = parse_matrix("1,0;1/2,1")
    assert g.matrix == ((1, 0), (Fraction(1, 2), 1))
    assert parse_matrix('[["1", "0"], ["1/2", "1"]]') == g
    assert format_matrix(g) == "1,0;1/2,1"
    assert parse_matrix(format_matrix(g)) == g
    with pytest.raises(ValueError):
        parse_matrix("1,2;2,4")


def test_volume_elements():
    assert volume_form(3) == f(3, 1, 2, 3)
    assert volume_multivector(2, 5) == e(2, 1, 2) * 5
    with pytest.raises(ValueError):
        volume_form(3, 0)


def test_kvector_validation():
    with pytest.raises(ValueError):
        KVector(3, 2, {(2, 1): 1})
    with pytest.raises(ValueError):
        KVector(3, 2, {(1, 4): 1})
    with pytest.raises(ValueError):
        KVector.basis(3, (1, 1))
    assert not KVector(3, 1, {(1,): 0})
