import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from thompoly.polyring import (
    Alphabet, AlphabetError, GradedPolynomial, Substitution, linear_solve, monomial_basis,
    parse_polynomial, permutation_det, poly_det, substitute,
)

C = Alphabet.build(("gl", ["c1", "c2"], 2))
U = Alphabet.build(("u", ["u"], 1))
c1, c2 = C.var("c1"), C.var("c2")
u = U.var("u")


def P(text, alphabet=C):
    return parse_polynomial(text, alphabet)


# -- arithmetic --------------------------------------------------------------------


def test_difference_of_squares():
    ab = Alphabet.build(("x", ["a", "b"], None, "root"))
    a, b = ab.var("a"), ab.var("b")
    assert (a + b) * (a - b) == a ** 2 - b ** 2


def test_additive_inverse_prunes_terms():
    p = c1 * 3 + c1 * (-3)
    assert p.terms == {} and p.is_zero and not p


def test_product_degree_two_part():
    p = (C.one() + c1 + c2) * (C.one() + c1)
    assert p.homogeneous_part(2) == c1 ** 2 + c2


def test_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        c1 + u


def test_homogeneity_and_integrality():
    assert (c1 ** 2 + c2).is_homogeneous(2)
    assert not (c1 + c2).is_homogeneous()
    assert (c1 * 3).is_integral
    assert not (c1 * Fraction(1, 2)).is_integral


def test_alphabet_validation():
    with pytest.raises(AlphabetError):
        Alphabet.build(("gl", ["c1", "c1"], 2))
    with pytest.raises(AlphabetError):
        Alphabet.build(("gl", ["c1", "c2"], 3))


def test_pontryagin_scale():
    o = Alphabet.build(("O", ["p1", "p2"], 2, "class", 2))
    assert [v.degree for v in o.variables] == [2, 4]


def test_canonical_printing_order():
    assert str(P("c2 + c1^2 - 3")) == "c1^2 + c2 - 3"


def test_json_round_trip():
    p = P("3*c1^2 - 1/2*c2")
    doc = p.to_json()
    assert {"coeff": {"num": -1, "den": 2}, "exps": {"c2": 1}} in doc
    assert GradedPolynomial.from_json(C, json.loads(json.dumps(doc))) == p
    assert Alphabet.from_json(C.to_json()) == C


# -- substitution ------------------------------------------------------------------


def test_substitute_kills_c2():
    s = Substitution(C, U, {"c1": u, "c2": U.zero()})
    assert substitute(s, P("6*c1^2 + 3*c2")) == u ** 2 * 6


def test_substitute_gl2_homogeneous_equation():
    s = Substitution(C, C, {"c1": c1, "c2": c1 ** 2 * -2})
    assert s(P("6*c1^2 + 3*c2")).is_zero


def test_identity_substitution():
    p = P("c1^3 - 2*c1*c2")
    assert Substitution.identity(C)(p) == p


def test_substitution_must_preserve_degree():
    with pytest.raises(ValueError):
        Substitution(C, U, {"c1": u ** 2, "c2": U.zero()})


# -- determinants ------------------------------------------------------------------


def test_det_two_by_two():
    H = Alphabet.build(("h", ["H1", "H2"], 2))
    H1, H2 = H.var("H1"), H.var("H2")
    assert poly_det([[H1, H2], [H.one(), H1]]) == H1 ** 2 - H2
    assert poly_det([[H1]]) == H1


def test_det_is_schur_21():
    c = Alphabet.build(("gl", ["c1", "c2", "c3"], 3))
    a1, a2, a3 = c.gens()
    assert poly_det([[a2, a3], [c.one(), a1]]) == a1 * a2 - a3


def test_det_non_square():
    with pytest.raises(ValueError):
        poly_det([[1, 2]])


# -- linear solving ----------------------------------------------------------------


def test_solve_two_by_two():
    s1 = Substitution(C, U, {"c1": u, "c2": U.zero()})
    s2 = Substitution(C, U, {"c1": u, "c2": u ** 2 * -2})
    sol = linear_solve([(s1, u ** 2 * 6), (s2, None)], 2, C)
    assert sol.status == "unique"
    assert sol.solution == P("6*c1^2 + 3*c2")
    assert sol.kernel_dimension == 0


def test_solve_empty_system():
    sol = linear_solve([], 2, C)
    assert sol.solution.is_zero
    assert sol.kernel_dimension == len(monomial_basis(C, 2)) == 2


def test_solve_inconsistent():
    x = Alphabet.build(("x", ["x"], 1))
    zero = Substitution(x, x, {"x": x.zero()})
    ident = Substitution.identity(x)
    sol = linear_solve([(ident, x.zero()), (ident, x.var("x"))], 1, x)
    assert sol.status == "inconsistent"
    assert linear_solve([(zero, x.var("x"))], 1, x).status == "inconsistent"


def test_parse_errors():
    with pytest.raises(ValueError):
        P("c1 +")
    with pytest.raises(ValueError):
        P("q7")


# -- properties --------------------------------------------------------------------

A3 = Alphabet.build(("a", ["a1", "a2", "a3"], 3), ("b", ["b1", "b2"], 2))
X2 = Alphabet.build(("x", ["x1", "x2"], None, "root"), ("y", ["y1"], 1))
small = st.integers(-3, 3)


@st.composite
def homogeneous(draw, alphabet, degree):
    mons = alphabet.monomials(degree)
    coeffs = draw(st.lists(small, min_size=len(mons), max_size=len(mons)))
    return GradedPolynomial(alphabet, {m: c for m, c in zip(mons, coeffs) if c})


@st.composite
def substitution_into_x2(draw):
    images = {v.name: draw(homogeneous(X2, v.degree)) for v in A3.variables}
    return Substitution(A3, X2, images)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_substitution_is_multiplicative(data):
    i, j = data.draw(st.integers(0, 3)), data.draw(st.integers(0, 3))
    p, q = data.draw(homogeneous(A3, i)), data.draw(homogeneous(A3, j))
    s = data.draw(substitution_into_x2())
    pq = p * q
    if pq:
        assert pq.is_homogeneous(i + j)
    assert s(pq) == s(p) * s(q)
    assert s(p + q) == s(p) + s(q)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_permutation_expansion(rows):
    assert poly_det(rows) == permutation_det(rows)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.lists(
    st.lists(st.sampled_from(["0", "1", "c1", "c2", "-c1", "c1 + 2"]), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_polynomial_det_matches_permutation_expansion(rows):
    m = [[P(e) for e in row] for row in rows]
    assert poly_det(m) == permutation_det(m)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_solution_reproduces_rhs(data):
    d = data.draw(st.integers(1, 3))
    subs = [data.draw(substitution_into_x2()) for _ in range(data.draw(st.integers(1, 3)))]
    x = data.draw(homogeneous(A3, d))
    conditions = [(s, s(x)) for s in subs]
    sol = linear_solve(conditions, d, A3)
    assert sol.consistent
    for s, rhs in conditions:
        assert s(sol.solution) == rhs
    for k in sol.kernel:
        assert all(s(k).is_zero for s in subs)
