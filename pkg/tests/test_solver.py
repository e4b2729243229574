import random

import pytest
from hypothesis import given, settings, strategies as st

from thompoly.polyring import Alphabet, Substitution, linear_solve, parse_polynomial
from thompoly.repmodel import (
    catalog_bilinear, catalog_contact_an, catalog_gl2_sn, catalog_porteous, closed_form_an,
    porteous_tp_formula,
)
from thompoly.solver import (
    SolverError, avoiding_ideal_contains, expand_quotient, quotient_reduce, restrict, solve_tp,
    unfold_pullback, verify_tp,
)
from thompoly.symfunc import quotient_series, schur


def P(model, text):
    return parse_polynomial(text, model.ambient)


def H(model, d):
    a = model.ambient
    return quotient_series(a.classes("target"), a.classes("source"), d)


# -- solve_tp ----------------------------------------------------------------------


def test_porteous_sigma1():
    m = catalog_porteous(2, 0)
    r = solve_tp(m, "Sigma_1")
    assert r.polynomial == P(m, "L1 - R1") and r.unique and r.degree == 1


def test_antisymmetric_sigma2():
    m = catalog_bilinear("antisymmetric", 4)
    assert solve_tp(m, "Sigma^2").polynomial == P(m, "c1")


def test_gl2_eta0():
    m = catalog_gl2_sn(3)
    r = solve_tp(m, "eta_0")
    assert r.polynomial == P(m, "6*c1^2 + 3*c2")
    assert r.orbits_used == ["eta_0", "eta_1"]


def test_contact_a2():
    m = catalog_contact_an(0, 3)
    assert solve_tp(m, "A_2").polynomial == P(m, "B1^2 - 3*a*B1 + 2*a^2")


def test_missing_euler_class():
    with pytest.raises(SolverError):
        solve_tp(catalog_gl2_sn(3), "eta_1")


def test_result_json_shape():
    doc = solve_tp(catalog_porteous(2, 0), "Sigma_1").to_json()
    assert doc["orbit"] == "Sigma_1" and doc["degree"] == 1
    assert set(doc["diagnostics"]) == {"equations", "unknowns", "kernel_dim", "orbits_used"}
    assert doc["diagnostics"]["kernel_dim"] == 0


# -- verify_tp ---------------------------------------------------------------------


def test_verify_porteous_h1():
    m = catalog_porteous(3, 0)
    assert verify_tp(m, "Sigma_1", H(m, 1)[1]).passed


def test_verify_gl2_passes_at_eta1():
    m = catalog_gl2_sn(3)
    report = verify_tp(m, "eta_0", P(m, "6*c1^2 + 3*c2"))
    assert report.passed
    assert [(c.orbit, c.kind) for c in report.checks] == [("eta_0", "principal"), ("eta_1", "homogeneous")]


def test_verify_wrong_candidate():
    m = catalog_gl2_sn(3)
    report = verify_tp(m, "eta_0", P(m, "c1^2"))
    assert not report.passed
    principal = report.checks[0]
    assert not principal.passed
    assert principal.residual == m.orbit("eta_0").stabilizer.var("alpha") ** 2 * 5


def test_verify_degree_mismatch():
    m = catalog_gl2_sn(3)
    with pytest.raises(SolverError):
        verify_tp(m, "eta_0", P(m, "c1"))


def test_verify_checks_outside_closure_beyond_codim():
    m = catalog_porteous(2, 0)
    checks = verify_tp(m, "Sigma_1", H(m, 1)[1]).checks
    assert [c.orbit for c in checks] == ["Sigma_1", "Sigma_0"]


def all_builtin_targets():
    models = [catalog_porteous(n, k) for n in range(1, 4) for k in range(3)]
    models += [catalog_bilinear("antisymmetric", n) for n in range(1, 6)]
    models += [catalog_bilinear("symmetric", n) for n in range(1, 5)]
    models += [catalog_gl2_sn(n) for n in range(2, 7)]
    models += [catalog_contact_an(k, 3) for k in range(3)]
    for m in models:
        for o in m.orbits:
            if o.euler is not None:
                yield m, o.name


def test_solve_then_verify_round_trip():
    for m, name in all_builtin_targets():
        r = solve_tp(m, name)
        assert r.unique, (m.name, name)
        assert verify_tp(m, name, r.polynomial).passed, (m.name, name)


# -- restrict ----------------------------------------------------------------------


def test_restrict_examples():
    m = catalog_porteous(2, 0)
    o = m.orbit("Sigma_2")
    assert restrict(m, "Sigma_2", P(m, "L1 - R1")) == parse_polynomial("B1 - A1", o.stabilizer)
    g = catalog_gl2_sn(3)
    assert restrict(g, "eta_0", P(g, "6*c1^2 + 3*c2")) == g.orbit("eta_0").euler
    assert restrict(g, "eta_1", g.ambient.zero()).is_zero


# -- avoiding ideal ----------------------------------------------------------------


def test_ideal_membership_examples():
    m = catalog_porteous(3, 1)
    ok, witness = avoiding_ideal_contains(m, "Sigma_1", schur([2], H(m, 2)))
    assert ok and witness is None
    # (2) is the Sigma_1 rectangle; Sigma_2 needs (3, 3)
    ok, witness = avoiding_ideal_contains(m, "Sigma_2", schur([2], H(m, 2)))
    assert not ok and witness[0] == "Sigma_1"
    assert avoiding_ideal_contains(m, "Sigma_2", schur([3, 3], H(m, 6)))[0]
    ok, witness = avoiding_ideal_contains(m, "Sigma_2", H(m, 1)[1])
    assert not ok and witness[0] == "Sigma_1"
    assert avoiding_ideal_contains(m, "Sigma_3", m.ambient.zero()) == (True, None)


def test_ideal_needs_closure():
    m = catalog_gl2_sn(3)
    object.__setattr__(m, "closure", None)
    with pytest.raises(SolverError):
        avoiding_ideal_contains(m, "eta_0", m.ambient.zero())


@pytest.mark.parametrize("n", [2, 3])
def test_porteous_nesting(n):
    rng = random.Random(n)
    for k in range(2):
        m = catalog_porteous(n, k)
        for d in range(1, 5):
            for s in range(n + 1):
                kernel = linear_solve([(m.orbit(f"Sigma_{s}").restriction, None)], d, m.ambient).kernel
                for _ in range(3):
                    p = sum((b * rng.randint(-3, 3) for b in kernel), m.ambient.zero())
                    for t in range(s + 1):
                        assert restrict(m, f"Sigma_{t}", p).is_zero


# -- quotient variables ------------------------------------------------------------


def test_quotient_h1():
    for n, k in [(1, 0), (2, 1), (3, 2)]:
        q = quotient_reduce(porteous_tp_formula(n, k, 1) if k == 0 else H(catalog_porteous(n, k), 1)[1])
        assert q.status == "ok" and str(q.polynomial) == "h1"


def test_quotient_sigma2():
    q = quotient_reduce(solve_tp(catalog_porteous(3, 0), "Sigma_2").polynomial)
    assert q.status == "ok"
    assert str(q.polynomial) == "-h1*h3 + h2^2"


def test_quotient_not_in_subring():
    m = catalog_porteous(2, 0)
    q = quotient_reduce(P(m, "R1"))
    assert q.status == "not in subring" and q.polynomial is None


def test_quotient_rank_truncated_round_trip():
    m = catalog_contact_an(1, 4)
    tp = solve_tp(m, "A_4").polynomial
    q = quotient_reduce(tp)
    assert q.status == "rank-truncated" and q.kernel_dimension > 0
    assert expand_quotient(q.polynomial, m.ambient) == tp


@pytest.mark.parametrize("n,k", [(2, 0), (3, 1), (3, 2)])
def test_quotient_round_trip(n, k):
    m = catalog_porteous(n, k)
    for s in range(1, n + 1):
        tp = solve_tp(m, f"Sigma_{s}").polynomial
        q = quotient_reduce(tp)
        assert q.in_subring
        assert expand_quotient(q.polynomial, m.ambient) == tp


# -- unfolding ---------------------------------------------------------------------

WIDE = Alphabet.build(("source", [f"a{i}" for i in range(1, 5)], None),
                      ("target", [f"b{i}" for i in range(1, 5)], None))


def test_unfold_truncation():
    b2, b1, a1 = WIDE.var("b2"), WIDE.var("b1"), WIDE.var("a1")
    assert unfold_pullback(b2, 1, 1).is_zero
    assert unfold_pullback(b1 - a1, 1, 1) == b1 - a1


@pytest.mark.parametrize("k", [0, 1, 2])
def test_unfold_recovers_a2(k):
    m = catalog_contact_an(k, 2)
    d = 2 * (k + 1)
    wide = Alphabet.build(("source", [f"a{i}" for i in range(1, d + 1)], None),
                          ("target", [f"b{i}" for i in range(1, d + 1)], None))
    q = quotient_reduce(closed_form_an(2, k))
    unbounded_tp = expand_quotient(q.polynomial, wide)
    truncated = unfold_pullback(unbounded_tp, 1, k + 1)
    rename = {"a": wide.var("a1")} | {f"B{j}": wide.var(f"b{j}") for j in range(1, k + 2)}
    back = Substitution(m.ambient, wide, rename)(closed_form_an(2, k))
    assert truncated == back


# -- property: solutions satisfy their equations -------------------------------------


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(2, 0), (2, 1), (3, 0), (3, 1)]), st.data())
def test_tp_restricts_to_euler_and_zero(nk, data):
    n, k = nk
    m = catalog_porteous(n, k)
    s = data.draw(st.integers(1, n))
    tp = solve_tp(m, f"Sigma_{s}").polynomial
    assert m.orbit(f"Sigma_{s}").restriction(tp) == m.orbit(f"Sigma_{s}").euler
    for t in range(s):
        assert restrict(m, f"Sigma_{t}", tp).is_zero
