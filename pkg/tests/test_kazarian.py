from itertools import combinations_with_replacement

import pytest

from thompoly.kazarian import (
    ColumnSpec, SpectralError, columns_from_model, corank_columns, diagonal_check, e1_ranks,
    euler_identity_check, predict_stratum_count, singularity_columns,
)
from thompoly.repmodel import catalog_porteous
from thompoly.symfunc import DegreeMultiset

ALL = DegreeMultiset.all_degrees()


def count_monomials(n, degrees):
    """Brute force: multisets of generator indices with total degree n."""
    if n == 0:
        return 1
    gens = [d for d in degrees if d <= n]
    total = 0
    for size in range(1, n + 1):
        total += sum(1 for c in combinations_with_replacement(range(len(gens)), size)
                     if sum(gens[i] for i in c) == n)
    return total


def test_column_ranks():
    table = e1_ranks(corank_columns(2), 8)
    assert table.entry(8, 2) == 14
    assert [table.entry(t, 1) for t in range(1, 6)] == [1, 2, 3, 4, 5]
    empty = e1_ranks([ColumnSpec(3, [])], 5)
    assert [empty.entry(t, 0) for t in range(6)] == [0, 0, 0, 1, 0, 0]


def test_corner_rank_is_multiplicity():
    for c in corank_columns(3, 1) + [ColumnSpec(2, [1, 3], multiplicity=4)]:
        assert c.rank(c.codim) == c.multiplicity
        assert c.rank(c.codim - 1) == 0


def test_ranks_by_fiber_degree():
    rows = e1_ranks(corank_columns(3), 4).fiber_rows(4)
    assert [r[2] for r in rows] == [1, 2, 5, 8, 14]
    assert [r[3] for r in rows] == [1, 2, 5, 10, 18]


def test_column_rank_matches_enumeration():
    for c in corank_columns(3, 1):
        for t in range(c.codim, c.codim + 7):
            assert c.rank(t) == count_monomials(t - c.codim, c.degrees.degrees)


def test_diagonal_check_porteous():
    assert diagonal_check(e1_ranks(corank_columns(2), 8), ALL) == [0] * 9
    residual = diagonal_check(e1_ranks(corank_columns(1), 8), ALL)
    assert residual[:5] == [0, 0, 0, 0, 1]
    assert diagonal_check(e1_ranks([], 2), DegreeMultiset()) == [1, 0, 0]


def test_diagonal_check_from_catalog():
    # the C factor plays the role of the dropped U(infinity)
    cols = columns_from_model(catalog_porteous(3, 0), drop=["C"])
    assert [c.codim for c in cols] == [0, 1, 4, 9]
    assert diagonal_check(cols, ALL, 8) == [0] * 9


def test_predict_examples():
    assert predict_stratum_count(singularity_columns(3), ALL, 4) == 2
    assert predict_stratum_count(corank_columns(1), ALL, 4) == 1
    assert predict_stratum_count([ColumnSpec(0, [])], ALL, 1) == 1


def test_predict_rejects_bad_input():
    with pytest.raises(SpectralError):
        predict_stratum_count(corank_columns(2), ALL, 4)
    with pytest.raises(SpectralError):
        predict_stratum_count([ColumnSpec(0, []), ColumnSpec(1, [1]), ColumnSpec(1, [1])], ALL, 3)


def test_euler_identity_examples():
    assert euler_identity_check(4)
    assert euler_identity_check(1)
    assert not euler_identity_check(0)


def test_euler_identity_against_enumeration():
    for n in range(1, 31):
        assert euler_identity_check(n)
    for n in range(1, 13):
        rhs = sum(count_monomials(n - s * s, list(range(1, s + 1)) * 2)
                  for s in range(1, n + 1) if s * s <= n)
        assert count_monomials(n, range(1, n + 1)) == rhs


def test_json_and_render():
    table = e1_ranks(singularity_columns(3), 5)
    doc = table.to_json()
    assert doc["ranks"][5] == [0, 1, 1, 1]
    assert ColumnSpec.from_json(doc["columns"][1]) == table.columns[1]
    text = table.render()
    assert text.splitlines()[0].split() == ["5", "|", ".", "1", "1", "1"]
    assert "A_3" in text.splitlines()[-1]
