from fractions import Fraction
from itertools import permutations
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from bnchains import (
    BNParams,
    Tableau,
    brill_noether_number,
    count_components,
    enumerate_tableaux,
    hook_count,
    validate_tableau,
)

from worked_example import PARAMS_662, tableau_662


def syt_count_determinant(k: int, kbar: int) -> int:
    """Independent count of standard fillings via the factorial determinant.

    f = n! * det[ 1 / (lambda_i - i + j)! ] over the kbar rows of the
    rectangle, a different formula family from the hook product.
    """
    n = k * kbar
    rows = kbar

    def entry(i, j):
        m = k - i + j  # lambda_i = k
        if m < 0:
            return Fraction(0)
        return Fraction(1, factorial(m))

    # Bareiss-free exact determinant by Laplace on small matrices
    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        total = Fraction(0)
        for j in range(len(mat)):
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            sign = -1 if j % 2 else 1
            total += sign * mat[0][j] * det(minor)
        return total

    mat = [[entry(i, j) for j in range(rows)] for i in range(rows)]
    value = factorial(n) * det(mat)
    assert value.denominator == 1
    return int(value)


def syt_brute_force(k: int, kbar: int) -> int:
    """Filter all permutations; only usable for tiny rectangles."""
    n = k * kbar
    count = 0
    for perm in permutations(range(1, n + 1)):
        rows = [perm[m * k : (m + 1) * k] for m in range(kbar)]
        ok = all(a < b for row in rows for a, b in zip(row, row[1:]))
        ok = ok and all(
            rows[m][t] < rows[m + 1][t] for m in range(kbar - 1) for t in range(k)
        )
        count += ok
    return count


def test_derived_parameters():
    p = PARAMS_662
    assert (p.k, p.kbar, p.rho) == (3, 2, 0)
    assert brill_noether_number(6, 6, 2) == 0
    assert brill_noether_number(1, 1, 0) == 1
    assert brill_noether_number(5, 4, 1) == 1
    assert brill_noether_number(5, 3, 1) == -1


def test_params_validation():
    with pytest.raises(ValueError):
        BNParams(0, 1, 0)
    with pytest.raises(ValueError):
        BNParams(3, -1, 0)
    with pytest.raises(ValueError):
        BNParams(3, 1, -1)


def test_hook_count_known_values():
    assert hook_count(1, 3) == 1
    assert hook_count(3, 2) == 5
    assert hook_count(2, 2) == 2
    assert hook_count(2, 3) == 5
    with pytest.raises(ValueError):
        hook_count(0, 2)
    with pytest.raises(ValueError):
        hook_count(2, 0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("kbar", [1, 2, 3, 4])
def test_hook_count_against_determinant(k, kbar):
    assert hook_count(k, kbar) == syt_count_determinant(k, kbar)


@pytest.mark.parametrize(
    "k,kbar", [(1, 1), (2, 1), (1, 3), (2, 2), (3, 2), (2, 3), (4, 2), (3, 3)]
)
def test_hook_count_against_brute_force(k, kbar):
    assert hook_count(k, kbar) == syt_brute_force(k, kbar)


def test_hook_count_symmetry():
    for k in range(1, 5):
        for kbar in range(1, 5):
            assert hook_count(k, kbar) == hook_count(kbar, k)


def test_enumeration_counts():
    assert len(list(enumerate_tableaux(BNParams(6, 6, 2)))) == 5
    assert len(list(enumerate_tableaux(BNParams(5, 4, 1)))) == 10
    assert len(list(enumerate_tableaux(BNParams(5, 3, 1)))) == 0
    assert len(list(enumerate_tableaux(BNParams(6, 4, 1)))) == 5


def test_enumeration_count_matches_closed_form():
    for g in range(1, 7):
        for r in range(0, g + 1):
            for d in range(0, 2 * g + 1):
                p = BNParams(g, d, r)
                assert len(list(enumerate_tableaux(p))) == count_components(p)


def test_kbar_zero_yields_single_empty_tableau():
    p = BNParams(1, 1, 0)
    tableaux = list(enumerate_tableaux(p))
    assert len(tableaux) == 1
    assert tableaux[0].rows == ()
    assert tableaux[0].free_indices == (1,)


def test_kbar_negative_yields_empty_stream():
    p = BNParams(2, 5, 1)  # kbar = -2
    assert list(enumerate_tableaux(p)) == []
    assert count_components(p) == 0


def test_enumeration_order_deterministic():
    p = BNParams(5, 4, 1)
    first = list(enumerate_tableaux(p))
    second = list(enumerate_tableaux(p))
    assert first == second
    # free subsets in lexicographic order; row words lexicographic within
    assert first[0].free_indices == (1,)
    assert first[0].rows == ((2, 3), (4, 5))
    assert first[1].rows == ((2, 4), (3, 5))
    assert first[2].free_indices == (2,)


def test_worked_example_tableau_is_enumerated():
    tableaux = list(enumerate_tableaux(PARAMS_662))
    assert tableau_662() in tableaux


def test_validate_tableau():
    assert validate_tableau(tableau_662()).ok
    bad_row = Tableau(PARAMS_662, ((2, 1, 4), (3, 5, 6)))
    verdict = validate_tableau(bad_row)
    assert not verdict.ok
    assert "row 1" in verdict.problem
    assert validate_tableau(Tableau(PARAMS_662, ((1, 2, 3), (4, 5, 6)))).ok
    bad_col = Tableau(PARAMS_662, ((3, 4, 5), (1, 2, 6)))
    verdict = validate_tableau(bad_col)
    assert not verdict.ok
    assert "column" in verdict.problem


def test_tableau_structural_rejections():
    with pytest.raises(ValueError):
        Tableau(PARAMS_662, ((1, 2, 4),))  # wrong row count
    with pytest.raises(ValueError):
        Tableau(PARAMS_662, ((1, 2), (3, 5)))  # wrong width
    with pytest.raises(ValueError):
        Tableau(PARAMS_662, ((1, 2, 4), (3, 5, 5)))  # duplicate
    with pytest.raises(ValueError):
        Tableau(PARAMS_662, ((1, 2, 4), (3, 5, 7)))  # out of range


def test_column_fill_examples():
    t = tableau_662()
    assert t.column_fill(2, 1) == 1
    assert all(t.column_fill(0, s) == 0 for s in range(3))
    assert t.column_fill(3, 2) == 0
    assert t.column_fill(6, 2) == 2


def test_positions():
    t = tableau_662()
    assert t.column_of(4) == 2 and t.row_of(4) == 1
    assert t.column_of(3) == 0 and t.row_of(3) == 2
    assert t.free_indices == ()
    assert t.placed_indices == (1, 2, 3, 4, 5, 6)


def params_strategy(max_g=6):
    return (
        st.tuples(
            st.integers(1, max_g), st.integers(0, 2 * max_g), st.integers(0, 3)
        )
        .map(lambda t: BNParams(*t))
        .filter(lambda p: p.rho >= 0 and p.kbar >= 1)
    )


@st.composite
def tableau_strategy(draw):
    params = draw(params_strategy())
    tableaux = list(enumerate_tableaux(params))
    index = draw(st.integers(0, len(tableaux) - 1))
    return tableaux[index]


@given(tableau_strategy())
@settings(max_examples=60, deadline=None)
def test_enumerated_tableaux_validate(t):
    assert validate_tableau(t).ok
    assert len(t.free_indices) == t.params.rho


@given(tableau_strategy())
@settings(max_examples=60, deadline=None)
def test_column_fill_monotone_and_complete(t):
    p = t.params
    for i in range(p.g + 1):
        for s in range(p.k - 1):
            assert t.column_fill(i, s) >= t.column_fill(i, s + 1)
    for s in range(p.k):
        assert t.column_fill(p.g, s) == p.kbar


@given(tableau_strategy())
@settings(max_examples=60, deadline=None)
def test_placement_legality(t):
    # row of a placed index is its column count at placement time, and the
    # incremental rule beta(i-1, s) < beta(i-1, s-1) holds for s >= 1
    for i in t.placed_indices:
        s = t.column_of(i)
        assert t.row_of(i) == t.column_fill(i, s)
        if s >= 1:
            assert t.column_fill(i - 1, s) < t.column_fill(i - 1, s - 1)


@given(params_strategy())
@settings(max_examples=40, deadline=None)
def test_counts_match_formula(p):
    tableaux = list(enumerate_tableaux(p))
    assert len(tableaux) == comb(p.g, p.rho) * hook_count(p.k, p.kbar)
    assert len(set(tableaux)) == len(tableaux)
