import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecketrace.errors import DomainError, SizeGuardError
from hecketrace.symcomb import (
    Permutation,
    base_filling,
    brute_double_cosets,
    distinct_row_entries,
    enumerate_compositions,
    intersection_composition,
    inversions,
    is_minimal_rep,
    min_coset_reps,
    perm_from_tableau,
    row_semistandard_tableaux,
    strict_compositions,
    tableau_from_perm,
)

WORKED = Permutation((1, 3, 4, 2, 5, 7, 6, 8, 9, 10))


def test_inversions_examples():
    assert inversions(Permutation.identity(4)) == 0
    assert inversions(Permutation((2, 1))) == 1
    assert inversions(Permutation((4, 3, 2, 1))) == 6


def test_worked_permutation_from_cycles():
    assert Permutation.from_cycles(10, (2, 3, 4), (6, 7)) == WORKED


def test_enumerate_compositions_examples():
    assert set(enumerate_compositions(1, 2, "extended")) == {(1, 0), (0, 1)}
    assert enumerate_compositions(3, 2, "strict") == [(1, 2), (2, 1)]
    assert enumerate_compositions(1, 2, "extended", "chihat", blocks=(1, 1)) == [(0, 1)]


def test_enumeration_order_is_ascending():
    out = enumerate_compositions(2, 3, "extended")
    assert out == sorted(out)


def test_brute_double_coset_counts():
    assert len(brute_double_cosets((1, 1), (1, 1))) == 2
    assert len(brute_double_cosets((2,), (2,))) == 1
    assert len(brute_double_cosets((2, 1), (2, 1))) == 2


def test_size_guard(monkeypatch):
    monkeypatch.setenv("HECKE_TRACE_MAX_N", "3")
    with pytest.raises(SizeGuardError):
        brute_double_cosets((2, 2), (2, 2))


def test_min_coset_reps_examples():
    assert [w.images for w in min_coset_reps((1, 1), (1, 1))] == [(1, 2), (2, 1)]
    assert [w.images for w in min_coset_reps((4,), (4,))] == [(1, 2, 3, 4)]
    reps = min_coset_reps((2, 1), (2, 1))
    assert [w.one_line() for w in reps] == ["[1,2,3]", "[1,3,2]"]


def test_worked_tableau():
    t = tableau_from_perm(WORKED, (5, 2, 3), (3, 3, 4))
    assert t.rows == ((1, 2, 1, 1, 2), (3, 2), (3, 3, 3))
    assert distinct_row_entries(t) == (2, 2, 1)


def test_identity_gives_base_filling():
    assert tableau_from_perm(Permutation.identity(6), (3, 3), (2, 4)) == base_filling((3, 3), (2, 4))


def test_distinct_row_entries_degenerate():
    assert distinct_row_entries(base_filling((4,), (4,))) == (1,)
    t = row_semistandard_tableaux((1, 1, 1), (2, 1))[0]
    assert distinct_row_entries(t) == (1, 1, 1)


def test_round_trip_small():
    for w in min_coset_reps((2, 1), (2, 1)):
        assert perm_from_tableau(tableau_from_perm(w, (2, 1), (2, 1))) == w


def test_intersection_examples():
    assert intersection_composition(Permutation.identity(5), (3, 2), (3, 2)) == (3, 2)
    assert intersection_composition(Permutation.identity(5), (2, 3), (3, 2)) == (2, 1, 2)
    assert intersection_composition(Permutation.identity(4), (4,), (1, 3)) == (1, 3)
    assert intersection_composition(Permutation((1, 3, 2)), (2, 1), (2, 1)) == (1, 1, 1)


def test_intersection_rejects_non_minimal():
    with pytest.raises(DomainError):
        intersection_composition(Permutation((2, 1, 3)), (2, 1), (2, 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.sampled_from(strict_compositions(n)), st.sampled_from(strict_compositions(n)))))
def test_reps_are_coset_minima(pair):
    lam, nu = pair
    reps = min_coset_reps(lam, nu)
    assert len(reps) == len(row_semistandard_tableaux(lam, nu))
    minima = {min(c, key=lambda w: (inversions(Permutation(w)), w)) for c in brute_double_cosets(lam, nu)}
    assert {w.images for w in reps} == minima
    assert all(is_minimal_rep(w, lam, nu) for w in reps)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.sampled_from(strict_compositions(n)), st.sampled_from(strict_compositions(n)))))
def test_tableau_bijection(pair):
    lam, nu = pair
    tabs = row_semistandard_tableaux(lam, nu)
    for t in tabs:
        assert tableau_from_perm(perm_from_tableau(t), lam, nu) == t
