from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecketrace.errors import DomainError
from hecketrace.polyring import LaurentPoly, VarContext
from hecketrace.repmodel import (
    CharSpec,
    SemiStableRigid,
    Speh,
    StandardModule,
    Steinberg,
    Trivial,
    VirtualRep,
    classify_type,
    expand,
    geometric_lemma_terms,
    hecke_matrix,
    jacquet_twisted,
    modulus_half_shifts,
    parse_rep,
    regime,
    speh_alternating_sum,
    speh_expand,
    speh_permutations,
    torus_characters,
)
from hecketrace.symcomb import row_semistandard_tableaux, strict_compositions

Z = CharSpec("z")
H = Fraction(1, 2)


def test_hecke_matrix_gl1():
    ctx = VarContext(0, ("z",))
    assert hecke_matrix([Z], ctx).entries == (LaurentPoly.symbol("z", ctx),)


def test_hecke_matrix_modulus_points():
    ctx = VarContext(0)
    got = hecke_matrix(torus_characters(Trivial(2)), ctx).entries
    assert got == (LaurentPoly.q_power(-H, ctx), LaurentPoly.q_power(H, ctx))


def test_modulus_half_shifts():
    assert modulus_half_shifts([1, 1]) == [H, -H]
    assert modulus_half_shifts([2, 2]) == [1, -1]
    assert modulus_half_shifts([3]) == [0]


def test_jacquet_steinberg_gl2():
    assert jacquet_twisted("St", 2, Z, (1, 1)) == (Steinberg(1, Z.twisted(H)), Steinberg(1, Z.twisted(-H)))


def test_jacquet_gl4_two_blocks():
    assert jacquet_twisted("St", 4, Z, (2, 2)) == (Steinberg(2, Z.twisted(1)), Steinberg(2, Z.twisted(-1)))
    assert jacquet_twisted("Triv", 4, Z, (2, 2)) == (Trivial(2, Z.twisted(-1)), Trivial(2, Z.twisted(1)))


def test_jacquet_trivial_parabolic_is_identity():
    assert jacquet_twisted("St", 3, Z, (3,)) == (Steinberg(3, Z),)


def test_jacquet_rejects_bad_tag():
    with pytest.raises(DomainError):
        jacquet_twisted("Speh", 2, Z, (1, 1))


def test_speh_collapses():
    assert speh_expand(1, 4, Z) == VirtualRep([(1, Trivial(4, Z))])
    assert speh_expand(3, 1, Z) == VirtualRep([(1, Steinberg(3, Z))])


def test_speh_22_expansion():
    got = speh_alternating_sum(2, 2, Z)
    want = VirtualRep([
        (1, StandardModule((Steinberg(2, Z.twisted(-H)), Steinberg(2, Z.twisted(H))))),
        (-1, StandardModule((Steinberg(3, Z), Steinberg(1, Z)))),
    ])
    assert got == want


def test_speh_with_x_one_is_alternating_sum_of_tori():
    # Speh(1, 2) is the trivial rep of GL2: Ind of the two characters minus St_2.
    got = speh_alternating_sum(1, 2)
    want = VirtualRep([
        (1, StandardModule((Steinberg(1, CharSpec(None, -H)), Steinberg(1, CharSpec(None, H))))),
        (-1, StandardModule((Steinberg(2),))),
    ])
    assert got == want


@pytest.mark.parametrize("y", range(1, 7))
def test_speh_permutation_count_saturates(y):
    for x in range(max(1, y - 1), y + 2):
        assert len(speh_permutations(x, y)) == factorial(y)


def test_speh_permutation_count_small_x():
    assert len(speh_permutations(1, 3)) == 4
    for y in range(1, 7):
        assert len(speh_permutations(1, y)) == 2 ** (y - 1)


def test_parse_and_text_round_trip():
    for text in ("St(5;z;0)", "Triv(3;-;1/2)", "Speh(2,3;w;0)", "Ind[St(3;z1;0),St(2;z2;-1/3)]",
                 "SSR(2;[1;a;1/4],[2;b;-1/4])"):
        assert parse_rep(text).text() == text


def test_parse_rejects_garbage():
    for bad in ("St(0;z;0)", "Foo(2;z;0)", "Ind[Speh(2,2;z;0)]", "SSR(2;[1;a;1/2])"):
        with pytest.raises(DomainError):
            parse_rep(bad)


def test_virtual_rep_merges_and_drops_zeros():
    a = VirtualRep([(1, Steinberg(2, Z)), (2, Trivial(2, Z))])
    b = VirtualRep([(-1, Steinberg(2, Z))])
    assert a + b == VirtualRep([(2, Trivial(2, Z))])
    assert len(a + a.scale(-1)) == 0
    assert (a + a.scale(-1)).text() == "0"


def test_expand_semistable_rigid_is_product():
    ssr = SemiStableRigid(1, ((2, CharSpec("a")), (3, CharSpec("b"))))
    assert expand(ssr) == VirtualRep([(1, StandardModule((Steinberg(2, CharSpec("a")), Steinberg(3, CharSpec("b")))))])


def test_classify_examples():
    assert classify_type(Steinberg(5, Z), 3, 2) == "TypeI"
    assert classify_type(Trivial(4, Z), 2, 2) == "TypeI"
    assert classify_type(parse_rep("Ind[St(3;z1;0),St(2;z2;0)]"), 3, 2) == "TypeI"
    assert classify_type(parse_rep("Ind[St(2;z;1/4),St(2;z;-1/4)]"), 2, 2) == "TypeI"
    assert classify_type(parse_rep("Ind[St(2;z;1/4),St(2;w;-1/4)]"), 2, 2) == "Neither"
    assert classify_type(Speh(2, 3, Z), 3, 3) == "TypeII"
    assert classify_type(Speh(3, 2, Z), 3, 3) == "TypeII"
    assert classify_type(Speh(3, 3, Z), 5, 4) == "Neither"
    assert classify_type(Steinberg(4, Z.twisted(1)), 2, 2) == "Neither"


def test_classify_rejects_wrong_size():
    with pytest.raises(DomainError):
        classify_type(Steinberg(5, Z), 2, 2)


def test_regime():
    assert regime(6, 3, 3) == "TypeII"
    assert regime(6, 4, 2) == "TypeII"
    assert regime(6, 5, 1) == "TypeI"
    assert regime(5, 3, 2) == "TypeI"


pairs = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.sampled_from(strict_compositions(n)), st.sampled_from(strict_compositions(n))))


@settings(max_examples=60, deadline=None)
@given(pairs, st.sampled_from(["St", "Triv"]))
def test_geometric_lemma_term_count(pair, tag):
    nu, lam = pair
    sigma = [Steinberg(m, CharSpec(f"z{i}")) if tag == "St" else Trivial(m, CharSpec(f"z{i}"))
             for i, m in enumerate(nu)]
    terms = geometric_lemma_terms(nu, lam, sigma)
    assert len(terms) == len(row_semistandard_tableaux(nu, lam))
    for t in terms:
        assert tuple(sum(p.m for p in pieces) for pieces in t.levi_blocks) == lam


@st.composite
def nested(draw):
    n = draw(st.integers(1, 7))
    outer = draw(st.sampled_from(strict_compositions(n)))
    inner = [draw(st.sampled_from(strict_compositions(p))) for p in outer]
    return n, outer, inner


@settings(max_examples=60, deadline=None)
@given(nested(), st.sampled_from(["St", "Triv"]))
def test_jacquet_transitivity(data, tag):
    n, outer, inner = data
    stepwise = []
    for block, parts in zip(jacquet_twisted(tag, n, Z, outer), inner):
        stepwise.extend(jacquet_twisted(tag, block.m, block.char, parts))
    direct = jacquet_twisted(tag, n, Z, [p for parts in inner for p in parts])
    assert tuple(stepwise) == direct
