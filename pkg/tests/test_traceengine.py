from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hecketrace.errors import DomainError, UnsupportedCaseError
from hecketrace.heckeops import SlopeVector
from hecketrace.polyring import LaurentPoly, VarContext, canonical_string
from hecketrace.repmodel import (
    CharSpec,
    SemiStableRigid,
    Speh,
    Steinberg,
    Trivial,
    VirtualRep,
    parse_rep,
    speh_alternating_sum,
)
from hecketrace.traceengine import (
    case_applies,
    closed_form_rep,
    closed_form_trace,
    compact_trace_block,
    ray_sum,
    truncated_trace,
    two_slope_data,
    valid_two_slope_vectors,
    vanishing_predicate,
)

Z = CharSpec("z")
LAM2 = SlopeVector.parse("1^1,0^1")


def text(res):
    return canonical_string(res.value)


def test_compact_trace_steinberg_gl2():
    # chihat f_{2,1,1} = q^(1/2) X2, St_2(z) has Hecke matrix (q^(-1/2) z, q^(1/2) z), sign -1
    ctx = VarContext(0, ("z",))
    got = compact_trace_block((2,), [(2, 1, 1)], [Steinberg(2, Z)], ctx)
    assert canonical_string(got) == "-q^1*z^1"


def test_compact_trace_trivial_needs_coprime():
    with pytest.raises(UnsupportedCaseError):
        compact_trace_block((2,), [(2, 1, 2)], [Trivial(2, Z)])
    assert not compact_trace_block((2,), [(2, 1, 1)], [Trivial(2, Z)]).is_zero()


def test_engine_small_values():
    assert text(truncated_trace(LAM2, 1, 1, Steinberg(2, Z))) == "z^1"
    assert text(truncated_trace(LAM2, 1, 1, Trivial(2, Z))) == "q^1*z^1"


def test_case_one_sign_conventions():
    assert text(closed_form_trace(1, LAM2, 1, sign_convention="statement")) == "-z^1"
    assert text(closed_form_trace(1, LAM2, 1, sign_convention="proof")) == "z^1"


def test_case_two_matches_engine():
    assert text(closed_form_trace(2, LAM2, 1)) == "q^1*z^1"


def test_trace_result_text_header():
    res = truncated_trace(LAM2, 1, 1, Steinberg(2, Z))
    assert res.text().splitlines()[0] == "# provenance=engine sign=proof"


def test_closed_form_domain_errors():
    with pytest.raises(DomainError, match="n even"):
        closed_form_trace(3, SlopeVector.parse("2/3^3,1/2^2"), 1)
    with pytest.raises(DomainError, match="n >= 6"):
        closed_form_trace(3, SlopeVector.parse("1^1,1/3^3"), 1)
    with pytest.raises(DomainError):
        closed_form_trace(7, LAM2, 1)
    with pytest.raises(DomainError):
        two_slope_data(SlopeVector.parse("1/2^4"))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_cases_five_and_two_against_engine(n):
    for lam in valid_two_slope_vectors(n):
        for case in (2, 5):
            rep = closed_form_rep(case, lam)
            assert truncated_trace(lam, 1, lam.s, rep).value == closed_form_trace(case, lam, 1).value


def test_case_five_with_opposite_twists():
    lam = SlopeVector.parse("2/3^3,1/3^3")
    rep = closed_form_rep(5, lam, r=Fraction(1, 3))
    assert truncated_trace(lam, 2, lam.s, rep).value == closed_form_trace(5, lam, 2, r=Fraction(1, 3)).value


def test_x_one_alternating_sum_matches_trivial():
    for lam in valid_two_slope_vectors(3):
        raw = speh_alternating_sum(1, 3, Z)
        assert truncated_trace(lam, 1, lam.s, raw).value == truncated_trace(lam, 1, lam.s, Trivial(3, Z)).value


def test_linearity_and_zero():
    lam = SlopeVector.parse("2/3^3,1/2^2")
    a, b = Steinberg(5, Z), parse_rep("Ind[St(3;z;0),St(2;z;0)]")
    combo = VirtualRep([(2, a), (-3, b)])
    lhs = truncated_trace(lam, 1, lam.s, combo).value
    rhs = truncated_trace(lam, 1, lam.s, a).value.scale(2) + truncated_trace(lam, 1, lam.s, b).value.scale(-3)
    assert lhs == rhs
    assert truncated_trace(lam, 1, lam.s, VirtualRep()).value.is_zero()


def test_unsupported_case_is_reported():
    with pytest.raises(UnsupportedCaseError):
        truncated_trace(SlopeVector.parse("1/2^4"), 1, 2, Trivial(4, Z))


def test_case_applies():
    assert case_applies(3, SlopeVector.parse("2/3^3,1/3^3"))
    assert not case_applies(3, SlopeVector.parse("2/3^3,1/2^2"))
    assert case_applies(1, LAM2)


def test_speh33_vanishes():
    lam = SlopeVector.parse("3/5^5,1/4^4")
    assert vanishing_predicate(Speh(3, 3, Z), lam)
    assert truncated_trace(lam, 1, lam.s, Speh(3, 3, Z)).value.is_zero()


def test_ray_sum_reports_skips():
    rs = ray_sum(2, 1, 1, Steinberg(2, Z))
    assert rs.skipped == ()
    assert rs.reference == LaurentPoly.zero(rs.total.ctx)


@st.composite
def unitary_ssr(draw):
    """Semi-stable rigid data built from unramified-style twists: shift 0 or +-r pairs."""
    y = draw(st.integers(1, 4))
    budget = 8 // y
    assume(budget >= 2)
    xs = draw(st.lists(st.integers(1, budget), min_size=1, max_size=3))
    assume(2 <= sum(xs) <= budget)
    factors = [(x, CharSpec(f"a{i}")) for i, x in enumerate(xs)]
    if draw(st.booleans()) and len(xs) >= 2 and xs[0] == xs[1]:
        r = draw(st.sampled_from([Fraction(1, 4), Fraction(1, 3)]))
        factors[0] = (xs[0], CharSpec("a0", r))
        factors[1] = (xs[1], CharSpec("a0", -r))
    return SemiStableRigid(y, tuple(factors))


@settings(max_examples=80, deadline=None)
@given(unitary_ssr(), st.data())
def test_vanishing_dichotomy(rep, data):
    vecs = valid_two_slope_vectors(rep.n)
    lam = data.draw(st.sampled_from(vecs))
    assume(vanishing_predicate(rep, lam))
    try:
        value = truncated_trace(lam, 1, lam.s, rep).value
    except UnsupportedCaseError:
        assume(False)
    assert value.is_zero()
