import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hecketrace.errors import SpectrumError
from hecketrace.heckeops import SlopeVector
from hecketrace.polyring import LaurentPoly, canonical_string
from hecketrace.repmodel import CharSpec, Steinberg
from hecketrace.spectral import (
    RootOfUnity,
    SpectrumEntry,
    SpectrumFile,
    aggregate_trace,
    load_spectrum,
    parse_spectrum,
    serialize,
)
from hecketrace.traceengine import truncated_trace

LAM = SlopeVector.parse("2/3^3,1/2^2")


def header(**kw):
    base = {"n": 5, "p1": 3, "p2": 2, "s": 3, "ker1": 1, "entries": []}
    base.update(kw)
    return base


def entry(rep, cpi="1", zeta="0/1"):
    return {"rep": rep, "cpi": cpi, "zeta": zeta}


def test_empty_spectrum_gives_zero():
    spec = parse_spectrum(header())
    assert aggregate_trace(1, LAM, spec).is_zero()


def test_single_entry_is_its_trace():
    spec = parse_spectrum(header(entries=[entry("St(5;z;0)")]))
    want = truncated_trace(LAM, 1, 3, Steinberg(5, CharSpec("z"))).value
    assert aggregate_trace(1, LAM, spec) == want.with_context(aggregate_trace(1, LAM, spec).ctx)


def test_ker1_doubles():
    one = parse_spectrum(header(entries=[entry("St(5;z;0)", "3/2")]))
    two = parse_spectrum(header(ker1=2, entries=[entry("St(5;z;0)", "3/2")]))
    assert aggregate_trace(2, LAM, two) == aggregate_trace(2, LAM, one).scale(2)


def test_sign_root_of_unity():
    plus = parse_spectrum(header(entries=[entry("St(5;z;0)")]))
    minus = parse_spectrum(header(entries=[entry("St(5;z;0)", zeta="1/2")]))
    assert aggregate_trace(1, LAM, minus) == -aggregate_trace(1, LAM, plus)
    assert aggregate_trace(2, LAM, minus) == aggregate_trace(2, LAM, plus)


def test_cube_root_stays_symbolic():
    spec = parse_spectrum(header(entries=[entry("St(5;z;0)", zeta="1/3")]))
    got = aggregate_trace(1, LAM, spec)
    assert "zeta_1_3" in got.ctx.symbols
    assert "zeta_1_3" not in aggregate_trace(3, LAM, spec).ctx.symbols


def test_root_of_unity_reduces():
    assert RootOfUnity(2, 4) == RootOfUnity(1, 2)
    assert RootOfUnity(1, 3).power(3) == RootOfUnity(0, 1)
    with pytest.raises(SpectrumError):
        RootOfUnity.parse("1/0")


def test_speh33_is_rejected():
    with pytest.raises(SpectrumError, match="Neither"):
        parse_spectrum({"n": 9, "p1": 5, "p2": 4, "s": 4, "ker1": 1, "entries": [entry("Speh(3,3;z;0)")]})


def test_type_two_needs_type_two_header():
    ok = {"n": 6, "p1": 3, "p2": 3, "s": 2, "ker1": 1, "entries": [entry("Speh(2,3;z;0)")]}
    assert len(parse_spectrum(ok).entries) == 1
    bad = dict(ok, p1=5, p2=1)
    with pytest.raises(SpectrumError, match="type I list"):
        parse_spectrum(bad)


def test_field_validation():
    with pytest.raises(SpectrumError, match="missing"):
        parse_spectrum({"n": 5, "p1": 3, "p2": 2, "s": 3, "entries": []})
    with pytest.raises(SpectrumError, match="unexpected"):
        parse_spectrum(header(extra=1))
    with pytest.raises(SpectrumError):
        parse_spectrum(header(p2=3))
    with pytest.raises(SpectrumError):
        parse_spectrum(header(entries=[entry("St(4;z;0)")]))
    with pytest.raises(SpectrumError):
        parse_spectrum(header(entries=[entry("St(5;z;0)", cpi="x")]))


def test_parse_error_position():
    with pytest.raises(SpectrumError, match=r"line 2, column \d+"):
        load_spectrum('{"n": 5,\n  "p1": }')


def test_load_from_stream_and_bytes():
    text = json.dumps(header(entries=[entry("Triv(5;w;0)", "-2")]))
    assert load_spectrum(io.StringIO(text)) == load_spectrum(text.encode())


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["St(5;z;0)", "Triv(5;w;0)", "Ind[St(3;z1;0),St(2;z2;0)]"]),
                          st.fractions(-3, 3, max_denominator=4),
                          st.sampled_from(["0/1", "1/2", "1/3", "2/5"])), max_size=4),
       st.integers(1, 3))
def test_serialize_round_trip(items, ker1):
    spec = parse_spectrum(header(ker1=ker1, entries=[entry(r, str(c), z) for r, c, z in items]))
    assert load_spectrum(serialize(spec)) == spec


def test_hand_built_spectrum_file():
    spec = SpectrumFile(5, 3, 2, 3, 1, (SpectrumEntry(Steinberg(5, CharSpec("z")), Fraction(1), RootOfUnity(0, 1)),))
    got = aggregate_trace(1, LAM, spec)
    assert canonical_string(got) != "0"
    assert got == truncated_trace(LAM, 1, 3, Steinberg(5, CharSpec("z"))).value.with_context(got.ctx)
    assert isinstance(got, LaurentPoly)
