import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmt import layered as L
from lmt import textio as T
from lmt.errors import ParseError
from lmt.signature import Gen, Id, Seq, Tensor
from lmt.suites import (
    random_channel_value,
    random_graph_value,
    random_layered,
    random_process,
    random_signature_value,
    random_term,
    random_zx,
    roundtrip_signature,
)

SAMPLES = Path(__file__).resolve().parent.parent / "samples"
MONOID = T.parse_theory((SAMPLES / "monoid.json").read_text())
SIG = MONOID.signature
seeds = st.integers(0, 2**32 - 1)


def test_term_sequence():
    t = T.parse_term("( gen m ; id c )", SIG)
    assert isinstance(t, Seq)
    assert isinstance(t.left, Gen) and t.right == Id("c")
    assert (t.dom, t.cod) == (("c", "c"), ("c",))


def test_term_tensor_and_empty():
    t = T.parse_term("(gen u * empty)", SIG)
    assert isinstance(t, Tensor) and t.dom == () and t.cod == ("c",)


def test_ambiguous_name_gets_a_sort():
    sig = roundtrip_signature()
    with pytest.raises(ParseError):
        T.parse_term("gen f", sig)
    t = T.parse_term("gen f:a->b", sig)
    assert (t.dom, t.cod) == (("a",), ("b",))
    assert T.serialize_term(t, sig) == "gen f:a->b"


def test_unknown_generator():
    with pytest.raises(ParseError):
        T.parse_term("gen nope", SIG)


def test_division_by_zero_has_location():
    with pytest.raises(ParseError) as e:
        T.parse_zx("(Z(1,1,0) ;\n Z(1,1,1/0))")
    assert (e.value.line, e.value.column) == (2, 8)


def test_unbalanced_parenthesis():
    with pytest.raises(ParseError):
        T.parse_term("(gen m ; id c", SIG)


def test_zx_text():
    t = T.parse_zx("(Z(1,2,1/2) ; (H * X(1,1,-1)))")
    assert T.parse_zx(T.serialize_zx(t)) == t


def test_minimal_graph():
    g = T.parse_graph('{"vertices": ["o"], "edges": [], "inputs": [], "outputs": ["o"], "measure": {}}')
    assert g.outputs == ("o",) and g.measure == {}


def test_sample_graph():
    g = T.parse_graph((SAMPLES / "graph.json").read_text())
    assert g.measure["a"] == ("XY", Fraction(1, 4))
    assert g.in_labels["a"] == ("g/2",)
    assert T.parse_graph(T.serialize_graph(g)) == g


def test_graph_json_errors():
    with pytest.raises(ParseError) as e:
        T.parse_graph('{"vertices": [\n "a",, ]}')
    assert e.value.line == 2
    with pytest.raises(ParseError):
        T.parse_graph('{"vertices": ["a"]}')


def test_sample_channel():
    ch = T.parse_channel((SAMPLES / "joint.json").read_text())
    assert ch.prob("z", ("x1", "y1")) == Fraction(2, 5)


def test_processes():
    p = T.parse_process("(a.0 | ~a.t.0)")
    assert T.serialize_process(p) == "(a.0 | ~a.t.0)"
    with pytest.raises(ParseError):
        T.parse_process("a.")


def test_theory_sample():
    assert [e.name for e in MONOID.equations][-3:] == ["unit-left", "unit-right", "assoc"]


def test_layered_parsing():
    lsig = L.circuit_layers()
    text = T.serialize_layered(random_layered(random.Random(5), lsig), lsig)
    assert "at[" in text
    t = T.parse_layered(text, lsig)
    assert T.serialize_layered(t, lsig) == text


def test_layered_sample_signature():
    lsig = T.parse_layered_signature((SAMPLES / "circuits.json").read_text())
    assert set(lsig.theories) == {"circ", "zx"}


@pytest.mark.parametrize("make,ser,par", [
    (lambda r: random_term(r), lambda v: T.serialize_term(v, roundtrip_signature()),
     lambda s: T.parse_term(s, roundtrip_signature())),
    (random_zx, T.serialize_zx, T.parse_zx),
    (random_graph_value, T.serialize_graph, T.parse_graph),
    (random_channel_value, T.serialize_channel, T.parse_channel),
    (random_process, T.serialize_process, T.parse_process),
    (random_signature_value, T.serialize_signature, T.parse_signature),
], ids=["term", "zx", "graph", "channel", "process", "signature"])
@given(seed=seeds)
def test_roundtrip(make, ser, par, seed):
    v = make(random.Random(seed))
    s = ser(v)
    assert par(s) == v
    assert ser(par(s)) == s
