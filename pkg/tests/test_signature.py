import pytest
from hypothesis import given

from lmt.errors import DuplicateColour, DuplicateGenerator, SortMismatch, UnknownColourInSort
from lmt.signature import (
    EMPTY,
    Gen,
    Generator,
    Id,
    Seq,
    Sort,
    Tensor,
    identity_morphism,
    make_morphism,
    make_signature,
    map_term,
    parallel,
    sort_of,
)

from .strategies import SIG, terms

m = Generator("m", ("c", "c"), ("c",))
u = Generator("u", (), ("c",))
MON = make_signature(["c"], [m, u])


def test_monoid_signature():
    assert MON.colours == ("c",)
    assert {g.name for g in MON.generators} == {"m", "u"}


def test_empty_signature():
    s = make_signature([], [])
    assert s.colours == () and s.generators == ()


def test_unknown_colour_in_sort():
    with pytest.raises(UnknownColourInSort):
        make_signature(["a"], [Generator("g", ("a",), ("b",))])


def test_duplicates():
    with pytest.raises(DuplicateColour):
        make_signature(["a", "a"], [])
    with pytest.raises(DuplicateGenerator):
        make_signature(["c"], [m, m])


def test_sort_of_generator_and_empty():
    assert sort_of(Gen(m), MON) == Sort(("c", "c"), ("c",))
    assert sort_of(EMPTY) == Sort((), ())


def test_sequential_sort_mismatch():
    with pytest.raises(SortMismatch):
        sort_of(Seq(Gen(u), Gen(m)), MON)


def test_parallel():
    assert parallel(Gen(m), Gen(m), MON)
    assert not parallel(Gen(m), Gen(u), MON)
    assert parallel(Seq(Id("c"), Id("c")), Id("c"), MON)


def test_map_term_generator_and_identity():
    g = Generator("g", ("c", "c"), ("c",))
    tgt = make_signature(["c"], [g, u])
    f = make_morphism(MON, tgt, {"c": "c"}, {m: g, u: u})
    assert map_term(f, Gen(m)) == Gen(g)
    t = Seq(Tensor(Gen(u), Id("c")), Gen(m))
    assert map_term(identity_morphism(MON), t) == t


def test_map_term_collapsing_colours():
    src = make_signature(["a", "b"], [])
    tgt = make_signature(["c"], [])
    f = make_morphism(src, tgt, {"a": "c", "b": "c"}, {})
    assert map_term(f, Tensor(Id("a"), Id("b"))) == Tensor(Id("c"), Id("c"))


@given(terms)
def test_tensor_sort_is_concatenation(t):
    s = Tensor(t, t)
    assert s.dom == t.dom + t.dom and s.cod == t.cod + t.cod


@given(terms)
def test_identity_morphism_fixes_terms(t):
    assert map_term(identity_morphism(SIG), t) == t
