import pytest

from lmt.diagram import derivable, normalize
from lmt.errors import MissingStructure
from lmt.signature import Gen, Id, seq, tensor
from lmt.theories import (
    builtin_theory,
    check_eckmann_hilton,
    copy,
    copy_word,
    delete,
    mult,
    swap,
    unit,
    without_naturality,
)


def test_monoid_theory_contents():
    t = builtin_theory("Monoid", ["x"])
    assert set(t.signature.generators) == {mult("x"), unit("x")}
    assert {e.name for e in t.equations} == {"assoc[x]", "unit-left[x]", "unit-right[x]"}


def test_symmetric_closure_of_nothing():
    t = builtin_theory("SymmetricClosure", [])
    assert t.signature.generators == () and t.equations == ()


def test_unknown_kind():
    with pytest.raises(ValueError):
        builtin_theory("Group", ["x"])


def test_uniform_copy_on_words():
    d = copy_word(("a", "b"))
    assert normalize(d) == normalize(
        seq(tensor(Gen(copy("a")), Gen(copy("b"))), tensor(Id("a"), Gen(swap("a", "b")), Id("b"))))
    assert d.dom == ("a", "b") and d.cod == ("a", "b", "a", "b")


@pytest.mark.parametrize("kind,lhs,rhs", [
    ("Monoid", lambda: seq(tensor(Gen(unit("x")), Id("x")), Gen(mult("x"))), lambda: Id("x")),
    ("Monoid", lambda: seq(tensor(Id("x"), Gen(unit("x"))), Gen(mult("x"))), lambda: Id("x")),
    ("Comonoid", lambda: seq(Gen(copy("x")), tensor(Gen(delete("x")), Id("x"))), lambda: Id("x")),
    ("Comonoid", lambda: seq(Gen(copy("x")), tensor(Gen(copy("x")), Id("x"))),
     lambda: seq(Gen(copy("x")), tensor(Id("x"), Gen(copy("x"))))),
])
def test_laws_proved_within_depth_three(kind, lhs, rhs):
    assert derivable(builtin_theory(kind, ["x"]), lhs(), rhs(), 3).proved


def test_eckmann_hilton():
    v = check_eckmann_hilton(builtin_theory("UniformComonoids", ["x"]), "x", 8)
    assert v.proved and v.depth_used <= 8


def test_eckmann_hilton_empty_word():
    v = check_eckmann_hilton(builtin_theory("UniformComonoids", ["x"]), (), 8)
    assert v.proved and v.depth_used == 0


def test_eckmann_hilton_needs_naturality():
    t = without_naturality(builtin_theory("UniformComonoids", ["x"]))
    assert check_eckmann_hilton(t, "x", 8, budget=3000).status == "Unknown"


def test_eckmann_hilton_needs_comonoids():
    with pytest.raises(MissingStructure):
        check_eckmann_hilton(builtin_theory("Monoid", ["x"]), "x", 4)


def test_indexed_monoids_flags():
    t = builtin_theory("IndexedMonoids", ["x"])
    assert {"uniformComonoids", "oneOneNaturalMonoids", "indexedMonoids"} <= set(t.flags)
