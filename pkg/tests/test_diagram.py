import pytest
from hypothesis import given

from lmt import oracle
from lmt.diagram import derivable, make_theory, normalize, replay, rewrite_step, struct_equal
from lmt.errors import NotParallel
from lmt.signature import EMPTY, Gen, Id, Seq, Tensor, ident, seq, tensor
from lmt.suites import structural_terms
from lmt.theories import builtin_theory, copy, mult, unit

from .strategies import E, F, M, SIG, terms


def test_identity_unit_law():
    t = Gen(F)
    assert normalize(Seq(Id("a"), t)) == normalize(t)
    assert normalize(Seq(t, Id("b"))) == normalize(t)


def test_empty_tensor_unit():
    assert normalize(Tensor(EMPTY, EMPTY)) == normalize(EMPTY)


def test_interchange():
    t, s = Gen(F), Gen(E)
    lhs = Tensor(Seq(t, Id("b")), Seq(Id("b"), s))
    rhs = Seq(Tensor(t, Id("b")), Tensor(Id("b"), s))
    assert struct_equal(lhs, rhs)
    # sliding past each other both ways
    assert struct_equal(Seq(Tensor(t, Id("b")), Tensor(Id("b"), s)), Seq(Tensor(Id("a"), s), Tensor(t, EMPTY)))


def test_reflexive_and_sort_mismatch():
    assert struct_equal(Gen(M), Gen(M))
    assert not struct_equal(Gen(M), Gen(F))


def test_same_sort_different_diagrams():
    assert Seq(Gen(M), Gen(F)).sort == Tensor(Gen(F), Gen(E)).sort
    assert not struct_equal(Seq(Gen(M), Gen(F)), Tensor(Gen(F), Gen(E)))


def test_oracle_class_counts():
    # frozen from the independent syntax-tree closure
    for leaves, n_terms, n_classes in ((3, 694, 182), (4, 11522, 1010)):
        ts = structural_terms(leaves)
        assert len(ts) == n_terms
        oracle.reset()
        cls = oracle.oracle_classes(ts)
        assert len(set(cls.values())) == n_classes
        assert len({normalize(t) for t in ts}) == n_classes


@given(terms, terms)
def test_normalize_agrees_with_oracle(t, s):
    if t.sort != s.sort:
        return
    assert struct_equal(t, s) == oracle.oracle_equal(t, s)


@given(terms)
def test_normalize_idempotent(t):
    d = normalize(t)
    assert normalize(d.to_term()) == d
    assert d.sort == t.sort


@given(terms, terms, terms)
def test_associativity(a, b, c):
    assert struct_equal(Tensor(Tensor(a, b), c), Tensor(a, Tensor(b, c)))
    if a.cod == b.dom and b.cod == c.dom:
        assert struct_equal(Seq(Seq(a, b), c), Seq(a, Seq(b, c)))


@given(terms, terms)
def test_interchange_property(a, b):
    lhs = Tensor(Seq(a, ident(a.cod)), Seq(ident(b.dom), b))
    rhs = Seq(Tensor(a, ident(b.dom)), Tensor(ident(a.cod), b))
    assert struct_equal(lhs, rhs)


MON = builtin_theory("Monoid", ["x"])
m, u, i = Gen(mult("x")), Gen(unit("x")), Id("x")


def test_rewrite_step_unit():
    assert normalize(i) in rewrite_step(MON, normalize(seq(tensor(u, i), m)))


def test_rewrite_step_empty_theory():
    assert rewrite_step(make_theory(SIG), normalize(Seq(Gen(F), Gen(E)))) == set()


def test_rewrite_step_coassoc():
    com = builtin_theory("Comonoid", ["x"])
    d = Gen(copy("x"))
    assert normalize(seq(d, tensor(i, d))) in rewrite_step(com, normalize(seq(d, tensor(d, i))))


def test_derivable_unit_depth_one():
    v = derivable(MON, seq(tensor(u, i), m), i, 3)
    assert v.proved and v.depth_used == 1
    assert replay(MON, normalize(seq(tensor(u, i), m)), v.witness, normalize(i))


def test_derivable_reflexive():
    v = derivable(MON, m, m, 3)
    assert v.proved and v.depth_used == 0


def test_derivable_free_theory_unknown():
    free = make_theory(MON.signature)
    assert derivable(free, m, seq(m, tensor(u, i), m), 6).status == "Unknown"


def test_derivable_requires_parallel():
    with pytest.raises(NotParallel):
        derivable(MON, m, u, 2)


def test_derivable_associativity_witness_replays():
    lhs = seq(tensor(m, i, i), tensor(m, i), m)
    rhs = seq(tensor(i, i, m), tensor(i, m), m)
    v = derivable(MON, lhs, rhs, 4)
    assert v.proved
    assert replay(MON, normalize(lhs), v.witness, normalize(rhs))
