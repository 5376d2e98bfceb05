"""Shared hypothesis strategies for terms over small signatures."""

from hypothesis import strategies as st

from lmt.signature import EMPTY, Gen, Generator, Id, Seq, Tensor, make_signature

F = Generator("f", ("a",), ("b",))
M = Generator("m", ("a", "b"), ("a",))
E = Generator("e", ("b",), ())
SIG = make_signature(("a", "b"), (F, M, E))
LEAVES = [Gen(F), Gen(M), Gen(E), Id("a"), Id("b"), EMPTY]


def _combine(pair):
    left, right, want_seq = pair
    if want_seq and left.cod == right.dom:
        return Seq(left, right)
    return Tensor(left, right)


terms = st.recursive(
    st.sampled_from(LEAVES),
    lambda inner: st.tuples(inner, inner, st.booleans()).map(_combine),
    max_leaves=7,
)
