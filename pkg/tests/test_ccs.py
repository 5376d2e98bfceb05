from hypothesis import given
from hypothesis import strategies as st

from lmt.ccs import (
    NIL,
    TAU,
    Par,
    Prefix,
    canon,
    check_correspondence,
    co,
    congruent,
    enumerate_processes,
    lts_tau_steps,
    processes_of_size,
    reductions,
    size,
    transitions,
)

a0 = Prefix("a", NIL)
ca0 = Prefix("~a", NIL)
b0 = Prefix("b", NIL)


def test_co_actions():
    assert co("a") == "~a" and co("~a") == "a"


def test_congruence_laws():
    assert congruent(Par(a0, NIL), a0)
    assert congruent(Par(a0, b0), Par(b0, a0))
    assert congruent(Par(Par(a0, b0), ca0), Par(a0, Par(b0, ca0)))
    assert not congruent(a0, b0)
    assert not congruent(Prefix("a", b0), Par(a0, b0))


def test_reductions():
    assert reductions(Prefix(TAU, NIL)) == {NIL}
    assert reductions(Par(a0, ca0)) == {NIL}
    assert reductions(a0) == set()
    assert reductions(Par(a0, a0)) == set()


def test_sync_under_context():
    p = Par(Par(Prefix("a", b0), NIL), Par(ca0, Prefix(TAU, NIL)))
    got = {canon(q) for q in reductions(p)}
    assert got == {canon(Par(b0, Prefix(TAU, NIL))), canon(Par(Prefix("a", b0), ca0))}


def test_lts():
    assert transitions(a0) == [("a", NIL)]
    assert transitions(NIL) == []
    labels = sorted(l for l, _ in transitions(Par(a0, ca0)))
    assert labels == ["a", "t", "~a"]
    assert lts_tau_steps(Par(a0, ca0)) == {Par(NIL, NIL)}


def test_enumeration_counts():
    assert len(processes_of_size(1, ("a",))) == 1
    assert len(processes_of_size(2, ("a",))) == 3
    assert all(size(p) == 3 for p in processes_of_size(3, ("a",)))


def test_correspondence_exhaustive_small():
    assert all(check_correspondence(p) for p in enumerate_processes(5, ("a",)))


procs = st.recursive(
    st.just(NIL),
    lambda s: st.one_of(
        st.builds(Prefix, st.sampled_from(["a", "~a", "b", "~b", TAU]), s),
        st.builds(Par, s, s),
    ),
    max_leaves=8,
)


@given(procs)
def test_correspondence(p):
    assert check_correspondence(p)


@given(procs, procs)
def test_reduction_respects_congruence(p, q):
    lhs = {canon(r) for r in reductions(Par(p, q))}
    rhs = {canon(r) for r in reductions(Par(q, p))}
    assert lhs == rhs
