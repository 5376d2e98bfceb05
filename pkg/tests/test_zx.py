from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmt.diagram import normalize, rewrite_step
from lmt.errors import DimensionOverflow
from lmt.signature import EMPTY, Id, seq, tensor
from lmt.zx import (
    H,
    Q,
    SWAP,
    X,
    Z,
    check_rule,
    cnot,
    cz,
    evaluate,
    is_circuit,
    lc_to_zx,
    phase,
    prop_equal,
    proportionality,
    rule_instances,
    zx_theory,
)

TH = zx_theory()
phases = st.integers(-16, 16).map(lambda k: Fraction(k, 8))


def test_identity_rule():
    assert normalize(Id(Q)) in rewrite_step(TH, normalize(Z(1, 1, 0)))


def test_fusion_wraps_phase():
    d = normalize(seq(Z(1, 1, Fraction(3, 2)), Z(1, 1, Fraction(3, 4))))
    assert normalize(Z(1, 1, Fraction(1, 4))) in rewrite_step(TH, d)


def test_phase_normalised_mod_two():
    assert phase(Fraction(5, 2)) == Fraction(1, 2)
    assert phase(-1) == 1


def test_empty_diagram():
    assert EMPTY.sort.arity == () and np.allclose(evaluate(EMPTY), [[1]])


def test_identity_matrix():
    assert np.allclose(evaluate(Id(Q)), np.eye(2))


def test_hadamard_involution():
    assert np.allclose(evaluate(seq(H(), H())), np.eye(2), atol=1e-12)


def test_cnot_matrix():
    m = evaluate(cnot()) * np.sqrt(2)
    want = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    assert np.allclose(m, want)


def test_cz_is_diagonal():
    m = evaluate(cz())
    assert prop_equal(m, np.diag([1, 1, 1, -1]).astype(complex))


def test_prop_equal_cases():
    a = evaluate(cnot())
    assert prop_equal(a, 2 * a)
    assert prop_equal(a, a + 1e-12 * np.ones_like(a))
    assert not prop_equal(evaluate(tensor(Id(Q), Id(Q))), evaluate(SWAP()))
    assert proportionality(a, 2 * a) == pytest.approx(2)


def test_is_circuit():
    assert is_circuit(H())
    assert not is_circuit(Z(2, 1))
    assert is_circuit(EMPTY)
    assert is_circuit(cnot()) and is_circuit(cz())


def test_lc_words():
    assert lc_to_zx(()) == Id(Q)
    assert normalize(lc_to_zx(("g",))) == normalize(Z(1, 1, 1))
    assert normalize(lc_to_zx(("r/2", "g/2"))) == normalize(seq(X(1, 1, Fraction(1, 2)), Z(1, 1, Fraction(1, 2))))


def test_dimension_cap():
    big = tensor(*[Z(0, 1) for _ in range(12)])
    with pytest.raises(DimensionOverflow):
        evaluate(big, cap=10)


def test_rule_instance_count_frozen():
    assert len(list(rule_instances())) == 5644


def test_all_rule_families_present():
    names = {e.name.split("[")[0] for e in rule_instances()}
    assert {"fusion", "identity", "hadamard-involution", "colour", "pi-copy", "state-copy", "bialgebra",
            "hopf", "euler"} <= names


@pytest.mark.parametrize("family", ["fusion", "colour", "pi-copy", "bialgebra", "euler", "hopf", "state-copy"])
def test_rule_family_sound(family):
    eqs = [e for e in rule_instances() if e.name.split("[")[0] == family]
    assert eqs and all(check_rule(e) for e in eqs)


@given(phases, phases)
def test_fusion_is_addition(a, b):
    lhs = evaluate(seq(Z(1, 1, a), Z(1, 1, b)))
    assert prop_equal(lhs, evaluate(Z(1, 1, a + b)))


@given(phases, st.integers(0, 2), st.integers(0, 2))
def test_colour_change(a, n, m):
    lhs = seq(tensor(*[H()] * n) if n else EMPTY, X(n, m, a), tensor(*[H()] * m) if m else EMPTY)
    assert prop_equal(evaluate(lhs), evaluate(Z(n, m, a)))
