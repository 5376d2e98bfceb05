import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmt.errors import DomainMismatch, InvalidChannel, NotFullSupport, NotMarginallyFullSupport
from lmt.prob import (
    ONE,
    Channel,
    CoparaChannel,
    ParaChannel,
    check_box_identity,
    check_box_postcompose,
    check_disintegration,
    check_full_support_identity,
    check_nested,
    check_uniqueness,
    compose,
    conditional_box,
    copy,
    discard,
    finite_set,
    identity,
    make_channel,
    marginal,
    product,
    random_channel,
    random_copara,
    swap,
    tensor,
)

XS, YS = ("x0", "x1"), ("y0", "y1")


def joint():
    k = {("x0", "y0"): F(1, 10), ("x0", "y1"): F(3, 10), ("x1", "y0"): F(1, 5), ("x1", "y1"): F(2, 5)}
    return CoparaChannel(XS, YS, make_channel(["z"], product(XS, YS), {"z": k}))


def test_worked_conditional():
    c = joint()
    m = marginal(c)
    assert m("z") == {"x0": F(2, 5), "x1": F(3, 5)}
    b = conditional_box(c)
    assert b.inner(("x0", "z")) == {"y0": F(1, 4), "y1": F(3, 4)}
    assert b.inner(("x1", "z")) == {"y0": F(1, 3), "y1": F(2, 3)}
    assert check_disintegration(c)


def test_compose_example():
    f = make_channel(["x"], ["y0", "y1"], {"x": {"y0": F(1, 2), "y1": F(1, 2)}})
    g = make_channel(["y0", "y1"], ["z"], {"y0": {"z": 1}, "y1": {"z": 1}})
    assert compose(f, g).prob("x", "z") == 1


def test_compose_domain_mismatch():
    with pytest.raises(DomainMismatch):
        compose(identity(XS), identity(YS))


def test_invalid_channels():
    with pytest.raises(InvalidChannel):
        Channel(("a",), ("b", "c"), ((F(1, 2), F(1, 3)),))
    with pytest.raises(InvalidChannel):
        Channel(("a",), ("b", "c"), ((F(3, 2), F(-1, 2)),))
    with pytest.raises(InvalidChannel):
        make_channel(["a"], ["b"], {"a": {"c": 1}})


def test_copy_then_discard_is_identity():
    back = make_channel(product(XS, ONE), XS, lambda p: {p[0]: 1})
    assert compose(compose(copy(XS), tensor(identity(XS), discard(XS))), back) == identity(XS)


def test_swap_twice():
    assert compose(swap(XS, YS), swap(YS, XS)) == identity(product(XS, YS))


def test_marginally_full_support_required():
    inner = make_channel(["z"], product(XS, YS), {"z": {("x0", "y0"): 1}})
    with pytest.raises(NotMarginallyFullSupport):
        conditional_box(CoparaChannel(XS, YS, inner))


def test_uniqueness_rejects_partial_support():
    c = joint()
    h = make_channel(["z"], XS, {"z": {"x0": 1}})
    with pytest.raises(NotFullSupport):
        check_uniqueness(c, h, conditional_box(c))
    with pytest.raises(NotFullSupport):
        check_full_support_identity(h)


def test_uniqueness_on_the_true_disintegration():
    c = joint()
    r = check_uniqueness(c, marginal(c), conditional_box(c))
    assert r.holds and r.premise


def test_false_premise_is_vacuous():
    c = joint()
    h = make_channel(["z"], XS, {"z": {"x0": F(1, 2), "x1": F(1, 2)}})
    r = check_uniqueness(c, h, conditional_box(c))
    assert r.holds and not r.premise and r.note == "premise-false"


def test_para_shape_checked():
    with pytest.raises(DomainMismatch):
        ParaChannel(XS, ("z",), identity(XS))


@given(st.integers(0, 2**32 - 1))
def test_disintegration_random(seed):
    rng = random.Random(seed)
    c = random_copara(rng, rng.randint(1, 3), rng.randint(1, 3), rng.randint(1, 3))
    assert check_disintegration(c)
    g = random_channel(rng, c.exposed, finite_set("w", rng.randint(1, 3)))
    assert check_box_postcompose(c, g)


@given(st.integers(0, 2**32 - 1))
def test_box_identity_and_full_support(seed):
    rng = random.Random(seed)
    zs, xs = finite_set("z", rng.randint(1, 3)), finite_set("x", rng.randint(1, 3))
    assert check_box_identity(random_channel(rng, zs, xs))
    assert check_full_support_identity(random_channel(rng, zs, xs, positive=True))


@given(st.integers(0, 2**32 - 1))
def test_nested_conditioning(seed):
    rng = random.Random(seed)
    x1, x2 = finite_set("a", rng.randint(1, 2)), finite_set("b", rng.randint(1, 2))
    c = random_copara(rng, rng.randint(1, 2), len(x1) * len(x2), rng.randint(1, 3))
    c = CoparaChannel(product(x1, x2), c.exposed, Channel(c.domain, product(product(x1, x2), c.exposed), c.inner.rows))
    assert check_nested(c, x1, x2)
