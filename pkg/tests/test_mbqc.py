import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lmt.errors import InvalidGraph, LengthMismatch, NameClash, NotAnEdge, NotRemovable, UnknownVertex
from lmt.mbqc import (
    MbqcGraph,
    SimpleGraph,
    all_simple_graphs,
    applicable_ops,
    apply_op,
    embed_mbqc,
    evaluate_graph,
    local_complement,
    local_complement_simple,
    make_graph,
    pivot,
    pivot_simple,
    pivot_three_sets,
    random_graph,
    remove_vertex,
    rename,
    soundness_check,
    translate_D,
)
from lmt.signature import generators_in

CAP = 16
Q4 = Fraction(1, 4)


def small_graph():
    return make_graph(["u", "a", "o"], [("u", "a"), ("u", "o")], [], ["o"],
                      {"u": ("XY", Q4), "a": ("XY", Fraction(1, 2))})


def test_lc_on_a_path_adds_the_edge():
    g = SimpleGraph(["a", "u", "b"], [("a", "u"), ("u", "b")])
    assert local_complement_simple(g, "u").sorted_edges() == [("a", "b"), ("a", "u"), ("b", "u")]


def test_lc_isolated_vertex():
    g = SimpleGraph(["u", "v"], [])
    assert local_complement_simple(g, "u") == g


def test_lc_is_an_involution_on_small_graphs():
    for n in range(1, 5):
        for g in all_simple_graphs(n):
            for v in sorted(g.vertices):
                assert local_complement_simple(local_complement_simple(g, v), v) == g


def test_pivot_single_edge():
    g = SimpleGraph(["u", "v"], [("u", "v")])
    assert pivot_simple(g, "u", "v") == g == pivot_three_sets(g, "u", "v")


def test_pivot_common_neighbour():
    g = SimpleGraph(["u", "v", "w"], [("u", "v"), ("u", "w"), ("v", "w")])
    assert pivot_simple(g, "u", "v") == pivot_three_sets(g, "u", "v")


def test_pivot_needs_an_edge():
    with pytest.raises(NotAnEdge):
        pivot_simple(SimpleGraph(["u", "v"], []), "u", "v")


def test_graph_validation():
    with pytest.raises(InvalidGraph):
        make_graph(["a"], [("a", "a")], [], ["a"], {})
    with pytest.raises(InvalidGraph):
        make_graph(["a", "b"], [], [], ["a"], {})  # b is unmeasured
    with pytest.raises(InvalidGraph):
        make_graph(["a"], [], [], ["a"], {}, out_labels={"a": ("nope",)})


def test_lc_non_input_labels():
    h = local_complement(small_graph(), "u")
    assert h.measure["u"] == ("XZ", Q4)
    assert h.measure["a"] == ("XY", Fraction(0))
    assert h.out_labels["o"] == ("-g/2",)
    assert h.graph.sorted_edges() == [("a", "o"), ("a", "u"), ("o", "u")]


def test_lc_on_an_input_adds_a_vertex():
    g = make_graph(["u", "o"], [("u", "o")], ["u"], ["o"], {"u": ("XY", Q4)})
    h = local_complement(g, "u")
    assert len(h.vertices) == 3
    assert h.inputs == ("u'1",)
    assert h.measure["u'1"] == ("XY", Fraction(3, 2))


def test_lc_unknown_vertex():
    with pytest.raises(UnknownVertex):
        local_complement(small_graph(), "zz")


def test_pivot_is_three_lcs():
    g = small_graph()
    assert pivot(g, "u", "a") == local_complement(local_complement(local_complement(g, "u"), "a"), "u")


def test_pivot_on_input_grows():
    g = make_graph(["u", "v", "o"], [("u", "v"), ("v", "o")], ["u"], ["o"], {"u": ("XY", 0), "v": ("XY", 0)})
    assert len(pivot(g, "u", "v").vertices) > len(g.vertices)


def test_remove_vertex_with_pi():
    g = make_graph(["u", "a", "o"], [("u", "a"), ("u", "o")], [], ["o"], {"u": ("XZ", 1), "a": ("XY", Q4)})
    h = remove_vertex(g, "u")
    assert h.measure == {"a": ("XY", Fraction(5, 4))}
    assert h.out_labels["o"] == ("g",)


def test_remove_vertex_with_zero_keeps_labels():
    g = make_graph(["u", "a", "o"], [("u", "a"), ("u", "o")], [], ["o"], {"u": ("YZ", 0), "a": ("XY", Q4)})
    h = remove_vertex(g, "u")
    assert h.out_labels["o"] == () and h.measure["a"] == ("XY", Q4)


def test_remove_output_rejected():
    with pytest.raises(NotRemovable):
        remove_vertex(small_graph(), "o")
    with pytest.raises(NotRemovable):
        remove_vertex(small_graph(), "a")  # XY plane


def test_rename():
    g = small_graph()
    assert rename(g, [], []) == g
    h = rename(g, ["u", "a"], ["p", "q"])
    assert rename(h, ["p", "q"], ["u", "a"]) == g
    with pytest.raises(NameClash):
        rename(g, ["u"], ["a"])
    with pytest.raises(LengthMismatch):
        rename(g, ["u"], [])


def test_translate_single_output():
    d = translate_D(make_graph(["o"], [], [], ["o"], {}))
    assert (d.dom, d.cod) == ((), ("q",))
    assert np.allclose(evaluate_graph(make_graph(["o"], [], [], ["o"], {})).ravel(), [1, 1])


def test_translate_two_outputs_hadamard_edge():
    d = translate_D(make_graph(["o", "p"], [("o", "p")], [], ["o", "p"], {}))
    names = [g.name for g in generators_in(d)]
    assert names.count("H") == 1 and names.count("Z") == 2


def test_embed_has_empty_labels():
    base = MbqcGraph(SimpleGraph(["a", "o"], [("a", "o")]), ("a",), ("o",), {"a": ("XY", Q4)})
    g = embed_mbqc(base)
    assert all(w == () for w in list(g.in_labels.values()) + list(g.out_labels.values()))
    assert g.base == base
    assert translate_D(g) == translate_D(make_graph(["a", "o"], [("a", "o")], ["a"], ["o"], {"a": ("XY", Q4)}))


def test_soundness_examples():
    g = small_graph()
    assert soundness_check(g, ("lc", "a"), cap=CAP)
    assert soundness_check(g, ("rename", ("u",), ("w",)), cap=CAP)
    g2 = make_graph(["u", "a", "o"], [("u", "a"), ("u", "o")], [], ["o"], {"u": ("XZ", 1), "a": ("XY", Q4)})
    assert soundness_check(g2, ("rm", "u"), cap=CAP)


def test_applicable_ops_cover_all_kinds():
    rng = random.Random(3)
    kinds = set()
    for _ in range(60):
        kinds |= {op[0] for op in applicable_ops(random_graph(rng))}
    assert kinds == {"lc", "pivot", "rm", "rename"}


@given(st.integers(0, 2**32 - 1))
def test_random_rewrites_sound(seed):
    rng = random.Random(seed)
    g = random_graph(rng, max_vertices=4)
    ops = applicable_ops(g)
    op = ops[rng.randrange(len(ops))]
    assert soundness_check(g, op, cap=CAP)


@given(st.integers(0, 2**32 - 1))
def test_double_lc_on_non_input_restores_graph_shape(seed):
    rng = random.Random(seed)
    g = random_graph(rng)
    for v in sorted(g.vertices - set(g.inputs)):
        h = apply_op(apply_op(g, ("lc", v)), ("lc", v))
        assert h.graph == g.graph
