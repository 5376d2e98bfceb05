import pytest

from lmt import layered as L
from lmt.diagram import make_theory, normalize
from lmt.errors import IncoherentComposite, NoBox, SortViolationInFunctorData, WrongLayer
from lmt.signature import Gen, Generator, Id, make_signature, seq, tensor
from lmt.suites import demo_layered_signature, layered_witness_items

SIG = demo_layered_signature()
W = {g.name: g for g in SIG.theories["w"].signature.generators}
T = {g.name: g for g in SIG.theories["t"].signature.generators}
x, y, m = Gen(W["x"]), Gen(W["y"]), Gen(W["m"])
X, Y = Gen(T["X"]), Gen(T["Y"])


def test_free_two_layer_signature_is_valid():
    g = Generator("g", ("a",), ("a",))
    h = Generator("h", ("b",), ("b",))
    lg = L.make_layer_graph(["w", "t"], [("f", "w", "t")])
    sig = L.make_layered_signature(
        lg, {"w": make_theory(make_signature(["a"], [g])), "t": make_theory(make_signature(["b"], [h]))},
        {"f": L.Translation({"a": ("b",)}, {g: Gen(h)})})
    assert not sig.symmetric
    assert {c.name for c in sig.two_cells} >= {"eps[f|a]", "kappa[f|a]"}


def test_functor_data_with_wrong_sort():
    g = Generator("g", ("a",), ("b",))
    lg = L.make_layer_graph(["w"], [("f", "w", "w")])
    th = make_theory(make_signature(["a", "b"], [g, Generator("k", ("b",), ("a",))]))
    tr = L.Translation({"a": ("a",), "b": ("b",)}, {g: Gen(th.signature.generators[1]),
                                                    th.signature.generators[1]: Gen(g)})
    with pytest.raises(SortViolationInFunctorData):
        L.make_layered_signature(lg, {"w": th}, {"f": tr})


def test_incoherent_composite():
    with pytest.raises(IncoherentComposite):
        L.make_layer_graph(["a", "b"], [("f", "a", "b"), ("g", "a", "b")], {("f", "g"): "f"})


def test_circuit_layers_build():
    sig = L.circuit_layers()
    assert sig.symmetric
    assert set(sig.layer_graph.layers) == {"circ", "zx"}


def test_box_sorts():
    assert L.box(SIG, "f", Id("a")).sort == L.box(SIG, "f", Id("a")).sort
    b = L.box(SIG, "f", Id("a"))
    assert (b.dom, b.cod) == (("b@t",), ("b@t",))
    b = L.box(SIG, "f", m)
    assert (b.dom, b.cod) == (("b@t", "b@t"), ("b@t",))


def test_cowindow_window_and_cobox_sorts():
    assert L.cowindow(SIG, "f", Id("a")).dom == ("b@t",)
    assert L.window(SIG, "f", X).dom == ("a@w",)
    c = L.cobox(SIG, "f", (), (), Id("b"))
    assert (c.dom, c.cod) == (("a@w",), ("a@w",))


def test_tensor_across_layers_rejected():
    with pytest.raises(WrongLayer):
        L.layered_sort(SIG, tensor(SIG.internal("w", Id("a")), SIG.internal("t", Id("b"))))


def test_cobox_inside_box_rejected():
    with pytest.raises(WrongLayer):
        L.box(SIG, "f", L.cobox(SIG, "f", (), (), X))


def test_counit_removes_boundary_pair():
    eps = next(c for c in SIG.two_cells if c.name == "eps[f|a]")
    t = seq(SIG.coarsen("f", ["a"]), SIG.refine("f", ["a"]))
    assert normalize(L.apply_two_cell(SIG, eps, t)) == normalize(Id("b@t"))


def test_identity_two_cell_is_noop():
    ident = L.TwoCell("id", SIG.internal("w", x), SIG.internal("w", x))
    assert normalize(L.apply_two_cell(SIG, ident, SIG.internal("w", x))) == normalize(SIG.internal("w", x))


def test_box_to_cowindow_generator_witness_lengths():
    target, fwd, bwd = L.box_to_cowindow(SIG, L.box(SIG, "f", x))
    assert normalize(target) == normalize(L.cowindow(SIG, "f", x))
    assert len(fwd) == 2 and fwd.replays() and bwd.replays()


def test_box_to_cowindow_identity():
    target, fwd, _ = L.box_to_cowindow(SIG, L.box(SIG, "f", Id("a")))
    assert normalize(target) == normalize(L.cowindow(SIG, "f", Id("a")))
    assert fwd.replays()


def test_no_box():
    with pytest.raises(NoBox):
        L.box_to_cowindow(SIG, SIG.internal("t", X))


def test_decompose_boxes_keeps_layers():
    t = seq(L.box(SIG, "f", x), SIG.internal("t", Y))
    out, ws = L.decompose_boxes(SIG, t)
    assert all(w.replays() for w in ws)
    assert not any(L.is_box(g) for g in normalize(out).nodes)
    L.layered_sort(SIG, out)


def test_extend_along_identity_is_alpha():
    alpha = L.TwoCell("alpha", x, y, L.FORWARD)
    assert L.extend_two_cell(SIG, alpha, "id_w") is alpha


def test_extended_cell_rewrites_box():
    alpha = L.TwoCell("alpha", x, y, L.FORWARD)
    e = L.extend_two_cell(SIG, alpha, "f")
    assert normalize(e.lhs) == normalize(L.box(SIG, "f", x))
    assert normalize(e.rhs) == normalize(L.box(SIG, "f", y))
    assert e.witness.replays()


def test_recorded_witnesses_replay():
    items = layered_witness_items()
    assert len(items) == 15
    for label, w in items:
        assert w.replays(), label
        back = w.reversed()
        assert back is None or back.replays(), label


def test_witness_lengths_frozen():
    lengths = {label: len(w) for label, w in layered_witness_items()}
    assert lengths["cowindow-box[x] forward"] == 2
    assert lengths["cowindow-box[m] forward"] == 3
    assert lengths["cobox-composition forward"] == 4


def test_faithfulness_identity_arrow():
    r = L.faithfulness_probe(SIG, "id_w", [(x, x)])
    assert r.windows_are_identities == {"a": "Proved"} and r.all_verified


def test_faithfulness_collapsing_functor_unverified():
    from lmt.suites import _demo_composite_signature

    csig, cx = _demo_composite_signature()
    cy = next(g for g in csig.theories["w"].signature.generators if g.name == "y")
    r = L.faithfulness_probe(csig, "f", [(Gen(cx), Gen(cy))])
    assert not r.all_verified
    assert r.items[0].right == "Proved" and r.items[0].left == "Unknown"


def test_layered_term_avoids_mixed_tensors():
    t = seq(SIG.coarsen("f", ["a", "a"]), SIG.internal("w", m), SIG.refine("f", ["a"]))
    out = L.layered_term(normalize(t))
    assert normalize(out) == normalize(t)
    L.layered_sort(SIG, out)
