"""Layered deflational theories, flattened into one monoidal theory.

Every colour ``a`` of layer ``w`` becomes the colour ``a@w`` and every
generator ``g`` of that layer becomes ``g@w``. An arrow ``f: w -> t`` of the
layer graph contributes, per colour ``a`` of ``w``,

  refine[f]  : a@w   -> f(a)@t
  coarsen[f] : f(a)@t -> a@w

and two generator families carrying a payload:

  box[f]   : f(A)@t -> f(B)@t         a boxed term x : A -> B of layer w
  cobox[f] : CAD@w  -> CBD@w          a term y : f(A) -> f(B) of layer t

A layered term is an ordinary term over the flattened signature whose
domain lies in a single layer and whose codomain lies in a single layer.
Tensor products are only formed between terms living in the same layers.

The 2-cells are equations of the flattened theory. Those with direction
``forward`` (the counit and its section) are only used left to right.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .diagram import (
    CanonicalDiagram,
    DerivabilityVerdict,
    Equation,
    RewriteStep,
    Theory,
    normalize,
    replay,
    rewrite_steps,
    search,
)
from .errors import (
    IncoherentComposite,
    LayerMismatch,
    NoBox,
    NoMatch,
    SortMismatch,
    SortViolationInFunctorData,
    UnknownGenerator,
    WrongLayer,
)
from .signature import (
    EMPTY,
    Gen,
    Generator,
    Id,
    IdEmpty,
    Seq,
    Signature,
    Tensor,
    Term,
    Word,
    generators_in,
    ident,
    seq,
    tensor,
)
from .theories import SYMMETRIC, swap, swap_word

FORWARD = "forward"
BIDIRECTIONAL = "bidirectional"


# ---------------------------------------------------------------------------
# layer graphs


@dataclass(frozen=True)
class Arrow:
    name: str
    src: str
    dst: str


def identity_arrow_name(layer: str) -> str:
    return f"id_{layer}"


@dataclass(frozen=True)
class LayerGraph:
    layers: tuple[str, ...]
    arrows: Mapping[str, Arrow]
    composites: Mapping[tuple[str, str], str] = field(default_factory=dict)

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrows[name]
        except KeyError:
            raise UnknownGenerator(f"no arrow {name!r}") from None

    def is_identity(self, name: str) -> bool:
        a = self.arrow(name)
        return a.src == a.dst and name == identity_arrow_name(a.src)


def make_layer_graph(layers: Iterable[str], arrows: Iterable[tuple[str, str, str]],
                     composites: Optional[Mapping[tuple[str, str], str]] = None) -> LayerGraph:
    """``composites[(f, g)] = h`` records that doing ``f`` then ``g`` is ``h``."""
    layers = tuple(dict.fromkeys(layers))
    table: dict[str, Arrow] = {}
    for lay in layers:
        if "@" in lay:
            raise IncoherentComposite(f"layer name {lay!r} may not contain '@'")
        n = identity_arrow_name(lay)
        table[n] = Arrow(n, lay, lay)
    for name, src, dst in arrows:
        if src not in layers or dst not in layers:
            raise IncoherentComposite(f"arrow {name} joins unknown layers {src}->{dst}")
        if name in table and table[name] != Arrow(name, src, dst):
            raise IncoherentComposite(f"arrow {name} declared twice")
        table[name] = Arrow(name, src, dst)
    comp = dict(composites or {})
    for lay in layers:
        i = identity_arrow_name(lay)
        for a in table.values():
            if a.src == lay:
                comp.setdefault((i, a.name), a.name)
            if a.dst == lay:
                comp.setdefault((a.name, i), a.name)
    for (f, g), h in comp.items():
        for n in (f, g, h):
            if n not in table:
                raise IncoherentComposite(f"composite mentions unknown arrow {n}")
        af, ag, ah = table[f], table[g], table[h]
        if af.dst != ag.src or ah.src != af.src or ah.dst != ag.dst:
            raise IncoherentComposite(f"{f} then {g} cannot be {h}")
    for (f, g), fg in comp.items():
        for (g2, k), gk in comp.items():
            if g2 != g:
                continue
            left, right = comp.get((fg, k)), comp.get((f, gk))
            if left is not None and right is not None and left != right:
                raise IncoherentComposite(f"composites of {f},{g},{k} disagree: {left} vs {right}")
    return LayerGraph(layers, table, comp)


# ---------------------------------------------------------------------------
# functor data


@dataclass(frozen=True)
class Translation:
    """Where an arrow sends colours (to words) and generators (to terms)."""

    colour_map: Mapping[str, Word]
    generator_map: Union[Mapping[Generator, Term], Callable[[Generator], Term]]

    def word(self, w: Iterable[str]) -> Word:
        out: tuple = ()
        for c in w:
            out += tuple(self.colour_map[c])
        return out

    def generator(self, g: Generator) -> Term:
        gm = self.generator_map
        if callable(gm):
            return gm(g)
        if g not in gm and g.name == "swap" and len(g.arity) == 2 and g.coarity == g.arity[::-1]:
            # symmetries go to symmetries unless stated otherwise
            return swap_word(self.colour_map[g.arity[0]], self.colour_map[g.arity[1]])
        return gm[g]

    def image(self, t: Term) -> Term:
        if isinstance(t, Gen):
            return self.generator(t.generator)
        if isinstance(t, Id):
            return ident(self.colour_map[t.colour])
        if isinstance(t, IdEmpty):
            return t
        if isinstance(t, Seq):
            return seq(self.image(t.left), self.image(t.right))
        if isinstance(t, Tensor):
            return tensor(self.image(t.left), self.image(t.right))
        raise TypeError(t)

    def __hash__(self):
        return id(self)


def identity_translation(sig: Signature) -> Translation:
    return Translation({c: (c,) for c in sig.colours}, lambda g: Gen(g))


# ---------------------------------------------------------------------------
# tagging


def tag_colour(c: str, layer: str) -> str:
    return f"{c}@{layer}"


def tag_word(w: Iterable[str], layer: str) -> Word:
    return tuple(tag_colour(c, layer) for c in w)


def tag_generator(g: Generator, layer: str) -> Generator:
    return Generator(f"{g.name}@{layer}", tag_word(g.arity, layer), tag_word(g.coarity, layer),
                     g.attributes, g.payload)


def tag_term(t: Term, layer: str) -> Term:
    if isinstance(t, Gen):
        return Gen(tag_generator(t.generator, layer))
    if isinstance(t, Id):
        return Id(tag_colour(t.colour, layer))
    if isinstance(t, IdEmpty):
        return t
    if isinstance(t, Seq):
        return Seq(tag_term(t.left, layer), tag_term(t.right, layer))
    if isinstance(t, Tensor):
        return Tensor(tag_term(t.left, layer), tag_term(t.right, layer))
    raise TypeError(t)


def split_colour(c: str) -> tuple[str, str]:
    base, _, layer = c.rpartition("@")
    if not base:
        raise WrongLayer(f"colour {c!r} carries no layer")
    return base, layer


def untag_generator(g: Generator) -> tuple[str, Generator]:
    base, _, layer = g.name.rpartition("@")
    if not base:
        raise WrongLayer(f"{g.name} is not an internal generator")
    strip = lambda w: tuple(split_colour(c)[0] for c in w)
    return layer, Generator(base, strip(g.arity), strip(g.coarity), g.attributes, g.payload)


def word_layer(w: Iterable[str]) -> Optional[str]:
    layers = {split_colour(c)[1] for c in w}
    if len(layers) > 1:
        raise WrongLayer(f"word {tuple(w)} mixes layers {sorted(layers)}")
    return next(iter(layers), None)


def _digest(obj) -> str:
    return hashlib.sha1(repr(obj).encode()).hexdigest()[:10]


# ---------------------------------------------------------------------------
# boundary, box and cobox generators


@dataclass(frozen=True)
class BoxPayload:
    arrow: str
    a: Word
    b: Word
    inner: CanonicalDiagram

    def key(self):
        return ("box", self.arrow, self.a, self.b, self.inner.key())

    def __repr__(self):
        return f"box[{self.arrow}]{{{self.inner}}}"


@dataclass(frozen=True)
class CoboxPayload:
    arrow: str
    left: Word
    right: Word
    a: Word
    b: Word
    inner: CanonicalDiagram

    def key(self):
        return ("cobox", self.arrow, self.left, self.right, self.a, self.b, self.inner.key())

    def __repr__(self):
        return f"cobox[{self.arrow}|{','.join(self.left)}|{','.join(self.right)}]{{{self.inner}}}"


def is_boundary(g: Generator) -> bool:
    return g.name.startswith(("refine[", "coarsen["))


def is_box(g: Generator) -> bool:
    return isinstance(g.payload, BoxPayload)


def is_cobox(g: Generator) -> bool:
    return isinstance(g.payload, CoboxPayload)


@dataclass(frozen=True)
class TwoCell:
    name: str
    lhs: Term
    rhs: Term
    direction: str = BIDIRECTIONAL
    witness: Optional["Witness"] = None

    def __post_init__(self):
        if self.direction not in (FORWARD, BIDIRECTIONAL):
            raise ValueError(f"direction must be {FORWARD} or {BIDIRECTIONAL}")
        if self.lhs.sort != self.rhs.sort:
            raise SortMismatch(f"2-cell {self.name}: {self.lhs.sort} vs {self.rhs.sort}")

    def equation(self) -> Equation:
        return Equation(self.name, self.lhs, self.rhs)


@dataclass(frozen=True)
class Witness:
    """A replayable derivation in a flattened theory. ``equations`` is the
    pool of equation instances the steps were drawn from (None: all)."""

    theory: Theory
    start: CanonicalDiagram
    steps: tuple[RewriteStep, ...]
    goal: CanonicalDiagram
    equations: Optional[tuple[Equation, ...]] = None

    def replays(self) -> bool:
        eqs = None if self.equations is None else list(self.equations)
        return replay(self.theory, self.start, self.steps, self.goal, eqs)

    def reversed(self) -> Optional["Witness"]:
        """The reverse derivation, when every step used is invertible."""
        nodes = [self.start] + [s.result for s in self.steps]
        back = []
        for i in range(len(self.steps) - 1, -1, -1):
            s = self.steps[i]
            if s.equation in self.theory.oneway:
                return None
            back.append(RewriteStep(s.equation, "<-" if s.orientation == "->" else "->", nodes[i]))
        return Witness(self.theory, self.goal, tuple(back), self.start, self.equations)

    def __len__(self):
        return len(self.steps)


# ---------------------------------------------------------------------------
# layered signatures


@dataclass(frozen=True, eq=False)
class LayeredSignature:
    layer_graph: LayerGraph
    theories: Mapping[str, Theory]
    functors: Mapping[str, Translation]
    symmetric: bool
    flat: Theory
    two_cells: tuple[TwoCell, ...]

    def arrow(self, f: str) -> Arrow:
        return self.layer_graph.arrow(f)

    # boundaries -----------------------------------------------------------

    def refine_gen(self, f: str, a: str) -> Generator:
        ar = self.arrow(f)
        return Generator(f"refine[{f}]", (tag_colour(a, ar.src),), tag_word(self.functors[f].word((a,)), ar.dst))

    def coarsen_gen(self, f: str, a: str) -> Generator:
        ar = self.arrow(f)
        return Generator(f"coarsen[{f}]", tag_word(self.functors[f].word((a,)), ar.dst), (tag_colour(a, ar.src),))

    def refine(self, f: str, word: Iterable[str]) -> Term:
        """The refinement boundary on a word of the source layer (untagged colours)."""
        w = tuple(word)
        if not w:
            return EMPTY
        return tensor(*[Gen(self.refine_gen(f, a)) for a in w])

    def coarsen(self, f: str, word: Iterable[str]) -> Term:
        w = tuple(word)
        if not w:
            return EMPTY
        return tensor(*[Gen(self.coarsen_gen(f, a)) for a in w])

    def internal(self, layer: str, t: Term) -> Term:
        if layer not in self.theories:
            raise WrongLayer(f"unknown layer {layer!r}")
        return tag_term(t, layer)

    def ident(self, layer: str, word: Iterable[str]) -> Term:
        return ident(tag_word(word, layer))

    def colours(self, layer: str) -> tuple[str, ...]:
        return self.theories[layer].signature.colours

    # terms living in one layer --------------------------------------------

    def in_layer(self, layer: str, x: Term, what: str = "term") -> Term:
        """Accept an untagged term of the layer theory or a flattened term whose
        generators are internal to the layer or boxes landing in it."""
        if _is_untagged(x):
            return self.internal(layer, x)
        for g in generators_in(x):
            if is_cobox(g):
                raise WrongLayer(f"a cobox is not an internal term and cannot be used as the {what}")
            if is_boundary(g):
                raise WrongLayer(f"boundary {g.name} inside the {what}")
            if is_box(g):
                if self.arrow(g.payload.arrow).dst != layer:
                    raise WrongLayer(f"{g.payload!r} does not land in layer {layer}")
                continue
            if untag_generator(g)[0] != layer:
                raise WrongLayer(f"{g.name} is not in layer {layer}")
        for c in x.dom + x.cod:
            if split_colour(c)[1] != layer:
                raise WrongLayer(f"colour {c} is not in layer {layer}")
        return x

    def preimage(self, f: str, word: Word) -> Word:
        """The unique word A of the source layer with f(A) = ``word`` (tagged or not)."""
        ar = self.arrow(f)
        target = tuple(split_colour(c)[0] if "@" in c else c for c in word)
        tr = self.functors[f]
        sols: list[Word] = []

        def go(i: int, acc: tuple):
            if len(sols) > 1:
                return
            if i == len(target):
                sols.append(acc)
                return
            for a in self.colours(ar.src):
                img = tuple(tr.colour_map[a])
                if not img:
                    continue
                if target[i:i + len(img)] == img:
                    go(i + len(img), acc + (a,))

        go(0, ())
        if len(sols) != 1:
            raise SortMismatch(f"cannot recover a unique preimage of {target} under {f}; pass it explicitly")
        return sols[0]

    def box_gen(self, f: str, x: Term) -> Generator:
        ar = self.arrow(f)
        x = self.in_layer(ar.src, x, "box contents")
        a = tuple(split_colour(c)[0] for c in x.dom)
        b = tuple(split_colour(c)[0] for c in x.cod)
        tr = self.functors[f]
        return Generator(f"box[{f}]", tag_word(tr.word(a), ar.dst), tag_word(tr.word(b), ar.dst),
                         payload=BoxPayload(f, a, b, normalize(x)))

    def cobox_gen(self, f: str, left: Iterable[str], right: Iterable[str], y: Term,
                  a: Optional[Iterable[str]] = None, b: Optional[Iterable[str]] = None) -> Generator:
        ar = self.arrow(f)
        y = self.in_layer(ar.dst, y, "cobox contents")
        a = tuple(a) if a is not None else self.preimage(f, y.dom)
        b = tuple(b) if b is not None else self.preimage(f, y.cod)
        tr = self.functors[f]
        if tag_word(tr.word(a), ar.dst) != y.dom or tag_word(tr.word(b), ar.dst) != y.cod:
            raise SortMismatch(f"cobox contents have sort {y.sort}, expected ({tr.word(a)}, {tr.word(b)}) under {f}")
        left, right = tuple(left), tuple(right)
        return Generator(f"cobox[{f}]", tag_word(left + a + right, ar.src), tag_word(left + b + right, ar.src),
                         payload=CoboxPayload(f, left, right, a, b, normalize(y)))


def _is_untagged(t: Term) -> bool:
    cols = t.dom + t.cod
    gens = generators_in(t)
    if any("@" in c for c in cols):
        return False
    return all("@" not in g.name and not is_box(g) and not is_cobox(g) and not is_boundary(g) for g in gens) and \
        all(all("@" not in c for c in g.arity + g.coarity) for g in gens)


# ---------------------------------------------------------------------------
# layered term formers


def box(sig: LayeredSignature, f: str, x: Term) -> Term:
    """The functor box of ``x`` along ``f``."""
    return Gen(sig.box_gen(f, x))


def cowindow(sig: LayeredSignature, f: str, x: Term) -> Term:
    """coarsen ; x ; refine, which lives in the target layer of ``f``."""
    ar = sig.arrow(f)
    x = sig.in_layer(ar.src, x, "cowindow contents")
    a = [split_colour(c)[0] for c in x.dom]
    b = [split_colour(c)[0] for c in x.cod]
    return seq(sig.coarsen(f, a), x, sig.refine(f, b))


def window(sig: LayeredSignature, f: str, y: Term, a: Optional[Iterable[str]] = None,
           b: Optional[Iterable[str]] = None) -> Term:
    """refine ; y ; coarsen, which lives in the source layer of ``f``."""
    ar = sig.arrow(f)
    y = sig.in_layer(ar.dst, y, "window contents")
    a = tuple(a) if a is not None else sig.preimage(f, y.dom)
    b = tuple(b) if b is not None else sig.preimage(f, y.cod)
    return seq(sig.refine(f, a), y, sig.coarsen(f, b))


def cobox(sig: LayeredSignature, f: str, left: Iterable[str], right: Iterable[str], y: Term,
          a: Optional[Iterable[str]] = None, b: Optional[Iterable[str]] = None) -> Term:
    return Gen(sig.cobox_gen(f, left, right, y, a, b))


def cobox_unfolded(sig: LayeredSignature, g: Generator) -> Term:
    """The right-hand side of the defining 1-equation of a cobox: every wire
    is refined, the contents act in the middle, and everything is coarsened."""
    p: CoboxPayload = g.payload
    ar = sig.arrow(p.arrow)
    tr = sig.functors[p.arrow]
    mid = tensor(ident(tag_word(tr.word(p.left), ar.dst)), p.inner.to_term(),
                 ident(tag_word(tr.word(p.right), ar.dst)))
    return seq(sig.refine(p.arrow, p.left + p.a + p.right), mid, sig.coarsen(p.arrow, p.left + p.b + p.right))


@dataclass(frozen=True)
class LayeredSort:
    dom: Word
    dom_layer: Optional[str]
    cod: Word
    cod_layer: Optional[str]

    def __str__(self):
        d = ",".join(split_colour(c)[0] for c in self.dom)
        c = ",".join(split_colour(x)[0] for x in self.cod)
        return f"({d} : {self.dom_layer or '-'} | {c} : {self.cod_layer or '-'})"


def layered_sort(sig: LayeredSignature, t: Term) -> LayeredSort:
    """Sort of a layered term; rejects tensors across different layers."""
    _check_tensors(t)
    return LayeredSort(t.dom, word_layer(t.dom), t.cod, word_layer(t.cod))


def _check_tensors(t: Term) -> None:
    if isinstance(t, Seq):
        _check_tensors(t.left)
        _check_tensors(t.right)
    elif isinstance(t, Tensor):
        _check_tensors(t.left)
        _check_tensors(t.right)
        for side in ("dom", "cod"):
            layers = {split_colour(c)[1] for c in getattr(t.left, side) + getattr(t.right, side)}
            if len(layers) > 1:
                raise WrongLayer(f"tensor across layers {sorted(layers)}")
    else:
        word_layer(t.dom)
        word_layer(t.cod)


# ---------------------------------------------------------------------------
# construction


def make_layered_signature(layer_graph: LayerGraph, theories: Mapping[str, Theory],
                           functors: Mapping[str, Translation], symmetric: Optional[bool] = None) -> LayeredSignature:
    theories = dict(theories)
    for lay in layer_graph.layers:
        if lay not in theories:
            raise SortViolationInFunctorData(f"no theory for layer {lay}")
    functors = dict(functors)
    for name, ar in layer_graph.arrows.items():
        if name == identity_arrow_name(ar.src) and name not in functors:
            functors[name] = identity_translation(theories[ar.src].signature)
        if name not in functors:
            raise SortViolationInFunctorData(f"no functor data for arrow {name}")
        _check_translation(name, functors[name], theories[ar.src], theories[ar.dst])
    for (f, g), h in layer_graph.composites.items():
        src = theories[layer_graph.arrows[f].src].signature
        for c in src.colours:
            lhs = functors[g].word(functors[f].word((c,)))
            if lhs != functors[h].word((c,)):
                raise IncoherentComposite(f"{f} then {g} sends {c} to {lhs}, but {h} sends it to {functors[h].word((c,))}")
        for gen in src.generators:
            a = normalize(functors[g].image(functors[f].generator(gen)))
            b = normalize(functors[h].generator(gen))
            if a != b:
                raise IncoherentComposite(f"{f} then {g} and {h} disagree on {gen}")
    if symmetric is None:
        symmetric = all(SYMMETRIC in t.flags for t in theories.values())
    proto = LayeredSignature(layer_graph, theories, functors, symmetric, None, ())  # type: ignore[arg-type]
    cells = _structural_cells(proto)
    flat = _flat_theory(proto, cells)
    return LayeredSignature(layer_graph, theories, functors, symmetric, flat, tuple(cells))


def _check_translation(name: str, tr: Translation, src: Theory, dst: Theory) -> None:
    for c in src.signature.colours:
        if c not in tr.colour_map:
            raise SortViolationInFunctorData(f"{name}: colour {c} has no image")
        for d in tr.colour_map[c]:
            if d not in dst.signature.colours:
                raise SortViolationInFunctorData(f"{name}: image colour {d} is not in the target")
    for g in src.signature.generators:
        try:
            img = tr.generator(g)
        except KeyError:
            raise SortViolationInFunctorData(f"{name}: generator {g} has no image") from None
        want = (tr.word(g.arity), tr.word(g.coarity))
        if (img.dom, img.cod) != want:
            raise SortViolationInFunctorData(f"{name}: {g.name} has image of sort {img.sort}, expected {want}")


def _structural_cells(sig: LayeredSignature) -> list[TwoCell]:
    cells: list[TwoCell] = []
    lg = sig.layer_graph
    for f, ar in sorted(lg.arrows.items()):
        tr = sig.functors[f]
        for a in sig.colours(ar.src):
            fa = tag_word(tr.word((a,)), ar.dst)
            pair = seq(Gen(sig.coarsen_gen(f, a)), Gen(sig.refine_gen(f, a)))
            cells.append(TwoCell(f"eps[{f}|{a}]", pair, ident(fa), FORWARD))
            cells.append(TwoCell(f"kappa[{f}|{a}]", ident(fa), pair, FORWARD))
            if lg.is_identity(f):
                cells.append(TwoCell(f"refine-id[{f}|{a}]", Gen(sig.refine_gen(f, a)), Id(tag_colour(a, ar.src))))
                cells.append(TwoCell(f"coarsen-id[{f}|{a}]", Gen(sig.coarsen_gen(f, a)), Id(tag_colour(a, ar.src))))
        if sig.symmetric and not lg.is_identity(f):
            for a in sig.colours(ar.src):
                for b in sig.colours(ar.src):
                    sw = Gen(tag_generator(swap(a, b), ar.src))
                    fa, fb = tr.word((a,)), tr.word((b,))
                    swt = tag_term(swap_word(fa, fb), ar.dst)
                    cells.append(TwoCell(
                        f"sym-refine[{f}|{a},{b}]",
                        seq(sw, sig.refine(f, (b, a))),
                        seq(sig.refine(f, (a, b)), swt),
                    ))
                    cells.append(TwoCell(
                        f"sym-coarsen[{f}|{a},{b}]",
                        seq(sig.coarsen(f, (a, b)), sw),
                        seq(swt, sig.coarsen(f, (b, a))),
                    ))
    for (f, g), h in sorted(lg.composites.items()):
        if lg.is_identity(f) or lg.is_identity(g):
            continue
        ar = lg.arrows[f]
        for a in sig.colours(ar.src):
            fa = sig.functors[f].word((a,))
            cells.append(TwoCell(f"refine-comp[{f},{g}|{a}]", Gen(sig.refine_gen(h, a)),
                                 seq(Gen(sig.refine_gen(f, a)), sig.refine(g, fa))))
            cells.append(TwoCell(f"coarsen-comp[{f},{g}|{a}]", Gen(sig.coarsen_gen(h, a)),
                                 seq(sig.coarsen(g, fa), Gen(sig.coarsen_gen(f, a)))))
    return cells


def _flat_theory(sig: LayeredSignature, cells: list[TwoCell]) -> Theory:
    colours = tuple(tag_colour(c, lay) for lay in sig.layer_graph.layers for c in sig.colours(lay))
    gens = tuple(tag_generator(g, lay) for lay in sig.layer_graph.layers for g in sig.theories[lay].signature.generators)
    flat_sig = Signature(colours, gens, ())
    eqs = []
    for lay in sig.layer_graph.layers:
        for e in sig.theories[lay].equations:
            eqs.append(Equation(f"{e.name}@{lay}", tag_term(e.lhs, lay), tag_term(e.rhs, lay)))
    eqs += [c.equation() for c in cells]
    oneway = frozenset(c.name for c in cells if c.direction == FORWARD)

    def internal_schema(g: Generator) -> list[Equation]:
        if is_box(g) or is_cobox(g) or is_boundary(g) or "@" not in g.name:
            return []
        lay, orig = untag_generator(g)
        th = sig.theories.get(lay)
        if th is None:
            return []
        return [Equation(f"{e.name}@{lay}", tag_term(e.lhs, lay), tag_term(e.rhs, lay)) for e in th.instances_for(orig)]

    def internal_pairs(g: Generator, h: Generator) -> list[Equation]:
        if any(is_box(x) or is_cobox(x) or is_boundary(x) or "@" not in x.name for x in (g, h)):
            return []
        (l1, g0), (l2, h0) = untag_generator(g), untag_generator(h)
        if l1 != l2 or l1 not in sig.theories:
            return []
        th = sig.theories[l1]
        return [Equation(f"{e.name}@{l1}", tag_term(e.lhs, l1), tag_term(e.rhs, l1))
                for e in th.pair_instances_for(g0, h0)]

    def box_schema(g: Generator) -> list[Equation]:
        if not is_box(g):
            return []
        p: BoxPayload = g.payload
        x = p.inner.to_term()
        d = _digest(p.key())
        f = p.arrow
        out = [
            Equation(f"slide-refine[{f}|{d}]", seq(x, sig.refine(f, p.b)), seq(sig.refine(f, p.a), Gen(g))),
            Equation(f"slide-coarsen[{f}|{d}]", seq(sig.coarsen(f, p.a), x), seq(Gen(g), sig.coarsen(f, p.b))),
        ]
        if len(p.inner.slices) == 1 and not is_box(p.inner.slices[0][1]):
            inner = p.inner.slices[0][1]
            lay, orig = untag_generator(inner)
            if p.inner.slices[0][0] == 0 and len(orig.arity) == len(p.a):
                img = tag_term(sig.functors[f].generator(orig), sig.arrow(f).dst)
                out.append(Equation(f"functor-data[{f}|{orig.name}:{d}]", Gen(g), img))
        return out

    def cobox_schema(g: Generator) -> list[Equation]:
        if not is_cobox(g):
            return []
        p: CoboxPayload = g.payload
        d = _digest(p.key())
        f = p.arrow
        out = [Equation(f"cobox-def[{f}|{d}]", Gen(g), cobox_unfolded(sig, g))]
        lay = sig.arrow(f).src
        for e in sig.colours(lay):
            wide_l = sig.cobox_gen(f, (e,) + p.left, p.right, p.inner.to_term(), p.a, p.b)
            wide_r = sig.cobox_gen(f, p.left, p.right + (e,), p.inner.to_term(), p.a, p.b)
            out.append(Equation(f"cobox-widen-l[{f}|{e}|{d}]", tensor(Id(tag_colour(e, lay)), Gen(g)), Gen(wide_l)))
            out.append(Equation(f"cobox-widen-r[{f}|{e}|{d}]", tensor(Gen(g), Id(tag_colour(e, lay))), Gen(wide_r)))
        if p.left:
            narrow = sig.cobox_gen(f, p.left[1:], p.right, p.inner.to_term(), p.a, p.b)
            out.append(Equation(f"cobox-widen-l[{f}|{p.left[0]}|{_digest(narrow.payload.key())}]",
                                tensor(Id(tag_colour(p.left[0], lay)), Gen(narrow)), Gen(g)))
        if p.right:
            narrow = sig.cobox_gen(f, p.left, p.right[:-1], p.inner.to_term(), p.a, p.b)
            out.append(Equation(f"cobox-widen-r[{f}|{p.right[-1]}|{_digest(narrow.payload.key())}]",
                                tensor(Gen(narrow), Id(tag_colour(p.right[-1], lay))), Gen(g)))
        return out

    return Theory(flat_sig, tuple(eqs), frozenset({"layered"}),
                  (internal_schema, box_schema, cobox_schema), (internal_pairs,), oneway)


# ---------------------------------------------------------------------------
# rewriting


def _theory_with(sig: LayeredSignature, cells: Iterable[TwoCell]) -> Theory:
    cells = list(cells)
    return sig.flat.extend(equations=[c.equation() for c in cells],
                           oneway=[c.name for c in cells if c.direction == FORWARD])


def two_cell_matches(sig: LayeredSignature, rule: TwoCell, term: Term) -> list[CanonicalDiagram]:
    """Every result of applying ``rule`` once, left to right, in canonical order."""
    th = _theory_with(sig, [rule])
    d = normalize(term)
    res = [r for name, o, r in rewrite_steps(th, d, [rule.equation()]) if o == "->"]
    return sorted(dict.fromkeys(res), key=lambda c: c.key())


def apply_two_cell(sig: LayeredSignature, rule: TwoCell, term: Term, position: int = 0) -> Term:
    """Apply ``rule`` at the ``position``-th match (see ``two_cell_matches``)."""
    layered_sort(sig, term)
    matches = two_cell_matches(sig, rule, term)
    if not 0 <= position < len(matches):
        raise NoMatch(f"{rule.name} has {len(matches)} matches; position {position} requested")
    return matches[position].to_term()


def derive(sig: LayeredSignature, t: Term, s: Term, max_depth: int = 16, budget: int = 20_000,
           cells: Optional[Iterable[TwoCell]] = None, names: Optional[Callable[[str], bool]] = None,
           extra: Iterable[TwoCell] = ()) -> tuple[DerivabilityVerdict, Theory]:
    """Bounded search for a chain of 2-cells from ``t`` to ``s``.

    ``names`` optionally restricts the equations tried (by name), which keeps
    searches for known derivations small."""
    th = _theory_with(sig, extra) if extra else sig.flat
    if t.sort != s.sort:
        raise SortMismatch(f"{t.sort} vs {s.sort}")
    a, b = normalize(t), normalize(s)
    eqs = None
    if names is not None or cells is not None:
        gens = a.nodes + b.nodes
        pool = th.equations_for(gens)
        if cells is not None:
            pool = [c.equation() for c in cells]
        eqs = [e for e in pool if names is None or names(e.name)]
        eqs += [c.equation() for c in extra if c.equation() not in eqs]
    return search(th, a, b, max_depth, budget, eqs), th


def _witness(sig: LayeredSignature, t: Term, s: Term, names: Callable[[str], bool], max_depth: int = 12,
             budget: int = 50_000, extra: Iterable[TwoCell] = ()) -> Witness:
    th = _theory_with(sig, extra) if extra else sig.flat
    a, b = normalize(t), normalize(s)
    eqs = [e for e in th.equations_for(a.nodes + b.nodes) if names(e.name)]
    return _search_witness(th, t, s, eqs, max_depth, budget)


def _prefix(*ps: str) -> Callable[[str], bool]:
    return lambda n: n.startswith(ps)


# ---------------------------------------------------------------------------
# derived results


def box_to_cowindow(sig: LayeredSignature, t: Term) -> tuple[Term, Witness, Witness]:
    """Decompose the first box of ``t`` (in canonical order) into a cowindow.

    Returns the new term, the forward witness (section then slide) and the
    backward witness (slide then counit)."""
    d = normalize(t)
    for i, (o, g) in enumerate(d.slices):
        if is_box(g):
            break
    else:
        raise NoBox("term contains no box")
    p: BoxPayload = g.payload
    cw = cowindow(sig, p.arrow, p.inner.to_term())
    cw_slices = normalize(cw).slices
    raw = d.slices[:i] + tuple((o + off, h) for off, h in cw_slices) + d.slices[i + 1:]
    from .diagram import canonical_from_slices

    target = canonical_from_slices(d.dom, raw).to_term()
    use = _prefix("kappa[", "eps[", "slide-refine[")
    fwd = _witness(sig, t, target, lambda n: use(n) and not n.startswith("eps["))
    bwd = _witness(sig, target, t, lambda n: use(n) and not n.startswith("kappa["))
    return target, fwd, bwd


def layered_term(d: Union[Term, CanonicalDiagram]) -> Term:
    """A term for ``d`` whose tensors never mix layers, when one exists.

    Nodes are fired in stages: all ready nodes internal to the current layer
    together, or boundaries on every wire at once. Falls back to the canonical
    term when no such staging is found."""
    if isinstance(d, Term):
        d = normalize(d)
    front = [(("in", i), c) for i, c in enumerate(d.dom)]
    inputs, neighbours = [], []
    cur = list(front)
    for n, (o, g) in enumerate(d.slices):
        k = len(g.arity)
        inputs.append(tuple(w for w, _ in cur[o:o + k]))
        neighbours.append((cur[o - 1][0] if o > 0 else None, cur[o + k][0] if o + k < len(cur) else None))
        cur = cur[:o] + [((n, j), c) for j, c in enumerate(g.coarity)] + cur[o + k:]
    gens = d.nodes
    pending = set(range(len(gens)))

    def ready(n):
        ins = inputs[n]
        if not ins:
            return None
        ids = [w for w, _ in front]
        for i in range(len(ids) - len(ins) + 1):
            if tuple(ids[i:i + len(ins)]) == ins:
                return i
        return None

    def layer_of(word):
        try:
            return word_layer(word)
        except WrongLayer:
            return False

    def stage(chosen: dict) -> Term:
        parts, i = [], 0
        new_front = []
        for pos in sorted(chosen):
            n = chosen[pos]
            parts += [Id(c) for _, c in front[i:pos]]
            new_front += front[i:pos]
            parts.append(Gen(gens[n]))
            new_front += [((n, j), c) for j, c in enumerate(gens[n].coarity)]
            i = pos + len(inputs[n])
        parts += [Id(c) for _, c in front[i:]]
        new_front += front[i:]
        front[:] = new_front
        for n in chosen.values():
            pending.discard(n)
        return tensor(*parts)

    steps: list[Term] = []
    while pending:
        zero = [n for n in sorted(pending) if not inputs[n]]
        if zero:
            n = zero[0]
            ids = [w for w, _ in front]
            left, right = neighbours[n]
            if left in ids:
                pos = ids.index(left) + 1
            elif right in ids:
                pos = ids.index(right)
            else:
                pos = min(d.slices[n][0], len(front))
            parts = [Id(c) for _, c in front[:pos]] + [Gen(gens[n])] + [Id(c) for _, c in front[pos:]]
            front[pos:pos] = [((n, j), c) for j, c in enumerate(gens[n].coarity)]
            pending.discard(n)
            steps.append(tensor(*parts))
            continue
        rd = {n: ready(n) for n in sorted(pending)}
        rd = {n: p for n, p in rd.items() if p is not None}
        lay = layer_of([c for _, c in front])
        internal = {p: n for n, p in rd.items()
                    if not is_boundary(gens[n]) and layer_of(gens[n].arity + gens[n].coarity) == lay}
        if internal:
            steps.append(stage(internal))
            continue
        bounds = {p: n for n, p in rd.items() if is_boundary(gens[n])}
        if bounds and sum(len(inputs[n]) for n in bounds.values()) == len(front):
            steps.append(stage(bounds))
            if layer_of([c for _, c in front]) is not False:
                continue
        return d.to_term()
    if [c for _, c in front] != list(d.cod):
        return d.to_term()
    t = seq(*steps) if steps else ident(d.dom)
    return t if normalize(t) == d else d.to_term()


def decompose_boxes(sig: LayeredSignature, t: Term) -> tuple[Term, list[Witness]]:
    """Replace every box, outermost first, by its cowindow."""
    ws = []
    while any(is_box(g) for g in normalize(t).nodes):
        t, w, _ = box_to_cowindow(sig, t)
        ws.append(w)
    return layered_term(t), ws


def extend_two_cell(sig: LayeredSignature, alpha: TwoCell, f: str) -> TwoCell:
    """Extend a 2-cell between terms of layer src(f) to their boxes along f."""
    ar = sig.arrow(f)
    x = sig.in_layer(ar.src, alpha.lhs, "2-cell")
    y = sig.in_layer(ar.src, alpha.rhs, "2-cell")
    if sig.layer_graph.is_identity(f):
        return alpha
    base = TwoCell(alpha.name, x, y, alpha.direction)
    bx, by = box(sig, f, x), box(sig, f, y)
    a = [split_colour(c)[0] for c in x.dom]
    b = [split_colour(c)[0] for c in x.cod]
    mid_x = seq(sig.coarsen(f, a), x, sig.refine(f, b))
    mid_y = seq(sig.coarsen(f, a), y, sig.refine(f, b))
    th = _theory_with(sig, [base])
    w1 = _witness(sig, bx, mid_x, _prefix("kappa[", "slide-refine["))
    w3 = _witness(sig, mid_y, by, _prefix("eps[", "slide-refine["))
    steps2 = [s for s in rewrite_steps(th, normalize(mid_x), [base.equation()])
              if s[0] == alpha.name and s[1] == "->" and s[2] == normalize(mid_y)]
    if not steps2:
        raise LayerMismatch(f"{alpha.name} does not apply inside the cowindow")
    steps = w1.steps + (RewriteStep(*steps2[0]),) + w3.steps
    pool = tuple(dict.fromkeys(w1.equations + (base.equation(),) + w3.equations))
    wit = Witness(th, normalize(bx), steps, normalize(by), pool)
    return TwoCell(f"{alpha.name}[{f}]", bx, by, alpha.direction, wit)


def monoidal_product_witness(sig: LayeredSignature, f: str, x: Term, y: Term) -> tuple[Witness, Witness]:
    """box(f, x ⊗ y) to box(f, x) ⊗ box(f, y) and back, through the external identities."""
    ar = sig.arrow(f)
    x, y = sig.in_layer(ar.src, x), sig.in_layer(ar.src, y)
    lhs = box(sig, f, tensor(x, y))
    rhs = tensor(box(sig, f, x), box(sig, f, y))
    use = _prefix("kappa[", "eps[", "slide-refine[")
    extra_gens = [sig.box_gen(f, x), sig.box_gen(f, y), sig.box_gen(f, tensor(x, y))]
    eqs = [e for g in extra_gens for e in sig.flat.instances_for(g) if use(e.name)]
    eqs += [e for e in sig.flat.equations if use(e.name)]
    fwd = _search_witness(sig.flat, lhs, rhs, eqs)
    bwd = _search_witness(sig.flat, rhs, lhs, eqs)
    return fwd, bwd


def _search_witness(th: Theory, t: Term, s: Term, eqs: list[Equation], max_depth: int = 16,
                    budget: int = 100_000) -> Witness:
    a, b = normalize(t), normalize(s)
    v = search(th, a, b, max_depth, budget, eqs)
    if not v.proved:
        raise NoMatch("no derivation found")
    return Witness(th, a, v.witness, b, tuple(eqs))


def cobox_composition_witness(sig: LayeredSignature, f: str, y1: Term, y2: Term) -> tuple[Witness, Witness]:
    """cobox(y1) ; cobox(y2) to cobox(y1 ; y2) and back, empty contexts."""
    ar = sig.arrow(f)
    y1, y2 = sig.in_layer(ar.dst, y1), sig.in_layer(ar.dst, y2)
    c1, c2 = sig.cobox_gen(f, (), (), y1), sig.cobox_gen(f, (), (), y2)
    c12 = sig.cobox_gen(f, (), (), seq(y1, y2))
    lhs, rhs = seq(Gen(c1), Gen(c2)), Gen(c12)
    defs = [e for g in (c1, c2, c12) for e in sig.flat.instances_for(g) if e.name.startswith("cobox-def[")]
    cells = [e for e in sig.flat.equations if e.name.startswith(("eps[", "kappa["))]
    return (_search_witness(sig.flat, lhs, rhs, defs + cells),
            _search_witness(sig.flat, rhs, lhs, defs + cells))


def cobox_slide_witnesses(sig: LayeredSignature, f: str, left: Word, right: Word, y: Term, x: Term,
                          c: Optional[Term] = None) -> dict[str, tuple[Term, Term, Witness]]:
    """Coboxes behave like internal terms:

    * ``slide-in``:  (id ⊗ x ⊗ id) ; cobox(y)  =  cobox(box(x) ; y)
    * ``slide-out``: cobox(y') ; (id ⊗ x ⊗ id)  =  cobox(y' ; box(x))  for y' with x composable after
    * ``context``:   (c ⊗ id) ; cobox[C'|D](y)  =  cobox[C|D](y) ; (c ⊗ id)  for c : C -> C'
    * ``swap``:      (swap ⊗ id) ; cobox[|C D](y) ; (swap ⊗ id)  =  cobox[C|D](y)   (symmetric theories)

    ``x`` is a term of the source layer whose codomain is the cobox input A."""
    ar = sig.arrow(f)
    src, dst = ar.src, ar.dst
    y = sig.in_layer(dst, y)
    x = sig.in_layer(src, x)
    left, right = tuple(left), tuple(right)
    a = sig.preimage(f, y.dom)
    b = sig.preimage(f, y.cod)
    xa = tuple(split_colour(k)[0] for k in x.dom)
    if tuple(split_colour(k)[0] for k in x.cod) != a:
        raise SortMismatch("x must end where the cobox contents start")
    out: dict[str, tuple[Term, Term, Witness]] = {}
    L, R = sig.ident(src, left), sig.ident(src, right)
    bx = box(sig, f, x)
    slide_names = _prefix("cobox-def[", "slide-refine[", "slide-coarsen[")

    lhs = seq(tensor(L, x, R), cobox(sig, f, left, right, y, a, b))
    rhs = cobox(sig, f, left, right, seq(bx, y), xa, b)
    out["slide-in"] = (lhs, rhs, _layered_witness(sig, lhs, rhs, slide_names))

    # the mirror image: x after the cobox, acting on the cobox output
    if b == xa:
        lhs2 = seq(cobox(sig, f, left, right, y, a, b), tensor(L, x, R))
        rhs2 = cobox(sig, f, left, right, seq(y, bx), a, a)
        out["slide-out"] = (lhs2, rhs2, _layered_witness(sig, lhs2, rhs2, slide_names))

    if c is not None:
        c = sig.in_layer(src, c)
        C = tuple(split_colour(k)[0] for k in c.dom)
        C2 = tuple(split_colour(k)[0] for k in c.cod)
        lhs3 = seq(tensor(c, sig.ident(src, a + right)), cobox(sig, f, C2, right, y, a, b))
        rhs3 = seq(cobox(sig, f, C, right, y, a, b), tensor(c, sig.ident(src, b + right)))
        out["context"] = (lhs3, rhs3, _layered_witness(sig, lhs3, rhs3, slide_names, max_depth=16,
                                                       extra_gens=[sig.box_gen(f, c)]))

    if sig.symmetric and left:
        sw_in = tag_term(swap_word(left, a), src)
        sw_out = tag_term(swap_word(b, left), src)
        lhs4 = seq(tensor(sw_in, R), cobox(sig, f, (), left + right, y, a, b), tensor(sw_out, R))
        rhs4 = cobox(sig, f, left, right, y, a, b)
        names = lambda n: n.startswith(("cobox-def[", "sym-refine[", "sym-coarsen[", "swap-nat", "swap-inv"))
        out["swap"] = (lhs4, rhs4, _layered_witness(sig, lhs4, rhs4, names, max_depth=16))
    return out


def _layered_witness(sig: LayeredSignature, t: Term, s: Term, names: Callable[[str], bool],
                     max_depth: int = 12, budget: int = 100_000, extra_gens: Iterable[Generator] = ()) -> Witness:
    a, b = normalize(t), normalize(s)
    pool = sig.flat.equations_for(a.nodes + b.nodes)
    # also the schema instances of anything a cobox definition unfolds to
    extra_gens = list(extra_gens)
    for g in a.nodes + b.nodes:
        if is_cobox(g):
            extra_gens += generators_in(cobox_unfolded(sig, g))
    pool += [e for e in sig.flat.equations_for(extra_gens) if e.name not in {p.name for p in pool}]
    eqs = [e for e in pool if names(e.name)]
    return _search_witness(sig.flat, t, s, eqs, max_depth, budget)


def box_of_cobox(sig: LayeredSignature, f: str, left: Word, right: Word, y: Term) -> tuple[Term, Witness]:
    """The cowindow of a cobox reduces to its contents with the context wires
    refined: coarsen ; cobox[C|D](y) ; refine  =>  id ⊗ y ⊗ id  (counit only)."""
    ar = sig.arrow(f)
    g = sig.cobox_gen(f, left, right, y)
    p: CoboxPayload = g.payload
    tr = sig.functors[f]
    start = seq(sig.coarsen(f, p.left + p.a + p.right), Gen(g), sig.refine(f, p.left + p.b + p.right))
    goal = tensor(ident(tag_word(tr.word(p.left), ar.dst)), p.inner.to_term(), ident(tag_word(tr.word(p.right), ar.dst)))
    eqs = [e for e in sig.flat.instances_for(g) if e.name.startswith("cobox-def[")]
    eqs += [e for e in sig.flat.equations if e.name.startswith("eps[")]
    return goal, _search_witness(sig.flat, start, goal, eqs)


def composite_box_witness(sig: LayeredSignature, f: str, g: str, x: Term) -> Witness:
    """box(f then g, x) to box(g, box(f, x)) through cowindows and the composite boundaries."""
    h = sig.layer_graph.composites.get((f, g))
    if h is None:
        raise LayerMismatch(f"no composite recorded for {f} then {g}")
    ar = sig.arrow(f)
    x = sig.in_layer(ar.src, x)
    inner = box(sig, f, x)
    lhs, rhs = box(sig, h, x), box(sig, g, inner)
    use = _prefix("kappa[", "eps[", "slide-refine[", "refine-comp[", "coarsen-comp[")
    gens = [sig.box_gen(h, x), sig.box_gen(f, x), sig.box_gen(g, inner)]
    eqs = [e for e in sig.flat.equations_for(gens) if use(e.name)]
    return _search_witness(sig.flat, lhs, rhs, eqs, max_depth=20, budget=200_000)


@dataclass(frozen=True)
class ProbeItem:
    label: str
    right: str
    left: str
    verified: bool


@dataclass(frozen=True)
class FaithfulnessReport:
    arrow: str
    windows_are_identities: dict
    items: tuple[ProbeItem, ...]
    direction: str = "boxes related => contents related"

    @property
    def all_verified(self) -> bool:
        return all(i.verified for i in self.items)


def faithfulness_probe(sig: LayeredSignature, f: str, pairs: Sequence[tuple[Term, Term]], depth: int = 8,
                       budget: int = 20_000) -> FaithfulnessReport:
    """(i) whether window(f, id) relates to the identity for each colour;
    (ii) for each pair, whether relating the boxes also relates the contents."""
    ar = sig.arrow(f)
    tr = sig.functors[f]
    wid = {}
    for a in sig.colours(ar.src):
        w = seq(sig.refine(f, (a,)), sig.coarsen(f, (a,)))
        v, _ = derive(sig, w, sig.ident(ar.src, (a,)), depth, budget)
        wid[a] = v.status
    items = []
    for k, (x, y) in enumerate(pairs):
        x, y = sig.in_layer(ar.src, x), sig.in_layer(ar.src, y)
        if x.sort != y.sort:
            raise SortMismatch(f"pair {k} is not parallel")
        rv, _ = derive(sig, box(sig, f, x), box(sig, f, y), depth, budget)
        lv, _ = derive(sig, x, y, depth, budget)
        items.append(ProbeItem(f"pair {k}", rv.status, lv.status, not rv.proved or lv.proved))
    return FaithfulnessReport(f, wid, tuple(items))


# ---------------------------------------------------------------------------
# a worked example: quantum circuits inside the ZX-calculus


def circuit_layers() -> LayeredSignature:
    """Two layers: ``circ`` with gate generators and ``zx``, related by the
    arrow ``emb`` sending each gate to its ZX diagram."""
    from fractions import Fraction

    from .diagram import make_theory
    from .signature import make_signature
    from .theories import symmetric_closure
    from .zx import Q, cnot, cz, zx_theory, Z, X, H

    gates = [
        Generator("h", (Q,), (Q,)),
        Generator("s", (Q,), (Q,)),
        Generator("t", (Q,), (Q,)),
        Generator("xpi", (Q,), (Q,)),
        Generator("cx", (Q, Q), (Q, Q)),
        Generator("cz", (Q, Q), (Q, Q)),
    ]
    images = {
        "h": H(), "s": Z(1, 1, Fraction(1, 2)), "t": Z(1, 1, Fraction(1, 4)), "xpi": X(1, 1, 1),
        "cx": cnot(), "cz": cz(),
    }
    circ = symmetric_closure(make_theory(make_signature((Q,), gates)))
    zx = zx_theory()
    lg = make_layer_graph(["circ", "zx"], [("emb", "circ", "zx")])

    def gmap(g: Generator) -> Term:
        if g.name == "swap":
            return Gen(g)
        return images[g.name]

    return make_layered_signature(lg, {"circ": circ, "zx": zx}, {"emb": Translation({Q: (Q,)}, gmap)})
