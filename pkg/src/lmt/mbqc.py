"""MBQC and MBQC+LC graphs, their rewrites, and the translation into ZX."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .diagram import slices_to_term
from .errors import (
    InvalidGraph,
    LengthMismatch,
    NameClash,
    NotAnEdge,
    NotRemovable,
    UnknownVertex,
    VertexNamespaceExhausted,
)
from .signature import Generator, Term
from .zx import H_GEN, LC_NAMES, Q, SWAP_GEN, evaluate, phase, prop_equal, x_gen, z_gen

PLANES = ("XY", "XZ", "YZ")
Edge = frozenset


def edge(u: str, v: str) -> frozenset:
    if u == v:
        raise InvalidGraph(f"self-loop on {u}")
    return frozenset((u, v))


# ---------------------------------------------------------------------------
# simple graphs


@dataclass(frozen=True)
class SimpleGraph:
    vertices: frozenset
    edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        for e in self.edges:
            if len(e) != 2:
                raise InvalidGraph(f"bad edge {sorted(e)}")
            if not e <= self.vertices:
                raise InvalidGraph(f"edge {sorted(e)} leaves the vertex set")

    def neighbours(self, u: str) -> frozenset:
        if u not in self.vertices:
            raise UnknownVertex(u)
        return frozenset(v for e in self.edges if u in e for v in e if v != u)

    def has_edge(self, u: str, v: str) -> bool:
        return u != v and frozenset((u, v)) in self.edges

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)


def local_complement_simple(g: SimpleGraph, u: str) -> SimpleGraph:
    """G⋆u: toggle every edge between two neighbours of u."""
    nb = sorted(g.neighbours(u))
    toggled = {edge(a, b) for a, b in itertools.combinations(nb, 2)}
    return SimpleGraph(g.vertices, g.edges ^ toggled)


def pivot_simple(g: SimpleGraph, u: str, v: str) -> SimpleGraph:
    """G∧uv as three local complementations."""
    if not g.has_edge(u, v):
        raise NotAnEdge(f"{u}-{v}")
    return local_complement_simple(local_complement_simple(local_complement_simple(g, u), v), u)


def pivot_three_sets(g: SimpleGraph, u: str, v: str) -> SimpleGraph:
    """G∧uv by complementing edges between A, B, C and exchanging u and v."""
    if not g.has_edge(u, v):
        raise NotAnEdge(f"{u}-{v}")
    nu, nv = g.neighbours(u), g.neighbours(v)
    a = nu & nv
    b = (nu - nv) - {v}
    c = (nv - nu) - {u}
    toggled = set()
    for s, t in ((a, b), (a, c), (b, c)):
        for x in s:
            for y in t:
                toggled.add(edge(x, y))
    edges = set(g.edges ^ toggled)
    swap = {u: v, v: u}
    edges = {frozenset(swap.get(x, x) for x in e) for e in edges}
    return SimpleGraph(g.vertices, edges)


def all_simple_graphs(n: int) -> Iterable[SimpleGraph]:
    vs = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph(vs, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


# ---------------------------------------------------------------------------
# labelled graphs


@dataclass(frozen=True)
class MbqcGraph:
    graph: SimpleGraph
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    measure: Mapping[str, tuple[str, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(
            self, "measure", {v: (p, phase(a)) for v, (p, a) in sorted(dict(self.measure).items())}
        )
        vs = self.graph.vertices
        for name, part in (("inputs", self.inputs), ("outputs", self.outputs)):
            if len(set(part)) != len(part):
                raise InvalidGraph(f"repeated vertex in {name}")
            for v in part:
                if v not in vs:
                    raise InvalidGraph(f"{name} vertex {v} not in the graph")
        need = vs - set(self.outputs)
        if set(self.measure) != need:
            raise InvalidGraph(
                f"measurements must cover exactly the non-outputs: missing {sorted(need - set(self.measure))}, "
                f"extra {sorted(set(self.measure) - need)}"
            )
        for v, (p, _) in self.measure.items():
            if p not in PLANES:
                raise InvalidGraph(f"unknown plane {p!r} at {v}")


@dataclass(frozen=True)
class MbqcLcGraph:
    base: MbqcGraph
    in_labels: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    out_labels: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        il = {v: tuple(self.in_labels.get(v, ())) for v in self.base.inputs}
        ol = {v: tuple(self.out_labels.get(v, ())) for v in self.base.outputs}
        extra = (set(self.in_labels) - set(il)) | (set(self.out_labels) - set(ol))
        if extra:
            raise InvalidGraph(f"labels on non-boundary vertices {sorted(extra)}")
        for w in list(il.values()) + list(ol.values()):
            for letter in w:
                if letter not in LC_NAMES:
                    raise InvalidGraph(f"unknown local Clifford generator {letter!r}")
        object.__setattr__(self, "in_labels", il)
        object.__setattr__(self, "out_labels", ol)

    @property
    def graph(self) -> SimpleGraph:
        return self.base.graph

    @property
    def vertices(self) -> frozenset:
        return self.base.graph.vertices

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.base.inputs

    @property
    def outputs(self) -> tuple[str, ...]:
        return self.base.outputs

    @property
    def measure(self) -> Mapping[str, tuple[str, Fraction]]:
        return self.base.measure


def make_graph(vertices, edges, inputs=(), outputs=(), measure=None, in_labels=None, out_labels=None) -> MbqcLcGraph:
    base = MbqcGraph(SimpleGraph(vertices, [edge(*e) for e in edges]), inputs, outputs, measure or {})
    return MbqcLcGraph(base, in_labels or {}, out_labels or {})


def embed_mbqc(g: MbqcGraph) -> MbqcLcGraph:
    return MbqcLcGraph(g, {}, {})


def _replace(g: MbqcLcGraph, graph=None, inputs=None, outputs=None, measure=None, in_labels=None,
             out_labels=None) -> MbqcLcGraph:
    base = MbqcGraph(
        graph if graph is not None else g.graph,
        inputs if inputs is not None else g.inputs,
        outputs if outputs is not None else g.outputs,
        measure if measure is not None else g.measure,
    )
    return MbqcLcGraph(
        base,
        in_labels if in_labels is not None else g.in_labels,
        out_labels if out_labels is not None else g.out_labels,
    )


def fresh_name(u: str, taken: Iterable[str], limit: int = 1_000_000) -> str:
    """The first of u'1, u'2, ... not in ``taken``."""
    taken = set(taken)
    for k in range(1, limit + 1):
        cand = f"{u}'{k}"
        if cand not in taken:
            return cand
    raise VertexNamespaceExhausted(u)


# ---------------------------------------------------------------------------
# rewrites

HALF = Fraction(1, 2)


def _lc_measured_self(p: str, a: Fraction) -> tuple[str, Fraction]:
    if p == "XY":
        return "XZ", phase(HALF - a)
    if p == "XZ":
        return "XY", phase(a - HALF)
    return "YZ", phase(a + HALF)


def _lc_measured_neighbour(p: str, a: Fraction) -> tuple[str, Fraction]:
    if p == "XY":
        return "XY", phase(a - HALF)
    if p == "XZ":
        return "YZ", phase(a)
    return "XZ", phase(-a)


def local_complement(g: MbqcLcGraph, u: str) -> MbqcLcGraph:
    if u not in g.vertices:
        raise UnknownVertex(u)
    if u in g.inputs:
        u2 = fresh_name(u, g.vertices)
        graph = SimpleGraph(g.vertices | {u2}, g.graph.edges | {edge(u, u2)})
        inputs = tuple(u2 if v == u else v for v in g.inputs)
        measure = dict(g.measure)
        measure[u2] = ("XY", Fraction(0))
        in_labels = {(u2 if v == u else v): w for v, w in g.in_labels.items()}
        in_labels[u2] = g.in_labels[u] + ("g/2", "r/2", "g/2")
        g = _replace(g, graph=graph, inputs=inputs, measure=measure, in_labels=in_labels)
    out_labels = dict(g.out_labels)
    measure = dict(g.measure)
    if u in g.outputs:
        out_labels[u] = ("r/2",) + out_labels[u]
    else:
        measure[u] = _lc_measured_self(*measure[u])
    for v in g.graph.neighbours(u):
        if v in g.outputs:
            out_labels[v] = ("-g/2",) + out_labels[v]
        else:
            measure[v] = _lc_measured_neighbour(*measure[v])
    return _replace(g, graph=local_complement_simple(g.graph, u), measure=measure, out_labels=out_labels)


def pivot(g: MbqcLcGraph, u: str, v: str) -> MbqcLcGraph:
    for w in (u, v):
        if w not in g.vertices:
            raise UnknownVertex(w)
    if not g.graph.has_edge(u, v):
        raise NotAnEdge(f"{u}-{v}")
    return local_complement(local_complement(local_complement(g, u), v), u)


def removable(g: MbqcLcGraph, u: str) -> Optional[str]:
    """None when ``u`` may be removed, otherwise the violated condition."""
    if u not in g.vertices:
        return f"{u} is not a vertex"
    if u in g.inputs or u in g.outputs:
        return f"{u} is an input or an output"
    p, a = g.measure[u]
    if p not in ("YZ", "XZ"):
        return f"{u} is measured in the {p} plane"
    if a not in (0, 1):
        return f"{u} is measured at angle {a}π, not 0 or π"
    return None


def remove_vertex(g: MbqcLcGraph, u: str) -> MbqcLcGraph:
    why = removable(g, u)
    if why is not None:
        raise NotRemovable(why)
    a = int(g.measure[u][1])
    out_labels = dict(g.out_labels)
    measure = {v: m for v, m in g.measure.items() if v != u}
    for v in g.graph.neighbours(u):
        if v in g.outputs:
            out_labels[v] = ("g",) * a + out_labels[v]
        else:
            q, b = measure[v]
            measure[v] = (q, phase(-b if a else b)) if q in ("YZ", "XZ") else (q, phase(b + a))
    graph = SimpleGraph(g.vertices - {u}, {e for e in g.graph.edges if u not in e})
    return _replace(g, graph=graph, measure=measure, out_labels=out_labels)


def rename(g: MbqcLcGraph, old: Sequence[str], new: Sequence[str]) -> MbqcLcGraph:
    old, new = list(old), list(new)
    if len(old) != len(new):
        raise LengthMismatch(f"{len(old)} vertices, {len(new)} names")
    if len(set(new)) != len(new):
        raise NameClash("repeated new name")
    for u in old:
        if u not in g.vertices:
            raise UnknownVertex(u)
    clash = set(new) & set(g.vertices)
    if clash:
        raise NameClash(f"names already in use: {sorted(clash)}")
    m = dict(zip(old, new))
    r = lambda v: m.get(v, v)
    graph = SimpleGraph({r(v) for v in g.vertices}, {frozenset(map(r, e)) for e in g.graph.edges})
    return _replace(
        g,
        graph=graph,
        inputs=tuple(map(r, g.inputs)),
        outputs=tuple(map(r, g.outputs)),
        measure={r(v): x for v, x in g.measure.items()},
        in_labels={r(v): w for v, w in g.in_labels.items()},
        out_labels={r(v): w for v, w in g.out_labels.items()},
    )


# ---------------------------------------------------------------------------
# translation into ZX


def measurement_effect(plane: str, angle: Fraction) -> list[Generator]:
    """Generators applied in order to a spider leg to measure it."""
    if plane == "XY":
        return [z_gen(1, 0, angle)]
    if plane == "YZ":
        return [x_gen(1, 0, angle)]
    if plane == "XZ":
        return [z_gen(1, 1, HALF), x_gen(1, 0, angle)]
    raise InvalidGraph(f"unknown plane {plane!r}")


def lc_gates(word: Sequence[str]) -> list[Generator]:
    table = {
        "r/2": x_gen(1, 1, HALF), "r": x_gen(1, 1, 1), "-r/2": x_gen(1, 1, -HALF),
        "g/2": z_gen(1, 1, HALF), "g": z_gen(1, 1, 1), "-g/2": z_gen(1, 1, -HALF),
    }
    return [table[w] for w in word]


class WireBuilder:
    """Builds a slice sequence over labelled single-colour wires."""

    def __init__(self, labels: Sequence):
        self.dom = (Q,) * len(labels)
        self.labels = list(labels)
        self.slices: list[tuple[int, Generator]] = []
        self.max_width = len(labels)

    def pos(self, label) -> int:
        return self.labels.index(label)

    def apply(self, g: Generator, at: int, new_labels: Sequence) -> None:
        k = len(g.arity)
        if len(new_labels) != len(g.coarity):
            raise ValueError("label count does not match the coarity")
        self.slices.append((at, g))
        self.labels[at:at + k] = list(new_labels)
        self.max_width = max(self.max_width, len(self.labels))

    def apply_on(self, g: Generator, label) -> None:
        """Apply a (1, 0) or (1, 1) generator to the wire carrying ``label``."""
        at = self.pos(label)
        self.apply(g, at, [label] * len(g.coarity))

    def swap_at(self, i: int) -> None:
        a, b = self.labels[i], self.labels[i + 1]
        self.apply(SWAP_GEN, i, [b, a])

    def gather(self, labels: Sequence) -> int:
        """Move ``labels`` next to each other, in order, and return where they start."""
        if not labels:
            return len(self.labels)
        anchor = self.pos(labels[0])
        for j, lab in enumerate(labels[1:], start=1):
            cur = self.pos(lab)
            anchor = self.pos(labels[0])
            target = anchor + j
            while cur > target:
                self.swap_at(cur - 1)
                cur -= 1
            while cur < target:
                # the block to the left of cur shifts down as this wire moves right
                self.swap_at(cur)
                cur += 1
                anchor = self.pos(labels[0])
                target = anchor + j
        return self.pos(labels[0])

    def permute_to(self, order: Sequence) -> None:
        for i, lab in enumerate(order):
            cur = self.pos(lab)
            while cur > i:
                self.swap_at(cur - 1)
                cur -= 1

    def term(self) -> Term:
        return slices_to_term(self.dom, tuple(self.slices))


def _vertex_order(g: MbqcLcGraph) -> list[str]:
    """Inputs first, then greedily the vertex leaving fewest pending edges."""
    done: list[str] = []
    remaining = set(g.vertices)
    while remaining:
        def cost(v):
            pend = 0
            placed = set(done) | {v}
            for e in g.graph.edges:
                a, b = tuple(e)
                if (a in placed) != (b in placed):
                    pend += 1
            waiting_inputs = sum(1 for i in g.inputs if i not in placed)
            return (pend + waiting_inputs, v not in g.inputs, v)

        v = min(remaining, key=cost)
        done.append(v)
        remaining.remove(v)
    return done


def build_D(g: MbqcLcGraph) -> WireBuilder:
    b = WireBuilder([("in", v) for v in g.inputs])
    for v in g.inputs:
        for gate in lc_gates(g.in_labels[v]):
            b.apply_on(gate, ("in", v))
    done: set[str] = set()
    for v in _vertex_order(g):
        nb = g.graph.neighbours(v)
        ins = [("in", v)] if v in g.inputs else []
        ins += [("e", u, v) for u in sorted(nb) if u in done]
        for lab in ins[1:] if v in g.inputs else ins:
            b.apply_on(H_GEN, lab)
        outs = [("e", v, w) for w in sorted(nb) if w not in done]
        outs.append(("out", v) if v in g.outputs else ("m", v))
        at = b.gather(ins)
        b.apply(z_gen(len(ins), len(outs), 0), at, outs)
        if v not in g.outputs:
            for gate in measurement_effect(*g.measure[v]):
                b.apply_on(gate, ("m", v))
        done.add(v)
    b.permute_to([("out", v) for v in g.outputs])
    for v in g.outputs:
        for gate in lc_gates(g.out_labels[v]):
            b.apply_on(gate, ("out", v))
    return b


def translate_D(g: MbqcLcGraph) -> Term:
    """The ZX diagram of an MBQC+LC graph: a phase-free Z spider per vertex,
    a Hadamard per edge, measurement effects, and boundary Clifford words."""
    return build_D(g).term()


def evaluate_graph(g: MbqcLcGraph, cap: int = 10) -> np.ndarray:
    b = build_D(g)
    from .diagram import CanonicalDiagram

    d = CanonicalDiagram(b.dom, (Q,) * len(g.outputs), tuple(b.slices))
    return evaluate(d, cap)


# ---------------------------------------------------------------------------
# soundness


def apply_op(g: MbqcLcGraph, op: Sequence) -> MbqcLcGraph:
    kind, *args = op
    if kind == "lc":
        return local_complement(g, *args)
    if kind == "pivot":
        return pivot(g, *args)
    if kind == "rm":
        return remove_vertex(g, *args)
    if kind == "rename":
        return rename(g, *args)
    raise ValueError(f"unknown rewrite {kind!r}")


def soundness_check(g: MbqcLcGraph, op: Sequence, tol: float = 1e-9, cap: int = 10) -> bool:
    h = apply_op(g, op)
    return prop_equal(evaluate_graph(g, cap), evaluate_graph(h, cap), tol)


def applicable_ops(g: MbqcLcGraph) -> list[tuple]:
    ops: list[tuple] = [("lc", v) for v in sorted(g.vertices)]
    ops += [("pivot", u, v) for u, v in g.graph.sorted_edges()]
    ops += [("pivot", v, u) for u, v in g.graph.sorted_edges()]
    ops += [("rm", v) for v in sorted(g.vertices) if removable(g, v) is None]
    vs = sorted(g.vertices)
    if vs:
        ops.append(("rename", tuple(vs), tuple(f"n{i}" for i in range(len(vs)))))
    return ops


def random_graph(rng: random.Random, max_vertices: int = 5, max_inputs: int = 2, max_outputs: int = 2,
                 max_label: int = 2) -> MbqcLcGraph:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = [(a, b) for a, b in itertools.combinations(vs, 2) if rng.random() < 0.5]
    outputs = rng.sample(vs, rng.randint(1, min(max_outputs, n)))
    inputs = rng.sample(vs, rng.randint(0, min(max_inputs, n)))
    measure = {}
    for v in vs:
        if v in outputs:
            continue
        plane = rng.choice(PLANES)
        if rng.random() < 0.3:
            angle = Fraction(rng.randint(0, 1))
        else:
            angle = Fraction(rng.randint(0, 15), 8)
        measure[v] = (plane, angle)
    word = lambda: tuple(rng.choice(LC_NAMES) for _ in range(rng.randint(0, max_label)))
    return make_graph(vs, edges, inputs, outputs, measure,
                      {v: word() for v in inputs}, {v: word() for v in outputs})
