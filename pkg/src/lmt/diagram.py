"""Structural normal forms, theories and bounded equational rewriting.

A term is compiled to a *slice sequence*: a list of ``(offset, generator)``
pairs read top to bottom, where ``offset`` counts the wires to the left of
the generator at the moment it acts. Two slice sequences present the same
string diagram exactly when one can be turned into the other by exchanging
adjacent slices that act on disjoint wire ranges. The canonical form of a
term is the lexicographically least sequence in that class.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Optional

from .errors import NotParallel, SortMismatch, UnknownGenerator
from .signature import (
    EMPTY,
    Gen,
    Generator,
    Id,
    IdEmpty,
    Seq,
    Signature,
    Sort,
    Tensor,
    Term,
    Word,
    generators_in,
    ident,
    seq,
    sort_of,
    tensor,
)

Slice = tuple[int, Generator]
Slices = tuple[Slice, ...]


# ---------------------------------------------------------------------------
# slice sequences


def compile_term(term: Term) -> tuple[Word, Word, Slices]:
    """Compile ``term`` to ``(dom, cod, slices)``."""
    srt = term.sort
    return srt.arity, srt.coarity, tuple(_slices(term))


def _slices(term: Term) -> list[Slice]:
    if isinstance(term, Gen):
        return [(0, term.generator)]
    if isinstance(term, (Id, IdEmpty)):
        return []
    if isinstance(term, Seq):
        return _slices(term.left) + _slices(term.right)
    if isinstance(term, Tensor):
        shift = len(term.left.sort.coarity)
        return _slices(term.left) + [(o + shift, g) for o, g in _slices(term.right)]
    raise TypeError(f"not a term: {term!r}")


def gap_wires(dom: Word, slices: Slices) -> list[Word]:
    """The wire colours in each of the ``len(slices) + 1`` gaps."""
    out = [tuple(dom)]
    cur = tuple(dom)
    for o, g in slices:
        k = len(g.arity)
        if cur[o:o + k] != g.arity:
            raise SortMismatch(f"{g} does not fit at offset {o} of {cur}")
        cur = cur[:o] + g.coarity + cur[o + k:]
        out.append(cur)
    return out


def slices_to_term(dom: Word, slices: Slices) -> Term:
    """Read a slice sequence back as a term, one whiskered generator per slice."""
    if not slices:
        return ident(dom)
    parts = []
    cur = tuple(dom)
    for o, g in slices:
        k = len(g.arity)
        left, right = cur[:o], cur[o + k:]
        pieces = [p for p in (ident(left) if left else None, Gen(g), ident(right) if right else None) if p is not None]
        parts.append(tensor(*pieces))
        cur = left + g.coarity + right
    return seq(*parts)


def exchanges(s1: Slice, s2: Slice) -> list[tuple[Slice, Slice]]:
    """All ways to exchange two adjacent slices ``s1`` then ``s2``."""
    p, g1 = s1
    q, g2 = s2
    a1, c1 = len(g1.arity), len(g1.coarity)
    a2, c2 = len(g2.arity), len(g2.coarity)
    out = []
    if q >= p + c1:
        out.append(((q - c1 + a1, g2), (p, g1)))
    if q + a2 <= p:
        out.append(((q, g2), (p - a2 + c2, g1)))
    return out


def slice_class(slices: Slices, limit: Optional[int] = None) -> list[Slices]:
    """All slice sequences reachable from ``slices`` by exchanges, in BFS order."""
    seen = {slices}
    order = [slices]
    queue = deque([slices])
    while queue:
        cur = queue.popleft()
        for i in range(len(cur) - 1):
            for a, b in exchanges(cur[i], cur[i + 1]):
                nxt = cur[:i] + (a, b) + cur[i + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
                    queue.append(nxt)
                    if limit is not None and len(order) > limit:
                        raise OverflowError("slice class exceeds limit")
    return order


def _seq_key(slices: Slices) -> tuple:
    return tuple((o, g.key) for o, g in slices)


_CANON: dict[tuple, Slices] = {}
_CANON_LIMIT = 2_000_000


def canonical_slices(dom: Word, slices: Slices) -> Slices:
    """The least member of the exchange class of ``slices``."""
    k = (dom, slices)
    hit = _CANON.get(k)
    if hit is not None:
        return hit
    cls = slice_class(slices)
    best = min(cls, key=_seq_key)
    if len(_CANON) + len(cls) > _CANON_LIMIT:
        _CANON.clear()
    for member in cls:
        _CANON[(dom, member)] = best
    return best


@dataclass(frozen=True)
class CanonicalDiagram:
    """Canonical representative of a structural-congruence class."""

    dom: Word
    cod: Word
    slices: Slices

    @property
    def sort(self) -> Sort:
        return Sort(self.dom, self.cod)

    @property
    def nodes(self) -> tuple[Generator, ...]:
        return tuple(g for _, g in self.slices)

    @property
    def slice_order(self) -> tuple[int, ...]:
        return tuple(range(len(self.slices)))

    @property
    def input_boundary(self) -> tuple[tuple[str, int], ...]:
        return tuple(("in", i) for i in range(len(self.dom)))

    @property
    def output_boundary(self) -> tuple[tuple[str, int], ...]:
        return tuple(("out", i) for i in range(len(self.cod)))

    @cached_property
    def wires(self) -> tuple[tuple[tuple, tuple, str], ...]:
        """Edges ``(source port, target port, colour)``. Ports are
        ``("in", i)``, ``("out", i)`` or ``(node, "o"|"i", j)``."""
        cur = [(("in", i), c) for i, c in enumerate(self.dom)]
        edges = []
        for n, (o, g) in enumerate(self.slices):
            k = len(g.arity)
            for j, (src, col) in enumerate(cur[o:o + k]):
                edges.append((src, (n, "i", j), col))
            cur = cur[:o] + [((n, "o", j), c) for j, c in enumerate(g.coarity)] + cur[o + k:]
        for i, (src, col) in enumerate(cur):
            edges.append((src, ("out", i), col))
        return tuple(edges)

    def to_term(self) -> Term:
        return slices_to_term(self.dom, self.slices)

    def key(self) -> tuple:
        return (self.dom, self.cod, _seq_key(self.slices))

    def __str__(self) -> str:
        body = "; ".join(f"{g.name}@{o}" for o, g in self.slices) or "id"
        return f"[{body}] : {self.sort}"


def canonical_from_slices(dom: Word, slices: Slices) -> CanonicalDiagram:
    wires = gap_wires(dom, slices)
    return CanonicalDiagram(tuple(dom), wires[-1], canonical_slices(tuple(dom), tuple(slices)))


def normalize(term: Term, sig: Optional[Signature] = None) -> CanonicalDiagram:
    sort_of(term, sig)
    dom, cod, slices = compile_term(term)
    return CanonicalDiagram(dom, cod, canonical_slices(dom, slices))


def struct_equal(t: Term, s: Term, sig: Optional[Signature] = None) -> bool:
    if sort_of(t, sig) != sort_of(s, sig):
        return False
    return normalize(t) == normalize(s)


# ---------------------------------------------------------------------------
# theories


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self):
        if self.lhs.sort != self.rhs.sort:
            raise NotParallel(f"equation {self.name}: {self.lhs.sort} vs {self.rhs.sort}")


Schema = Callable[[Generator], Iterable[Equation]]
PairSchema = Callable[[Generator, Generator], Iterable[Equation]]


@dataclass(frozen=True, eq=False)
class Theory:
    """A signature with equations. ``schemata`` produce further equations on
    demand, one generator at a time, for the generators met during matching;
    ``pair_schemata`` do the same for ordered pairs of generators. Equations
    named in ``oneway`` may only be used left to right."""

    signature: Signature
    equations: tuple[Equation, ...] = ()
    flags: frozenset = frozenset()
    schemata: tuple[Schema, ...] = ()
    pair_schemata: tuple[PairSchema, ...] = ()
    oneway: frozenset = frozenset()
    _cache: dict = field(default_factory=dict, repr=False)

    def instances_for(self, g: Generator) -> tuple[Equation, ...]:
        hit = self._cache.get(g)
        if hit is None:
            eqs = []
            for schema in self.schemata:
                eqs.extend(schema(g))
            hit = tuple(eqs)
            self._cache[g] = hit
        return hit

    def pair_instances_for(self, g: Generator, h: Generator) -> tuple[Equation, ...]:
        k = (g, h)
        hit = self._cache.get(k)
        if hit is None:
            eqs = []
            for schema in self.pair_schemata:
                eqs.extend(schema(g, h))
            hit = tuple(eqs)
            self._cache[k] = hit
        return hit

    def equations_for(self, gens: Iterable[Generator]) -> list[Equation]:
        out = list(self.equations)
        seen = {e.name for e in out}

        def add(eqs):
            for e in eqs:
                if e.name not in seen:
                    seen.add(e.name)
                    out.append(e)

        present = sorted(set(gens), key=lambda g: g.key)
        for g in present:
            add(self.instances_for(g))
        if self.pair_schemata:
            for g in present:
                for h in present:
                    add(self.pair_instances_for(g, h))
        return out

    def extend(self, signature=None, equations=(), flags=(), schemata=(), pair_schemata=(),
               oneway=()) -> "Theory":
        return Theory(
            signature if signature is not None else self.signature,
            self.equations + tuple(equations),
            self.flags | frozenset(flags),
            self.schemata + tuple(schemata),
            self.pair_schemata + tuple(pair_schemata),
            self.oneway | frozenset(oneway),
        )


def make_theory(signature: Signature, equations: Iterable[Equation] = (), flags: Iterable[str] = (),
                schemata: Iterable[Schema] = (), pair_schemata: Iterable[PairSchema] = (),
                oneway: Iterable[str] = ()) -> Theory:
    eqs = tuple(equations)
    for e in eqs:
        for g in generators_in(e.lhs) + generators_in(e.rhs):
            if not signature.contains(g):
                raise UnknownGenerator(f"{g} in equation {e.name}")
    return Theory(signature, eqs, frozenset(flags), tuple(schemata), tuple(pair_schemata), frozenset(oneway))


@dataclass(frozen=True)
class _Rule:
    name: str
    orientation: str
    dom: Word
    pattern: Slices
    replacement: Slices


_RULES: dict[tuple, _Rule] = {}


def _oriented(eq: Equation, orientation: str) -> _Rule:
    k = (eq, orientation)
    hit = _RULES.get(k)
    if hit is None:
        src, dst = (eq.lhs, eq.rhs) if orientation == "->" else (eq.rhs, eq.lhs)
        dom, _, ps = compile_term(src)
        _, _, rs = compile_term(dst)
        hit = _Rule(eq.name, orientation, dom, canonical_slices(dom, ps), rs)
        _RULES[k] = hit
    return hit


def _shift(slices: Slices, by: int) -> Slices:
    return tuple((o + by, g) for o, g in slices)


def _raw_rewrites(rules: list[_Rule], dom: Word, cls: list[Slices]) -> Iterator[tuple[_Rule, Slices]]:
    # An identity pattern on at most one wire can be placed on every wire
    # segment and in every region from any single linearization.
    for n_cur, cur in enumerate(cls):
        wires = gap_wires(dom, cur)
        n = len(cur)
        for rule in rules:
            k = len(rule.pattern)
            w = len(rule.dom)
            if k == 0:
                if w <= 1 and n_cur:
                    continue
                for i in range(n + 1):
                    gap = wires[i]
                    for L in range(len(gap) - w + 1):
                        if gap[L:L + w] == rule.dom:
                            yield rule, cur[:i] + _shift(rule.replacement, L) + cur[i:]
                continue
            p0, g0 = rule.pattern[0]
            for i in range(n - k + 1):
                o, g = cur[i]
                if g != g0:
                    continue
                L = o - p0
                if L < 0:
                    continue
                ok = True
                for j in range(1, k):
                    oj, gj = cur[i + j]
                    pj, hj = rule.pattern[j]
                    if gj != hj or oj - L != pj:
                        ok = False
                        break
                if not ok or wires[i][L:L + w] != rule.dom:
                    continue
                yield rule, cur[:i] + _shift(rule.replacement, L) + cur[i + k:]


def rewrite_steps(theory: Theory, d: CanonicalDiagram, equations: Optional[list[Equation]] = None,
                  backward: bool = False) -> list[tuple[str, str, CanonicalDiagram]]:
    """One-step rewrites of ``d`` as ``(equation, orientation, result)``,
    deduplicated on ``(equation, orientation, result)``. With ``backward``
    the one-way equations run right to left, which enumerates predecessors."""
    eqs = theory.equations_for(d.nodes) if equations is None else equations
    allowed = "<-" if backward else "->"
    rules = [_oriented(e, o) for e in eqs for o in ("->", "<-")
             if e.name not in theory.oneway or o == allowed]
    cls = slice_class(d.slices)
    out: dict[tuple, None] = {}
    raw_seen: set = set()
    for rule, raw in _raw_rewrites(rules, d.dom, cls):
        rk = (rule.name, rule.orientation, raw)
        if rk in raw_seen:
            continue
        raw_seen.add(rk)
        res = CanonicalDiagram(d.dom, d.cod, canonical_slices(d.dom, raw))
        out[(rule.name, rule.orientation, res)] = None
    return list(out)


def rewrite_step(theory: Theory, d: CanonicalDiagram) -> set[CanonicalDiagram]:
    return {res for _, _, res in rewrite_steps(theory, d)}


@dataclass(frozen=True)
class RewriteStep:
    equation: str
    orientation: str
    result: CanonicalDiagram


@dataclass(frozen=True)
class DerivabilityVerdict:
    status: str  # "Proved" or "Unknown"
    witness: Optional[tuple[RewriteStep, ...]]
    depth_used: int
    states: int = 0

    @property
    def proved(self) -> bool:
        return self.status == "Proved"


def _flip(o: str) -> str:
    return "<-" if o == "->" else "->"


def derivable(theory: Theory, t: Term, s: Term, max_depth: int = 64, budget: int = 100_000,
              equations: Optional[list[Equation]] = None) -> DerivabilityVerdict:
    """Bounded bidirectional breadth-first search for a rewrite path from
    ``t`` to ``s``. Never answers "not equal": failure is ``Unknown``."""
    if t.sort != s.sort:
        raise NotParallel(f"{t.sort} vs {s.sort}")
    start, goal = normalize(t), normalize(s)
    return search(theory, start, goal, max_depth, budget, equations)


def search(theory: Theory, start: CanonicalDiagram, goal: CanonicalDiagram, max_depth: int = 64,
           budget: int = 100_000, equations: Optional[list[Equation]] = None) -> DerivabilityVerdict:
    if start == goal:
        return DerivabilityVerdict("Proved", (), 0, 1)
    # parent maps: node -> (previous node, equation, orientation as seen from the root)
    fwd: dict = {start: None}
    bwd: dict = {goal: None}
    ffront, bfront = [start], [goal]
    df = db = 0
    states = 2

    def steps(d, backward):
        return rewrite_steps(theory, d, equations, backward)

    while df + db < max_depth and ffront and bfront:
        expand_fwd = len(ffront) <= len(bfront)
        front, mine, other = (ffront, fwd, bwd) if expand_fwd else (bfront, bwd, fwd)
        nxt_front = []
        meet = None
        for d in front:
            for name, orient, res in steps(d, not expand_fwd):
                if res in mine:
                    continue
                mine[res] = (d, name, orient)
                states += 1
                nxt_front.append(res)
                if res in other:
                    meet = res
                    break
                if states > budget:
                    return DerivabilityVerdict("Unknown", None, df + db + 1, states)
            if meet is not None:
                break
        if expand_fwd:
            ffront, df = nxt_front, df + 1
        else:
            bfront, db = nxt_front, db + 1
        if meet is not None:
            witness = _witness(fwd, bwd, meet)
            return DerivabilityVerdict("Proved", witness, len(witness), states)
    return DerivabilityVerdict("Unknown", None, df + db, states)


def _witness(fwd: dict, bwd: dict, meet: CanonicalDiagram) -> tuple[RewriteStep, ...]:
    head = []
    node = meet
    while fwd[node] is not None:
        prev, name, orient = fwd[node]
        head.append(RewriteStep(name, orient, node))
        node = prev
    head.reverse()
    tail = []
    node = meet
    while bwd[node] is not None:
        prev, name, orient = bwd[node]
        # bwd recorded node = step(prev); walking towards the goal reverses it
        tail.append(RewriteStep(name, _flip(orient), prev))
        node = prev
    return tuple(head + tail)


def replay(theory: Theory, start: CanonicalDiagram, witness: Iterable[RewriteStep],
           goal: Optional[CanonicalDiagram] = None, equations: Optional[list[Equation]] = None) -> bool:
    """Check that every recorded step is a genuine one-step rewrite."""
    cur = start
    for step in witness:
        options = rewrite_steps(theory, cur, equations)
        if (step.equation, step.orientation, step.result) not in options:
            return False
        cur = step.result
    return goal is None or cur == goal
