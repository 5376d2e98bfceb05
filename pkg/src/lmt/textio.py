"""Parsers and serializers for every text and JSON format.

Term text (whitespace-insensitive)::

    T ::= gen NAME | gen NAME:W->W | id COLOUR | empty | ( T ; T ) | ( T * T )
    W ::= comma-separated colours, possibly empty

The sort annotation is only needed when several generators share a name.
ZX diagrams add ``Z(n,m,p)``, ``X(n,m,p)``, ``H`` and ``swap`` with phases
``a/b`` in units of π. Layered terms add ``at[layer]{T}``, ``box[f]{T}``,
``cobox[f|C|D]{T}`` (optionally ``cobox[f|C|D|A|B]{T}``), ``refine[f|W]``
and ``coarsen[f|W]``.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Callable, Optional

from .diagram import Equation, Theory, make_theory
from .errors import LmtError, ParseError
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
    make_signature,
)

# ---------------------------------------------------------------------------
# scanning

_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+(?:/-?\d+)?(?![\w]))|(?P<word>~?[A-Za-z_][\w']*|\d\w*)|(?P<arrow>->)|(?P<sym>[()\[\]{};*:,|.=]))")


class Scanner:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while True:
            m = _TOKEN.match(text, pos)
            if not m:
                rest = text[pos:]
                if rest.strip() == "":
                    break
                j = pos + (len(rest) - len(rest.lstrip()))
                raise ParseError(f"unexpected character {text[j]!r}", *self.loc(j))
            kind = m.lastgroup
            self.toks.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
            if pos >= n:
                break
        self.i = 0

    def loc(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def here(self) -> tuple[int, int]:
        if self.i < len(self.toks):
            return self.loc(self.toks[self.i][2])
        return self.loc(len(self.text))

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, *self.here())

    def peek(self) -> Optional[str]:
        return self.toks[self.i][1] if self.i < len(self.toks) else None

    def peek_kind(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self) -> str:
        if self.i >= len(self.toks):
            raise self.error("unexpected end of input")
        t = self.toks[self.i][1]
        self.i += 1
        return t

    def expect(self, s: str) -> None:
        got = self.peek()
        if got != s:
            raise self.error(f"expected {s!r}, found {got!r}" if got is not None else f"expected {s!r} at end of input")
        self.i += 1

    def word(self, what: str = "identifier") -> str:
        if self.peek_kind() not in ("word", "num"):
            raise self.error(f"expected {what}, found {self.peek()!r}")
        return self.next()

    def at_end(self) -> bool:
        return self.i >= len(self.toks)

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"trailing input {self.peek()!r}")


def _rational(text: str, where: Optional[tuple[int, int]] = None) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"malformed rational {text!r}", *(where or (1, 1))) from None


# ---------------------------------------------------------------------------
# terms


def _parse_word(sc: Scanner, stop: tuple[str, ...]) -> tuple[str, ...]:
    out: list[str] = []
    if sc.peek() in stop:
        return ()
    out.append(sc.word("colour"))
    while sc.peek() == ",":
        sc.next()
        out.append(sc.word("colour"))
    return tuple(out)


def _generic_term(sc: Scanner, atom: Callable[[Scanner], Optional[Term]]) -> Term:
    tok = sc.peek()
    if tok == "(":
        sc.next()
        left = _generic_term(sc, atom)
        op = sc.peek()
        if op not in (";", "*"):
            raise sc.error(f"expected ';' or '*', found {op!r}")
        sc.next()
        right = _generic_term(sc, atom)
        sc.expect(")")
        if op == ";":
            if left.cod != right.dom:
                raise sc.error(f"cannot compose {left.sort} with {right.sort}")
            return Seq(left, right)
        return Tensor(left, right)
    if tok == "empty":
        sc.next()
        return EMPTY
    t = atom(sc)
    if t is None:
        raise sc.error(f"expected a term, found {tok!r}")
    return t


def _gen_atom(sig: Signature) -> Callable[[Scanner], Optional[Term]]:
    def atom(sc: Scanner) -> Optional[Term]:
        tok = sc.peek()
        if tok == "id":
            sc.next()
            c = sc.word("colour")
            if sig is not None and c not in sig.colours:
                raise sc.error(f"unknown colour {c!r}")
            return Id(c)
        if tok == "gen":
            sc.next()
            where = sc.here()
            name = sc.word("generator name")
            attrs = None
            if sc.peek() == "[":
                sc.next()
                attrs = []
                while sc.peek() != "]":
                    if attrs:
                        sc.expect(",")
                    k = sc.word("attribute name")
                    sc.expect("=")
                    at = sc.here()
                    attrs.append((k, _rational(sc.word("rational"), at)))
                sc.expect("]")
                attrs = tuple(sorted(attrs))
            ann = None
            if sc.peek() == ":":
                sc.next()
                a = _parse_word(sc, ("->",))
                sc.expect("->")
                b = _parse_word(sc, (")", ";", "*", "}", None))
                ann = (a, b)
            cands = sig.by_name(name)
            if ann is not None:
                cands = [g for g in cands if (g.arity, g.coarity) == ann]
            if attrs is not None:
                cands = [g for g in cands if g.attributes == attrs]
            if not cands:
                raise ParseError(f"unknown generator {name!r}", *where)
            if len(cands) > 1:
                raise ParseError(f"generator name {name!r} is ambiguous; add a sort annotation", *where)
            return Gen(cands[0])
        return None

    return atom


def parse_term(text: str, sig: Signature) -> Term:
    sc = Scanner(text)
    t = _generic_term(sc, _gen_atom(sig))
    sc.finish()
    return t


def _word_text(w) -> str:
    return ",".join(w)


def _gen_text(g: Generator, sig: Optional[Signature]) -> str:
    same = sig.by_name(g.name) if sig is not None else [g, g]
    if len(same) == 1:
        return f"gen {g.name}"
    head = f"gen {g.name}"
    if sum(1 for h in same if h.sort == g.sort) > 1:
        head += "[" + ",".join(f"{k}={v}" for k, v in g.attributes) + "]"
    return f"{head}:{_word_text(g.arity)}->{_word_text(g.coarity)}"


def serialize_term(t: Term, sig: Optional[Signature] = None, gen_text=None) -> str:
    gen_text = gen_text or (lambda g: _gen_text(g, sig))
    if isinstance(t, Gen):
        return gen_text(t.generator)
    if isinstance(t, Id):
        return f"id {t.colour}"
    if isinstance(t, IdEmpty):
        return "empty"
    if isinstance(t, Seq):
        return f"({serialize_term(t.left, sig, gen_text)} ; {serialize_term(t.right, sig, gen_text)})"
    if isinstance(t, Tensor):
        return f"({serialize_term(t.left, sig, gen_text)} * {serialize_term(t.right, sig, gen_text)})"
    raise TypeError(t)


# ---------------------------------------------------------------------------
# ZX diagrams


def _zx_atom(sc: Scanner) -> Optional[Term]:
    from .zx import H_GEN, Q, SWAP_GEN, x_gen, z_gen

    tok = sc.peek()
    if tok in ("Z", "X"):
        sc.next()
        sc.expect("(")
        n = sc.word("arity")
        sc.expect(",")
        m = sc.word("coarity")
        sc.expect(",")
        where = sc.here()
        p = sc.word("phase")
        sc.expect(")")
        try:
            n_i, m_i = int(n), int(m)
        except ValueError:
            raise sc.error("spider legs must be integers") from None
        if n_i < 0 or m_i < 0:
            raise sc.error("spider legs must be non-negative")
        ph = _rational(p, where)
        return Gen((z_gen if tok == "Z" else x_gen)(n_i, m_i, ph))
    if tok == "H":
        sc.next()
        return Gen(H_GEN)
    if tok == "swap":
        sc.next()
        return Gen(SWAP_GEN)
    if tok == "id":
        sc.next()
        c = sc.word("colour")
        if c != Q:
            raise sc.error(f"ZX diagrams have the single colour {Q!r}")
        return Id(c)
    return None


def parse_zx(text: str) -> Term:
    sc = Scanner(text)
    t = _generic_term(sc, _zx_atom)
    sc.finish()
    return t


def _phase_text(p: Fraction) -> str:
    return str(p)


def _zx_gen_text(g: Generator) -> str:
    if g.name in ("Z", "X"):
        return f"{g.name}({len(g.arity)},{len(g.coarity)},{_phase_text(g.attr('phase'))})"
    if g.name in ("H", "swap"):
        return g.name
    raise ValueError(f"{g} is not a ZX generator")


def serialize_zx(t: Term) -> str:
    return serialize_term(t, gen_text=_zx_gen_text)


# ---------------------------------------------------------------------------
# layered terms


def parse_layered(text: str, sig) -> Term:
    from . import layered as L

    sc = Scanner(text)

    def bracket_args() -> list[list[str]]:
        sc.expect("[")
        parts: list[list[str]] = [[]]
        while sc.peek() != "]":
            tok = sc.peek()
            if tok is None:
                raise sc.error("unterminated '['")
            if tok == "|":
                sc.next()
                parts.append([])
            elif tok == ",":
                sc.next()
            else:
                parts[-1].append(sc.word())
        sc.expect("]")
        return parts

    def braced(fn):
        sc.expect("{")
        t = fn()
        sc.expect("}")
        return t

    def layered_atom(s: Scanner) -> Optional[Term]:
        tok = s.peek()
        where = s.here()
        try:
            if tok == "at":
                s.next()
                args = bracket_args()
                layer = args[0][0] if args and args[0] else ""
                if layer not in sig.theories:
                    raise ParseError(f"unknown layer {layer!r}", *where)
                inner_sig = sig.theories[layer].signature

                def inner():
                    return _generic_term(s, _any_atom(inner_sig))

                return sig.internal(layer, braced(inner))
            if tok in ("refine", "coarsen"):
                s.next()
                args = bracket_args()
                if len(args) not in (1, 2) or len(args[0]) != 1:
                    raise ParseError(f"expected {tok}[arrow|colours]", *where)
                f = args[0][0]
                if len(args) == 1:
                    src = sig.colours(sig.arrow(f).src)
                    if len(src) != 1:
                        raise ParseError(f"{tok}[{f}] needs its colours when the source layer has several", *where)
                    word = src
                else:
                    word = tuple(args[1])
                return (sig.refine if tok == "refine" else sig.coarsen)(f, word)
            if tok == "box":
                s.next()
                args = bracket_args()
                f = args[0][0]
                body = braced(lambda: _generic_term(s, layered_atom))
                return L.box(sig, f, body)
            if tok == "cobox":
                s.next()
                args = bracket_args()
                if len(args) not in (3, 5):
                    raise ParseError("expected cobox[arrow|left|right] or cobox[arrow|left|right|A|B]", *where)
                f = args[0][0]
                body = braced(lambda: _generic_term(s, layered_atom))
                a, b = (args[3], args[4]) if len(args) == 5 else (None, None)
                return L.cobox(sig, f, tuple(args[1]), tuple(args[2]), body, a, b)
        except ParseError:
            raise
        except LmtError as e:
            raise ParseError(str(e), *where) from None
        return None

    t = _generic_term(sc, layered_atom)
    sc.finish()
    L.layered_sort(sig, t)
    return t


def _any_atom(sig: Signature):
    base = _gen_atom(sig)

    def atom(sc: Scanner) -> Optional[Term]:
        t = base(sc)
        if t is not None:
            return t
        if any(f.name in ("Z", "X") for f in sig.families):
            return _zx_atom(sc)
        return None

    return atom


def serialize_layered(t: Term, sig) -> str:
    from . import layered as L

    def gen_text(g: Generator) -> str:
        if L.is_box(g):
            p = g.payload
            return f"box[{p.arrow}]{{{serialize_layered(p.inner.to_term(), sig)}}}"
        if L.is_cobox(g):
            p = g.payload
            head = f"cobox[{p.arrow}|{_word_text(p.left)}|{_word_text(p.right)}"
            try:
                ok = sig.preimage(p.arrow, tuple(p.inner.dom)) == p.a and sig.preimage(p.arrow, tuple(p.inner.cod)) == p.b
            except LmtError:
                ok = False
            if not ok:
                head += f"|{_word_text(p.a)}|{_word_text(p.b)}"
            return f"{head}]{{{serialize_layered(p.inner.to_term(), sig)}}}"
        if L.is_boundary(g):
            kind, _, rest = g.name.partition("[")
            f = rest[:-1]
            word = g.arity if kind == "refine" else g.coarity
            return f"{kind}[{f}|{_word_text(L.split_colour(c)[0] for c in word)}]"
        layer, orig = L.untag_generator(g)
        inner_sig = sig.theories[layer].signature
        if any(f.name in ("Z", "X") for f in inner_sig.families) and orig.name in ("Z", "X", "H", "swap"):
            return f"at[{layer}]{{{_zx_gen_text(orig)}}}"
        return f"at[{layer}]{{{_gen_text(orig, inner_sig)}}}"

    def walk(u: Term) -> str:
        if isinstance(u, Gen):
            return gen_text(u.generator)
        if isinstance(u, Id):
            c, layer = L.split_colour(u.colour)
            return f"at[{layer}]{{id {c}}}"
        if isinstance(u, IdEmpty):
            return "empty"
        if isinstance(u, Seq):
            return f"({walk(u.left)} ; {walk(u.right)})"
        if isinstance(u, Tensor):
            return f"({walk(u.left)} * {walk(u.right)})"
        raise TypeError(u)

    return walk(t)


# ---------------------------------------------------------------------------
# JSON helpers


def _load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None


def _need(doc: dict, key: str, kind, default=None):
    if key not in doc:
        if default is not None:
            return default
        raise ParseError(f"missing field {key!r}")
    v = doc[key]
    if not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return v


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False)


# ---------------------------------------------------------------------------
# signatures and theories


def signature_doc(sig: Signature) -> dict:
    gens = []
    for g in sig.generators:
        d = {"name": g.name, "arity": list(g.arity), "coarity": list(g.coarity)}
        if g.attributes:
            d["attributes"] = {k: str(v) for k, v in g.attributes}
        gens.append(d)
    return {"colours": list(sig.colours), "generators": gens}


def signature_from_doc(doc: dict) -> Signature:
    if not isinstance(doc, dict):
        raise ParseError("a signature must be a JSON object")
    colours = _need(doc, "colours", list)
    gens = []
    for i, g in enumerate(_need(doc, "generators", list, [])):
        if not isinstance(g, dict):
            raise ParseError(f"generator {i} must be an object")
        attrs = {k: _rational(str(v)) for k, v in (g.get("attributes") or {}).items()}
        gens.append(Generator(str(_need(g, "name", str)), tuple(_need(g, "arity", list, [])),
                              tuple(_need(g, "coarity", list, [])), attrs))
    try:
        return make_signature(tuple(colours), tuple(gens))
    except (LmtError, ValueError) as e:
        raise ParseError(str(e)) from None


def parse_signature(text: str) -> Signature:
    return signature_from_doc(_load_json(text))


def serialize_signature(sig: Signature) -> str:
    return _dump(signature_doc(sig))


_THEORY_FLAGS = {
    "monoids": "Monoid",
    "comonoids": "Comonoid",
    "symmetric": "SymmetricClosure",
    "uniformComonoids": "UniformComonoids",
    "oneOneNaturalMonoids": "OneOneNaturalMonoids",
    "indexedMonoids": "IndexedMonoids",
}


def theory_from_doc(doc: dict) -> Theory:
    """A theory document: a signature plus equations and flags. Flags name
    built-in structure added on top (monoids, comonoids, symmetric, ...)."""
    from .theories import builtin_theory

    sig = signature_from_doc(doc)
    flags = _need(doc, "flags", list, [])
    base = make_theory(sig)
    for fl in flags:
        if fl not in _THEORY_FLAGS:
            raise ParseError(f"unknown flag {fl!r}; expected one of {', '.join(_THEORY_FLAGS)}")
        base = builtin_theory(_THEORY_FLAGS[fl], base)
    eqs = []
    for i, e in enumerate(_need(doc, "equations", list, [])):
        name = e.get("name", f"eq{i}")
        try:
            lhs = parse_term(_need(e, "lhs", str), base.signature)
            rhs = parse_term(_need(e, "rhs", str), base.signature)
            eqs.append(Equation(name, lhs, rhs))
        except ParseError as err:
            raise ParseError(f"equation {name}: {err.message}", err.line, err.column) from None
        except LmtError as err:
            raise ParseError(f"equation {name}: {err}") from None
    return base.extend(equations=eqs)


def theory_doc(th: Theory, own_equations: Optional[list[Equation]] = None, flags: tuple = ()) -> dict:
    doc = signature_doc(th.signature)
    eqs = th.equations if own_equations is None else own_equations
    doc["equations"] = [{"name": e.name, "lhs": serialize_term(e.lhs, th.signature),
                         "rhs": serialize_term(e.rhs, th.signature)} for e in eqs]
    doc["flags"] = list(flags)
    return doc


def parse_theory(text: str) -> Theory:
    return theory_from_doc(_load_json(text))


# ---------------------------------------------------------------------------
# MBQC graphs


def graph_doc(g) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [list(e) for e in g.graph.sorted_edges()],
        "inputs": list(g.inputs),
        "outputs": list(g.outputs),
        "measure": {v: {"plane": p, "angle": str(a)} for v, (p, a) in sorted(g.measure.items())},
        "inLabels": {v: list(w) for v, w in g.in_labels.items() if w},
        "outLabels": {v: list(w) for v, w in g.out_labels.items() if w},
    }


def graph_from_doc(doc: dict):
    from .mbqc import make_graph

    if not isinstance(doc, dict):
        raise ParseError("a graph must be a JSON object")
    vertices = [str(v) for v in _need(doc, "vertices", list)]
    edges = []
    for e in _need(doc, "edges", list, []):
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"edge {e!r} is not a pair")
        edges.append((str(e[0]), str(e[1])))
    measure = {}
    for v, m in _need(doc, "measure", dict, {}).items():
        if not isinstance(m, dict):
            raise ParseError(f"measurement of {v} must be an object")
        measure[v] = (_need(m, "plane", str), _rational(str(_need(m, "angle", (str, int)))))
    try:
        return make_graph(vertices, edges, _need(doc, "inputs", list, []), _need(doc, "outputs", list, []),
                          measure, {k: tuple(v) for k, v in _need(doc, "inLabels", dict, {}).items()},
                          {k: tuple(v) for k, v in _need(doc, "outLabels", dict, {}).items()})
    except LmtError as e:
        raise ParseError(str(e)) from None


def parse_graph(text: str):
    return graph_from_doc(_load_json(text))


def serialize_graph(g) -> str:
    return _dump(graph_doc(g))


# ---------------------------------------------------------------------------
# channels


def _element_from_json(v):
    if isinstance(v, str):
        return v
    if isinstance(v, list):
        return tuple(_element_from_json(x) for x in v)
    raise ParseError(f"set elements must be strings or arrays, found {v!r}")


def _element_to_json(e):
    if isinstance(e, tuple):
        return [_element_to_json(x) for x in e]
    return e


def element_key(e) -> str:
    """The key an element gets in the kernel object."""
    return e if isinstance(e, str) else json.dumps(_element_to_json(e), separators=(",", ":"))


def channel_doc(ch) -> dict:
    return {
        "domain": [_element_to_json(x) for x in ch.domain],
        "codomain": [_element_to_json(y) for y in ch.codomain],
        "kernel": {element_key(x): {element_key(y): str(p) for y, p in zip(ch.codomain, r) if p}
                   for x, r in zip(ch.domain, ch.rows)},
    }


def channel_from_doc(doc: dict):
    from .prob import Channel

    if not isinstance(doc, dict):
        raise ParseError("a channel must be a JSON object")
    dom = [_element_from_json(v) for v in _need(doc, "domain", list)]
    cod = [_element_from_json(v) for v in _need(doc, "codomain", list)]
    kern = _need(doc, "kernel", dict)
    ck = {element_key(y): i for i, y in enumerate(cod)}
    rows = []
    for x in dom:
        row = kern.get(element_key(x))
        if not isinstance(row, dict):
            raise ParseError(f"kernel has no row for {element_key(x)!r}")
        r = [Fraction(0)] * len(cod)
        for yk, p in row.items():
            if yk not in ck:
                raise ParseError(f"row {element_key(x)!r} mentions {yk!r} outside the codomain")
            r[ck[yk]] = _rational(str(p))
        rows.append(tuple(r))
    extra = set(kern) - {element_key(x) for x in dom}
    if extra:
        raise ParseError(f"kernel rows outside the domain: {sorted(extra)}")
    try:
        return Channel(tuple(dom), tuple(cod), tuple(rows))
    except LmtError as e:
        raise ParseError(str(e)) from None


def parse_channel(text: str):
    return channel_from_doc(_load_json(text))


def serialize_channel(ch) -> str:
    return _dump(channel_doc(ch))


# ---------------------------------------------------------------------------
# processes


def parse_process(text: str):
    from .ccs import NIL, TAU, Par, Prefix

    sc = Scanner(text)

    def proc():
        tok = sc.peek()
        if tok == "0":
            sc.next()
            return NIL
        if tok == "(":
            sc.next()
            left = proc()
            sc.expect("|")
            right = proc()
            sc.expect(")")
            return Par(left, right)
        if sc.peek_kind() == "word":
            act = sc.next()
            if act.startswith("~") and act[1:] == TAU:
                raise sc.error("the silent action has no co-action")
            sc.expect(".")
            return Prefix(act, proc())
        raise sc.error(f"expected a process, found {tok!r}")

    p = proc()
    sc.finish()
    return p


def serialize_process(p) -> str:
    return str(p)


# ---------------------------------------------------------------------------
# layered signatures


def _layer_theory(doc) -> Theory:
    if isinstance(doc, dict) and doc.get("builtin") == "zx":
        from .zx import zx_theory

        return zx_theory()
    if isinstance(doc, dict) and "builtin" in doc:
        raise ParseError(f"unknown builtin layer {doc['builtin']!r}")
    return theory_from_doc(doc)


def _gen_key(g: Generator, sig: Signature) -> str:
    return _gen_text(g, sig)[len("gen "):]


def layered_signature_from_doc(doc: dict):
    """Document shape::

        {"layers": {LAYER: theory document or {"builtin": "zx"}},
         "arrows": [{"name", "src", "dst"}],
         "composites": [{"first", "second", "result"}],
         "functorData": {ARROW: {"colours": {C: [colours]},
                                 "generators": {NAME or NAME:W->W: term text}}},
         "symmetric": bool (optional)}
    """
    from .layered import Translation, make_layer_graph, make_layered_signature

    if not isinstance(doc, dict):
        raise ParseError("a layered signature must be a JSON object")
    layers = _need(doc, "layers", dict)
    theories = {name: _layer_theory(d) for name, d in layers.items()}
    arrows = []
    for a in _need(doc, "arrows", list, []):
        arrows.append((str(_need(a, "name", str)), str(_need(a, "src", str)), str(_need(a, "dst", str))))
    comps = {(c["first"], c["second"]): c["result"] for c in _need(doc, "composites", list, [])}
    try:
        lg = make_layer_graph(list(layers), arrows, comps)
    except LmtError as e:
        raise ParseError(str(e)) from None
    functors = {}
    for name, fd in _need(doc, "functorData", dict, {}).items():
        if name not in lg.arrows:
            raise ParseError(f"functor data for unknown arrow {name!r}")
        ar = lg.arrows[name]
        src, dst = theories[ar.src].signature, theories[ar.dst].signature
        cmap = {c: tuple(w) for c, w in _need(fd, "colours", dict).items()}
        gmap = {}
        for key, text in _need(fd, "generators", dict, {}).items():
            g = parse_term(f"gen {key}", src)
            sc = Scanner(text)
            img = _generic_term(sc, _any_atom(dst))
            sc.finish()
            gmap[g.generator] = img
        functors[name] = Translation(cmap, gmap)
    try:
        return make_layered_signature(lg, theories, functors, doc.get("symmetric"))
    except LmtError as e:
        raise ParseError(str(e)) from None


def parse_layered_signature(text: str):
    return layered_signature_from_doc(_load_json(text))
