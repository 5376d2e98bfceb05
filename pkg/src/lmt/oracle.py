"""Brute-force structural congruence on syntax trees.

This module deliberately shares nothing with the slice machinery of
``diagram``. Terms are put in a flattened pre-normal form (associativity and
unit laws), and the class of a term is the closure under the interchange law
applied in both directions at every subterm. The closure is finite because
pre-normal forms with a fixed multiset of generators are finitely many.

Pre-normal forms are hash-consed into integers. A node is one of
  ("g", generator)     a generator
  ("i", colour)        identity on one colour
  ("e", ())            the empty identity (only ever the whole term)
  ("s", children)      sequential composite of >= 2 non-identity factors
  ("t", children)      tensor of >= 2 factors, none of them empty
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator

from .signature import Gen, Id, IdEmpty, Seq, Tensor, Term


class _Store:
    def __init__(self):
        self.ids: dict = {}
        self.nodes: list = []
        self.sorts: list = []
        self.identity: list = []
        self.moves: dict[int, tuple] = {}
        self.pairs: dict[tuple, tuple] = {}
        self.tensors: dict[tuple, int] = {}
        self.seqs: dict[tuple, int] = {}

    def intern(self, tag: str, payload) -> int:
        k = (tag, payload)
        n = self.ids.get(k)
        if n is not None:
            return n
        n = len(self.nodes)
        self.ids[k] = n
        self.nodes.append(k)
        if tag == "g":
            srt = (payload.arity, payload.coarity)
        elif tag == "i":
            srt = ((payload,), (payload,))
        elif tag == "e":
            srt = ((), ())
        elif tag == "s":
            srt = (self.sorts[payload[0]][0], self.sorts[payload[-1]][1])
        else:
            dom, cod = (), ()
            for c in payload:
                a, b = self.sorts[c]
                dom += a
                cod += b
            srt = (dom, cod)
        self.sorts.append(srt)
        self.identity.append(
            tag in ("i", "e") or (tag == "t" and all(self.nodes[c][0] == "i" for c in payload))
        )
        return n


_S = _Store()
EMPTY = _S.intern("e", ())


def reset() -> None:
    """Drop the node store (it only grows otherwise)."""
    global _S, EMPTY
    _S = _Store()
    EMPTY = _S.intern("e", ())


def tag(r: int) -> str:
    return _S.nodes[r][0]


def children(r: int) -> tuple:
    return _S.nodes[r][1]


def rsort(r: int) -> tuple:
    return _S.sorts[r]


def mk_tensor(factors: Iterable[int]) -> int:
    factors = tuple(factors)
    hit = _S.tensors.get(factors)
    if hit is None:
        hit = _S.tensors[factors] = _mk_tensor(factors)
    return hit


def _mk_tensor(factors: tuple) -> int:
    flat: list[int] = []
    for f in factors:
        t, p = _S.nodes[f]
        if t == "t":
            flat.extend(p)
        elif t != "e":
            flat.append(f)
    if not flat:
        return EMPTY
    if len(flat) == 1:
        return flat[0]
    return _S.intern("t", tuple(flat))


def ident(word) -> int:
    return mk_tensor(_S.intern("i", c) for c in word)


def mk_seq(factors: Iterable[int], dom) -> int:
    key = (tuple(factors), dom)
    hit = _S.seqs.get(key)
    if hit is None:
        hit = _S.seqs[key] = _mk_seq(*key)
    return hit


def _mk_seq(factors: tuple, dom) -> int:
    flat: list[int] = []
    ident_flags = _S.identity
    for f in factors:
        t, p = _S.nodes[f]
        if t == "s":
            flat.extend(p)
        elif not ident_flags[f]:
            flat.append(f)
    if not flat:
        return ident(dom)
    if len(flat) == 1:
        return flat[0]
    return _S.intern("s", tuple(flat))


def from_term(t: Term) -> int:
    if isinstance(t, Gen):
        return _S.intern("g", t.generator)
    if isinstance(t, Id):
        return _S.intern("i", t.colour)
    if isinstance(t, IdEmpty):
        return EMPTY
    if isinstance(t, Seq):
        return mk_seq([from_term(t.left), from_term(t.right)], t.sort.arity)
    if isinstance(t, Tensor):
        return mk_tensor([from_term(t.left), from_term(t.right)])
    raise TypeError(t)


def _seq_factors(r: int) -> tuple:
    t, p = _S.nodes[r]
    if t == "s":
        return p
    return () if _S.identity[r] else (r,)


def _tensor_factors(r: int) -> tuple:
    t, p = _S.nodes[r]
    if t == "t":
        return p
    return () if t == "e" else (r,)


def _tensor_to_seq(r: int) -> Iterator[int]:
    dom = rsort(r)[0]
    parts = []
    for f in children(r):
        sf = _seq_factors(f)
        fdom = rsort(f)[0]
        options = []
        for k in range(len(sf) + 1):
            pre = mk_seq(sf[:k], fdom)
            suf = mk_seq(sf[k:], rsort(pre)[1])
            options.append((k == 0, k == len(sf), pre, suf))
        parts.append(options)
    for combo in itertools.product(*parts):
        if all(c[0] for c in combo) or all(c[1] for c in combo):
            continue
        top = mk_tensor(c[2] for c in combo)
        bottom = mk_tensor(c[3] for c in combo)
        yield mk_seq([top, bottom], dom)


def _width_prefixes(factors, side: int) -> list[int]:
    out = [0]
    for f in factors:
        out.append(out[-1] + len(rsort(f)[side]))
    return out


def _seq_pair_to_tensor(a: int, b: int) -> Iterator[int]:
    ta, tb = _tensor_factors(a), _tensor_factors(b)
    wa = _width_prefixes(ta, 1)
    wb = _width_prefixes(tb, 0)
    for i in range(len(ta) + 1):
        for j in range(len(tb) + 1):
            if wa[i] != wb[j]:
                continue
            if (i, j) in ((0, 0), (len(ta), len(tb))):
                continue
            left_a, right_a = mk_tensor(ta[:i]), mk_tensor(ta[i:])
            left = mk_seq([left_a, mk_tensor(tb[:j])], rsort(left_a)[0])
            right = mk_seq([right_a, mk_tensor(tb[j:])], rsort(right_a)[0])
            yield mk_tensor([left, right])


def moves(r: int) -> tuple:
    """All pre-normal forms one interchange step away from ``r``."""
    hit = _S.moves.get(r)
    if hit is None:
        hit = tuple(dict.fromkeys(_moves(r)))
        _S.moves[r] = hit
    return hit


def _moves(r: int) -> Iterator[int]:
    t, fs = _S.nodes[r]
    if t not in ("s", "t"):
        return
    dom = rsort(r)[0]
    for i, f in enumerate(fs):
        for f2 in moves(f):
            new = fs[:i] + (f2,) + fs[i + 1:]
            yield mk_seq(new, dom) if t == "s" else mk_tensor(new)
    if t == "t":
        yield from _tensor_to_seq(r)
    else:
        pairs = _S.pairs
        for i in range(len(fs) - 1):
            k = (fs[i], fs[i + 1])
            ms = pairs.get(k)
            if ms is None:
                ms = pairs[k] = tuple(_seq_pair_to_tensor(*k))
            for m in ms:
                yield mk_seq(fs[:i] + (m,) + fs[i + 2:], dom)


def closure(r: int) -> set[int]:
    seen = {r}
    stack = [r]
    while stack:
        cur = stack.pop()
        for nxt in moves(cur):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def oracle_classes(terms: Iterable[Term]) -> dict[Term, int]:
    """Assign each term the index of its structural class."""
    index: dict[int, int] = {}
    out: dict[Term, int] = {}
    n = 0
    for t in terms:
        r = from_term(t)
        if r not in index:
            for member in closure(r):
                index[member] = n
            n += 1
        out[t] = index[r]
    return out


def oracle_equal(t: Term, s: Term) -> bool:
    if t.sort != s.sort:
        return False
    return from_term(s) in closure(from_term(t))
