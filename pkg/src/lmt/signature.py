"""Monoidal signatures, sorted terms and signature morphisms.

Colours are plain strings. A word over colours is a tuple of strings, the
empty word being ``()``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Hashable, Iterable, Mapping, Union

from .errors import (
    DuplicateColour,
    DuplicateGenerator,
    SortMismatch,
    UnknownColourInSort,
    UnknownGenerator,
)

Word = tuple[str, ...]

_IDENT = re.compile(r"^\w+$")


def is_identifier(name: str) -> bool:
    return isinstance(name, str) and bool(_IDENT.match(name))


@dataclass(frozen=True)
class Sort:
    arity: Word
    coarity: Word

    def __str__(self) -> str:
        return f"({' '.join(self.arity) or 'ε'}, {' '.join(self.coarity) or 'ε'})"


def _attr_tuple(attributes: Mapping[str, Any] | Iterable | None) -> tuple:
    if not attributes:
        return ()
    items = attributes.items() if isinstance(attributes, Mapping) else attributes
    return tuple(sorted((str(k), Fraction(v)) for k, v in items))


def payload_key(payload: Any) -> Hashable:
    """A totally ordered key for a generator payload."""
    if payload is None:
        return ()
    key = getattr(payload, "key", None)
    if callable(key):
        return ("k", key())
    return ("r", repr(payload))


@dataclass(frozen=True)
class Generator:
    """A sorted generator. ``payload`` carries opaque internal structure
    (for instance the contents of a functor box) and takes part in equality."""

    name: str
    arity: Word
    coarity: Word
    attributes: tuple = ()
    payload: Any = None

    def __post_init__(self):
        object.__setattr__(self, "arity", tuple(self.arity))
        object.__setattr__(self, "coarity", tuple(self.coarity))
        object.__setattr__(self, "attributes", _attr_tuple(self.attributes))

    @property
    def sort(self) -> Sort:
        return Sort(self.arity, self.coarity)

    def attr(self, name: str, default=None):
        for k, v in self.attributes:
            if k == name:
                return v
        return default

    @cached_property
    def key(self) -> tuple:
        return (self.name, self.arity, self.coarity, self.attributes, payload_key(self.payload))

    def __str__(self) -> str:
        extra = ",".join(f"{k}={v}" for k, v in self.attributes)
        return f"{self.name}{'[' + extra + ']' if extra else ''}:{self.sort}"


@dataclass(frozen=True)
class GeneratorFamily:
    """An infinite family of generators sharing a name, one colour on every
    wire, any arity and coarity, and the listed rational parameters."""

    name: str
    colour: str
    params: tuple[str, ...] = ()

    def admits(self, g: Generator) -> bool:
        return (
            g.name == self.name
            and g.payload is None
            and all(c == self.colour for c in g.arity + g.coarity)
            and tuple(k for k, _ in g.attributes) == tuple(sorted(self.params))
        )


# ---------------------------------------------------------------------------
# terms


class Term:
    """Base class of the five term formers."""

    __slots__ = ()

    @property
    def dom(self) -> Word:
        return self.sort.arity

    @property
    def cod(self) -> Word:
        return self.sort.coarity

    def __rshift__(self, other: "Term") -> "Term":
        return Seq(self, other)

    def __matmul__(self, other: "Term") -> "Term":
        return Tensor(self, other)


@dataclass(frozen=True)
class Gen(Term):
    generator: Generator

    @cached_property
    def sort(self) -> Sort:
        return self.generator.sort


@dataclass(frozen=True)
class Id(Term):
    colour: str

    @cached_property
    def sort(self) -> Sort:
        return Sort((self.colour,), (self.colour,))


@dataclass(frozen=True)
class IdEmpty(Term):
    @cached_property
    def sort(self) -> Sort:
        return Sort((), ())


@dataclass(frozen=True)
class Seq(Term):
    left: Term
    right: Term

    @cached_property
    def sort(self) -> Sort:
        l, r = self.left.sort, self.right.sort
        if l.coarity != r.arity:
            raise SortMismatch(f"cannot compose {l} with {r}")
        return Sort(l.arity, r.coarity)


@dataclass(frozen=True)
class Tensor(Term):
    left: Term
    right: Term

    @cached_property
    def sort(self) -> Sort:
        l, r = self.left.sort, self.right.sort
        return Sort(l.arity + r.arity, l.coarity + r.coarity)


EMPTY = IdEmpty()


def ident(word: Iterable[str]) -> Term:
    """The identity on a word: a tensor of ``Id`` leaves, or ``IdEmpty``."""
    word = tuple(word)
    if not word:
        return EMPTY
    t: Term = Id(word[0])
    for c in word[1:]:
        t = Tensor(t, Id(c))
    return t


def _balanced(node, terms):
    if len(terms) == 1:
        return terms[0]
    mid = len(terms) // 2
    return node(_balanced(node, terms[:mid]), _balanced(node, terms[mid:]))


def seq(*terms: Term) -> Term:
    """Sequential composite of ``terms``; long chains are built balanced so
    that recursion depth stays logarithmic."""
    if not terms:
        raise ValueError("seq needs at least one term")
    if len(terms) <= 3:
        t = terms[0]
        for s in terms[1:]:
            t = Seq(t, s)
        return t
    return _balanced(Seq, list(terms))


def tensor(*terms: Term) -> Term:
    if not terms:
        return EMPTY
    if len(terms) <= 3:
        t = terms[0]
        for s in terms[1:]:
            t = Tensor(t, s)
        return t
    return _balanced(Tensor, list(terms))


def generators_in(term: Term) -> list[Generator]:
    out: list[Generator] = []
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Gen):
            out.append(t.generator)
        elif isinstance(t, (Seq, Tensor)):
            stack.append(t.right)
            stack.append(t.left)
    return out


def colours_in(term: Term) -> set[str]:
    out: set[str] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Gen):
            out.update(t.generator.arity, t.generator.coarity)
        elif isinstance(t, Id):
            out.add(t.colour)
        elif isinstance(t, (Seq, Tensor)):
            stack.extend((t.left, t.right))
    return out


def term_size(term: Term) -> int:
    if isinstance(term, (Seq, Tensor)):
        return 1 + term_size(term.left) + term_size(term.right)
    return 1


# ---------------------------------------------------------------------------
# signatures


@dataclass(frozen=True)
class Signature:
    colours: tuple[str, ...]
    generators: tuple[Generator, ...]
    families: tuple[GeneratorFamily, ...] = ()

    @cached_property
    def _generator_set(self) -> frozenset:
        return frozenset(self.generators)

    def contains(self, g: Generator) -> bool:
        return g in self._generator_set or any(f.admits(g) for f in self.families)

    def by_name(self, name: str) -> list[Generator]:
        return [g for g in self.generators if g.name == name]


def make_signature(
    colours: Iterable[str],
    generators: Iterable[Generator],
    families: Iterable[GeneratorFamily] = (),
    *,
    check_names: bool = True,
) -> Signature:
    colours = tuple(colours)
    seen: set[str] = set()
    for c in colours:
        if check_names and not is_identifier(c):
            raise ValueError(f"bad colour name {c!r}")
        if c in seen:
            raise DuplicateColour(c)
        seen.add(c)
    gens = tuple(generators)
    keys: set = set()
    for g in gens:
        if check_names and not is_identifier(g.name):
            raise ValueError(f"bad generator name {g.name!r}")
        for c in g.arity + g.coarity:
            if c not in seen:
                raise UnknownColourInSort(f"colour {c!r} in {g}")
        k = (g.name, g.arity, g.coarity, g.attributes, payload_key(g.payload))
        if k in keys:
            raise DuplicateGenerator(str(g))
        keys.add(k)
    fams = tuple(families)
    for f in fams:
        if f.colour not in seen:
            raise UnknownColourInSort(f"colour {f.colour!r} in family {f.name}")
    return Signature(colours, gens, fams)


def sort_of(term: Term, sig: Signature | None = None) -> Sort:
    """The sort of ``term``; with ``sig`` every leaf is also checked against it."""
    if sig is not None:
        colours = set(sig.colours)
        for g in generators_in(term):
            if not sig.contains(g):
                raise UnknownGenerator(str(g))
        for c in colours_in(term):
            if c not in colours:
                raise UnknownColourInSort(c)
    return term.sort


def parallel(t: Term, s: Term, sig: Signature | None = None) -> bool:
    return sort_of(t, sig) == sort_of(s, sig)


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class SignatureMorphism:
    colour_map: Mapping[str, str]
    generator_map: Union[Mapping[Generator, Generator], Callable[[Generator], Generator]] = field(
        default_factory=dict
    )

    def colour(self, c: str) -> str:
        return self.colour_map[c]

    def word(self, w: Iterable[str]) -> Word:
        return tuple(self.colour_map[c] for c in w)

    def generator(self, g: Generator) -> Generator:
        gm = self.generator_map
        img = gm(g) if callable(gm) else gm[g]
        return img

    def __hash__(self):
        return id(self)


def make_morphism(
    source: Signature,
    target: Signature,
    colour_map: Mapping[str, str],
    generator_map: Mapping[Generator, Generator],
) -> SignatureMorphism:
    for c in source.colours:
        if c not in colour_map:
            raise UnknownColourInSort(f"colour map is not total: {c!r}")
        if colour_map[c] not in target.colours:
            raise UnknownColourInSort(f"image colour {colour_map[c]!r}")
    f = SignatureMorphism(dict(colour_map), dict(generator_map))
    for g in source.generators:
        if g not in generator_map:
            raise UnknownGenerator(f"generator map is not total: {g}")
        img = generator_map[g]
        if not target.contains(img):
            raise UnknownGenerator(f"image generator {img}")
        if img.sort != Sort(f.word(g.arity), f.word(g.coarity)):
            raise SortMismatch(f"{g} maps to {img}")
    return f


def identity_morphism(sig: Signature) -> SignatureMorphism:
    return SignatureMorphism({c: c for c in sig.colours}, lambda g: g)


def map_term(f: SignatureMorphism, term: Term) -> Term:
    if isinstance(term, Gen):
        return Gen(f.generator(term.generator))
    if isinstance(term, Id):
        return Id(f.colour(term.colour))
    if isinstance(term, IdEmpty):
        return term
    if isinstance(term, Seq):
        return Seq(map_term(f, term.left), map_term(f, term.right))
    if isinstance(term, Tensor):
        return Tensor(map_term(f, term.left), map_term(f, term.right))
    raise TypeError(f"not a term: {term!r}")
