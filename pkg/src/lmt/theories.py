"""Built-in theories: monoids, comonoids, symmetries and their natural variants."""

from __future__ import annotations

from typing import Iterable, Union

from .diagram import DerivabilityVerdict, Equation, Theory, derivable, make_theory
from .errors import MissingStructure
from .signature import (
    EMPTY,
    Gen,
    Generator,
    Id,
    Term,
    Word,
    ident,
    make_signature,
    seq,
    tensor,
)

MONOID = "Monoid"
COMONOID = "Comonoid"
SYMMETRIC_CLOSURE = "SymmetricClosure"
UNIFORM_COMONOIDS = "UniformComonoids"
ONE_ONE_NATURAL_MONOIDS = "OneOneNaturalMonoids"
INDEXED_MONOIDS = "IndexedMonoids"
KINDS = (MONOID, COMONOID, SYMMETRIC_CLOSURE, UNIFORM_COMONOIDS, ONE_ONE_NATURAL_MONOIDS, INDEXED_MONOIDS)

# flag names stored on theories
SYMMETRIC = "symmetric"
F_UNIFORM_COMONOIDS = "uniformComonoids"
F_ONE_ONE = "oneOneNaturalMonoids"
F_INDEXED = "indexedMonoids"


def mult(c: str) -> Generator:
    return Generator("m", (c, c), (c,))


def unit(c: str) -> Generator:
    return Generator("u", (), (c,))


def copy(c: str) -> Generator:
    return Generator("d", (c,), (c, c))


def delete(c: str) -> Generator:
    return Generator("e", (c,), ())


def swap(a: str, b: str) -> Generator:
    return Generator("swap", (a, b), (b, a))


def swap_word(v: Word, w: Word) -> Term:
    """The symmetry on words, built from single-colour swaps."""
    v, w = tuple(v), tuple(w)
    if not v or not w:
        return ident(v + w)
    if len(v) == 1 and len(w) == 1:
        return Gen(swap(v[0], w[0]))
    if len(v) > 1:
        a, rest = v[0], v[1:]
        return seq(tensor(Id(a), swap_word(rest, w)), tensor(swap_word((a,), w), ident(rest)))
    a, b, rest = v[0], w[0], w[1:]
    return seq(tensor(Gen(swap(a, b)), ident(rest)), tensor(Id(b), swap_word((a,), rest)))


def copy_word(w: Word) -> Term:
    """Copying on a word: d_ε = id_ε, d_aw = (d_a ⊗ d_w);(id_a ⊗ swap_{a,w} ⊗ id_w)."""
    w = tuple(w)
    if not w:
        return EMPTY
    a, rest = w[0], w[1:]
    if not rest:
        return Gen(copy(a))
    return seq(
        tensor(Gen(copy(a)), copy_word(rest)),
        tensor(Id(a), swap_word((a,), rest), ident(rest)),
    )


def delete_word(w: Word) -> Term:
    w = tuple(w)
    if not w:
        return EMPTY
    return tensor(*[Gen(delete(c)) for c in w])


def _monoid_equations(c: str) -> list[Equation]:
    m, u, i = Gen(mult(c)), Gen(unit(c)), Id(c)
    return [
        Equation(f"assoc[{c}]", seq(tensor(m, i), m), seq(tensor(i, m), m)),
        Equation(f"unit-left[{c}]", seq(tensor(u, i), m), i),
        Equation(f"unit-right[{c}]", seq(tensor(i, u), m), i),
    ]


def _comonoid_equations(c: str) -> list[Equation]:
    d, e, i = Gen(copy(c)), Gen(delete(c)), Id(c)
    return [
        Equation(f"coassoc[{c}]", seq(d, tensor(d, i)), seq(d, tensor(i, d))),
        Equation(f"counit-left[{c}]", seq(d, tensor(e, i)), i),
        Equation(f"counit-right[{c}]", seq(d, tensor(i, e)), i),
    ]


def _colours_of(base) -> tuple[str, ...]:
    if isinstance(base, Theory):
        return base.signature.colours
    return tuple(base)


def _base_theory(base) -> Theory:
    if isinstance(base, Theory):
        return base
    return make_theory(make_signature(tuple(base), ()))


def _with(base: Theory, gens: Iterable[Generator], eqs=(), flags=(), schemata=()) -> Theory:
    sig = base.signature
    have = set(sig.generators)
    new = [g for g in gens if g not in have]
    sig2 = make_signature(sig.colours, sig.generators + tuple(new), sig.families, check_names=False)
    names = {e.name for e in base.equations}
    eqs = [e for e in eqs if e.name not in names]
    return Theory(sig2, base.equations + tuple(eqs), base.flags | frozenset(flags),
                  base.schemata + tuple(s for s in schemata if s not in base.schemata), base.pair_schemata)


def monoids(base) -> Theory:
    t = _base_theory(base)
    cs = t.signature.colours
    return _with(t, [g for c in cs for g in (mult(c), unit(c))], [e for c in cs for e in _monoid_equations(c)])


def comonoids(base) -> Theory:
    t = _base_theory(base)
    cs = t.signature.colours
    return _with(t, [g for c in cs for g in (copy(c), delete(c))], [e for c in cs for e in _comonoid_equations(c)])


def _swap_naturality(colours: tuple[str, ...]):
    def schema(g: Generator) -> list[Equation]:
        out = []
        v, w = g.arity, g.coarity
        s = Gen(g)
        for x in colours:
            out.append(Equation(
                f"swap-nat-r[{g.name}:{','.join(v)}>{','.join(w)}|{x}]",
                seq(tensor(s, Id(x)), swap_word(w, (x,))),
                seq(swap_word(v, (x,)), tensor(Id(x), s)),
            ))
            out.append(Equation(
                f"swap-nat-l[{g.name}:{','.join(v)}>{','.join(w)}|{x}]",
                seq(tensor(Id(x), s), swap_word((x,), w)),
                seq(swap_word((x,), v), tensor(s, Id(x))),
            ))
        return out

    schema.__name__ = "swap_naturality"
    return schema


def symmetric_closure(base) -> Theory:
    t = _base_theory(base)
    cs = t.signature.colours
    if not cs:
        return t
    swaps = [swap(a, b) for a in cs for b in cs]
    eqs = [
        Equation(f"swap-inv[{a},{b}]", seq(Gen(swap(a, b)), Gen(swap(b, a))), ident((a, b)))
        for a in cs for b in cs
    ]
    if SYMMETRIC in t.flags:
        return t
    return _with(t, swaps, eqs, flags=[SYMMETRIC], schemata=[_swap_naturality(cs)])


def _copy_naturality(g: Generator) -> list[Equation]:
    s = Gen(g)
    tag = f"{g.name}:{','.join(g.arity)}>{','.join(g.coarity)}"
    return [
        Equation(f"copy-nat[{tag}]", seq(s, copy_word(g.coarity)), seq(copy_word(g.arity), tensor(s, s))),
        Equation(f"delete-nat[{tag}]", seq(s, delete_word(g.coarity)), delete_word(g.arity)),
    ]


def uniform_comonoids(base) -> Theory:
    t = symmetric_closure(comonoids(base))
    if F_UNIFORM_COMONOIDS in t.flags:
        return t
    return _with(t, (), flags=[F_UNIFORM_COMONOIDS], schemata=[_copy_naturality])


def _monoid_naturality(g: Generator) -> list[Equation]:
    if len(g.arity) != 1 or len(g.coarity) != 1:
        return []
    a, b = g.arity[0], g.coarity[0]
    s = Gen(g)
    tag = f"{g.name}:{a}>{b}"
    return [
        Equation(f"mult-nat[{tag}]", seq(tensor(s, s), Gen(mult(b))), seq(Gen(mult(a)), s)),
        Equation(f"unit-nat[{tag}]", seq(Gen(unit(a)), s), Gen(unit(b))),
    ]


def one_one_natural_monoids(base) -> Theory:
    t = monoids(base)
    if F_ONE_ONE in t.flags:
        return t
    return _with(t, (), flags=[F_ONE_ONE], schemata=[_monoid_naturality])


def indexed_monoids(base) -> Theory:
    t = one_one_natural_monoids(uniform_comonoids(base))
    return _with(t, (), flags=[F_INDEXED])


def builtin_theory(kind: str, base) -> Theory:
    builders = {
        MONOID: monoids,
        COMONOID: comonoids,
        SYMMETRIC_CLOSURE: symmetric_closure,
        UNIFORM_COMONOIDS: uniform_comonoids,
        ONE_ONE_NATURAL_MONOIDS: one_one_natural_monoids,
        INDEXED_MONOIDS: indexed_monoids,
    }
    if kind not in builders:
        raise ValueError(f"unknown theory kind {kind!r}; expected one of {', '.join(KINDS)}")
    return builders[kind](base)


def without_naturality(t: Theory) -> Theory:
    """The same theory with its naturality schemata dropped (flags kept)."""
    return Theory(t.signature, t.equations, t.flags, (), ())


def check_eckmann_hilton(theory: Theory, colour: Union[str, Word], max_depth: int = 8,
                         budget: int = 100_000) -> DerivabilityVerdict:
    """Try to derive cocommutativity d_w = d_w;swap_{w,w} from the counit laws
    and the naturality of copying with respect to copying."""
    if F_UNIFORM_COMONOIDS not in theory.flags:
        raise MissingStructure("theory has no uniform comonoids")
    w = (colour,) if isinstance(colour, str) else tuple(colour)
    lhs = copy_word(w)
    rhs = seq(copy_word(w), swap_word(w, w))
    eqs: list[Equation] = []
    for c in dict.fromkeys(w):
        eqs += [e for e in theory.equations if e.name in (f"counit-left[{c}]", f"counit-right[{c}]")]
        eqs += [e for e in theory.instances_for(copy(c)) if e.name.startswith("copy-nat")]
    return derivable(theory, lhs, rhs, max_depth=max_depth, budget=budget, equations=eqs)
