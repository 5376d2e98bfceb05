"""The ZX-calculus: generators, rules, local Clifford words and a dense evaluator.

Phases are exact rationals in units of π, reduced into [0, 2).
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .diagram import CanonicalDiagram, Equation, Theory, compile_term, make_theory, slice_class
from .errors import DimensionMismatch, DimensionOverflow
from .signature import (
    EMPTY,
    Gen,
    Generator,
    GeneratorFamily,
    Id,
    Term,
    ident,
    make_signature,
    seq,
    tensor,
)
from .theories import _swap_naturality

Q = "q"
Phase = Union[Fraction, int, str]


def phase(p: Phase) -> Fraction:
    """A phase in units of π, reduced into [0, 2)."""
    return Fraction(p) % 2


def z_gen(n: int, m: int, alpha: Phase = 0) -> Generator:
    return Generator("Z", (Q,) * n, (Q,) * m, (("phase", phase(alpha)),))


def x_gen(n: int, m: int, alpha: Phase = 0) -> Generator:
    return Generator("X", (Q,) * n, (Q,) * m, (("phase", phase(alpha)),))


H_GEN = Generator("H", (Q,), (Q,))
SWAP_GEN = Generator("swap", (Q, Q), (Q, Q))


def Z(n: int, m: int, alpha: Phase = 0) -> Term:
    return Gen(z_gen(n, m, alpha))


def X(n: int, m: int, alpha: Phase = 0) -> Term:
    return Gen(x_gen(n, m, alpha))


def H() -> Term:
    return Gen(H_GEN)


def SWAP() -> Term:
    return Gen(SWAP_GEN)


def wires(n: int) -> Term:
    return ident((Q,) * n)


def spider(colour: str, n: int, m: int, alpha: Phase = 0) -> Term:
    return Z(n, m, alpha) if colour == "Z" else X(n, m, alpha)


def is_spider(g: Generator) -> bool:
    return g.name in ("Z", "X") and g.payload is None


def zx_signature():
    return make_signature(
        [Q],
        [H_GEN, SWAP_GEN],
        [GeneratorFamily("Z", Q, ("phase",)), GeneratorFamily("X", Q, ("phase",))],
    )


# circuit gates

def cnot() -> Term:
    """CNOT with the control on the left wire."""
    return seq(tensor(Z(1, 2), Id(Q)), tensor(Id(Q), X(2, 1)))


def cz() -> Term:
    return seq(tensor(Z(1, 2), Id(Q)), tensor(Id(Q), H(), Id(Q)), tensor(Id(Q), Z(2, 1)))


# ---------------------------------------------------------------------------
# local Clifford words

LC_NAMES = ("r/2", "r", "-r/2", "g/2", "g", "-g/2")
_LC_TABLE = {
    "r/2": ("X", Fraction(1, 2)),
    "r": ("X", Fraction(1)),
    "-r/2": ("X", Fraction(-1, 2)),
    "g/2": ("Z", Fraction(1, 2)),
    "g": ("Z", Fraction(1)),
    "-g/2": ("Z", Fraction(-1, 2)),
}


def lc_to_zx(word: Sequence[str]) -> Term:
    """Translate a local Clifford word; letters compose in word order."""
    if not word:
        return Id(Q)
    parts = []
    for letter in word:
        if letter not in _LC_TABLE:
            raise ValueError(f"unknown local Clifford generator {letter!r}")
        colour, p = _LC_TABLE[letter]
        parts.append(spider(colour, 1, 1, p))
    return seq(*parts)


# ---------------------------------------------------------------------------
# semantics

_HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@lru_cache(maxsize=None)
def _kron_h(k: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(k):
        out = np.kron(out, _HAD)
    return out


def _phase_value(p: Fraction) -> complex:
    # exact values for multiples of π/2 keep rule checks free of rounding noise
    quarter = {Fraction(0): 1, Fraction(1, 2): 1j, Fraction(1): -1, Fraction(3, 2): -1j}
    if p in quarter:
        return complex(quarter[p])
    return complex(np.exp(1j * np.pi * float(p)))


@lru_cache(maxsize=None)
def generator_matrix(g: Generator) -> np.ndarray:
    """The 2^m x 2^n matrix of a generator (rows index outputs)."""
    n, m = len(g.arity), len(g.coarity)
    if g.name == "H":
        return _HAD
    if g.name == "swap":
        out = np.zeros((4, 4), dtype=complex)
        for a, b in itertools.product(range(2), repeat=2):
            out[2 * b + a, 2 * a + b] = 1
        return out
    if g.name in ("Z", "X"):
        z = np.zeros((2 ** m, 2 ** n), dtype=complex)
        z[0, 0] += 1
        z[-1, -1] += _phase_value(g.attr("phase", Fraction(0)))
        if g.name == "Z":
            return z
        return _kron_h(m) @ z @ _kron_h(n)
    raise ValueError(f"no semantics for generator {g}")


def evaluate(d: Union[Term, CanonicalDiagram], cap: int = 10) -> np.ndarray:
    """Dense linear map of a diagram, contracted slice by slice.

    The working tensor has one axis per current wire plus one per input, and
    ``cap`` bounds that number."""
    if isinstance(d, CanonicalDiagram):
        dom, slices = d.dom, d.slices
    else:
        dom, _, slices = compile_term(d)
    n = len(dom)
    if n > cap:
        raise DimensionOverflow(f"{n} inputs exceed the cap of {cap}")
    psi = np.eye(2 ** n, dtype=complex).reshape((2,) * (2 * n)) if n else np.ones((), dtype=complex)
    width = n
    for o, g in slices:
        k, c = len(g.arity), len(g.coarity)
        new_width = width - k + c
        if new_width + n > cap:
            raise DimensionOverflow(f"cut of width {new_width} with {n} inputs exceeds the cap of {cap}")
        t = generator_matrix(g).reshape((2,) * (c + k))
        psi = np.tensordot(t, psi, axes=(list(range(c, c + k)), list(range(o, o + k))))
        if c and o:
            psi = np.moveaxis(psi, list(range(c)), list(range(o, o + c)))
        width = new_width
    return psi.reshape(2 ** width, 2 ** n)


def proportionality(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> Optional[complex]:
    """The λ with b ≈ λ·a, or None. Both maps are scaled by the entry where
    ``a`` is largest before the entrywise comparison."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"{a.shape} vs {b.shape}")
    ma, mb = np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)
    if ma <= tol or mb <= tol:
        return 1.0 + 0j if (ma <= tol and mb <= tol) else None
    idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    if abs(b[idx]) <= tol * mb:
        return None
    an, bn = a / a[idx], b / b[idx]
    if np.max(np.abs(an - bn)) > tol:
        return None
    return complex(b[idx] / a[idx])


def prop_equal(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    return proportionality(a, b, tol) is not None


# ---------------------------------------------------------------------------
# rules


def _fusion(colour: str, n1: int, a: int, k: int, b: int, m2: int, alpha, beta) -> Equation:
    lhs = seq(
        tensor(spider(colour, n1, a + k, alpha), wires(b)),
        tensor(wires(a), spider(colour, k + b, m2, beta)),
    )
    rhs = spider(colour, n1 + b, a + m2, Fraction(alpha) + Fraction(beta))
    name = f"fusion[{colour}|{n1},{a},{k},{b},{m2}|{phase(alpha)},{phase(beta)}]"
    return Equation(name, lhs, rhs)


def _other(colour: str) -> str:
    return "X" if colour == "Z" else "Z"


def _single_rules(g: Generator) -> list[Equation]:
    """Rule instances determined by one spider (all rule families except fusion
    of two given spiders)."""
    if not is_spider(g):
        return []
    c, n, m = g.name, len(g.arity), len(g.coarity)
    a = g.attr("phase")
    s = Gen(g)
    tag = f"{c}|{n},{m}|{a}"
    out = []
    if n == 1 and m == 1 and a == 0:
        out.append(Equation(f"identity[{c}]", s, Id(Q)))
    hs_in = tensor(*[H()] * n) if n else EMPTY
    hs_out = tensor(*[H()] * m) if m else EMPTY
    out.append(Equation(f"colour[{tag}]", seq(hs_in, s, hs_out), spider(_other(c), n, m, a)))
    pis_in = tensor(*[spider(_other(c), 1, 1, 1)] * n) if n else EMPTY
    pis_out = tensor(*[spider(_other(c), 1, 1, 1)] * m) if m else EMPTY
    out.append(Equation(f"pi-copy[{tag}]", seq(pis_in, s), seq(spider(c, n, m, -a), pis_out)))
    if n == 1:
        for bit in (0, 1):
            state = spider(_other(c), 0, 1, bit)
            copies = tensor(*[state] * m) if m else EMPTY
            out.append(Equation(f"state-copy[{tag}|{bit}]", seq(state, s), copies))
    if n == 2:
        out.append(Equation(f"commute-in[{tag}]", seq(SWAP(), s), s))
    if m == 2:
        out.append(Equation(f"commute-out[{tag}]", seq(s, SWAP()), s))
    # unfusion: split off a phase-free spider on one wire
    for k in range(1, 3):
        for a_ in range(0, m + 1):
            b_ = 0
            m2 = m - a_
            if m2 < 0:
                continue
            out.append(_fusion(c, n, a_, k, b_, m2, a, 0))
    return out


def _pair_rules(g: Generator, h: Generator) -> list[Equation]:
    """Fusion of ``g`` above ``h`` along every possible number of shared wires."""
    if not (is_spider(g) and is_spider(h)) or g.name != h.name:
        return []
    out = []
    n1, o1 = len(g.arity), len(g.coarity)
    i2, m2 = len(h.arity), len(h.coarity)
    for k in range(1, min(o1, i2) + 1):
        out.append(_fusion(g.name, n1, o1 - k, k, i2 - k, m2, g.attr("phase"), h.attr("phase")))
    return out


def static_rules() -> list[Equation]:
    bialg = Equation(
        "bialgebra",
        seq(X(2, 1), Z(1, 2)),
        seq(tensor(Z(1, 2), Z(1, 2)), tensor(Id(Q), SWAP(), Id(Q)), tensor(X(2, 1), X(2, 1))),
    )
    bialg_dual = Equation(
        "bialgebra-dual",
        seq(Z(2, 1), X(1, 2)),
        seq(tensor(X(1, 2), X(1, 2)), tensor(Id(Q), SWAP(), Id(Q)), tensor(Z(2, 1), Z(2, 1))),
    )
    return [
        Equation("hadamard-involution", seq(H(), H()), Id(Q)),
        Equation("euler", H(), seq(Z(1, 1, Fraction(1, 2)), X(1, 1, Fraction(1, 2)), Z(1, 1, Fraction(1, 2)))),
        Equation("hopf", seq(Z(1, 2), X(2, 1)), seq(Z(1, 0), X(0, 1))),
        bialg,
        bialg_dual,
        Equation("swap-involution", seq(SWAP(), SWAP()), wires(2)),
    ]


def zx_theory() -> Theory:
    return make_theory(
        zx_signature(),
        static_rules(),
        flags=["symmetric"],
        schemata=[_single_rules, _swap_naturality((Q,))],
        pair_schemata=[_pair_rules],
    )


def rule_instances(max_legs: int = 3, phases: Iterable[Phase] = (0, Fraction(1, 4), Fraction(1, 2), 1)) -> Iterator[Equation]:
    """Every rule family instantiated with spiders of at most ``max_legs``
    inputs and outputs and phases from ``phases``."""
    phases = [phase(p) for p in phases]
    yield from static_rules()
    yield from _swap_naturality((Q,))(H_GEN)
    yield from _swap_naturality((Q,))(SWAP_GEN)
    legs = range(max_legs + 1)
    for c in ("Z", "X"):
        for n, m in itertools.product(legs, legs):
            for a in phases:
                g = z_gen(n, m, a) if c == "Z" else x_gen(n, m, a)
                yield from (e for e in _single_rules(g) if _within(e, max_legs))
                if n <= 1 and m <= 1:
                    yield from _swap_naturality((Q,))(g)
        for n1, a, k, b, m2 in itertools.product(legs, legs, legs, legs, legs):
            if k < 1 or a + k > max_legs or k + b > max_legs:
                continue
            if n1 + b > max_legs or a + m2 > max_legs:
                continue
            for al, be in itertools.product(phases, phases):
                yield _fusion(c, n1, a, k, b, m2, al, be)


def _within(e: Equation, max_legs: int) -> bool:
    from .signature import generators_in

    return all(
        len(g.arity) <= max_legs and len(g.coarity) <= max_legs
        for g in generators_in(e.lhs) + generators_in(e.rhs)
    )


def check_rule(e: Equation, tol: float = 1e-9, cap: int = 10) -> bool:
    return prop_equal(evaluate(e.lhs, cap), evaluate(e.rhs, cap), tol)


# ---------------------------------------------------------------------------
# circuits

_GATE_PATTERNS: list[tuple[str, tuple]] = []


def _single_gate(g: Generator) -> bool:
    if g == H_GEN or g == SWAP_GEN:
        return True
    return is_spider(g) and len(g.arity) == 1 and len(g.coarity) == 1


def _multi_gate_at(slices, i: int) -> int:
    """Length of a two-qubit gate pattern starting at slice ``i``, or 0."""
    o, g = slices[i]
    if g != z_gen(1, 2):
        return 0
    rest = slices[i + 1:i + 3]
    # CNOT, control left or right
    if rest and rest[0] == (o + 1, x_gen(2, 1)):
        return 2
    if rest and o >= 1 and rest[0] == (o - 1, x_gen(2, 1)):
        return 2
    # CZ, either orientation
    if len(rest) == 2 and rest[0] == (o + 1, H_GEN) and rest[1] == (o + 1, z_gen(2, 1)):
        return 3
    if len(rest) == 2 and o >= 1 and rest[0] == (o, H_GEN) and rest[1] == (o - 1, z_gen(2, 1)):
        return 3
    return 0


def _parses(slices) -> bool:
    i = 0
    while i < len(slices):
        k = _multi_gate_at(slices, i)
        if k:
            i += k
            continue
        if _single_gate(slices[i][1]):
            i += 1
            continue
        return False
    return True


def is_circuit(d: Union[Term, CanonicalDiagram], limit: int = 20000) -> bool:
    """Whether ``d`` is assembled from CNOT, CZ, Z and X rotations, H,
    swaps and identities."""
    if isinstance(d, CanonicalDiagram):
        dom, cod, slices = d.dom, d.cod, d.slices
    else:
        dom, cod, slices = compile_term(d)
    if len(dom) != len(cod):
        return False
    try:
        cls = slice_class(slices, limit=limit)
    except OverflowError:
        cls = [slices]
    return any(_parses(s) for s in cls)
