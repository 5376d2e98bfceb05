"""Finite probabilistic channels with exact rational weights.

A channel X -> Y is a row-stochastic table with one row per element of X.
Finite sets are ordered tuples. Elements of a product X × Y are pairs
``(x, y)`` listed x-major: the left factor varies slowest.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .errors import (
    DomainMismatch,
    InvalidChannel,
    NotFullSupport,
    NotMarginallyFullSupport,
)

ONE: tuple = ("*",)
"""The one-element set."""


def product(xs: Sequence, ys: Sequence) -> tuple:
    return tuple((x, y) for x in xs for y in ys)


@dataclass(frozen=True)
class Channel:
    domain: tuple
    codomain: tuple
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "codomain", tuple(self.codomain))
        if len(set(self.domain)) != len(self.domain) or len(set(self.codomain)) != len(self.codomain):
            raise InvalidChannel("repeated element in a finite set")
        rows = tuple(tuple(Fraction(p) for p in r) for r in self.rows)
        if len(rows) != len(self.domain):
            raise InvalidChannel(f"{len(rows)} rows for a domain of size {len(self.domain)}")
        for x, r in zip(self.domain, rows):
            if len(r) != len(self.codomain):
                raise InvalidChannel(f"row {x!r} has {len(r)} entries, codomain has {len(self.codomain)}")
            if any(p < 0 for p in r):
                raise InvalidChannel(f"negative probability in row {x!r}")
            if sum(r) != 1:
                raise InvalidChannel(f"row {x!r} sums to {sum(r)}")
        object.__setattr__(self, "rows", rows)

    def _dindex(self):
        return {x: i for i, x in enumerate(self.domain)}

    def _cindex(self):
        return {y: i for i, y in enumerate(self.codomain)}

    def prob(self, x, y) -> Fraction:
        return self.rows[self.domain.index(x)][self.codomain.index(y)]

    def __call__(self, x) -> dict:
        r = self.rows[self.domain.index(x)]
        return {y: p for y, p in zip(self.codomain, r)}

    @property
    def kernel(self) -> dict:
        return {x: dict(zip(self.codomain, r)) for x, r in zip(self.domain, self.rows)}


def make_channel(domain: Iterable, codomain: Iterable,
                 kernel: Mapping | Callable[[Hashable], Mapping]) -> Channel:
    """Build a channel from ``kernel[x][y]`` (missing entries are zero)."""
    domain, codomain = tuple(domain), tuple(codomain)
    rows = []
    for x in domain:
        dist = kernel(x) if callable(kernel) else kernel[x]
        extra = set(dist) - set(codomain)
        if extra:
            raise InvalidChannel(f"row {x!r} mentions {sorted(map(repr, extra))} outside the codomain")
        rows.append(tuple(Fraction(dist.get(y, 0)) for y in codomain))
    return Channel(domain, codomain, tuple(rows))


def deterministic(domain: Iterable, codomain: Iterable, fn: Callable) -> Channel:
    return make_channel(domain, codomain, lambda x: {fn(x): 1})


def identity(xs: Iterable) -> Channel:
    xs = tuple(xs)
    return deterministic(xs, xs, lambda x: x)


def copy(xs: Iterable) -> Channel:
    xs = tuple(xs)
    return deterministic(xs, product(xs, xs), lambda x: (x, x))


def discard(xs: Iterable) -> Channel:
    return deterministic(tuple(xs), ONE, lambda x: ONE[0])


def swap(xs: Iterable, ys: Iterable) -> Channel:
    xs, ys = tuple(xs), tuple(ys)
    return deterministic(product(xs, ys), product(ys, xs), lambda p: (p[1], p[0]))


def compose(f: Channel, g: Channel) -> Channel:
    """f then g: gf(x)(z) = sum_y f(x)(y) g(y)(z)."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"codomain of the first channel {f.codomain} is not the domain {g.domain}")
    rows = []
    for r in f.rows:
        out = [Fraction(0)] * len(g.codomain)
        for p, grow in zip(r, g.rows):
            if p:
                for k, q in enumerate(grow):
                    if q:
                        out[k] += p * q
        rows.append(tuple(out))
    return Channel(f.domain, g.codomain, tuple(rows))


def tensor(f: Channel, g: Channel) -> Channel:
    rows = []
    for r1 in f.rows:
        for r2 in g.rows:
            rows.append(tuple(p * q for p in r1 for q in r2))
    return Channel(product(f.domain, g.domain), product(f.codomain, g.codomain), tuple(rows))


def full_support(f: Channel) -> bool:
    return all(p > 0 for r in f.rows for p in r)


def channels_equal(f: Channel, g: Channel) -> bool:
    return f == g


# ---------------------------------------------------------------------------
# (co)parametric channels


@dataclass(frozen=True)
class CoparaChannel:
    """A channel Z -> X × Y whose X output is a coparameter."""

    coparameter: tuple
    exposed: tuple
    inner: Channel

    def __post_init__(self):
        object.__setattr__(self, "coparameter", tuple(self.coparameter))
        object.__setattr__(self, "exposed", tuple(self.exposed))
        if self.inner.codomain != product(self.coparameter, self.exposed):
            raise DomainMismatch("inner codomain is not coparameter × exposed codomain")

    @property
    def domain(self) -> tuple:
        return self.inner.domain


@dataclass(frozen=True)
class ParaChannel:
    """A channel X × Z -> Y whose X input is a parameter."""

    parameter: tuple
    exposed: tuple
    inner: Channel

    def __post_init__(self):
        object.__setattr__(self, "parameter", tuple(self.parameter))
        object.__setattr__(self, "exposed", tuple(self.exposed))
        if self.inner.domain != product(self.parameter, self.exposed):
            raise DomainMismatch("inner domain is not parameter × exposed domain")

    @property
    def codomain(self) -> tuple:
        return self.inner.codomain


def marginal(c: CoparaChannel) -> Channel:
    """Z -> X, summing out the exposed output."""
    ny = len(c.exposed)
    rows = tuple(tuple(sum(r[i * ny:(i + 1) * ny], Fraction(0)) for i in range(len(c.coparameter)))
                 for r in c.inner.rows)
    return Channel(c.domain, c.coparameter, rows)


def marginally_full_support(c: CoparaChannel) -> bool:
    return full_support(marginal(c))


def conditional_box(c: CoparaChannel) -> ParaChannel:
    """B(f)(x, z)(y) = f(z)(x, y) / N(z, x) with N(z, x) = sum_y f(z)(x, y)."""
    ny = len(c.exposed)
    rows = []
    for x_i, x in enumerate(c.coparameter):
        for z, r in zip(c.domain, c.inner.rows):
            block = r[x_i * ny:(x_i + 1) * ny]
            n = sum(block, Fraction(0))
            if n == 0:
                raise NotMarginallyFullSupport(f"N(z={z!r}, x={x!r}) = 0")
            rows.append(tuple(p / n for p in block))
    return ParaChannel(c.coparameter, c.domain, Channel(product(c.coparameter, c.domain), c.exposed, tuple(rows)))


def deparameterise(p: ParaChannel) -> Channel:
    return p.inner


def reparameterise(f: Channel, parameter: Sequence, exposed: Sequence) -> ParaChannel:
    return ParaChannel(tuple(parameter), tuple(exposed), f)


def para_then(p: ParaChannel, g: Channel) -> ParaChannel:
    """Post-compose a parametric channel with an ordinary one."""
    return ParaChannel(p.parameter, p.exposed, compose(p.inner, g))


def copara_then(c: CoparaChannel, g: Channel) -> CoparaChannel:
    """Post-compose the exposed output: f ; (id_X ⊗ g)."""
    return CoparaChannel(c.coparameter, g.codomain, compose(c.inner, tensor(identity(c.coparameter), g)))


def disintegration_composite(m: Channel, b: ParaChannel) -> Channel:
    """Z -> X × Y: copy z, draw x from ``m``, keep a copy of x, feed (x, z) to ``b``."""
    zs, xs = m.domain, m.codomain
    step1 = compose(copy(zs), tensor(m, identity(zs)))                   # z -> (x, z)
    step2 = compose(step1, tensor(copy(xs), identity(zs)))               # -> ((x, x), z)
    assoc = deterministic(step2.codomain, product(xs, product(xs, zs)),
                          lambda p: (p[0][0], (p[0][1], p[1])))          # -> (x, (x, z))
    return compose(compose(step2, assoc), tensor(identity(xs), b.inner))


def check_disintegration(c: CoparaChannel) -> bool:
    """The marginal followed by the conditional rebuilds the channel, both
    pointwise and as a composite channel."""
    m = marginal(c)
    b = conditional_box(c)
    for z in c.domain:
        for x in c.coparameter:
            for y in c.exposed:
                if m.prob(z, x) * b.inner.prob((x, z), y) != c.inner.prob(z, (x, y)):
                    return False
    return disintegration_composite(m, b) == c.inner


@dataclass(frozen=True)
class UniquenessResult:
    holds: bool
    premise: bool
    note: str = ""

    def __bool__(self):
        return self.holds


def check_uniqueness(c: CoparaChannel, h: Channel, g: ParaChannel) -> UniquenessResult:
    """If c is rebuilt from (h, g) as in a disintegration and h has full
    support, then h is the marginal of c and g is its conditional."""
    if not full_support(h):
        raise NotFullSupport("h must have full support")
    if h.domain != c.domain or h.codomain != c.coparameter:
        raise DomainMismatch("h must go from the domain of c to its coparameter")
    if g.parameter != c.coparameter or g.exposed != c.domain or g.codomain != c.exposed:
        raise DomainMismatch("g must be parameterised by the coparameter of c, over its domain")
    if disintegration_composite(h, g) != c.inner:
        return UniquenessResult(True, False, "premise-false")
    ok = h == marginal(c) and g == conditional_box(c)
    return UniquenessResult(ok, True, "" if ok else "a second disintegration exists")


# ---------------------------------------------------------------------------
# properties of the conditional box


def trivial_copara(g: Channel) -> CoparaChannel:
    """(1, g): g with the one-element coparameter."""
    inner = compose(g, deterministic(g.codomain, product(ONE, g.codomain), lambda y: (ONE[0], y)))
    return CoparaChannel(ONE, g.codomain, inner)


def check_box_identity(g: Channel) -> bool:
    """B(1, g) is g with the one-element parameter."""
    b = conditional_box(trivial_copara(g))
    expect = compose(deterministic(product(ONE, g.domain), g.domain, lambda p: p[1]), g)
    return b.parameter == ONE and b.inner == expect


def check_box_postcompose(c: CoparaChannel, g: Channel) -> bool:
    """B(f ; (id ⊗ g)) = B(f) ; g."""
    return conditional_box(copara_then(c, g)) == para_then(conditional_box(c), g)


def pairing_with_identity(h: Channel) -> CoparaChannel:
    """⟨h, id⟩ : Z -> X × Z as a channel with coparameter X."""
    zs, xs = h.domain, h.codomain
    inner = compose(copy(zs), tensor(h, identity(zs)))
    return CoparaChannel(xs, zs, inner)


def check_full_support_identity(h: Channel) -> bool:
    """For h with full support, B(⟨h, id⟩) is (x, z) |-> z."""
    if not full_support(h):
        raise NotFullSupport("h must have full support")
    b = conditional_box(pairing_with_identity(h))
    proj = deterministic(product(h.codomain, h.domain), h.domain, lambda p: p[1])
    return b.inner == proj


def nested_conditional(c: CoparaChannel, first: Sequence, second: Sequence) -> tuple[ParaChannel, Callable]:
    """Condition a channel Z -> (X1 × X2) × Y on X1, then on X2.

    The result has parameter X2 over the exposed domain X1 × Z, so the
    parameters come out in the order (x2, (x1, z)). The returned function
    maps that order to ((x1, x2), z), the order of the one-shot conditional."""
    first, second = tuple(first), tuple(second)
    if c.coparameter != product(first, second):
        raise DomainMismatch("coparameter is not first × second")
    # regroup Z -> ((x1, x2), y) as Z -> (x1, (x2, y))
    regroup = deterministic(c.inner.codomain, product(first, product(second, c.exposed)),
                            lambda p: (p[0][0], (p[0][1], p[1])))
    c1 = CoparaChannel(first, product(second, c.exposed), compose(c.inner, regroup))
    b1 = conditional_box(c1)
    c2 = CoparaChannel(second, c.exposed, b1.inner)
    b2 = conditional_box(c2)
    reorder = lambda p: ((p[1][0], p[0]), p[1][1])
    return b2, reorder


def check_nested(c: CoparaChannel, first: Sequence, second: Sequence) -> bool:
    nested, reorder = nested_conditional(c, first, second)
    once = conditional_box(c)
    for p in nested.inner.domain:
        for y in c.exposed:
            if nested.inner.prob(p, y) != once.inner.prob(reorder(p), y):
                return False
    return True


# ---------------------------------------------------------------------------
# random instances


def _random_dist(rng: random.Random, n: int, positive: bool = False, weight: int = 6) -> list[Fraction]:
    while True:
        w = [rng.randint(1 if positive else 0, weight) for _ in range(n)]
        if sum(w):
            s = sum(w)
            return [Fraction(k, s) for k in w]


def random_channel(rng: random.Random, domain: Sequence, codomain: Sequence, positive: bool = False) -> Channel:
    return Channel(tuple(domain), tuple(codomain),
                   tuple(tuple(_random_dist(rng, len(codomain), positive)) for _ in domain))


def finite_set(prefix: str, n: int) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(n))


def random_copara(rng: random.Random, nz: int, nx: int, ny: int) -> CoparaChannel:
    """A random channel with marginally full support: every (z, x) block has
    some positive weight, individual entries may vanish."""
    zs, xs, ys = finite_set("z", nz), finite_set("x", nx), finite_set("y", ny)
    rows = []
    for _ in zs:
        w = []
        for _ in xs:
            block = [rng.randint(0, 5) for _ in ys]
            if not any(block):
                block[rng.randrange(ny)] = rng.randint(1, 5)
            w += block
        s = sum(w)
        rows.append(tuple(Fraction(k, s) for k in w))
    return CoparaChannel(xs, ys, Channel(zs, product(xs, ys), tuple(rows)))


def random_sizes(rng: random.Random, hi: int = 4) -> tuple[int, int, int]:
    return rng.randint(1, hi), rng.randint(1, hi), rng.randint(1, hi)
