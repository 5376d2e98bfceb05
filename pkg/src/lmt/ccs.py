"""A fragment of CCS: nil, prefixing and parallel composition.

Actions are a name ``a``, its co-name ``~a``, or the silent action ``t``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

TAU = "t"


class Process:
    __slots__ = ()

    def __or__(self, other: "Process") -> "Process":
        return Par(self, other)


@dataclass(frozen=True)
class Nil(Process):
    def __str__(self):
        return "0"


@dataclass(frozen=True)
class Prefix(Process):
    action: str
    cont: Process

    def __str__(self):
        return f"{self.action}.{self.cont}"


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process

    def __str__(self):
        return f"({self.left} | {self.right})"


NIL = Nil()


def co(action: str) -> str:
    if action == TAU:
        raise ValueError("the silent action has no co-action")
    return action[1:] if action.startswith("~") else "~" + action


def size(p: Process) -> int:
    if isinstance(p, Nil):
        return 1
    if isinstance(p, Prefix):
        return 1 + size(p.cont)
    return 1 + size(p.left) + size(p.right)


# ---------------------------------------------------------------------------
# structural congruence

Canon = tuple  # sorted tuple of (action, Canon) threads


def canon(p: Process) -> Canon:
    """Parallel components as a sorted multiset of prefixed threads."""
    return tuple(sorted(_threads(p)))


def _threads(p: Process) -> list:
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        return [(p.action, canon(p.cont))]
    return _threads(p.left) + _threads(p.right)


def congruent(p: Process, q: Process) -> bool:
    return canon(p) == canon(q)


def from_canon(c: Canon) -> Process:
    """A representative: threads composed left-associated, nil if there are none."""
    ps = [Prefix(a, from_canon(k)) for a, k in c]
    if not ps:
        return NIL
    out = ps[0]
    for q in ps[1:]:
        out = Par(out, q)
    return out


# ---------------------------------------------------------------------------
# reduction semantics (up to congruence)


def _reduce_canon(c: Canon) -> set:
    out = set()
    threads = list(c)
    for i, (a, k) in enumerate(threads):
        rest = threads[:i] + threads[i + 1:]
        if a == TAU:
            out.add(tuple(sorted(rest + list(k))))
            continue
        for j in range(i + 1, len(threads)):
            b, k2 = threads[j]
            if b != TAU and b == co(a):
                rest2 = threads[:i] + threads[i + 1:j] + threads[j + 1:]
                out.add(tuple(sorted(rest2 + list(k) + list(k2))))
    return out


def reductions(p: Process) -> set[Process]:
    """One-step reducts, closed under congruence, as canonical representatives."""
    return {from_canon(c) for c in _reduce_canon(canon(p))}


# ---------------------------------------------------------------------------
# labelled transitions (on syntax, no congruence)


def transitions(p: Process) -> list[tuple[str, Process]]:
    if isinstance(p, Nil):
        return []
    if isinstance(p, Prefix):
        return [(p.action, p.cont)]
    left, right = transitions(p.left), transitions(p.right)
    out = [(a, Par(l2, p.right)) for a, l2 in left]
    out += [(a, Par(p.left, r2)) for a, r2 in right]
    for a, l2 in left:
        if a == TAU:
            continue
        for b, r2 in right:
            if b == co(a):
                out.append((TAU, Par(l2, r2)))
    return out


def lts_tau_steps(p: Process) -> set[Process]:
    return {q for a, q in transitions(p) if a == TAU}


def check_correspondence(p: Process) -> bool:
    red = {canon(q) for q in reductions(p)}
    lts = {canon(q) for q in lts_tau_steps(p)}
    return red == lts


# ---------------------------------------------------------------------------
# enumeration


def actions(names: Iterable[str]) -> tuple[str, ...]:
    out = [TAU]
    for n in names:
        out += [n, "~" + n]
    return tuple(out)


def processes_of_size(n: int, names: tuple[str, ...]) -> list[Process]:
    return list(_of_size(n, tuple(names)))


@lru_cache(maxsize=None)
def _of_size(n: int, names: tuple[str, ...]) -> tuple[Process, ...]:
    if n <= 0:
        return ()
    out: list[Process] = []
    if n == 1:
        out.append(NIL)
    for a in actions(names):
        out += [Prefix(a, q) for q in _of_size(n - 1, names)]
    for k in range(1, n - 1):
        for l in _of_size(k, names):
            for r in _of_size(n - 1 - k, names):
                out.append(Par(l, r))
    return tuple(out)


def enumerate_processes(max_size: int, names: Iterable[str] = ("a", "b")) -> Iterator[Process]:
    names = tuple(names)
    for n in range(1, max_size + 1):
        yield from _of_size(n, names)


def default_names(k: int) -> tuple[str, ...]:
    return tuple("abcdefghijklmnopqrs"[:k]) if k <= 19 else tuple(f"n{i}" for i in range(k))
