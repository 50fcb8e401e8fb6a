"""Cellular automata used as word acceptors on bracketed configurations."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product

from .automata import Word
from .errors import AlphabetError


@dataclass(frozen=True)
class CellularAutomaton:
    """Rules ``(left, cell, right, new)``; the brackets may appear as context."""

    gamma: frozenset
    sigma: frozenset
    finals: frozenset
    rules: frozenset
    left: str = "["
    right: str = "]"
    _next: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("gamma", "sigma", "finals", "rules"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))
        if not self.sigma <= self.gamma or not self.finals <= self.gamma:
            raise AlphabetError("input and accepting letters must be work letters")
        if {self.left, self.right} & self.gamma or self.left == self.right:
            raise AlphabetError("brackets must be two distinct letters outside the work alphabet")
        nxt = defaultdict(set)
        for rule in self.rules:
            if len(rule) != 4:
                raise ValueError(f"rule {rule!r} is not a 4-tuple")
            a, b, c, d = rule
            if a not in self.gamma | {self.left} or b not in self.gamma or c not in self.gamma | {self.right}:
                raise AlphabetError(f"rule {rule!r} has a misplaced letter")
            if d not in self.gamma:
                raise AlphabetError(f"rule {rule!r} writes a non-work letter")
            nxt[(a, b, c)].add(d)
        object.__setattr__(self, "_next", {k: frozenset(v) for k, v in nxt.items()})

    def choices(self, a, b, c) -> frozenset:
        return self._next.get((a, b, c), frozenset())


def ca_successors(C: CellularAutomaton, u) -> set[Word]:
    """Successors of the configuration ``[u]``, given and returned without brackets."""
    u = tuple(u)
    if not u:
        return set()
    ext = (C.left,) + u + (C.right,)
    options = [sorted(C.choices(ext[i], ext[i + 1], ext[i + 2])) for i in range(len(u))]
    if any(not o for o in options):
        return set()
    return set(product(*options))


def ca_member(C: CellularAutomaton, w, reflexive: bool = True) -> bool:
    """Breadth-first search for a reachable configuration made of accepting letters."""
    w = tuple(w)
    for a in w:
        if a not in C.sigma:
            raise AlphabetError(f"letter {a!r} not in the input alphabet")
    if not w:
        return False

    def accepting(u):
        return all(a in C.finals for a in u)

    if reflexive and accepting(w):
        return True
    seen = {w}
    layer = [w]
    while layer:
        nxt = []
        for u in layer:
            for v in ca_successors(C, u):
                if accepting(v):
                    return True
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        layer = nxt
    return False


def ca_is_deterministic(C: CellularAutomaton) -> bool:
    return all(len(ds) <= 1 for ds in C._next.values())


def ca_enumerate_language(C: CellularAutomaton, max_len: int, reflexive: bool = True) -> list[Word]:
    letters = sorted(C.sigma)
    return [
        w
        for n in range(1, max_len + 1)
        for w in product(letters, repeat=n)
        if ca_member(C, w, reflexive)
    ]
