"""Membership and bounded language comparison across all acceptor kinds."""
from __future__ import annotations

from dataclasses import dataclass

from .automata import Nfa, Word, nfa_enumerate, nfa_member, shortlex_key
from .cellular import CellularAutomaton, ca_enumerate_language, ca_member
from .graphs import InfiniteAutomaton, g_enumerate_language, g_member
from .tiling import TilingSystem, ts_enumerate_language, ts_member


def member(obj, w) -> bool:
    w = tuple(w)
    if isinstance(obj, InfiniteAutomaton):
        return g_member(obj, w)
    if isinstance(obj, TilingSystem):
        return bool(w) and ts_member(obj, w)
    if isinstance(obj, CellularAutomaton):
        return ca_member(obj, w)
    if isinstance(obj, Nfa):
        return nfa_member(obj, w)
    raise TypeError(f"no membership test for {type(obj).__name__}")


def language(obj, max_len: int) -> list[Word]:
    """Words of length at most ``max_len``, in length-lexicographic order."""
    if isinstance(obj, InfiniteAutomaton):
        words = g_enumerate_language(obj, max_len)
    elif isinstance(obj, TilingSystem):
        words = ts_enumerate_language(obj, max_len)
    elif isinstance(obj, CellularAutomaton):
        words = ca_enumerate_language(obj, max_len)
    elif isinstance(obj, Nfa):
        words = nfa_enumerate(obj, max_len)
    else:
        raise TypeError(f"no language enumeration for {type(obj).__name__}")
    return sorted(words, key=shortlex_key)


@dataclass(frozen=True)
class EquivVerdict:
    equal_up_to: int | None  # the bound when equal, else the length before the first divergence
    first_divergence: Word | None
    counts: tuple[int, int]

    @property
    def equal(self) -> bool:
        return self.first_divergence is None


def equiv(a, b, max_len: int, ignore_empty: bool = False) -> EquivVerdict:
    la, lb = language(a, max_len), language(b, max_len)
    if ignore_empty:
        la = [w for w in la if w]
        lb = [w for w in lb if w]
    diff = set(la) ^ set(lb)
    if not diff:
        return EquivVerdict(max_len, None, (len(la), len(lb)))
    first = min(diff, key=shortlex_key)
    return EquivVerdict(len(first) - 1, first, (len(la), len(lb)))
