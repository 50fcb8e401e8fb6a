import itertools

import pytest

from ratgraph import CellularAutomaton
from ratgraph.errors import AlphabetError
from ratgraph.fixtures import anbn_ca, anbn_tiling
from ratgraph.cellular import ca_enumerate_language, ca_is_deterministic, ca_member, ca_successors
from ratgraph.tiling import ts_member

AB = frozenset({"a", "b"})


def majority_rules():
    def vote(*cells):
        a = sum(c == "a" for c in cells)
        b = sum(c == "b" for c in cells)
        return "a" if a >= b else "b"

    return {(x, y, z, vote(x, y, z)) for x in ["[", "a", "b"] for y in "ab" for z in ["a", "b", "]"]}


def test_successors_match_exhaustive_check():
    C = CellularAutomaton(AB, AB, AB, frozenset(majority_rules()))
    u = tuple("aba")
    ext = ("[",) + u + ("]",)
    brute = {v for v in itertools.product("ab", repeat=3)
             if all((ext[i], ext[i + 1], ext[i + 2], v[i]) in C.rules for i in range(3))}
    assert ca_successors(C, u) == brute
    assert len(brute) == 1 and ca_is_deterministic(C)


def test_empty_rules():
    C = CellularAutomaton(AB, AB, frozenset({"b"}), frozenset())
    assert ca_successors(C, "ab") == set()
    assert ca_is_deterministic(C)
    none = CellularAutomaton(frozenset({"a", "b", "c"}), AB, frozenset({"c"}), frozenset())
    assert not any(ca_member(none, w) for n in range(1, 4) for w in itertools.product("ab", repeat=n))


def test_accepting_input_is_accepted_at_once():
    C = CellularAutomaton(AB, AB, AB, frozenset())
    assert all(ca_member(C, w) for w in ["a", "ab", "bba"])
    assert not ca_member(C, "a", reflexive=False)


def test_nondeterminism_detected():
    C = CellularAutomaton(frozenset("abc"), AB, AB, frozenset({("a", "a", "a", "b"), ("a", "a", "a", "c")}))
    assert not ca_is_deterministic(C)


def test_anbn_automaton():
    C = anbn_ca()
    assert ca_is_deterministic(C)
    assert ca_member(C, "aabb")
    assert not ca_member(C, "aab")
    assert not ca_member(C, "")
    S = anbn_tiling()
    for n in range(1, 9):
        for w in itertools.product("ab", repeat=n):
            assert ca_member(C, w) == ts_member(S, w), w


def test_enumeration():
    assert ca_enumerate_language(anbn_ca(), 4) == [tuple("ab"), tuple("aabb")]


def test_letters_are_checked():
    with pytest.raises(AlphabetError):
        CellularAutomaton(AB, AB, AB, frozenset({("a", "[", "a", "a")}))
    with pytest.raises(AlphabetError):
        CellularAutomaton(frozenset({"a", "["}), frozenset({"a"}), frozenset(), frozenset())
    with pytest.raises(AlphabetError):
        ca_member(anbn_ca(), "c")
