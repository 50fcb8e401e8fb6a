import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ratgraph import Nfa
from ratgraph.automata import (
    EPS,
    format_word,
    is_deterministic,
    iter_words,
    nfa_cardinality,
    nfa_combine,
    nfa_complement,
    nfa_contains_epsilon,
    nfa_determinize_minimize,
    nfa_empty,
    nfa_enumerate,
    nfa_epsilon,
    nfa_equal,
    nfa_from_regex,
    nfa_intersect,
    nfa_is_empty,
    nfa_member,
    nfa_minimize,
    nfa_remove_epsilon,
    nfa_shortest_word,
    nfa_subset,
    nfa_words,
    parse_word,
)
from ratgraph.errors import AlphabetError, FormatError

AB = {"a", "b"}


def words_upto(letters, n):
    for k in range(n + 1):
        yield from itertools.product(sorted(letters), repeat=k)


def lang(A, n=6):
    return {w for w in words_upto(A.alphabet, n) if nfa_member(A, w)}


def random_nfa(rng, states=3, with_eps=True):
    letters = ["a", "b"] + ([EPS] if with_eps else [])
    trans = {(rng.randrange(states), rng.choice(letters), rng.randrange(states)) for _ in range(5)}
    finals = {q for q in range(states) if rng.random() < 0.4}
    return Nfa.build(AB, trans, 0, finals, set(range(states)))


def test_parse_and_format_words():
    assert parse_word("ab") == ("a", "b")
    assert parse_word("") == ()
    assert parse_word("a{xp}b") == ("a", "xp", "b")
    assert format_word(("a", "xp", "b")) == "a{xp}b"


@given(st.lists(st.sampled_from(["a", "b", "#", "xp", "(a,b,c,d)"]), max_size=6))
def test_word_text_round_trip(word):
    assert parse_word(format_word(word)) == tuple(word)


def test_membership_examples():
    astar_bstar = nfa_from_regex("a*b*", AB)
    assert nfa_member(astar_bstar, "aab")
    assert nfa_member(astar_bstar, "")
    assert not nfa_member(astar_bstar, "ba")
    at_least_two = nfa_from_regex("###*", {"#"})
    assert nfa_member(at_least_two, "##")
    assert not nfa_member(at_least_two, "#")


def test_combinators():
    a_star, b_star = nfa_from_regex("a*", AB), nfa_from_regex("b*", AB)
    assert nfa_member(nfa_combine("union", a_star, b_star), "bb")
    both = nfa_combine("intersect", nfa_from_regex("a*b*", AB), nfa_from_regex("(ab)*", AB))
    assert nfa_member(both, "ab") and not nfa_member(both, "ba")
    assert lang(nfa_combine("concat", a_star, b_star)) == lang(nfa_from_regex("a*b*", AB))
    assert lang(nfa_combine("star", nfa_words(AB, ["ab"]))) == lang(nfa_from_regex("(ab)*", AB))
    with pytest.raises(ValueError):
        nfa_combine("shuffle", a_star, b_star)


def test_difference_with_complement_is_disjoint_on_random_automata():
    rng = random.Random(1)
    universe = nfa_from_regex("(a|b)*", AB)
    for _ in range(20):
        L = random_nfa(rng)
        rest = nfa_combine("difference", universe, L)
        assert nfa_is_empty(nfa_intersect(rest, L))
        assert lang(rest) | lang(L) == set(words_upto(AB, 6))


def test_determinize_minimize_preserves_language():
    rng = random.Random(2)
    for _ in range(30):
        A = random_nfa(rng)
        D = nfa_determinize_minimize(A)
        assert is_deterministic(D)
        assert lang(D) == lang(A)
        assert len(nfa_minimize(D)) == len(D)


def test_epsilon_paths_to_one_final():
    A = Nfa.build(AB, {(0, EPS, 1), (0, EPS, 2), (1, "a", 3), (2, "a", 3)}, 0, {3})
    D = nfa_determinize_minimize(A)
    assert not D.has_epsilon()
    assert lang(D) == {("a",)}
    assert not nfa_remove_epsilon(A).has_epsilon()


def test_degenerate_automata():
    empty = nfa_determinize_minimize(nfa_empty(AB))
    assert nfa_is_empty(empty) and len(empty) <= 1
    eps = nfa_determinize_minimize(nfa_epsilon(AB))
    assert len(eps) == 1 and eps.initial in eps.finals and not eps.transitions
    assert nfa_contains_epsilon(eps)


def test_equality_and_inclusion():
    assert nfa_equal(nfa_from_regex("a*", AB), nfa_from_regex("(a)*()", AB))
    assert not nfa_equal(nfa_from_regex("a*b*", AB), nfa_from_regex("b*a*", AB))
    assert nfa_subset(nfa_from_regex("ab", AB), nfa_from_regex("a*b*", AB))
    assert nfa_is_empty(nfa_empty(AB))


def test_enumeration_is_shortlex():
    assert nfa_enumerate(nfa_from_regex("a*b*", AB), 2) == [(), ("a",), ("b",), ("a", "a"), ("a", "b"), ("b", "b")]
    assert nfa_enumerate(nfa_empty(AB), 5) == []
    assert nfa_enumerate(nfa_from_regex("###*", {"#"}), 3) == [("#", "#"), ("#", "#", "#")]


def test_cardinality_and_shortest_word():
    assert nfa_cardinality(nfa_words(AB, ["a", "ab", "ab"])) == 2
    assert nfa_cardinality(nfa_from_regex("a*", AB)) == float("inf")
    assert nfa_shortest_word(nfa_from_regex("aa*b", AB)) == ("a", "b")
    assert nfa_shortest_word(nfa_empty(AB)) is None


def test_complement():
    A = nfa_from_regex("a*", AB)
    C = nfa_complement(A)
    assert lang(C) == set(words_upto(AB, 6)) - lang(A)


def test_bad_letters_are_rejected():
    with pytest.raises(AlphabetError):
        Nfa.build(AB, {(0, "c", 1)}, 0, {1})
    with pytest.raises(AlphabetError):
        Nfa.build({"a", ""}, set(), 0, {0})
    with pytest.raises(FormatError):
        nfa_from_regex("a{b", AB)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_iter_words_agrees_with_brute_force(seed):
    A = random_nfa(random.Random(seed))
    assert set(iter_words(A, 5)) == lang(A, 5)
