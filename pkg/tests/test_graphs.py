import itertools
import math

import pytest

from ratgraph import InfiniteAutomaton, RationalGraph, Transducer
from ratgraph.automata import EPS, iter_words, nfa_from_regex, nfa_universal, nfa_words
from ratgraph.conversions import ts2seq, ts2synch
from ratgraph.errors import AlphabetError, ClassError
from ratgraph.fixtures import anbn_columns, anbn_growing, anbn_tiling, g0, grid
from ratgraph.graphs import (
    PathWitness,
    g_ambiguity_probe,
    g_degree_table,
    g_det_member,
    g_determinism,
    g_enumerate_language,
    g_imbalance_bound,
    g_is_deterministic,
    g_is_path,
    g_member,
    g_out_degree,
    g_out_edges,
    g_path_counts,
    g_project_labels,
    g_successors,
    g_witness,
)
from ratgraph.tiling import ts_count_pictures
from ratgraph.transducers import t_pairs, t_run_count


def anbn(max_len):
    return [tuple("a" * n + "b" * n) for n in range(1, max_len // 2 + 1)]


def brute_language(M, max_len, max_vertex_len):
    """Words read along explicit paths between short vertices."""
    found = set()
    for v in iter_words(M.initial, max_vertex_len):
        stack = [((), v)]
        while stack:
            word, u = stack.pop()
            if M.final.accepts(u):
                found.add(word)
            if len(word) == max_len:
                continue
            for a, T in M.graph.relations.items():
                for x, y in t_pairs(T, len(u), max_vertex_len):
                    if x == u:
                        stack.append((word + (a,), y))
    return found


def test_out_edges():
    G = grid()
    assert g_out_edges(G, "AB", 4) == {("a", ("A", "A", "B")), ("b", ("A", "B", "B"))}
    assert g_out_edges(g0(), "A", 2) == {("a", tuple(v)) for v in ["AA", "AB", "BA", "BB"]}
    assert g_out_edges(G, "BA", 5) == set()


def test_out_degrees():
    assert g_out_degree(g0(), "A") == 4
    assert g_out_degree(g0(), "AA") == 16
    assert g_out_degree(grid(), "") == 2
    assert g_out_degree(grid(), "", count="targets") == 2
    assert g_successors(grid(), "") == {("A",), ("B",)}


def test_infinite_out_degree():
    gamma = frozenset({"x"})
    T = Transducer.build(gamma, {(0, EPS, "x", 0)}, 0, {0})
    G = RationalGraph(gamma, {"a": T})
    assert g_out_degree(G, "") == math.inf


def test_degree_table_counts_vertices():
    table = g_degree_table(g0(), "A", 2)
    assert [(d, deg) for d, deg, _ in table] == [(0, 4), (1, 16), (2, 256)]
    assert [n for _, _, n in table] == [1, 4, 16]


def test_membership_on_column_graph():
    M = anbn_columns()
    assert g_member(M, "aabb")
    assert not g_member(M, "aab")
    assert not g_member(M, "")
    assert g_enumerate_language(M, 8) == anbn(8)


def test_empty_word_needs_initial_final_overlap():
    M = grid()
    assert g_member(M, "")  # ε is initial and in A*B*
    assert g_enumerate_language(M, 0) == [()]
    gamma = M.graph.vertex_alphabet
    M2 = InfiniteAutomaton(M.graph, M.initial, nfa_from_regex("AA*", gamma))
    assert not g_member(M2, "")


def test_language_agrees_with_explicit_paths():
    M = grid()
    assert set(g_enumerate_language(M, 4)) == brute_language(M, 4, 4)
    C = anbn_columns()
    assert set(g_enumerate_language(C, 4)) == brute_language(C, 4, 4)


def test_unknown_label_rejected():
    with pytest.raises(AlphabetError):
        g_member(grid(), "c")


def test_witness():
    M = anbn_columns()
    w = g_witness(M, "aabb")
    assert w is not None and g_is_path(M, w)
    assert w.labels == tuple("aabb")
    assert len({len(v) for v in w.vertices}) == 1  # synchronous: constant vertex length
    assert g_witness(M, "aab") is None
    assert g_witness(M, "aabb", max_vertex_len=2) is None


def test_witness_length_on_growing_graph():
    M = anbn_growing()
    k = max(g_imbalance_bound(T) for T in M.graph.relations.values())
    for w in anbn(6):
        bounded = g_witness(M, w, max_vertex_len=k * len(w))
        assert bounded is not None and g_is_path(M, bounded)


def test_path_witness_shape():
    with pytest.raises(ValueError):
        PathWitness((("a",),), ("x",))


def test_determinism():
    M, _ = ts2seq(anbn_tiling())
    verdict = g_determinism(M.graph)
    assert verdict.deterministic and verdict.proved
    assert not g_is_deterministic(g0())
    gamma = frozenset({"x"})
    empty = RationalGraph(gamma, {"a": Transducer.build(gamma, set(), 0, set())})
    assert g_is_deterministic(empty)


def test_deterministic_membership():
    S = anbn_tiling()
    M, _ = ts2seq(S)
    i = g_witness(M, "aabb").vertices[0]
    assert g_det_member(M, i, "aabb")
    assert g_member(M, "abab") is False
    assert not g_det_member(M, i, "abab")
    assert not g_det_member(M, ("[", "]"), "a")
    with pytest.raises(ClassError):
        g_det_member(InfiniteAutomaton(g0(), nfa_words(frozenset("AB"), ["A"]), nfa_universal(frozenset("AB"))), "A", "a")


def test_imbalance_bounds():
    assert g_imbalance_bound(anbn_columns().graph["a"]) == 0
    for T in anbn_growing().graph.relations.values():
        assert g_imbalance_bound(T) < math.inf


def test_ambiguity_probe():
    M, _ = ts2synch(anbn_tiling())
    gamma = M.graph.vertex_alphabet
    M = InfiniteAutomaton(M.graph, nfa_from_regex("#*", gamma), M.final)
    assert g_ambiguity_probe(M, 6, 6) == 1
    # paths with vertices up to height h match pictures of height up to h
    counts = g_path_counts(M, 4, 6)
    assert counts[tuple("aabb")] == ts_count_pictures(anbn_tiling(), "aabb", 6)
    gamma = frozenset({"A", "B"})
    two = Transducer.build(gamma, {(0, EPS, "A", 1), (0, EPS, "B", 1)}, 0, {1})
    fork = InfiniteAutomaton(RationalGraph(gamma, {"a": two}), nfa_words(gamma, [""]), nfa_universal(gamma))
    assert g_ambiguity_probe(fork, 1, 1) == 2


def test_label_projection():
    M = grid()
    merged = g_project_labels(M.graph, {"a": "c", "b": "c"})
    P = InfiniteAutomaton(merged, M.initial, M.final)
    expected = {("c",) * len(w) for w in g_enumerate_language(M, 5)}
    assert set(g_enumerate_language(P, 5)) == expected
    same = InfiniteAutomaton(g_project_labels(M.graph, {"a": "a", "b": "b"}), M.initial, M.final)
    assert g_enumerate_language(same, 5) == g_enumerate_language(M, 5)
    with pytest.raises(ValueError):
        g_project_labels(M.graph, {"a": "a"})


def test_split_labels_project_back():
    C = anbn_columns()
    Ta = C.graph["a"]
    split = RationalGraph(C.graph.vertex_alphabet, {"a1": Ta, "a2": Ta, "b": C.graph["b"]})
    S = InfiniteAutomaton(split, C.initial, C.final)
    joined = InfiniteAutomaton(g_project_labels(split, {"a1": "a", "a2": "a", "b": "b"}), C.initial, C.final)
    projected = {tuple("a" if x.startswith("a") else x for x in w) for w in g_enumerate_language(S, 6)}
    assert set(g_enumerate_language(joined, 6)) == projected == set(anbn(6))


def test_run_counts_feed_path_check():
    M = grid()
    path = PathWitness(((), ("A",), ("A", "B")), ("a", "b"))
    assert g_is_path(M, path)
    assert t_run_count(M.graph["a"], (), ("A",)) >= 1
    assert not g_is_path(M, PathWitness(((), ("B",)), ("a",)))


def test_vertex_alphabet_is_checked():
    with pytest.raises(AlphabetError):
        RationalGraph(frozenset({"A"}), {"a": grid().graph["a"]})
    with pytest.raises(ValueError):
        RationalGraph(frozenset({"A"}), {})
    assert list(itertools.islice(iter_words(nfa_universal(frozenset({"A"})), 2), 3)) == [(), ("A",), ("A", "A")]
