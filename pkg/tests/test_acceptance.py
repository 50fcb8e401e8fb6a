"""End-to-end acceptance checks, each against a brute-force oracle and a time budget.

Every test prints one ``PASS``/``FAIL`` line (visible with ``pytest -s`` and in
the summary of ``pytest -rA``).
"""
import itertools
import random
import time
from collections import deque
from contextlib import contextmanager

import pytest

from ratgraph import InfiniteAutomaton, RationalGraph, Transducer
from ratgraph.automata import EPS, iter_words, nfa_from_regex, nfa_member, nfa_universal
from ratgraph.cellular import ca_member
from ratgraph.conversions import (
    ca2graph,
    check_global_det,
    onepoint,
    rat2synch,
    seq_from_astar_is_det,
    synch2ratfd,
    synch2ts,
    ts2seq,
    ts2synch,
)
from ratgraph.fixtures import anbn_ca, anbn_columns, anbn_columns_o, anbn_sequential, anbn_tiling, g0, grid
from ratgraph.graphs import (
    g_ambiguity_probe,
    g_degree_table,
    g_enumerate_language,
    g_out_degree,
    g_witness,
)
from ratgraph.harness import equiv, language
from ratgraph.tiling import ts_det_probe, ts_member, ts_min_height, ts_min_picture
from ratgraph.transducers import (
    is_left_synchronized,
    t_classify,
    t_compose,
    t_concat,
    t_eval_sequential,
    t_pairs,
    t_restrict_domain,
    t_restrict_range,
    t_run_count,
    t_unambiguize_synchronized,
    t_union,
)


@contextmanager
def criterion(number, title, budget):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < budget
        status = "PASS" if ok and within else "FAIL"
        print(f"\n[{status}] criterion {number}: {title} ({elapsed:.2f}s, budget {budget}s)")
    assert within, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"


def anbn(max_len):
    return {tuple("a" * n + "b" * n) for n in range(1, max_len // 2 + 1)}


def test_tiling_membership_matches_anbn():
    S = anbn_tiling()
    with criterion(1, "tiling membership equals a^n b^n up to length 10", 10):
        expected = anbn(10)
        for n in range(1, 11):
            for w in itertools.product("ab", repeat=n):
                assert ts_member(S, w) == (w in expected), w


def test_column_graph_language():
    with criterion(2, "column graph accepts ab .. aaaabbbb up to length 8", 10):
        M, _ = ts2synch(anbn_tiling())
        gamma = M.graph.vertex_alphabet
        M = InfiniteAutomaton(M.graph, nfa_from_regex("###*", gamma), nfa_from_regex("b*⊥", gamma))
        words = g_enumerate_language(M, 8)
        assert sorted(words) == sorted(anbn(8))
        assert len(words) == 4


def test_grid_made_synchronous():
    with criterion(3, "padding the grid keeps its language and makes it synchronous", 30):
        M = grid()
        M2, report = rat2synch(M)
        assert equiv(M, M2, 6).equal
        assert language(M, 6)  # the oracle is not vacuous
        for T in M2.graph.relations.values():
            assert t_classify(T).synchronous
        assert report.check() == []


def test_g0_degree_growth():
    with criterion(4, "out-degree 4, 16, 256 at distances 0, 1, 2", 5):
        table = g_degree_table(g0(), ("A",), 2)
        assert [degree for _, degree, _ in table] == [4, 16, 256]


def test_tiling_round_trip_and_heights():
    with criterion(5, "tiling -> graph -> tiling keeps the language and heights", 60):
        S = anbn_tiling()
        M, _ = ts2synch(S)
        S2, report = synch2ts(M)
        assert equiv(S, S2, 8).equal
        offset = report.extras["height_offset"]
        checked = 0
        for w in sorted(anbn(8)):
            witness = g_witness(M, w)
            assert witness is not None
            assert ts_min_height(S, w) == witness.max_vertex_len
            assert ts_min_height(S2, w) == witness.max_vertex_len + offset
            checked += 1
        assert checked == 4


def framed_vertex(rows, width, fresh, frame="#"):
    """Initial vertex listing the rows of a framed picture, marks on the first column."""
    lb, rb, mf = fresh["left"], fresh["right"], fresh[f"mark {frame}"]
    border = (lb, frame, mf) + (frame,) * width + (rb,)
    body = [(lb, frame, fresh[f"mark {r[0]}"]) + tuple(r[1:]) + (frame, rb) for r in rows]
    return border + sum(body, ()) + border


def start_vertices(S, fresh, max_width, max_cells=7):
    """Every picture of width at most ``max_width`` with at most ``max_cells`` cells,
    plus the smallest accepted picture of every word up to that width."""
    gamma = sorted(S.gamma)
    starts = set()
    for width in range(max_width + 1):
        starts.add(framed_vertex([], width, fresh))
        height = 1
        while width and width * height <= max_cells:
            for cells in itertools.product(gamma, repeat=width * height):
                rows = [cells[i * width:(i + 1) * width] for i in range(height)]
                starts.add(framed_vertex(rows, width, fresh))
            height += 1
    for w in anbn(max_width):
        starts.add(framed_vertex(ts_min_picture(S, w), len(w), fresh))
    return sorted(starts)


def reachable_within(M, starts, radius):
    """Vertices at most ``radius`` steps from ``starts``, with their out-degrees."""
    relations = list(M.graph.relations.values())
    seen = set(starts)
    queue = deque((v, 0) for v in starts)
    while queue:
        v, d = queue.popleft()
        images = [t_eval_sequential(T, v) for T in relations]
        images = [u for u in images if u is not None]
        yield v, len(images)
        if d < radius:
            for u in images:
                if u not in seen:
                    seen.add(u)
                    queue.append((u, d + 1))


def test_sequential_graph_from_tiling():
    with criterion(6, "sequential graph: classes, out-degree at most 1, language", 60):
        S = anbn_tiling()
        M, report = ts2seq(S)
        for T in M.graph.relations.values():
            flags = t_classify(T)
            assert flags.sequential and flags.synchronous
        starts = start_vertices(S, report.fresh_symbols, 6)
        assert all(nfa_member(M.initial, v) for v in starts)
        degrees = dict(reachable_within(M, starts, 8))
        assert len(degrees) > len(starts)
        assert sum(d == 1 for d in degrees.values()) > 10
        assert max(degrees.values()) <= 1
        # the single-run evaluation agrees with the general out-degree
        for v in sorted(degrees)[:40]:
            assert g_out_degree(M, v) == degrees[v]
        assert equiv(S, M, 8).equal
        assert report.check() == []


def test_single_initial_vertex():
    with criterion(7, "one initial vertex, still left-synchronized, same language", 30):
        M = anbn_columns()
        M1, report = onepoint(M)
        assert len(list(iter_words(M1.initial, 10))) == 1
        for T in M1.graph.relations.values():
            assert is_left_synchronized(T)
        assert equiv(M, M1, 8).equal
        assert report.check() == []


def test_finite_degree_graph():
    with criterion(8, "finite out-degree graph from the vertex |#", 300):
        M = anbn_columns_o()
        H, report = synch2ratfd(M, k=2)
        starts = list(iter_words(H.initial, 10))
        assert starts == [("|", "#")] == [report.extras["initial_vertex"]]
        assert equiv(M, H, 4).equal
        seen = {starts[0]}
        queue = deque(starts)
        sampled = 0
        while queue and sampled < 100:
            v = queue.popleft()
            degree = g_out_degree(H, v)
            assert degree < float("inf")
            sampled += 1
            for label in H.edge_labels:
                for u in _images(H.graph[label], v):
                    if u not in seen:
                        seen.add(u)
                        queue.append(u)
        assert sampled == 100


def _images(T, v):
    from ratgraph.graphs import g_successors

    G = RationalGraph(T.alphabet, {"x": T})
    return sorted(g_successors(G, v))


def _two_b_counterexample():
    gamma = {"a", "b", "c", "x", "y"}
    T1 = Transducer.build(gamma, {(0, "a", "b", 1), (0, "a", "c", 1)}, 0, {1})
    T2 = Transducer.build(gamma, {(0, "b", "x", 1), (0, "c", "y", 1)}, 0, {1})
    G = RationalGraph(gamma, {"1": T1, "2": T2})
    everything = nfa_universal(frozenset(gamma))
    return G, everything


def test_global_determinism():
    with criterion(9, "global determinism of the cellular automaton graph", 60):
        C = anbn_ca()
        M, report = ca2graph(C)
        assert check_global_det(M.graph, M.initial, M.final)
        assert report.extras["globally_deterministic"]
        G, everything = _two_b_counterexample()
        assert not check_global_det(G, everything, everything)
        expected = {w for n in range(1, 7) for w in itertools.product(sorted(C.sigma), repeat=n) if ca_member(C, w)}
        assert set(g_enumerate_language(M, 6)) == expected
        assert expected == anbn(6)


def test_unambiguity_chain():
    with criterion(10, "deterministic tiling and one accepting path per word", 60):
        M = anbn_sequential()
        S, report = seq_from_astar_is_det(M, width=4)
        assert report.extras["deterministic_probe"]
        assert ts_det_probe(S, 4)
        assert equiv(M, S, 6).equal
        assert g_ambiguity_probe(M, 6, 8) == 1
        M2, _ = ts2synch(S)
        assert g_ambiguity_probe(M2, 6, 8) == 1


# -- randomized algebra -----------------------------------------------------

ALPHABET = frozenset({"a", "b"})
LETTERS = ["a", "b"]
BOUND = 4
TRIALS = 60


def random_transducer(rng, *, consuming=False, synchronous=False, edges=5):
    """Three states; ``consuming`` forbids ε inputs, ``synchronous`` forbids ε on both sides."""
    inputs = LETTERS if consuming or synchronous else LETTERS + [EPS]
    outputs = LETTERS if synchronous else LETTERS + [EPS]
    trans = set()
    for _ in range(edges):
        trans.add((rng.randrange(3), rng.choice(inputs), rng.choice(outputs), rng.randrange(3)))
    finals = {q for q in range(3) if rng.random() < 0.4} or {rng.randrange(3)}
    return Transducer.build(ALPHABET, trans, 0, finals, {0, 1, 2})


def random_nfa(rng):
    from ratgraph import Nfa

    trans = {(rng.randrange(2), rng.choice(LETTERS), rng.randrange(2)) for _ in range(3)}
    finals = {q for q in range(2) if rng.random() < 0.6}
    return Nfa.build(ALPHABET, trans, 0, finals, {0, 1})


def pairs(T):
    return t_pairs(T, BOUND, BOUND)


def test_randomized_algebra():
    rng = random.Random(20261018)
    counts = dict.fromkeys(["compose", "union", "concat", "restrict", "unambiguize"], 0)
    with criterion(11, f"{TRIALS} random transducers per operation against pair-set oracles", 300):
        for _ in range(TRIALS):
            # composition: the first factor consumes input, so middles stay within the bound
            T1 = random_transducer(rng, consuming=True)
            T2 = random_transducer(rng)
            p1, p2 = pairs(T1), pairs(T2)
            expected = {(u, w) for u, v in p1 for v2, w in p2 if v == v2}
            assert pairs(t_compose(T1, T2)) == expected
            counts["compose"] += 1

            T3 = random_transducer(rng)
            assert pairs(t_union(T2, T3)) == p2 | pairs(T3)
            counts["union"] += 1

            p3 = pairs(T3)
            expected = {(u1 + u2, v1 + v2) for u1, v1 in p2 for u2, v2 in p3
                        if len(u1 + u2) <= BOUND and len(v1 + v2) <= BOUND}
            assert pairs(t_concat(T2, T3)) == expected
            counts["concat"] += 1

            A = random_nfa(rng)
            assert pairs(t_restrict_domain(T2, A)) == {(u, v) for u, v in p2 if nfa_member(A, u)}
            assert pairs(t_restrict_range(T2, A)) == {(u, v) for u, v in p2 if nfa_member(A, v)}
            counts["restrict"] += 1

            T4 = random_transducer(rng, synchronous=True, edges=7)
            U = t_unambiguize_synchronized(T4)
            p4 = pairs(T4)
            assert pairs(U) == p4
            assert all(t_run_count(U, u, v) == 1 for u, v in p4)
            counts["unambiguize"] += 1
    assert min(counts.values()) >= 50, counts


@pytest.mark.parametrize("seed", range(3))
def test_random_suite_exercises_ambiguity(seed):
    # the unambiguization oracle is only meaningful if some sources are ambiguous
    rng = random.Random(seed)
    ambiguous = 0
    for _ in range(30):
        T = random_transducer(rng, synchronous=True, edges=7)
        if any(t_run_count(T, u, v) > 1 for u, v in pairs(T)):
            ambiguous += 1
    assert ambiguous > 0
