"""Rational graphs and the infinite automata built on them."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .automata import (
    Nfa,
    Word,
    iter_words,
    nfa_cardinality,
    nfa_intersect,
    nfa_is_empty,
    nfa_lengths_bounded,
    nfa_member,
    nfa_minimize,
    nfa_shortest_word,
    nfa_union,
)
from .errors import AlphabetError, ClassError
from .transducers import (
    Transducer,
    is_left_synchronized,
    t_apply_lang,
    t_apply_word,
    t_functional_probe,
    t_imbalance_bound,
    t_inverse,
    t_is_functional_synchronized,
    t_run_count,
    t_union,
    t_with_alphabet,
)


@dataclass(frozen=True)
class RationalGraph:
    """One transducer per edge label, all over the same vertex alphabet."""

    vertex_alphabet: frozenset
    relations: Mapping[str, Transducer] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_alphabet", frozenset(self.vertex_alphabet))
        if not self.relations:
            raise ValueError("a rational graph needs at least one edge label")
        fixed = {}
        for label, T in self.relations.items():
            if not T.alphabet <= self.vertex_alphabet:
                raise AlphabetError(f"transducer of {label!r} uses letters outside the vertex alphabet")
            fixed[label] = T if T.alphabet == self.vertex_alphabet else t_with_alphabet(T, self.vertex_alphabet)
        object.__setattr__(self, "relations", dict(sorted(fixed.items())))

    @property
    def edge_labels(self) -> list[str]:
        return list(self.relations)

    def __getitem__(self, label) -> Transducer:
        return self.relations[label]


@dataclass(frozen=True)
class InfiniteAutomaton:
    graph: RationalGraph
    initial: Nfa
    final: Nfa

    def __post_init__(self):
        gamma = self.graph.vertex_alphabet
        for name in ("initial", "final"):
            A = getattr(self, name)
            if not A.alphabet <= gamma:
                raise AlphabetError(f"{name} set uses letters outside the vertex alphabet")
            if A.alphabet != gamma:
                object.__setattr__(self, name, Nfa(gamma, A.states, A.initial, A.finals, A.transitions))

    @property
    def edge_labels(self) -> list[str]:
        return self.graph.edge_labels


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.vertices) != len(self.labels) + 1:
            raise ValueError("a path has one more vertex than labels")

    @property
    def max_vertex_len(self) -> int:
        return max(len(v) for v in self.vertices)


def _as_graph(G) -> RationalGraph:
    return G.graph if isinstance(G, InfiniteAutomaton) else G


def _check_label_word(M, w) -> Word:
    w = tuple(w)
    labels = set(M.edge_labels)
    for a in w:
        if a not in labels:
            raise AlphabetError(f"edge label {a!r} not in {sorted(labels)}")
    return w


# -- edges and degrees ------------------------------------------------------


def g_out_edges(G: RationalGraph, v, max_target_len: int) -> set[tuple[str, Word]]:
    G = _as_graph(G)
    v = tuple(v)
    edges = set()
    for a, T in G.relations.items():
        for target in iter_words(t_apply_word(T, v), max_target_len):
            edges.add((a, target))
    return edges


def g_out_degree(G: RationalGraph, v, count: str = "edges") -> int | float:
    """Out-degree of ``v``: number of outgoing edges, or of distinct successors with ``count="targets"``."""
    G = _as_graph(G)
    v = tuple(v)
    images = [t_apply_word(T, v) for T in G.relations.values()]
    if count == "edges":
        return sum(nfa_cardinality(A) for A in images)
    if count == "targets":
        union = images[0]
        for A in images[1:]:
            union = nfa_union(union, A)
        return nfa_cardinality(union)
    raise ValueError(f"unknown count mode {count!r}")


def g_successors(G: RationalGraph, v) -> set[Word]:
    """All successors of ``v``; raises when some image is infinite."""
    G = _as_graph(G)
    v = tuple(v)
    result = set()
    for T in G.relations.values():
        image = t_apply_word(T, v)
        if nfa_cardinality(image) == math.inf:
            raise ValueError(f"vertex {v!r} has infinitely many successors")
        result.update(iter_words(image))
    return result


def g_degree_table(G: RationalGraph, v, radius: int, count: str = "edges") -> list[tuple[int, int | float, int]]:
    """Rows ``(distance, max out-degree, number of vertices)`` for the vertices at each distance from ``v``."""
    G = _as_graph(G)
    v = tuple(v)
    seen = {v}
    layer = [v]
    rows = []
    for distance in range(radius + 1):
        if not layer:
            break
        degrees = [g_out_degree(G, u, count) for u in layer]
        rows.append((distance, max(degrees), len(layer)))
        if distance == radius:
            break
        nxt = []
        for u in layer:
            for s in sorted(g_successors(G, u)):
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        layer = nxt
    return rows


# -- path languages ---------------------------------------------------------


def _image(T: Transducer, S: Nfa) -> Nfa:
    return nfa_minimize(t_apply_lang(T, S))


def g_member(M: InfiniteAutomaton, w) -> bool:
    """Exact membership of ``w`` in the path language, by iterated rational images."""
    w = _check_label_word(M, w)
    current = nfa_minimize(M.initial)
    for a in w:
        current = _image(M.graph[a], current)
        if nfa_is_empty(current):
            return False
    return not nfa_is_empty(nfa_intersect(current, M.final))


def g_enumerate_language(M: InfiniteAutomaton, max_len: int) -> list[Word]:
    """Words of the path language of length at most ``max_len`` in length-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    labels = M.edge_labels
    found = []
    stack = [((), nfa_minimize(M.initial))]
    while stack:
        word, current = stack.pop()
        if not nfa_is_empty(nfa_intersect(current, M.final)):
            found.append(word)
        if len(word) == max_len:
            continue
        for a in labels:
            image = _image(M.graph[a], current)
            if not nfa_is_empty(image):
                stack.append((word + (a,), image))
    return sorted(found, key=lambda u: (len(u), u))


def g_witness(M: InfiniteAutomaton, w, max_vertex_len: int | None = None) -> PathWitness | None:
    """An accepting path for ``w`` whose vertices are no longer than ``max_vertex_len``."""
    w = _check_label_word(M, w)

    def cap(A):
        A = nfa_minimize(A)
        return A if max_vertex_len is None else nfa_minimize(nfa_lengths_bounded(A, max_vertex_len))

    layers = [cap(M.initial)]
    for a in w:
        layers.append(cap(t_apply_lang(M.graph[a], layers[-1])))
        if nfa_is_empty(layers[-1]):
            return None
    last = nfa_shortest_word(nfa_intersect(layers[-1], M.final))
    if last is None:
        return None
    vertices = [last]
    for k in range(len(w) - 1, -1, -1):
        back = t_apply_word(t_inverse(M.graph[w[k]]), vertices[-1])
        prev = nfa_shortest_word(nfa_intersect(layers[k], back))
        vertices.append(prev)
    return PathWitness(tuple(reversed(vertices)), w)


def g_is_path(M: InfiniteAutomaton, witness: PathWitness) -> bool:
    vs, labels = witness.vertices, witness.labels
    if not nfa_member(M.initial, vs[0]) or not nfa_member(M.final, vs[-1]):
        return False
    return all(t_run_count(M.graph[a], vs[k], vs[k + 1]) > 0 for k, a in enumerate(labels))


def g_path_counts(M: InfiniteAutomaton, max_len: int, max_vertex_len: int) -> dict[Word, int]:
    """Number of accepting paths with short vertices, for every label word up to ``max_len``."""
    @lru_cache(maxsize=None)
    def succ(a, v):
        image = nfa_lengths_bounded(t_apply_word(M.graph[a], v), max_vertex_len)
        return tuple(iter_words(image))

    finals = {}

    def is_final(v):
        if v not in finals:
            finals[v] = nfa_member(M.final, v)
        return finals[v]

    start = defaultdict(int)
    for v in iter_words(M.initial, max_vertex_len):
        start[v] += 1
    counts = {}
    stack = [((), dict(start))]
    while stack:
        word, layer = stack.pop()
        total = sum(n for v, n in layer.items() if is_final(v))
        if total:
            counts[word] = total
        if len(word) == max_len:
            continue
        for a in M.edge_labels:
            nxt = defaultdict(int)
            for v, n in layer.items():
                for t in succ(a, v):
                    nxt[t] += n
            if nxt:
                stack.append((word + (a,), dict(nxt)))
    return counts


def g_ambiguity_probe(M: InfiniteAutomaton, max_len: int, max_vertex_len: int) -> int:
    """Largest number of accepting paths (short vertices only) carrying the same word."""
    counts = g_path_counts(M, max_len, max_vertex_len)
    return max(counts.values(), default=0)


# -- determinism ------------------------------------------------------------


@dataclass(frozen=True)
class DeterminismVerdict:
    deterministic: bool
    proved: bool

    def __bool__(self):
        return self.deterministic


def g_determinism(G: RationalGraph, probe_len: int = 6) -> DeterminismVerdict:
    """Functionality of every relation; exact for left-synchronized relations, probed otherwise."""
    G = _as_graph(G)
    proved = True
    for T in G.relations.values():
        if is_left_synchronized(T):
            if not t_is_functional_synchronized(T):
                return DeterminismVerdict(False, True)
        else:
            if not t_functional_probe(T, probe_len):
                return DeterminismVerdict(False, True)
            proved = False
    return DeterminismVerdict(True, proved)


def g_is_deterministic(G: RationalGraph, probe_len: int = 6) -> bool:
    return g_determinism(G, probe_len).deterministic


def g_det_member(M: InfiniteAutomaton, i, w, check: bool = True) -> bool:
    """Membership on a deterministic graph from the single initial vertex ``i``."""
    if check and not g_is_deterministic(M.graph):
        raise ClassError("g_det_member needs a deterministic graph")
    w = _check_label_word(M, w)
    vertex = tuple(i)
    for a in w:
        image = t_apply_word(M.graph[a], vertex)
        nxt = nfa_shortest_word(image)
        if nxt is None:
            return False
        vertex = nxt
    return nfa_member(M.final, vertex)


def g_imbalance_bound(T: Transducer, side: str = "output") -> int | float:
    return t_imbalance_bound(T, side)


def g_project_labels(G: RationalGraph, mapping: Mapping[str, str]) -> RationalGraph:
    """Rename edge labels; labels sharing an image get the union of their relations."""
    missing = set(G.edge_labels) - set(mapping)
    if missing:
        raise ValueError(f"mapping is not total on labels: {sorted(missing)}")
    groups = defaultdict(list)
    for a, T in G.relations.items():
        groups[mapping[a]].append(T)
    return RationalGraph(G.vertex_alphabet, {b: t_union(*ts) for b, ts in groups.items()})
