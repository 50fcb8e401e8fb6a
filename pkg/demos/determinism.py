"""Determinism across formalisms.

A sequential synchronous graph read from x* gives a tiling system in which
each row has at most one possible next row.  Each word then has a single
accepting path.  A hand-made graph shows how global determinism can fail.

    python3 demos/determinism.py
"""
from ratgraph import RationalGraph, Transducer
from ratgraph.automata import nfa_universal
from ratgraph.conversions import check_global_det, seq_from_astar_is_det
from ratgraph.fixtures import anbn_sequential
from ratgraph.graphs import g_ambiguity_probe
from ratgraph.harness import equiv
from ratgraph.transducers import t_classify


def main():
    M = anbn_sequential()
    for label, T in M.graph.relations.items():
        flags = t_classify(T)
        print(f"relation {label}: sequential={flags.sequential} synchronous={flags.synchronous}")

    S, report = seq_from_astar_is_det(M, width=4)
    print(f"tiling system with {len(S.tiles)} tiles; one next row per row up to width 4: "
          f"{report.extras['deterministic_probe']}")
    print("same language up to length 6:", equiv(M, S, 6).equal)
    print("most accepting paths for one word (length 6, vertices up to 8):", g_ambiguity_probe(M, 6, 8))
    print()

    gamma = {"a", "b", "c", "x", "y"}
    first = Transducer.build(gamma, {(0, "a", "b", 1), (0, "a", "c", 1)}, 0, {1})
    second = Transducer.build(gamma, {(0, "b", "x", 1), (0, "c", "y", 1)}, 0, {1})
    G = RationalGraph(gamma, {"1": first, "2": second})
    everything = nfa_universal(frozenset(gamma))
    print("a -> b or c, then b -> x and c -> y")
    print("globally deterministic:", check_global_det(G, everything, everything))


if __name__ == "__main__":
    main()
