"""Out-degrees: explosive growth, and how to tame it.

First the graph G0 whose out-degree squares at every step.  Then a graph
with infinitely many initial vertices is rebuilt so that it starts from one
vertex and every vertex still has finitely many successors.

    python3 demos/degrees_and_growth.py
"""
import time
from collections import deque

from ratgraph.automata import format_word, iter_words
from ratgraph.conversions import synch2ratfd
from ratgraph.fixtures import anbn_columns_o, g0
from ratgraph.graphs import g_degree_table, g_out_degree, g_successors, g_witness
from ratgraph.harness import equiv


def main():
    print("G0, out-degree by distance from A")
    for distance, degree, count in g_degree_table(g0(), "A", 2):
        print(f"  distance {distance}: {count:>3} vertices, max out-degree {degree}")
    print()

    M = anbn_columns_o()
    print("source graph initial vertices:", ", ".join(format_word(v) or "ε" for v in iter_words(M.initial, 3)), "...")
    start = time.perf_counter()
    H, report = synch2ratfd(M, k=2)
    print(f"rebuilt in {time.perf_counter() - start:.1f}s from the single vertex {format_word(report.extras['initial_vertex'])}")

    w = g_witness(H, "aabb")
    print("an accepting path for aabb:")
    for v in w.vertices:
        print("   ", format_word(v))

    degrees = []
    queue, seen = deque([report.extras["initial_vertex"]]), set()
    while queue and len(degrees) < 30:
        v = queue.popleft()
        degrees.append(g_out_degree(H, v))
        for u in sorted(g_successors(H, v)):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    print(f"out-degrees of the first {len(degrees)} reachable vertices: {degrees}")
    print("same language up to length 4:", equiv(M, H, 4).equal)


if __name__ == "__main__":
    main()
