"""One language, five machines.

The language {a^n b^n : n >= 1} is recognised here by a tiling system, the
graph of its picture columns, a sequential graph, a cellular automaton and
the graph built from that automaton.  Every machine is asked for its words
up to length 8 and the lists are compared.

    python3 demos/one_language_many_machines.py
"""
from ratgraph.automata import format_word
from ratgraph.conversions import ca2graph, ts2seq, ts2synch
from ratgraph.fixtures import anbn_ca, anbn_tiling
from ratgraph.harness import language
from ratgraph.tiling import ts_min_picture

MAX_LEN = 8


def show(name, words):
    print(f"{name:<28} {' '.join(format_word(w) for w in words)}")


def main():
    S = anbn_tiling()
    print(f"tiling system: {len(S.tiles)} tiles over {sorted(S.gamma)}, frame {S.frame!r}")
    print("smallest picture of aabb:")
    for row in ts_min_picture(S, "aabb"):
        print("   ", " ".join(row))
    print()

    columns, _ = ts2synch(S)
    sequential, _ = ts2seq(S)
    C = anbn_ca()
    from_ca, report = ca2graph(C)

    machines = [
        ("tiling system", S),
        ("column graph", columns),
        ("sequential graph", sequential),
        ("cellular automaton", C),
        ("graph of the automaton", from_ca),
    ]
    results = {}
    for name, machine in machines:
        results[name] = language(machine, MAX_LEN)
        show(name, results[name])

    print()
    agree = len({tuple(ws) for ws in results.values()}) == 1
    print(f"all machines agree up to length {MAX_LEN}: {agree}")
    print(f"automaton graph is globally deterministic: {report.extras['globally_deterministic']}")


if __name__ == "__main__":
    main()
