"""Command line front end: ``ratgraph <command> ...``.

Exit codes: 0 accept / equal / success, 1 reject / differ, 2 bad usage or
malformed input, 3 a construction's precondition does not hold.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import conversions as conv
from .automata import format_word, parse_word
from .cellular import CellularAutomaton, ca_is_deterministic
from .errors import ClassError, FreshSymbolError, PreconditionError, RatGraphError
from .graphs import InfiniteAutomaton, RationalGraph, g_ambiguity_probe, g_degree_table, g_determinism
from .harness import equiv, language, member
from .io import dumps, load, save
from .tiling import TilingSystem, ts_det_probe
from .transducers import Transducer, t_classify, t_functional_probe

EXIT_OK, EXIT_NO, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


def _kind(obj) -> str:
    return type(obj).__name__


def _need(obj, *types):
    if not isinstance(obj, types):
        names = " or ".join(t.__name__ for t in types)
        raise RatGraphError(f"this command needs a {names}, got a {_kind(obj)}")


def _json_safe(value):
    return json.loads(json.dumps(value, default=str, ensure_ascii=False))


# -- commands ---------------------------------------------------------------


def cmd_member(args) -> int:
    obj = load(args.file)
    w = parse_word(args.word)
    ok = member(obj, w)
    print("accept" if ok else "reject")
    return EXIT_OK if ok else EXIT_NO


def cmd_enumerate(args) -> int:
    obj = load(args.file)
    for w in language(obj, args.max_len):
        print(format_word(w) if w else "ε")
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = load(args.first), load(args.second)
    verdict = equiv(a, b, args.max_len, ignore_empty=args.ignore_empty)
    if verdict.equal:
        print(f"equal up to length {args.max_len} ({verdict.counts[0]} words)")
        return EXIT_OK
    w = verdict.first_divergence
    side = "first" if member(a, w) else "second"
    print(f"differ: {format_word(w) if w else 'ε'} is only accepted by the {side} file")
    return EXIT_NO


def _classify_lines(obj):
    if isinstance(obj, Transducer):
        yield "transducer", t_classify(obj).as_dict()
    elif isinstance(obj, (InfiniteAutomaton, RationalGraph)):
        G = obj.graph if isinstance(obj, InfiniteAutomaton) else obj
        for a, T in G.relations.items():
            yield a, t_classify(T).as_dict()
    elif isinstance(obj, CellularAutomaton):
        yield "cellular automaton", {"deterministic": ca_is_deterministic(obj)}
    else:
        raise RatGraphError(f"nothing to classify in a {_kind(obj)}")


def cmd_classify(args) -> int:
    obj = load(args.file)
    for name, flags in _classify_lines(obj):
        text = " ".join(f"{k}={'yes' if v else 'no'}" for k, v in flags.items())
        print(f"{name}: {text}")
    return EXIT_OK


def cmd_degree(args) -> int:
    obj = load(args.file)
    _need(obj, InfiniteAutomaton, RationalGraph)
    print("distance\tmax_out_degree\tvertices")
    for distance, degree, count in g_degree_table(obj, parse_word(args.vertex), args.radius, args.count):
        print(f"{distance}\t{degree}\t{count}")
    return EXIT_OK


def cmd_probe(args) -> int:
    obj = load(args.file)
    if args.what == "ambiguity":
        _need(obj, InfiniteAutomaton)
        value = g_ambiguity_probe(obj, args.max_len, args.max_vertex_len)
        print(f"max accepting paths per word: {value}")
        return EXIT_OK if value <= 1 else EXIT_NO
    if args.what == "determinism":
        if isinstance(obj, TilingSystem):
            ok = ts_det_probe(obj, args.width)
            print(f"{'deterministic' if ok else 'not deterministic'} (rows up to width {args.width})")
        elif isinstance(obj, CellularAutomaton):
            ok = ca_is_deterministic(obj)
            print("deterministic" if ok else "not deterministic")
        else:
            _need(obj, InfiniteAutomaton, RationalGraph)
            verdict = g_determinism(obj, args.max_len)
            ok = verdict.deterministic
            how = "proved" if verdict.proved else f"probed up to length {args.max_len}, not proved"
            print(f"{'deterministic' if ok else 'not deterministic'} ({how})")
        return EXIT_OK if ok else EXIT_NO
    _need(obj, Transducer, InfiniteAutomaton, RationalGraph)
    if isinstance(obj, Transducer):
        transducers = {"transducer": obj}
    else:
        transducers = (obj.graph if isinstance(obj, InfiniteAutomaton) else obj).relations
    ok = True
    for name, T in transducers.items():
        f = t_functional_probe(T, args.max_len)
        ok &= f
        print(f"{name}: {'functional' if f else 'not functional'} up to length {args.max_len}")
    return EXIT_OK if ok else EXIT_NO


def _run_conversion(name, obj, args):
    if name == "rat2synch":
        _need(obj, InfiniteAutomaton)
        return conv.rat2synch(obj)
    if name == "ts2synch":
        _need(obj, TilingSystem)
        return conv.ts2synch(obj)
    if name == "startostar":
        _need(obj, InfiniteAutomaton)
        return conv.startostar(obj)
    if name == "synch2ts":
        _need(obj, InfiniteAutomaton)
        return conv.synch2ts(obj, mode=args.mode)
    if name == "ts2seq":
        _need(obj, TilingSystem)
        return conv.ts2seq(obj)
    if name == "onepoint":
        _need(obj, InfiniteAutomaton)
        return conv.onepoint(obj)
    if name == "synch2ratfd":
        _need(obj, InfiniteAutomaton)
        return conv.synch2ratfd(obj, k=args.k)
    if name == "squarets2graph":
        _need(obj, TilingSystem)
        return conv.squarets2synchgraph(obj, args.slope)
    if name == "graph2squarets":
        _need(obj, InfiniteAutomaton)
        return conv.synchfd2squarets(obj)
    if name == "ca2graph":
        _need(obj, CellularAutomaton)
        return conv.ca2graph(obj)
    raise RatGraphError(f"unknown conversion {name!r}")


CONVERSIONS = [
    "rat2synch", "ts2synch", "startostar", "synch2ts", "ts2seq", "onepoint",
    "synch2ratfd", "squarets2graph", "graph2squarets", "ca2graph", "check-globdet",
]


def cmd_convert(args) -> int:
    obj = load(args.file)
    if args.name == "check-globdet":
        _need(obj, InfiniteAutomaton)
        ok = conv.check_global_det(obj.graph, obj.initial, obj.final, per_letter=args.per_letter)
        print("globally deterministic" if ok else "not globally deterministic")
        return EXIT_OK if ok else EXIT_NO
    result, report = _run_conversion(args.name, obj, args)
    summary = {
        "conversion": args.name,
        "kind": report.kind,
        "fresh_symbols": report.fresh_symbols,
        "class_claims": report.class_claims,
        "oracle_bound": report.oracle_bound,
        "extras": report.extras,
        "check": report.check(),
    }
    if args.out:
        save(result, args.out)
        print(json.dumps(_json_safe(summary), indent=1, ensure_ascii=False))
    else:
        print(dumps(result))
        print(json.dumps(_json_safe(summary), ensure_ascii=False), file=sys.stderr)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ratgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("member", help="decide membership of a word")
    p.add_argument("file", type=Path)
    p.add_argument("word", help="letters, with {name} for multi-character letters; '' for the empty word")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("enumerate", help="list the accepted words up to a length")
    p.add_argument("file", type=Path)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("equiv", help="compare two languages up to a length")
    p.add_argument("first", type=Path)
    p.add_argument("second", type=Path)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--ignore-empty", action="store_true", help="do not compare the empty word")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("classify", help="transducer classes of every relation")
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("degree", help="out-degree table around a vertex")
    p.add_argument("file", type=Path)
    p.add_argument("vertex")
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--count", choices=["edges", "targets"], default="edges")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("probe", help="bounded ambiguity, determinism or functionality checks")
    p.add_argument("file", type=Path)
    p.add_argument("what", choices=["ambiguity", "determinism", "functional"])
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--max-vertex-len", type=int, default=8)
    p.add_argument("--width", type=int, default=4)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("convert", help="run a construction")
    p.add_argument("name", choices=CONVERSIONS)
    p.add_argument("file", type=Path)
    p.add_argument("--out", type=Path, help="write the result here and print the report")
    p.add_argument("--mode", choices=["star", "tracked"], default="star", help="synch2ts column layout")
    p.add_argument("--k", type=int, help="synch2ratfd growth factor")
    p.add_argument("--slope", type=int, default=2, help="squarets2graph height slope c")
    p.add_argument("--per-letter", action="store_true",
                   help="check-globdet: bound intermediate letters per input letter only")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PreconditionError, ClassError, FreshSymbolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (RatGraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
