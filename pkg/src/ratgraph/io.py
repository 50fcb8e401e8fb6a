"""JSON file formats; every object carries a ``kind`` tag.

Relations and vertex sets inside a graph file may be given inline, as a
path to a sibling file, or (for vertex sets) as ``{"regex": "..."}``.
"""
from __future__ import annotations

import json
from pathlib import Path

from .automata import Nfa, nfa_from_regex
from .cellular import CellularAutomaton
from .errors import FormatError
from .graphs import InfiniteAutomaton, RationalGraph
from .tiling import TilingSystem
from .transducers import Transducer

KINDS = ("nfa", "transducer", "graph", "tiling", "ca")


def _state_name(q) -> str:
    return q if isinstance(q, str) else str(q)


def _require(obj: dict, *keys):
    missing = [k for k in keys if k not in obj]
    if missing:
        raise FormatError(f"{obj.get('kind', 'object')} is missing fields {missing}")


# -- to plain objects -------------------------------------------------------


def nfa_to_obj(A: Nfa) -> dict:
    n = _state_name
    return {
        "kind": "nfa",
        "alphabet": sorted(A.alphabet),
        "states": sorted(n(q) for q in A.states),
        "initial": n(A.initial),
        "finals": sorted(n(q) for q in A.finals),
        "transitions": sorted([n(p), a, n(q)] for p, a, q in A.transitions),
    }


def transducer_to_obj(T: Transducer) -> dict:
    n = _state_name
    return {
        "kind": "transducer",
        "alphabet": sorted(T.alphabet),
        "states": sorted(n(q) for q in T.states),
        "initial": n(T.initial),
        "finals": sorted(n(q) for q in T.finals),
        "transitions": sorted([n(p), x, y, n(q)] for p, x, y, q in T.transitions),
    }


def graph_to_obj(M: InfiniteAutomaton | RationalGraph) -> dict:
    G = M.graph if isinstance(M, InfiniteAutomaton) else M
    obj = {
        "kind": "graph",
        "vertex_alphabet": sorted(G.vertex_alphabet),
        "edge_labels": G.edge_labels,
        "relations": {a: transducer_to_obj(T) for a, T in G.relations.items()},
    }
    if isinstance(M, InfiniteAutomaton):
        obj["initial"] = nfa_to_obj(M.initial)
        obj["final"] = nfa_to_obj(M.final)
    return obj


def tiling_to_obj(S: TilingSystem) -> dict:
    return {
        "kind": "tiling",
        "gamma": sorted(S.gamma),
        "sigma": sorted(S.sigma),
        "frame": S.frame,
        "tiles": sorted([list(top), list(bottom)] for top, bottom in S.tiles),
    }


def ca_to_obj(C: CellularAutomaton) -> dict:
    return {
        "kind": "ca",
        "gamma": sorted(C.gamma),
        "sigma": sorted(C.sigma),
        "finals": sorted(C.finals),
        "left": C.left,
        "right": C.right,
        "rules": sorted(list(r) for r in C.rules),
    }


def to_obj(x) -> dict:
    if isinstance(x, Nfa):
        return nfa_to_obj(x)
    if isinstance(x, Transducer):
        return transducer_to_obj(x)
    if isinstance(x, (InfiniteAutomaton, RationalGraph)):
        return graph_to_obj(x)
    if isinstance(x, TilingSystem):
        return tiling_to_obj(x)
    if isinstance(x, CellularAutomaton):
        return ca_to_obj(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


# -- from plain objects -----------------------------------------------------


def _resolve(value, base: Path | None):
    if isinstance(value, str):
        path = Path(value)
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            return json.loads(path.read_text(encoding="utf-8")), path.parent
        except FileNotFoundError as exc:
            raise FormatError(f"referenced file {value!r} not found") from exc
    return value, base


def nfa_from_obj(obj: dict, alphabet=None) -> Nfa:
    if "regex" in obj:
        alphabet = obj.get("alphabet", alphabet)
        if alphabet is None:
            raise FormatError("a regex vertex set needs an alphabet")
        return nfa_from_regex(obj["regex"], frozenset(alphabet))
    _require(obj, "alphabet", "initial", "finals", "transitions")
    try:
        trans = [(p, a, q) for p, a, q in obj["transitions"]]
    except ValueError as exc:
        raise FormatError("automaton transitions are [src, letter, dst]") from exc
    states = obj.get("states")
    return Nfa.build(obj["alphabet"], trans, obj["initial"], obj["finals"], states)


def transducer_from_obj(obj: dict) -> Transducer:
    _require(obj, "alphabet", "initial", "finals", "transitions")
    try:
        trans = [(p, x, y, q) for p, x, y, q in obj["transitions"]]
    except ValueError as exc:
        raise FormatError("transducer transitions are [src, in, out, dst]") from exc
    return Transducer.build(obj["alphabet"], trans, obj["initial"], obj["finals"], obj.get("states"))


def graph_from_obj(obj: dict, base: Path | None = None) -> InfiniteAutomaton | RationalGraph:
    _require(obj, "vertex_alphabet", "relations")
    gamma = frozenset(obj["vertex_alphabet"])
    relations = {}
    for label, value in obj["relations"].items():
        data, _ = _resolve(value, base)
        relations[label] = transducer_from_obj(data)
    if "edge_labels" in obj and set(obj["edge_labels"]) != set(relations):
        raise FormatError("edge_labels and relations disagree")
    G = RationalGraph(gamma, relations)
    if "initial" not in obj and "final" not in obj:
        return G
    _require(obj, "initial", "final")
    sets = []
    for key in ("initial", "final"):
        data, _ = _resolve(obj[key], base)
        sets.append(nfa_from_obj(data, gamma))
    return InfiniteAutomaton(G, *sets)


def tiling_from_obj(obj: dict) -> TilingSystem:
    _require(obj, "gamma", "sigma", "frame", "tiles")
    try:
        tiles = {((tl, tr), (bl, br)) for (tl, tr), (bl, br) in obj["tiles"]}
    except ValueError as exc:
        raise FormatError("tiles are [[top_left, top_right], [bottom_left, bottom_right]]") from exc
    return TilingSystem(frozenset(obj["gamma"]), frozenset(obj["sigma"]), obj["frame"], frozenset(tiles))


def ca_from_obj(obj: dict) -> CellularAutomaton:
    _require(obj, "gamma", "sigma", "finals", "rules")
    rules = frozenset(tuple(r) for r in obj["rules"])
    return CellularAutomaton(
        frozenset(obj["gamma"]),
        frozenset(obj["sigma"]),
        frozenset(obj["finals"]),
        rules,
        obj.get("left", "["),
        obj.get("right", "]"),
    )


def from_obj(obj: dict, base: Path | None = None):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise FormatError("expected an object with a 'kind' field")
    kind = obj["kind"]
    try:
        if kind == "nfa":
            return nfa_from_obj(obj)
        if kind == "transducer":
            return transducer_from_obj(obj)
        if kind == "graph":
            return graph_from_obj(obj, base)
        if kind == "tiling":
            return tiling_from_obj(obj)
        if kind == "ca":
            return ca_from_obj(obj)
    except (TypeError, KeyError) as exc:
        raise FormatError(f"malformed {kind} object: {exc}") from exc
    raise FormatError(f"unknown kind {kind!r}")


def load(path) -> object:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc
    return from_obj(obj, path.parent)


def dumps(x) -> str:
    return json.dumps(to_obj(x), indent=1, ensure_ascii=False)


def save(x, path) -> None:
    Path(path).write_text(dumps(x) + "\n", encoding="utf-8")
