import json

import pytest

from ratgraph import CellularAutomaton, InfiniteAutomaton, Nfa, RationalGraph, TilingSystem, Transducer
from ratgraph.conversions import synch2ts, ts2seq
from ratgraph.errors import FormatError
from ratgraph.fixtures import NAMES, anbn_columns, anbn_tiling, fixture, fixture_path
from ratgraph.harness import equiv
from ratgraph.io import dumps, from_obj, load, save, to_obj
from ratgraph.transducers import t_pairs


@pytest.mark.parametrize("name", sorted(NAMES))
def test_fixtures_round_trip(name, tmp_path):
    obj = fixture(name)
    path = tmp_path / "copy.json"
    save(obj, path)
    again = load(path)
    assert type(again) is type(obj)
    assert to_obj(again) == to_obj(obj)


def test_fixture_kinds():
    assert isinstance(fixture("grid"), InfiniteAutomaton)
    assert isinstance(fixture("g0"), RationalGraph)
    assert isinstance(fixture("anbn_tiling"), TilingSystem)
    assert isinstance(fixture("anbn_ca"), CellularAutomaton)
    assert fixture_path("grid").exists()
    with pytest.raises(KeyError):
        fixture_path("nope")


def test_tiling_fixture_has_twenty_tiles():
    S = anbn_tiling()
    assert len(S.tiles) == 20
    assert S.frame == "#" and S.sigma == {"a", "b"} and S.gamma == {"a", "b", "⊥"}


def test_conversion_outputs_survive_serialization(tmp_path):
    for result in (ts2seq(anbn_tiling())[0], synch2ts(anbn_columns())[0]):
        path = tmp_path / "out.json"
        save(result, path)
        assert equiv(result, load(path), 6).equal


def test_transducer_and_nfa_objects():
    T = Transducer.build({"a"}, {(0, "a", "", 1)}, 0, {1})
    assert t_pairs(from_obj(to_obj(T)), 2) == t_pairs(T, 2)
    A = Nfa.build({"a"}, {(0, "a", 0)}, 0, {0})
    assert from_obj(json.loads(dumps(A))).accepts("aaa")


def test_regex_vertex_sets_and_sibling_files(tmp_path):
    rel = {"kind": "transducer", "alphabet": ["x"], "initial": 0, "finals": [0], "transitions": [[0, "x", "x", 0]]}
    (tmp_path / "id.json").write_text(json.dumps(rel), encoding="utf-8")
    graph = {
        "kind": "graph",
        "vertex_alphabet": ["x"],
        "relations": {"a": "id.json"},
        "initial": {"regex": "xx"},
        "final": {"regex": "x*"},
    }
    (tmp_path / "g.json").write_text(json.dumps(graph), encoding="utf-8")
    M = load(tmp_path / "g.json")
    assert isinstance(M, InfiniteAutomaton)
    assert M.initial.accepts("xx") and not M.initial.accepts("x")


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"kind": "spaceship"},
        {"kind": "nfa", "alphabet": ["a"]},
        {"kind": "tiling", "gamma": ["a"], "sigma": ["a"], "frame": "#", "tiles": [["a"]]},
        {"kind": "graph", "vertex_alphabet": ["x"], "relations": {"a": "missing.json"}},
    ],
)
def test_malformed_objects(obj, tmp_path):
    with pytest.raises(FormatError):
        from_obj(obj, tmp_path)


def test_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(FormatError):
        load(path)
