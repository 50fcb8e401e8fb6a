"""Constructions between rational graphs, tiling systems and cellular automata.

Every conversion returns ``(result, ConversionReport)``.  The report names the
fresh letters that were introduced and the transducer classes the result is
expected to have, so that a test can re-check them independently.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .automata import (
    EPS,
    Nfa,
    nfa_cardinality,
    nfa_concat,
    nfa_epsilon,
    nfa_intersect,
    nfa_is_empty,
    nfa_letters,
    nfa_minimize,
    nfa_star,
    nfa_universal,
    nfa_union,
    nfa_with_alphabet,
    nfa_word,
    iter_words,
)
from .cellular import CellularAutomaton, ca_is_deterministic
from .errors import ClassError, FreshSymbolError, PreconditionError
from .graphs import InfiniteAutomaton, RationalGraph
from .tiling import TilingSystem, ts_det_probe
from .transducers import (
    Transducer,
    is_left_synchronized,
    is_sequential,
    is_synchronous,
    t_apply_lang,
    t_classify,
    t_compose,
    t_compose_all,
    t_concat,
    t_cross,
    t_from_nfa_input,
    t_identity,
    t_identity_on,
    t_imbalance_bound,
    t_is_label_deterministic,
    t_normalize,
    t_pair,
    t_renumber,
    t_restrict_domain,
    t_run_count,
    t_star,
    t_synchronize,
    t_trim,
    t_unambiguize_synchronized,
    t_union,
    t_with_alphabet,
)

SYNCHRONOUS = {"synchronous": True}
LEFT_SYNCHRONIZED = {"left_synchronized": True}
SEQUENTIAL_SYNCHRONOUS = {"synchronous": True, "sequential": True}


@dataclass
class ConversionReport:
    output: object
    kind: str
    fresh_symbols: dict = field(default_factory=dict)
    source_letters: frozenset = frozenset()
    class_claims: dict = field(default_factory=dict)
    oracle_bound: int = 6
    extras: dict = field(default_factory=dict)

    def check(self) -> list[str]:
        """Re-verify the claims; returns a list of failures (empty when all hold)."""
        problems = []
        clash = set(self.fresh_symbols.values()) & set(self.source_letters)
        if clash:
            problems.append(f"fresh symbols {sorted(clash)} occur in the source")
        if len(set(self.fresh_symbols.values())) != len(self.fresh_symbols):
            problems.append("two fresh symbols coincide")
        graph = self.output.graph if isinstance(self.output, InfiniteAutomaton) else self.output
        if isinstance(graph, RationalGraph):
            for label, claims in self.class_claims.items():
                flags = t_classify(graph[label]).as_dict()
                for name, expected in claims.items():
                    if flags[name] != expected:
                        problems.append(f"{label}: {name} is {flags[name]}, expected {expected}")
        return problems


# -- helpers ----------------------------------------------------------------


def fresh_symbol(preferred: str, used, given: str | None = None) -> str:
    """``given`` if supplied (it must be unused), else ``preferred`` or a primed variant of it."""
    used = set(used)
    if given is not None:
        if given in used:
            raise FreshSymbolError(f"symbol {given!r} is already in use")
        return given
    candidate = preferred
    n = 0
    while candidate in used:
        n += 1
        candidate = preferred + "'" * n
    return candidate


def _source_letters(M: InfiniteAutomaton) -> set:
    return set(M.graph.vertex_alphabet) | set(M.edge_labels)


def _require_synchronous(M: InfiniteAutomaton, what: str) -> None:
    bad = [a for a, T in M.graph.relations.items() if not is_synchronous(T)]
    if bad:
        raise ClassError(f"{what} needs a synchronous graph; labels {bad} are not")


def _seq(alphabet, *parts) -> Nfa:
    result = nfa_epsilon(alphabet)
    for part in parts:
        result = nfa_concat(result, part)
    return result


def _length_transducer(A: Nfa, letter: str, alphabet, side: int) -> Transducer:
    """``{(letter^n, u)}`` (side 0) or ``{(u, letter^n)}`` (side 1) for ``u`` in ``L(A)``, ``n = |u|``."""
    D = nfa_minimize(A)
    if side == 0:
        trans = [(p, letter, a, q) for p, a, q in D.transitions]
    else:
        trans = [(p, a, letter, q) for p, a, q in D.transitions]
    return Transducer.build(alphabet, trans, D.initial, D.finals, D.states)


def _nonempty(alphabet) -> Nfa:
    return nfa_minimize(nfa_concat(nfa_letters(alphabet, alphabet), nfa_universal(alphabet)))


# -- rational graphs to synchronous graphs ----------------------------------


def rat2synch(M: InfiniteAutomaton, pad: str | None = None):
    """Synchronous graph with the same language: ``ε`` becomes a padding letter."""
    pad = fresh_symbol("#", _source_letters(M), pad)
    gamma = M.graph.vertex_alphabet | {pad}

    def p(x):
        return pad if x == EPS else x

    relations = {}
    for a, T in M.graph.relations.items():
        trans = {(q, p(x), p(y), r) for q, x, y, r in T.transitions}
        trans |= {(q, pad, pad, q) for q in T.states}
        relations[a] = t_renumber(Transducer.build(gamma, trans, T.initial, T.finals, T.states))

    def padded(A: Nfa) -> Nfa:
        trans = set(A.transitions) | {(q, pad, q) for q in A.states}
        return Nfa.build(gamma, trans, A.initial, A.finals, A.states)

    result = InfiniteAutomaton(RationalGraph(gamma, relations), padded(M.initial), padded(M.final))
    report = ConversionReport(
        result,
        "graph",
        {"pad": pad},
        frozenset(_source_letters(M)),
        {a: SYNCHRONOUS for a in relations},
    )
    return result, report


# -- tiling systems to synchronous graphs -----------------------------------


def last_column_automaton(S: TilingSystem) -> Nfa:
    """Automaton of the words that can be read top-down in the last column of a picture."""
    f = S.frame
    trans = set()
    finals = set()
    for (tl, tr), (bl, br) in S.tiles:
        if tr != f or br != f:
            continue
        if tl == f and bl != f:
            trans.add((f, bl, bl))
        elif tl != f and bl != f:
            trans.add((tl, bl, bl))
        elif tl != f and bl == f:
            finals.add(tl)
    states = set(S.gamma) | {f}
    return nfa_minimize(Nfa.build(S.gamma | {f}, trans, f, finals, states))


def ts2synch(S: TilingSystem):
    """Synchronous graph whose vertices are picture columns; ``L(G, #*, M) = L(S)``."""
    f = S.frame
    gamma = S.gamma | {f}
    column_pairs = [tile for tile in S.tiles if tile[0][1] != f and tile[1][1] != f]
    relations = {}
    for e in sorted(S.sigma):
        trans = set()
        for (tl, tr), (bl, br) in S.tiles:
            if (tl, tr) == (f, f) and br == e:
                trans.add(((f, f), bl, br, (bl, br)))
        for (tl, tr), (bl, br) in column_pairs:
            trans.add(((tl, tr), bl, br, (bl, br)))
        finals = {(tl, tr) for (tl, tr), (bl, br) in S.tiles if (bl, br) == (f, f) and tr != f}
        states = {(f, f)} | {t[0] for t in trans} | {t[3] for t in trans} | finals
        T = Transducer.build(gamma, trans, (f, f), finals & states, states)
        relations[e] = t_renumber(t_trim(T))
    initial = nfa_universal(gamma, [f])
    final = nfa_with_alphabet(last_column_automaton(S), gamma)
    result = InfiniteAutomaton(RationalGraph(gamma, relations), initial, final)
    report = ConversionReport(
        result,
        "graph",
        {},
        frozenset(S.gamma),
        {a: SYNCHRONOUS for a in relations},
        oracle_bound=8,
        extras={"frame": f},
    )
    return result, report


# -- star sets of initial and final vertices --------------------------------


def startostar(M: InfiniteAutomaton, i: str | None = None, f: str | None = None):
    """Equivalent synchronous graph between ``i*`` and ``f*``.

    The result also accepts the empty word, whatever the source does.
    """
    _require_synchronous(M, "startostar")
    used = _source_letters(M)
    i = fresh_symbol("i", used, i)
    f = fresh_symbol("f", used | {i}, f)
    gamma = M.graph.vertex_alphabet
    V = gamma | {i, f}
    T_I = _length_transducer(M.initial, i, V, 0)
    T_F = _length_transducer(M.final, f, V, 1)
    keep_empty = not nfa_is_empty(nfa_intersect(M.initial, M.final))
    relations = {}
    for a, T in M.graph.relations.items():
        K = t_with_alphabet(T, V)
        # the last part handles paths made of a single edge
        U = t_union(t_compose(T_I, K), K, t_compose(K, T_F), t_compose_all(T_I, K, T_F))
        if not keep_empty:
            U = t_restrict_domain(U, _nonempty(V))
        relations[a] = U
    result = InfiniteAutomaton(
        RationalGraph(V, relations), nfa_universal(V, [i]), nfa_universal(V, [f])
    )
    report = ConversionReport(
        result,
        "graph",
        {"initial": i, "final": f},
        frozenset(used),
        {a: SYNCHRONOUS for a in relations},
        extras={"adds_empty_word": not keep_empty},
    )
    return result, report


# -- synchronous graphs to tiling systems ------------------------------------


@dataclass(frozen=True)
class _Column:
    """One transducer whose runs fill a picture column; ``roles`` says where the column may stand."""

    label: str
    role: str
    T: Transducer
    roles: frozenset


def _column_tiles(sigma, columns, frame, first_input, right_output, empty_labels, allow_empty):
    """Tiles of the column encoding of accepting paths."""
    names = {}

    def name(x, col, q):
        key = (x, col.label, col.role, q)
        if key not in names:
            names[key] = f"{x}.{col.label}{col.role}.{q}"
        return names[key]

    valid = {}
    for col in columns:
        pairs = {}
        for _, _, y, q in col.T.transitions:
            pairs.setdefault(q, set()).add(y)
        valid[col] = pairs

    def cells(col, final=False):
        for q, ys in valid[col].items():
            if final and q not in col.T.finals:
                continue
            for y in ys:
                yield y, q

    tiles = set()
    F_ = frame
    for a in sigma:
        tiles.add(((F_, F_), (F_, a)))
        tiles.add(((F_, F_), (a, F_)))
        for b in sigma:
            tiles.add(((F_, F_), (a, b)))

    def out_ok(z):
        return right_output is None or z == right_output

    for col in columns:
        T, a = col.T, col.label
        if col.roles & {"first", "only"}:
            for x, y, p in T.out(T.initial):
                if x == first_input:
                    tiles.add(((F_, a), (F_, name(y, col, p))))
            for p, x, y2, p2 in T.transitions:
                if x != first_input:
                    continue
                for y in valid[col].get(p, ()):
                    tiles.add(((F_, name(y, col, p)), (F_, name(y2, col, p2))))
            for y, p in cells(col, final=True):
                tiles.add(((F_, name(y, col, p)), (F_, F_)))
        if col.roles & {"last", "only"}:
            for x, z, s in T.out(T.initial):
                if out_ok(z):
                    tiles.add(((a, F_), (name(z, col, s), F_)))
            for s, x, z2, s2 in T.transitions:
                if not out_ok(z2):
                    continue
                for z in valid[col].get(s, ()):
                    if out_ok(z):
                        tiles.add(((name(z, col, s), F_), (name(z2, col, s2), F_)))
            for z, s in cells(col, final=True):
                if out_ok(z):
                    tiles.add(((name(z, col, s), F_), (F_, F_)))

    lefts = [c for c in columns if c.roles & {"first", "mid"}]
    rights = [c for c in columns if c.roles & {"mid", "last"}]
    for cb in lefts:
        Tb = cb.T
        for cc in rights:
            Tc = cc.T
            by_input = {}
            for r, y, z, r2 in Tc.transitions:
                by_input.setdefault((r, y), []).append((z, r2))
            start_moves = {}
            for y, z, r in Tc.out(Tc.initial):
                start_moves.setdefault(y, []).append((z, r))
            for _, y, q in Tb.out(Tb.initial):
                for z, r in start_moves.get(y, ()):
                    tiles.add(((cb.label, cc.label), (name(y, cb, q), name(z, cc, r))))
            inputs_at = {}
            for (r, y), moves in by_input.items():
                inputs_at.setdefault(y, []).append((r, moves))
            for q, _, y2, q2 in Tb.transitions:
                ys = valid[cb].get(q)
                if not ys:
                    continue
                for r, moves in inputs_at.get(y2, ()):
                    zs = valid[cc].get(r)
                    if not zs:
                        continue
                    for z2, r2 in moves:
                        lower = (name(y2, cb, q2), name(z2, cc, r2))
                        for y in ys:
                            for z in zs:
                                tiles.add(((name(y, cb, q), name(z, cc, r)), lower))
            for y, q in cells(cb, final=True):
                for z, r in cells(cc, final=True):
                    tiles.add(((name(y, cb, q), name(z, cc, r)), (F_, F_)))

    if allow_empty:
        for a in empty_labels:
            tiles.add(((F_, a), (F_, F_)))
            tiles.add(((a, F_), (F_, F_)))
            for b in empty_labels:
                tiles.add(((a, b), (F_, F_)))
    return tiles, set(names.values())


def synch2ts(M: InfiniteAutomaton, mode: str = "star"):
    """Tiling system whose pictures are accepting paths written column by column.

    ``mode="star"`` first moves to star-shaped initial and final sets (one
    unambiguous transducer per label).  ``mode="tracked"`` keeps ``I`` and ``F``
    and gives each label separate first, middle and last column transducers;
    it preserves determinism of the rows.  A picture is one row taller than
    the vertices of the corresponding path.
    """
    _require_synchronous(M, "synch2ts")
    sigma = sorted(M.edge_labels)
    fresh = {}
    if mode == "star":
        H, rep = startostar(M)
        fresh.update(rep.fresh_symbols)
        first_input, right_output = rep.fresh_symbols["initial"], rep.fresh_symbols["final"]
        every = frozenset({"first", "mid", "last", "only"})
        columns = [_Column(a, "", t_unambiguize_synchronized(T), every) for a, T in H.graph.relations.items()]
        empty_labels = {c.label for c in columns if c.T.initial in c.T.finals}
        allow_empty = True
    elif mode == "tracked":
        gamma = M.graph.vertex_alphabet
        first_input = fresh_symbol("i", _source_letters(M))
        fresh["initial"] = first_input
        right_output = None
        V = gamma | {first_input}
        T_I = _length_transducer(M.initial, first_input, V, 0)
        Id_F = t_identity_on(M.final, V)
        columns = []
        empty_labels = set()
        for a, T in M.graph.relations.items():
            K = t_with_alphabet(T, V)
            parts = {
                "f": (t_compose(T_I, K), {"first"}),
                "m": (K, {"mid"}),
                "l": (t_compose(K, Id_F), {"last"}),
                "o": (t_compose_all(T_I, K, Id_F), {"only"}),
            }
            for role, (U, roles) in parts.items():
                U = t_unambiguize_synchronized(U)
                if U.transitions or U.initial in U.finals:
                    columns.append(_Column(a, role, U, frozenset(roles)))
            if t_run_count(K, (), ()) > 0:
                empty_labels.add(a)
        allow_empty = not nfa_is_empty(nfa_intersect(nfa_intersect(M.initial, M.final), nfa_epsilon(gamma)))
    else:
        raise ValueError(f"unknown mode {mode!r}")

    frame = fresh_symbol("#", set(sigma))
    tiles, letters = _column_tiles(sigma, columns, frame, first_input, right_output, empty_labels, allow_empty)
    if letters & set(sigma) or frame in letters:
        raise FreshSymbolError("composite cell letters collide with edge labels")
    fresh["frame"] = frame
    S = TilingSystem(frozenset(sigma) | letters, frozenset(sigma), frame, frozenset(tiles))
    report = ConversionReport(
        S,
        "tiling",
        fresh,
        frozenset(sigma),
        oracle_bound=6,
        extras={"height_offset": 1, "mode": mode, "columns": len(columns)},
    )
    return S, report


# -- tiling systems to sequential synchronous graphs ---------------------------


def _tile_check_automaton(S: TilingSystem, V, mark, lb, rb, Lam) -> Nfa:
    """Rows ``[w x ~y w']`` (at least two) whose consecutive ``(x, y)`` pairs form tiles."""
    unmark = {mark[x]: x for x in Lam}
    start = ("start",)
    trans = set()
    seen = {start}
    stack = [start]
    finals = set()
    while stack:
        state = stack.pop()
        moves = []
        kind = state[0]
        if kind == "start":
            moves.append((lb, ("pre", None, None, 0)))
        elif kind == "pre":
            _, prev, last, n = state
            for x in Lam:
                moves.append((x, ("pre", prev, x, n)))
            if last is not None:
                for m, y in unmark.items():
                    if prev is None or (prev, (last, y)) in S.tiles:
                        moves.append((m, ("post", (last, y), n)))
        elif kind == "post":
            _, pair, n = state
            for x in Lam:
                moves.append((x, state))
            moves.append((rb, ("between", pair, min(n + 1, 2))))
        else:
            _, pair, n = state
            if n >= 2:
                finals.add(state)
            moves.append((lb, ("pre", pair, None, n)))
        for letter, nxt in moves:
            trans.add((state, letter, nxt))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return nfa_minimize(Nfa.build(V, trans, start, finals, seen))


def ts2seq(S: TilingSystem, lb: str | None = None, rb: str | None = None):
    """Sequential synchronous graph: a vertex lists the rows of a framed picture and
    marks one column; each edge checks the tiles left of the marks and shifts them."""
    f = S.frame
    Lam = sorted(S.gamma | {f})
    used = set(Lam)
    lb = fresh_symbol("[", used, lb)
    rb = fresh_symbol("]", used | {lb}, rb)
    mark = {}
    for x in Lam:
        mark[x] = fresh_symbol("~" + x, used | {lb, rb} | set(mark.values()))
    marked = [mark[x] for x in Lam]
    V = set(Lam) | set(marked) | {lb, rb}

    trans = {("out", lb, lb, "in"), ("after", rb, rb, "out")}
    for x in Lam:
        trans |= {("in", x, x, "in"), ("in", mark[x], x, "carry"), ("carry", x, mark[x], "after"),
                  ("after", x, x, "after")}
    shift = Transducer.build(V, trans, "out", {"out"})

    R = _tile_check_automaton(S, V, mark, lb, rb, Lam)
    L = lambda letters: nfa_letters(V, letters)  # noqa: E731
    star = lambda letters: nfa_universal(V, letters)  # noqa: E731
    any_row = _seq(V, L([lb]), star(Lam + marked), L([rb]))
    relations = {}
    for a in sorted(S.sigma):
        second = _seq(V, L([lb]), star(Lam), L([mark[a]]), star(Lam), L([rb]))
        D_a = _seq(V, any_row, second, nfa_star(any_row))
        relations[a] = t_restrict_domain(shift, nfa_minimize(nfa_intersect(R, D_a)))

    g = sorted(S.gamma)
    frame_row = _seq(V, L([lb]), L([f]), L([mark[f]]), star([f]), L([rb]))
    body_row = _seq(V, L([lb]), L([f]), L([mark[x] for x in g]), star(g), L([f]), L([rb]))
    initial = nfa_minimize(_seq(V, frame_row, nfa_star(body_row), frame_row))
    end_row = _seq(V, L([lb]), star([f]), L([mark[f]]), L([rb]))
    end_body = _seq(V, L([lb]), L([f]), star(g), L([mark[f]]), L([rb]))
    # the last column is checked here, since no later edge reads it
    final = nfa_minimize(nfa_intersect(_seq(V, end_row, nfa_star(end_body), end_row), R))

    result = InfiniteAutomaton(RationalGraph(V, relations), initial, final)
    fresh = {"left": lb, "right": rb}
    fresh.update({f"mark {x}": m for x, m in mark.items()})
    report = ConversionReport(
        result,
        "graph",
        fresh,
        frozenset(S.gamma | {f}),
        {a: SEQUENTIAL_SYNCHRONOUS for a in relations},
        oracle_bound=8,
    )
    return result, report


# -- a single initial vertex -------------------------------------------------


def onepoint(M: InfiniteAutomaton, i: str | None = None):
    """Equivalent graph whose initial set is the single vertex ``i``."""
    used = _source_letters(M)
    i = fresh_symbol("i", used, i)
    V = M.graph.vertex_alphabet | {i}
    I = nfa_with_alphabet(M.initial, V)
    relations = {}
    for a, T in M.graph.relations.items():
        K = t_with_alphabet(T, V)
        image = nfa_minimize(t_apply_lang(K, I))
        relations[a] = t_union(K, t_cross(V, (i,), image))
    start = nfa_word(V, (i,))
    final = nfa_with_alphabet(M.final, V)
    if not nfa_is_empty(nfa_intersect(M.initial, M.final)):
        final = nfa_union(final, start)
    result = InfiniteAutomaton(RationalGraph(V, relations), start, final)
    left_sync = all(is_left_synchronized(T) for T in M.graph.relations.values())
    claims = {a: LEFT_SYNCHRONIZED for a in relations} if left_sync else {}
    report = ConversionReport(result, "graph", {"initial": i}, frozenset(used), claims, oracle_bound=8)
    return result, report


# -- finite out-degree from a single vertex -----------------------------------


def _stretch(V, pad, k) -> Transducer:
    """``{(pad^n, pad^(k n))}``."""
    return t_normalize(t_star(t_pair(V, (pad,), (pad,) * k)))


def _shift_by(V, pad, c) -> Transducer:
    """``{(pad^n, pad^(n+c))}``."""
    return t_concat(t_identity(V, [pad]), t_pair(V, (), (pad,) * c))


def _shrink(V, pad) -> Transducer:
    """``{(pad^n, pad^m) : 1 <= m <= n}``."""
    return t_concat(t_pair(V, (pad,), (pad,)), t_identity(V, [pad]), t_from_nfa_input(nfa_universal(V, [pad])))


def _finite_degree_graph(labels, gamma, R, final, pad, sep, grow, synchronize):
    """Graph over vertices ``u sep x`` that buffers up to two labels before applying them."""
    V = set(labels) | {sep} | set(gamma) | {pad}
    R = {a: t_with_alphabet(T, V) for a, T in R.items()}
    copy_u = t_identity(V, labels)
    copy_sep = t_pair(V, (sep,), (sep,))
    drop_sep = t_pair(V, (sep,), ())
    pads = nfa_universal(V, [pad])
    work = nfa_universal(V, [x for x in gamma if x != pad])
    one_pad = nfa_word(V, (pad,))
    shrink = _shrink(V, pad)
    grow2 = t_compose(grow, grow)

    def ins(a):
        return t_pair(V, (), (a,))

    def drop(b):
        return t_pair(V, (b,), ())

    relations = {}
    for a in labels:
        parts = [("1", t_concat(copy_u, ins(a), copy_sep, grow2))]
        parts.append(("6", t_concat(drop_sep, t_restrict_domain(t_compose_all(grow, shrink, R[a]), one_pad))))
        for b in labels:
            parts.append(("2", t_concat(drop(b), copy_u, ins(a), copy_sep, t_compose_all(grow, shrink, R[b]))))
            parts.append(("5", t_concat(drop(b), drop_sep, t_restrict_domain(t_compose(R[b], R[a]), work))))
            parts.append(("7", t_concat(drop(b), drop_sep,
                                        t_restrict_domain(t_compose_all(shrink, R[b], R[a]), pads))))
            for c in labels:
                parts.append(("3", t_concat(drop(b), drop(c), copy_u, ins(a), copy_sep,
                                            t_compose_all(shrink, R[b], R[c]))))
                parts.append(("4", t_concat(drop(b), drop(c), copy_u, ins(a), copy_sep,
                                            t_restrict_domain(t_compose(R[b], R[c]), work))))
        pieces = [T for _, T in parts if T.transitions]
        if synchronize:
            pieces = [t_synchronize(T, 2) for T in pieces]
        relations[a] = t_union(*pieces)
    start = nfa_word(V, (sep, pad))
    return InfiniteAutomaton(RationalGraph(V, relations), start, nfa_with_alphabet(final, V))


def synch2ratfd(M: InfiniteAutomaton, k: int | None = None, pad: str | None = None, sep: str | None = None):
    """Graph of finite out-degree accepting ``L(M)`` from the single vertex ``sep pad``."""
    if not all(is_synchronous(T) for T in M.graph.relations.values()):
        raise PreconditionError("synch2ratfd needs a synchronous graph")
    if not nfa_is_empty(nfa_intersect(M.initial, M.final)):
        raise PreconditionError("synch2ratfd needs disjoint initial and final sets")
    labels = sorted(M.edge_labels)
    used = _source_letters(M)
    pad = fresh_symbol("#", used, pad)
    sep = fresh_symbol("|", used | {pad}, sep)
    if k is None:
        k = len(synch2ts(M)[0].gamma)
    if k < 1:
        raise ValueError("k must be positive")
    gamma = set(M.graph.vertex_alphabet)
    V = set(labels) | {sep} | gamma | {pad}
    T_I = _length_transducer(M.initial, pad, V, 0)
    R = {}
    for a, T in M.graph.relations.items():
        K = t_with_alphabet(T, V)
        R[a] = t_union(t_compose(T_I, K), K)
    result = _finite_degree_graph(labels, gamma, R, M.final, pad, sep, _stretch(V, pad, k), False)
    report = ConversionReport(
        result,
        "graph",
        {"pad": pad, "separator": sep},
        frozenset(used),
        oracle_bound=4,
        extras={"k": k, "initial_vertex": (sep, pad)},
    )
    return result, report


def squarets2synchgraph(S: TilingSystem, c: int):
    """Left-synchronized graph of finite out-degree for a tiling system whose
    words of length ``m`` have pictures of height at most ``c m``."""
    if c < 1:
        raise ValueError("c must be positive")
    M, _ = ts2synch(S)
    labels = sorted(M.edge_labels)
    pad = S.frame
    gamma = set(S.gamma)
    sep = fresh_symbol("|", gamma | set(labels) | {pad})
    V = set(labels) | {sep} | gamma | {pad}
    R = dict(M.graph.relations)
    result = _finite_degree_graph(labels, gamma, R, M.final, pad, sep, _shift_by(V, pad, c), True)
    report = ConversionReport(
        result,
        "graph",
        {"separator": sep},
        frozenset(S.gamma),
        {a: LEFT_SYNCHRONIZED for a in labels},
        oracle_bound=6,
        extras={"c": c, "initial_vertex": (sep, pad)},
    )
    return result, report


def synchfd2squarets(M: InfiniteAutomaton):
    """Tiling system for a left-synchronized graph of finite out-degree with one initial vertex.

    The report records ``k``; words ``w`` of the language have pictures of
    height at most ``k |w| + |i| + 1``.
    """
    for a, T in M.graph.relations.items():
        if not is_left_synchronized(T):
            raise PreconditionError(f"label {a!r}: transducer is not left-synchronized")
    bounds = {a: t_imbalance_bound(T, "output") for a, T in M.graph.relations.items()}
    if any(b == float("inf") for b in bounds.values()):
        raise PreconditionError("some vertex has infinite out-degree")
    if nfa_cardinality(M.initial) != 1:
        raise PreconditionError("the initial set must be a single vertex")
    (i,) = list(iter_words(M.initial))
    G, rep1 = rat2synch(M)
    S, rep2 = synch2ts(G)
    k = max(1, max(bounds.values(), default=1))
    fresh = dict(rep1.fresh_symbols)
    fresh.update({f"tiling {name}": x for name, x in rep2.fresh_symbols.items()})
    report = ConversionReport(
        S,
        "tiling",
        fresh,
        frozenset(_source_letters(M)),
        oracle_bound=6,
        extras={"k": k, "initial_length": len(i), "imbalance": bounds, "height_slack": 1},
    )
    return S, report


def square_height_bound(report: ConversionReport, w) -> int:
    return report.extras["k"] * len(w) + report.extras["initial_length"] + report.extras["height_slack"]


# -- global determinism and cellular automata ---------------------------------


def check_global_det(G: RationalGraph, I: Nfa, F: Nfa, per_letter: bool = False) -> bool:
    """At most one intermediate letter between any output of one transducer and any
    input of the next, over the graph's transducers and the identities on ``I`` and ``F``.

    By default the bound is over all transitions leaving a state; with ``per_letter``
    it only applies to the transitions reading one input letter.
    """
    for a, T in G.relations.items():
        if not is_synchronous(T):
            raise ClassError(f"label {a!r}: global determinism needs synchronous transducers")
    if not all(t_is_label_deterministic(T) for T in G.relations.values()):
        return False
    gamma = G.vertex_alphabet
    T_I = t_identity_on(nfa_with_alphabet(I, gamma), gamma)
    T_F = t_identity_on(nfa_with_alphabet(F, gamma), gamma)
    trimmed = [t_trim(T) for T in G.relations.values()]
    firsts = trimmed + [T_I]
    seconds = trimmed + [T_F]

    def outputs(T):
        table = {}
        for p, x, y, _ in T.transitions:
            table.setdefault((p, x) if per_letter else p, set()).add(y)
        return table

    def inputs(T):
        table = {}
        for p, x, _, _ in T.transitions:
            table.setdefault(p, set()).add(x)
        return table

    out_tables = [outputs(T) for T in firsts]
    in_tables = [inputs(T) for T in seconds]
    for outs in out_tables:
        for ins in in_tables:
            for ys in outs.values():
                for xs in ins.values():
                    if len(ys & xs) > 1:
                        return False
    return True


def rule_letter(rule) -> str:
    return "(" + ",".join(rule) + ")"


def ca2graph(C: CellularAutomaton):
    """Synchronous graph whose vertices are the columns of the space-time diagram."""
    if not ca_is_deterministic(C):
        raise PreconditionError("ca2graph needs a deterministic cellular automaton (at most one new letter per context)")
    lb, rb = C.left, C.right
    sigma = sorted(C.sigma)
    rules = sorted(C.rules)
    letter = {r: rule_letter(r) for r in rules}
    V = set(sigma) | {lb, rb} | set(letter.values())
    relations = {}
    for a in sigma:
        q0 = ("start",)
        trans = {(q0, lb, a, (lb, a))}
        trans |= {(q0, b, a, (b, a)) for b in sigma}
        for d1 in rules:
            A, B, Cc, B2 = d1
            if A == lb:
                # the own rule of the first cell, next to the bracket column
                trans.add(((lb, B), lb, letter[d1], (lb, B2)))
            for d2 in rules:
                # d1 is the left neighbour's rule, d2 the own rule
                if (d2[0], d2[1]) == (B, Cc):
                    trans.add(((B, Cc), letter[d1], letter[d2], (B2, d2[3])))
        finals = {(x, y) for x in list(C.finals) + [lb] for y in C.finals}
        states = {q0} | {t[0] for t in trans} | {t[3] for t in trans} | finals
        T = Transducer.build(V, trans, q0, finals, states)
        relations[a] = t_renumber(t_trim(T))
    last_rules = [letter[r] for r in rules if r[2] == rb]
    initial = nfa_universal(V, [lb])
    final = nfa_minimize(nfa_concat(nfa_letters(V, sigma), nfa_universal(V, last_rules)))
    result = InfiniteAutomaton(RationalGraph(V, relations), initial, final)
    report = ConversionReport(
        result,
        "graph",
        {},
        frozenset(C.gamma),
        {a: SYNCHRONOUS for a in relations},
        extras={"globally_deterministic": check_global_det(result.graph, initial, final)},
    )
    return result, report


def seq_from_astar_is_det(M: InfiniteAutomaton, width: int = 4):
    """Tiling system of a sequential synchronous graph from ``x*``, with a bounded determinism check."""
    for a, T in M.graph.relations.items():
        if not (is_synchronous(T) and is_sequential(T)):
            raise ClassError(f"label {a!r}: transducer must be sequential and synchronous")
    D = nfa_minimize(M.initial)
    letters = {x for _, x, _ in D.transitions}
    if not (len(D.states) == 1 and D.initial in D.finals and len(letters) == 1):
        raise PreconditionError("the initial set must be x* for a single letter x")
    S, report = synch2ts(M, mode="tracked")
    report.extras["deterministic_probe"] = ts_det_probe(S, width)
    report.extras["probe_width"] = width
    return S, report
