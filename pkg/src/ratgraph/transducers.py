"""Word transducers: finite automata labelled by pairs of optional letters."""
from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable

from .automata import (
    EPS,
    Nfa,
    Word,
    iter_words,
    nfa_determinize,
    nfa_minimize,
    nfa_remove_epsilon,
    nfa_trim,
)
from .errors import AlphabetError, ClassError

PAD = None  # padding symbol of the synchronous encoding


@dataclass(frozen=True)
class Transducer:
    """Finite transducer over ``alphabet`` with a single initial state."""

    alphabet: frozenset
    states: frozenset
    initial: Hashable
    finals: frozenset
    transitions: frozenset
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("alphabet", "states", "finals", "transitions"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))
        if EPS in self.alphabet:
            raise AlphabetError("the empty string cannot be a letter")
        if self.initial not in self.states:
            raise ValueError(f"initial state {self.initial!r} not in states")
        if not self.finals <= self.states:
            raise ValueError("final states must be states")
        out = defaultdict(list)
        for p, x, y, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise ValueError(f"transition {(p, x, y, q)!r} leaves the state set")
            for letter in (x, y):
                if letter != EPS and letter not in self.alphabet:
                    raise AlphabetError(f"letter {letter!r} not in alphabet")
            out[p].append((x, y, q))
        object.__setattr__(self, "_out", dict(out))

    @classmethod
    def build(cls, alphabet, transitions, initial, finals, states=None) -> "Transducer":
        transitions = frozenset(transitions)
        if states is None:
            states = {initial, *finals}
            for p, _, _, q in transitions:
                states.add(p)
                states.add(q)
        return cls(frozenset(alphabet), frozenset(states), initial, frozenset(finals), transitions)

    def out(self, state) -> list:
        return self._out.get(state, [])

    def __len__(self) -> int:
        return len(self.states)

    def __call__(self, word) -> Nfa:
        return t_apply_word(self, word)


@dataclass(frozen=True)
class TransducerClass:
    synchronous: bool
    left_synchronized: bool
    right_synchronized: bool
    sequential: bool

    def as_dict(self) -> dict:
        return {
            "synchronous": self.synchronous,
            "left_synchronized": self.left_synchronized,
            "right_synchronized": self.right_synchronized,
            "sequential": self.sequential,
        }


# -- structural helpers -----------------------------------------------------


def t_renumber(T: Transducer) -> Transducer:
    order = {T.initial: 0}
    queue = deque([T.initial])
    while queue:
        state = queue.popleft()
        for x, y, dst in sorted(T.out(state), key=lambda t: (t[0], t[1], repr(t[2]))):
            if dst not in order:
                order[dst] = len(order)
                queue.append(dst)
    for state in sorted(T.states - order.keys(), key=repr):
        order[state] = len(order)
    return Transducer(
        T.alphabet,
        frozenset(order.values()),
        0,
        frozenset(order[q] for q in T.finals),
        frozenset((order[p], x, y, order[q]) for p, x, y, q in T.transitions),
    )


def _skeleton(T: Transducer) -> Nfa:
    """The underlying automaton over composite labels ``x/y`` (a pair as one letter)."""
    labels = {(x, y) for _, x, y, _ in T.transitions}
    index = {label: f"{i}" for i, label in enumerate(sorted(labels))}
    trans = {(p, index[(x, y)], q) for p, x, y, q in T.transitions}
    return Nfa.build(set(index.values()), trans, T.initial, T.finals, T.states)


def t_trim(T: Transducer) -> Transducer:
    skel = _skeleton(T)
    trimmed = nfa_trim(skel)
    keep = trimmed.states
    return Transducer(
        T.alphabet,
        keep,
        T.initial,
        T.finals & keep,
        frozenset(t for t in T.transitions if t[0] in keep and t[3] in keep),
    )


def t_with_alphabet(T: Transducer, alphabet) -> Transducer:
    return Transducer(frozenset(alphabet), T.states, T.initial, T.finals, T.transitions)


def t_remove_epsilon(T: Transducer) -> Transducer:
    """Eliminate ``ε/ε`` transitions (they add runs but never pairs)."""
    if not any(x == EPS and y == EPS for _, x, y, _ in T.transitions):
        return T

    def closure(state):
        seen = {state}
        stack = [state]
        while stack:
            s = stack.pop()
            for x, y, dst in T.out(s):
                if x == EPS and y == EPS and dst not in seen:
                    seen.add(dst)
                    stack.append(dst)
        return seen

    trans = set()
    finals = set()
    for state in T.states:
        reach = closure(state)
        if reach & T.finals:
            finals.add(state)
        for mid in reach:
            for x, y, dst in T.out(mid):
                if x != EPS or y != EPS:
                    trans.add((state, x, y, dst))
    return t_renumber(t_trim(Transducer(T.alphabet, T.states, T.initial, frozenset(finals), frozenset(trans))))


def t_normalize(T: Transducer) -> Transducer:
    return t_renumber(t_trim(t_remove_epsilon(T)))


# -- constructors -----------------------------------------------------------


def t_empty(alphabet) -> Transducer:
    return Transducer.build(alphabet, (), 0, (), states={0})


def t_identity(alphabet, letters=None) -> Transducer:
    """Identity relation on ``letters*`` (``alphabet*`` by default)."""
    letters = alphabet if letters is None else letters
    return Transducer.build(alphabet, [(0, a, a, 0) for a in letters], 0, {0})


def t_identity_on(A: Nfa, alphabet=None) -> Transducer:
    """Identity on ``L(A)`` read off the minimal trim automaton of ``A``."""
    M = nfa_minimize(A)
    alphabet = M.alphabet if alphabet is None else alphabet
    return Transducer.build(
        alphabet, [(p, a, a, q) for p, a, q in M.transitions], M.initial, M.finals, M.states
    )


def t_pair(alphabet, u, v) -> Transducer:
    """The single pair ``(u, v)``, read letter against letter then one-sided."""
    u, v = tuple(u), tuple(v)
    n = max(len(u), len(v))
    trans = []
    for i in range(n):
        x = u[i] if i < len(u) else EPS
        y = v[i] if i < len(v) else EPS
        trans.append((i, x, y, i + 1))
    return Transducer.build(alphabet, trans, 0, {n}, states=range(n + 1))


def t_from_pairs(alphabet, pairs) -> Transducer:
    result = t_empty(alphabet)
    for u, v in pairs:
        result = t_union(result, t_pair(alphabet, u, v))
    return result


def t_cross(alphabet, u, A: Nfa) -> Transducer:
    """The relation ``{u} x L(A)``: read ``u`` while writing, then write the rest."""
    u = tuple(u)
    A = nfa_remove_epsilon(A)
    # state (k, s): k letters of u consumed, s the state of A
    trans = set()
    start = (0, A.initial)
    seen = {start}
    queue = deque([start])
    while queue:
        k, s = queue.popleft()
        moves = []
        if k < len(u):
            for a, s2 in A.out(s):
                moves.append((u[k], a, (k + 1, s2)))
            # u longer than the output word: finish reading u
            if s in A.finals:
                moves.append((u[k], EPS, (k + 1, ("end",))))
        else:
            for a, s2 in A.out(s):
                moves.append((EPS, a, (k, s2)))
        for x, y, nxt in moves:
            trans.add(((k, s), x, y, nxt))
            if nxt not in seen and nxt[1] != ("end",):
                seen.add(nxt)
                queue.append(nxt)
    for k in range(1, len(u)):
        trans.add(((k, ("end",)), u[k], EPS, (k + 1, ("end",))))
    finals = {(len(u), s) for s in A.finals} | {(len(u), ("end",))}
    states = {start} | {t[0] for t in trans} | {t[3] for t in trans} | finals
    return t_normalize(Transducer.build(alphabet, trans, start, finals, states))


def t_from_nfa_input(A: Nfa, alphabet=None) -> Transducer:
    """``{(u, ε) : u ∈ L(A)}``."""
    alphabet = A.alphabet if alphabet is None else alphabet
    return Transducer.build(alphabet, [(p, a, EPS, q) for p, a, q in A.transitions], A.initial, A.finals, A.states)


def t_from_nfa_output(A: Nfa, alphabet=None) -> Transducer:
    """``{(ε, v) : v ∈ L(A)}``."""
    alphabet = A.alphabet if alphabet is None else alphabet
    return Transducer.build(alphabet, [(p, EPS, a, q) for p, a, q in A.transitions], A.initial, A.finals, A.states)


def t_map_letters(T: Transducer, mapping, alphabet=None) -> Transducer:
    def m(letter):
        return letter if letter == EPS else mapping.get(letter, letter)

    trans = {(p, m(x), m(y), q) for p, x, y, q in T.transitions}
    if alphabet is None:
        alphabet = {mapping.get(a, a) for a in T.alphabet}
    return Transducer(frozenset(alphabet), T.states, T.initial, T.finals, frozenset(trans))


# -- relational algebra -----------------------------------------------------


def t_domain(T: Transducer) -> Nfa:
    trans = {(p, x, q) for p, x, _, q in T.transitions}
    return nfa_trim(Nfa(T.alphabet, T.states, T.initial, T.finals, frozenset(trans)))


def t_range(T: Transducer) -> Nfa:
    trans = {(p, y, q) for p, _, y, q in T.transitions}
    return nfa_trim(Nfa(T.alphabet, T.states, T.initial, T.finals, frozenset(trans)))


def t_inverse(T: Transducer) -> Transducer:
    trans = {(p, y, x, q) for p, x, y, q in T.transitions}
    return Transducer(T.alphabet, T.states, T.initial, T.finals, frozenset(trans))


def t_apply_lang(T: Transducer, A: Nfa) -> Nfa:
    """Automaton of ``T(L(A))`` by a product on the input side."""
    A = nfa_remove_epsilon(A)
    start = (T.initial, A.initial)
    seen = {start}
    queue = deque([start])
    trans = set()
    while queue:
        p, s = queue.popleft()
        a_moves = defaultdict(list)
        for a, s2 in A.out(s):
            a_moves[a].append(s2)
        for x, y, q in T.out(p):
            targets = [s] if x == EPS else a_moves.get(x, ())
            for s2 in targets:
                nxt = (q, s2)
                trans.add(((p, s), y, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    finals = {st for st in seen if st[0] in T.finals and st[1] in A.finals}
    return nfa_trim(Nfa.build(T.alphabet, trans, start, finals, seen))


def t_apply_word(T: Transducer, u) -> Nfa:
    from .automata import nfa_word

    u = tuple(u)
    for letter in u:
        if letter not in T.alphabet:
            raise AlphabetError(f"letter {letter!r} not in alphabet")
    return t_apply_lang(T, nfa_word(T.alphabet, u))


def t_image(T: Transducer, u) -> Nfa:
    """Minimal automaton of the image of a single word."""
    return nfa_minimize(t_apply_word(T, u))


def t_compose(T1: Transducer, T2: Transducer) -> Transducer:
    """``(u, w)`` such that ``(u, v) ∈ T1`` and ``(v, w) ∈ T2`` for some ``v``."""
    start = (T1.initial, T2.initial)
    seen = {start}
    queue = deque([start])
    trans = set()
    while queue:
        p, q = queue.popleft()
        moves = []
        by_input = defaultdict(list)
        for y, z, q2 in T2.out(q):
            if y == EPS:
                moves.append((EPS, z, (p, q2)))
            else:
                by_input[y].append((z, q2))
        for x, y, p2 in T1.out(p):
            if y == EPS:
                moves.append((x, EPS, (p2, q)))
            else:
                for z, q2 in by_input.get(y, ()):
                    moves.append((x, z, (p2, q2)))
        for x, z, nxt in moves:
            trans.add(((p, q), x, z, nxt))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    finals = {s for s in seen if s[0] in T1.finals and s[1] in T2.finals}
    result = Transducer.build(T1.alphabet | T2.alphabet, trans, start, finals, seen)
    return t_normalize(result)


def t_compose_all(*transducers: Transducer) -> Transducer:
    """Left-to-right composition: the first transducer is applied first."""
    result = transducers[0]
    for T in transducers[1:]:
        result = t_compose(result, T)
    return result


def _tagged(T: Transducer, tag):
    names = {q: (tag, q) for q in T.states}
    trans = {(names[p], x, y, names[q]) for p, x, y, q in T.transitions}
    return names, trans


def t_union(*transducers: Transducer) -> Transducer:
    """Union; the fresh initial state copies the initial moves so labels keep their shape."""
    if not transducers:
        raise ValueError("t_union needs at least one transducer")
    start = ("init",)
    trans = set()
    finals = set()
    states = {start}
    alphabet = set()
    for k, T in enumerate(transducers):
        names, tt = _tagged(T, k)
        trans |= tt
        states |= set(names.values())
        finals |= {names[q] for q in T.finals}
        alphabet |= T.alphabet
        for x, y, q in T.out(T.initial):
            trans.add((start, x, y, names[q]))
        if T.initial in T.finals:
            finals.add(start)
    return t_renumber(t_trim(Transducer.build(alphabet, trans, start, finals, states)))


def t_concat(*transducers: Transducer) -> Transducer:
    """Pairwise concatenation ``{(u1 u2, v1 v2)}``."""
    if not transducers:
        raise ValueError("t_concat needs at least one transducer")
    trans = set()
    states = set()
    alphabet = set()
    prev_finals = None
    initial = None
    for k, T in enumerate(transducers):
        names, tt = _tagged(T, k)
        trans |= tt
        states |= set(names.values())
        alphabet |= T.alphabet
        if prev_finals is None:
            initial = names[T.initial]
        else:
            trans |= {(f, EPS, EPS, names[T.initial]) for f in prev_finals}
        prev_finals = {names[q] for q in T.finals}
    result = Transducer.build(alphabet, trans, initial, prev_finals, states)
    return t_normalize(result)


def t_star(T: Transducer) -> Transducer:
    names, trans = _tagged(T, 0)
    start = ("star",)
    trans = set(trans) | {(start, EPS, EPS, names[T.initial])}
    trans |= {(names[q], EPS, EPS, start) for q in T.finals}
    result = Transducer.build(T.alphabet, trans, start, {start}, set(names.values()) | {start})
    return t_normalize(result)


def _restrict(T: Transducer, A: Nfa, side: int) -> Transducer:
    D = nfa_trim(nfa_determinize(A))
    delta = {(p, a): q for p, a, q in D.transitions}
    start = (T.initial, D.initial)
    seen = {start}
    queue = deque([start])
    trans = set()
    while queue:
        p, s = queue.popleft()
        for x, y, q in T.out(p):
            letter = x if side == 0 else y
            if letter == EPS:
                s2 = s
            else:
                s2 = delta.get((s, letter))
                if s2 is None:
                    continue
            nxt = (q, s2)
            trans.add(((p, s), x, y, nxt))
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    finals = {st for st in seen if st[0] in T.finals and st[1] in D.finals}
    return t_renumber(t_trim(Transducer.build(T.alphabet, trans, start, finals, seen)))


def t_restrict_domain(T: Transducer, A: Nfa) -> Transducer:
    """Pairs of ``T`` whose input lies in ``L(A)``; keeps sequential and synchronous shapes."""
    return _restrict(T, A, 0)


def t_restrict_range(T: Transducer, A: Nfa) -> Transducer:
    return _restrict(T, A, 1)


# -- enumeration ------------------------------------------------------------


def t_pairs(T: Transducer, max_in: int, max_out: int | None = None) -> set[tuple[Word, Word]]:
    """All pairs of ``T`` with ``|u| <= max_in`` and ``|v| <= max_out`` by bounded run search."""
    max_out = max_in if max_out is None else max_out
    result = set()
    start = (T.initial, (), ())
    seen = {start}
    stack = [start]
    while stack:
        q, u, v = stack.pop()
        if q in T.finals:
            result.add((u, v))
        for x, y, q2 in T.out(q):
            u2 = u + (x,) if x != EPS else u
            v2 = v + (y,) if y != EPS else v
            if len(u2) > max_in or len(v2) > max_out:
                continue
            nxt = (q2, u2, v2)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return result


def t_run_count(T: Transducer, u, v) -> int | float:
    """Number of accepting runs labelled ``u/v``; ``math.inf`` if an ``ε/ε`` cycle is usable."""
    u, v = tuple(u), tuple(v)

    def succ(config):
        q, i, j = config
        for x, y, q2 in T.out(q):
            if x != EPS and (i >= len(u) or u[i] != x):
                continue
            if y != EPS and (j >= len(v) or v[j] != y):
                continue
            yield (q2, i + (x != EPS), j + (y != EPS))

    start = (T.initial, 0, 0)
    # forward reachable configurations
    reach = {start}
    stack = [start]
    edges = {}
    while stack:
        c = stack.pop()
        edges[c] = list(succ(c))
        for d in edges[c]:
            if d not in reach:
                reach.add(d)
                stack.append(d)
    accept = {c for c in reach if c[0] in T.finals and c[1] == len(u) and c[2] == len(v)}
    back = defaultdict(list)
    for c, ds in edges.items():
        for d in ds:
            back[d].append(c)
    useful = set(accept)
    stack = list(accept)
    while stack:
        c = stack.pop()
        for b in back[c]:
            if b not in useful:
                useful.add(b)
                stack.append(b)
    if start not in useful:
        return 0
    # counting on the useful part, which must be acyclic for a finite answer
    count = {}
    colour = {}
    order = [(start, False)]
    while order:
        c, done = order.pop()
        if done:
            colour[c] = 2
            count[c] = int(c in accept) + sum(count[d] for d in edges[c] if d in useful)
            continue
        if colour.get(c) == 2:
            continue
        if colour.get(c) == 1:
            return math.inf
        colour[c] = 1
        order.append((c, True))
        for d in edges[c]:
            if d in useful:
                if colour.get(d) == 1:
                    return math.inf
                if colour.get(d) is None:
                    order.append((d, False))
    return count[start]


# -- classification ---------------------------------------------------------

SYNC, IN, OUT = "sync", "in", "out"


def _kind(x, y):
    if x != EPS and y != EPS:
        return SYNC
    if x != EPS:
        return IN
    if y != EPS:
        return OUT
    return None


def _advance(mode, kind):
    """Next mode of the left-synchronized path automaton, ``None`` when the path is illegal."""
    if kind == SYNC:
        return SYNC if mode == SYNC else None
    if mode == SYNC or mode == kind:
        return kind
    return None


def _mode_check(starts, edges) -> bool:
    seen = {(s, SYNC) for s in starts}
    stack = list(seen)
    while stack:
        q, mode = stack.pop()
        for kind, dst in edges.get(q, ()):
            nxt_mode = _advance(mode, kind)
            if nxt_mode is None:
                return False
            nxt = (dst, nxt_mode)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return True


def path_modes(T: Transducer) -> dict:
    """Modes reachable at each state of a left-synchronized transducer."""
    modes = defaultdict(set)
    modes[T.initial].add(SYNC)
    stack = [(T.initial, SYNC)]
    while stack:
        q, mode = stack.pop()
        for x, y, dst in T.out(q):
            nxt = _advance(mode, _kind(x, y))
            if nxt is not None and nxt not in modes[dst]:
                modes[dst].add(nxt)
                stack.append((dst, nxt))
    return modes


def is_left_synchronized(T: Transducer) -> bool:
    T = t_trim(t_remove_epsilon(T))
    edges = defaultdict(list)
    for p, x, y, q in T.transitions:
        edges[p].append((_kind(x, y), q))
    return _mode_check([T.initial], edges)


def is_right_synchronized(T: Transducer) -> bool:
    T = t_trim(t_remove_epsilon(T))
    edges = defaultdict(list)
    for p, x, y, q in T.transitions:
        edges[q].append((_kind(x, y), p))
    return _mode_check(T.finals, edges)


def is_synchronous(T: Transducer) -> bool:
    T = t_trim(t_remove_epsilon(T))
    return all(x != EPS and y != EPS for _, x, y, _ in T.transitions)


def is_sequential(T: Transducer) -> bool:
    T = t_trim(T)
    for state in T.states:
        moves = set(T.out(state))
        if len(moves) <= 1:
            continue
        inputs = [x for x, _, _ in moves]
        if EPS in inputs or len(inputs) != len(set(inputs)):
            return False
    return True


def t_classify(T: Transducer) -> TransducerClass:
    return TransducerClass(
        synchronous=is_synchronous(T),
        left_synchronized=is_left_synchronized(T),
        right_synchronized=is_right_synchronized(T),
        sequential=is_sequential(T),
    )


def require_left_synchronized(T: Transducer, what: str = "operation") -> None:
    if not is_left_synchronized(T):
        raise ClassError(f"{what} needs a left-synchronized transducer")


# -- unambiguity and functionality -------------------------------------------


def t_unambiguize_synchronized(T: Transducer) -> Transducer:
    """Equivalent transducer with one accepting run per pair, by determinizing over labels."""
    require_left_synchronized(T, "unambiguization")
    T = t_trim(t_remove_epsilon(T))
    labels = sorted({(x, y) for _, x, y, _ in T.transitions})
    code = {label: str(i) for i, label in enumerate(labels)}
    skel = Nfa.build(set(code.values()), {(p, code[(x, y)], q) for p, x, y, q in T.transitions},
                     T.initial, T.finals, T.states)
    D = nfa_trim(nfa_determinize(skel))
    decode = {c: label for label, c in code.items()}
    trans = {(p, *decode[c], q) for p, c, q in D.transitions}
    return t_renumber(Transducer.build(T.alphabet, trans, D.initial, D.finals, D.states))


def _padded_automaton(T: Transducer):
    """Label automaton of a left-synchronized transducer with ``ε`` read as padding,
    extended by trailing ``PAD/PAD`` steps so that pairs can be aligned to any length."""
    T = t_trim(t_remove_epsilon(T))
    out = defaultdict(list)
    for p, x, y, q in T.transitions:
        out[p].append((x if x != EPS else PAD, y if y != EPS else PAD, q))
    tail = ("tail",)
    for f in T.finals:
        out[f].append((PAD, PAD, tail))
    out[tail].append((PAD, PAD, tail))
    return T.initial, set(T.finals) | {tail}, out


def t_is_functional_synchronized(T: Transducer) -> bool:
    """Exact functionality test for left-synchronized transducers."""
    require_left_synchronized(T, "functionality test")
    init, finals, out = _padded_automaton(T)
    start = (init, init, False)
    seen = {start}
    stack = [start]
    while stack:
        p, q, differ = stack.pop()
        if differ and p in finals and q in finals:
            return False
        by_input = defaultdict(list)
        for x, y, q2 in out.get(q, ()):
            by_input[x].append((y, q2))
        for x, y, p2 in out.get(p, ()):
            for y2, q2 in by_input.get(x, ()):
                nxt = (p2, q2, differ or y != y2)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
    return True


def t_functional_probe(T: Transducer, max_len: int) -> bool:
    """True when no input of length at most ``max_len`` has two distinct images."""
    from .automata import nfa_cardinality

    for u in iter_words(t_domain(T), max_len):
        if nfa_cardinality(t_apply_word(T, u)) > 1:
            return False
    return True


def t_is_label_deterministic(T: Transducer) -> bool:
    """No state has two transitions with the same ``x/y`` label."""
    for state in T.states:
        labels = [(x, y) for x, y, _ in T.out(state)]
        if len(labels) != len(set(labels)):
            return False
    return True


def t_imbalance_bound(T: Transducer, side: str = "output") -> int | float:
    """Smallest ``c`` with ``|y| <= |x| + c`` (``side="output"``) or ``|x| <= |y| + c``
    (``side="input"``) over all pairs of a left-synchronized transducer."""
    require_left_synchronized(T, "imbalance bound")
    T = t_trim(t_remove_epsilon(T))
    tail_kind = OUT if side == "output" else IN
    modes = path_modes(T)
    # longest path of one-sided transitions of the given kind inside the tail
    tail_edges = defaultdict(list)
    for p, x, y, q in T.transitions:
        if _kind(x, y) == tail_kind:
            tail_edges[p].append(q)
    longest = {}
    colour = {}

    def visit(q):
        stack = [(q, iter(tail_edges[q]))]
        colour[q] = 1
        while stack:
            state, it = stack[-1]
            pushed = False
            for dst in it:
                if colour.get(dst) == 1:
                    return False
                if colour.get(dst) is None:
                    colour[dst] = 1
                    stack.append((dst, iter(tail_edges[dst])))
                    pushed = True
                    break
            if not pushed:
                stack.pop()
                colour[state] = 2
                longest[state] = max((1 + longest[d] for d in tail_edges[state]), default=0)
        return True

    best = 0
    for q in T.states:
        if SYNC not in modes.get(q, ()) and tail_kind not in modes.get(q, ()):
            continue
        if colour.get(q) is None and not visit(q):
            return math.inf
        best = max(best, longest[q])
    return best


def t_minimize_labels(T: Transducer) -> Transducer:
    """Minimal deterministic automaton over ``x/y`` labels; same relation, one run per label sequence."""
    T = t_trim(t_remove_epsilon(T))
    labels = sorted({(x, y) for _, x, y, _ in T.transitions})
    code = {label: str(i) for i, label in enumerate(labels)}
    skel = Nfa.build(set(code.values()), {(p, code[(x, y)], q) for p, x, y, q in T.transitions},
                     T.initial, T.finals, T.states)
    D = nfa_minimize(skel)
    decode = {c: label for label, c in code.items()}
    trans = {(p, *decode[c], q) for p, c, q in D.transitions}
    return t_renumber(Transducer.build(T.alphabet, trans, D.initial, D.finals, D.states))


def t_synchronize(T: Transducer, max_delay: int = 2) -> Transducer:
    """Left-synchronized transducer for the pairs of ``T`` whose runs never let one side
    run more than ``max_delay`` letters ahead of the other before the one-sided tail."""
    T = t_trim(t_remove_epsilon(T))
    start = (T.initial, (), (), SYNC)
    seen = {start}
    stack = [start]
    eps_moves = set()
    moves = set()
    finals = set()
    while stack:
        state = stack.pop()
        q, pin, pout, mode = state
        if q in T.finals and not pin and not pout:
            finals.add(state)
        successors = []
        # emit letters that both sides have already produced
        if pin and pout:
            successors.append(((pin[0], pout[0]), (q, pin[1:], pout[1:], SYNC)))
        else:
            if pin and not pout and mode in (SYNC, IN):
                successors.append(((pin[0], EPS), (q, pin[1:], pout, IN)))
            if pout and not pin and mode in (SYNC, OUT):
                successors.append(((EPS, pout[0]), (q, pin, pout[1:], OUT)))
            for x, y, q2 in T.out(q):
                if mode == IN and y != EPS or mode == OUT and x != EPS:
                    continue
                pin2 = pin + (x,) if x != EPS else pin
                pout2 = pout + (y,) if y != EPS else pout
                if abs(len(pin2) - len(pout2)) > max_delay:
                    continue
                successors.append((None, (q2, pin2, pout2, mode)))
        for label, nxt in successors:
            if label is None:
                eps_moves.add((state, nxt))
            else:
                moves.add((state, label, nxt))
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    trans = {(p, x, y, q) for p, (x, y), q in moves} | {(p, EPS, EPS, q) for p, q in eps_moves}
    result = Transducer.build(T.alphabet, trans, start, finals, seen)
    return t_minimize_labels(result)


def t_eval_sequential(T: Transducer, u) -> Word | None:
    """Image of ``u`` under a sequential transducer by a single deterministic run."""
    state = T.initial
    out = []
    u = tuple(u)
    i = 0
    steps = 0
    limit = 4 * (len(u) + len(T.states) + 1)
    while True:
        moves = T.out(state)
        nxt = None
        if i < len(u):
            for x, y, q in moves:
                if x == u[i]:
                    nxt = (x, y, q)
                    break
        if nxt is None and len(moves) == 1 and moves[0][0] == EPS:
            nxt = moves[0]
        if nxt is None:
            return tuple(out) if i == len(u) and state in T.finals else None
        x, y, state = nxt
        if x != EPS:
            i += 1
        if y != EPS:
            out.append(y)
        steps += 1
        if steps > limit:
            return None
