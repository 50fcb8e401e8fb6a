"""Finite automata over explicit finite alphabets.

Letters are non-empty strings, words are tuples of letters and the empty
string ``EPS`` labels epsilon transitions.  Every automaton is immutable and
every operation returns a new automaton.
"""
from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator

from .errors import AlphabetError, FormatError

EPS = ""
Word = tuple[str, ...]


def parse_word(text: str) -> Word:
    """Split ``text`` into letters; ``{abc}`` escapes a multi-character letter."""
    letters = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "{":
            j = text.find("}", i)
            if j < 0 or j == i + 1:
                raise FormatError(f"bad letter escape in {text!r}")
            letters.append(text[i + 1 : j])
            i = j + 1
        elif ch == "}":
            raise FormatError(f"unbalanced '}}' in {text!r}")
        else:
            letters.append(ch)
            i += 1
    return tuple(letters)


def format_word(word: Iterable[str]) -> str:
    out = []
    for letter in word:
        if len(letter) == 1 and letter not in "{}":
            out.append(letter)
        else:
            out.append("{" + letter + "}")
    return "".join(out)


def shortlex_key(word: Word) -> tuple:
    return (len(word), word)


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic automaton with a single initial state and epsilon moves."""

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
        for src, letter, dst in self.transitions:
            if src not in self.states or dst not in self.states:
                raise ValueError(f"transition {(src, letter, dst)!r} leaves the state set")
            if letter != EPS and letter not in self.alphabet:
                raise AlphabetError(f"letter {letter!r} not in alphabet")
            out[src].append((letter, dst))
        object.__setattr__(self, "_out", dict(out))

    @classmethod
    def build(cls, alphabet, transitions, initial, finals, states=None) -> "Nfa":
        transitions = frozenset(transitions)
        if states is None:
            states = {initial, *finals}
            for src, _, dst in transitions:
                states.add(src)
                states.add(dst)
        return cls(frozenset(alphabet), frozenset(states), initial, frozenset(finals), transitions)

    def out(self, state) -> list:
        return self._out.get(state, [])

    def has_epsilon(self) -> bool:
        return any(letter == EPS for _, letter, _ in self.transitions)

    def __len__(self) -> int:
        return len(self.states)

    def accepts(self, word) -> bool:
        return nfa_member(self, word)


# -- basic constructors -----------------------------------------------------


def nfa_empty(alphabet) -> Nfa:
    return Nfa.build(alphabet, (), 0, (), states={0})


def nfa_epsilon(alphabet) -> Nfa:
    return Nfa.build(alphabet, (), 0, {0})


def nfa_word(alphabet, word) -> Nfa:
    word = tuple(word)
    trans = [(i, letter, i + 1) for i, letter in enumerate(word)]
    return Nfa.build(alphabet, trans, 0, {len(word)}, states=range(len(word) + 1))


def nfa_words(alphabet, words) -> Nfa:
    """Prefix-tree automaton of a finite set of words."""
    trans = set()
    finals = set()
    nodes = {(): 0}
    for word in words:
        word = tuple(word)
        for i in range(len(word)):
            prefix = word[: i + 1]
            if prefix not in nodes:
                nodes[prefix] = len(nodes)
            trans.add((nodes[word[:i]], word[i], nodes[prefix]))
        finals.add(nodes[word])
    return Nfa.build(alphabet, trans, 0, finals, states=nodes.values())


def nfa_letters(alphabet, letters) -> Nfa:
    """Words of length one over ``letters``."""
    return Nfa.build(alphabet, [(0, a, 1) for a in letters], 0, {1}, states={0, 1})


def nfa_universal(alphabet, letters=None) -> Nfa:
    """``letters*`` (``alphabet*`` by default)."""
    letters = alphabet if letters is None else letters
    return Nfa.build(alphabet, [(0, a, 0) for a in letters], 0, {0})


def nfa_from_regex(pattern: str, alphabet) -> Nfa:
    """Tiny regex notation: letters, ``{name}``, ``|``, ``*``, ``+``, ``?`` and parentheses.

    ``()`` denotes the empty word.  Whitespace is ignored.
    """
    tokens = []
    i = 0
    while i < len(pattern):
        ch = pattern[i]
        if ch.isspace():
            i += 1
        elif ch == "{":
            j = pattern.find("}", i)
            if j < 0:
                raise FormatError(f"unclosed '{{' in {pattern!r}")
            tokens.append(("L", pattern[i + 1 : j]))
            i = j + 1
        elif ch in "|*+?()":
            tokens.append((ch, ch))
            i += 1
        else:
            tokens.append(("L", ch))
            i += 1
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def parse_alt():
        nonlocal pos
        node = parse_concat()
        while peek() == "|":
            pos += 1
            node = nfa_union(node, parse_concat())
        return node

    def parse_concat():
        node = nfa_epsilon(alphabet)
        while peek() in ("L", "("):
            node = nfa_concat(node, parse_repeat())
        return node

    def parse_repeat():
        nonlocal pos
        node = parse_atom()
        while peek() in ("*", "+", "?"):
            op = tokens[pos][0]
            pos += 1
            if op == "*":
                node = nfa_star(node)
            elif op == "+":
                node = nfa_concat(node, nfa_star(node))
            else:
                node = nfa_union(node, nfa_epsilon(alphabet))
        return node

    def parse_atom():
        nonlocal pos
        kind, value = tokens[pos]
        pos += 1
        if kind == "L":
            if value not in alphabet:
                raise AlphabetError(f"letter {value!r} not in alphabet")
            return nfa_word(alphabet, (value,))
        node = parse_alt()
        if peek() != ")":
            raise FormatError(f"unbalanced parenthesis in {pattern!r}")
        pos += 1
        return node

    result = parse_alt()
    if pos != len(tokens):
        raise FormatError(f"unexpected {tokens[pos][1]!r} in {pattern!r}")
    return nfa_trim(result)


# -- structural helpers -----------------------------------------------------


def renumber(A: Nfa) -> Nfa:
    """Rename states to 0..n-1 in breadth-first order from the initial state."""
    order = {A.initial: 0}
    queue = deque([A.initial])
    while queue:
        state = queue.popleft()
        for _, dst in sorted(A.out(state), key=lambda t: (t[0], repr(t[1]))):
            if dst not in order:
                order[dst] = len(order)
                queue.append(dst)
    for state in sorted(A.states - order.keys(), key=repr):
        order[state] = len(order)
    return Nfa(
        A.alphabet,
        frozenset(order.values()),
        0,
        frozenset(order[q] for q in A.finals),
        frozenset((order[p], a, order[q]) for p, a, q in A.transitions),
    )


def _tag(A: Nfa, tag) -> tuple[dict, set]:
    names = {q: (tag, q) for q in A.states}
    trans = {(names[p], a, names[q]) for p, a, q in A.transitions}
    return names, trans


def eps_closure(A: Nfa, states: Iterable) -> frozenset:
    seen = set(states)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for letter, dst in A.out(state):
            if letter == EPS and dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return frozenset(seen)


def _check_word(A: Nfa, word) -> Word:
    word = tuple(word)
    for letter in word:
        if letter not in A.alphabet:
            raise AlphabetError(f"letter {letter!r} not in alphabet {sorted(A.alphabet)}")
    return word


def _step(A: Nfa, current: frozenset, letter) -> frozenset:
    nxt = set()
    for state in current:
        for a, dst in A.out(state):
            if a == letter:
                nxt.add(dst)
    return eps_closure(A, nxt)


def nfa_member(A: Nfa, w) -> bool:
    word = _check_word(A, w)
    current = eps_closure(A, {A.initial})
    for letter in word:
        current = _step(A, current, letter)
        if not current:
            return False
    return bool(current & A.finals)


def accessible(A: Nfa) -> set:
    seen = {A.initial}
    stack = [A.initial]
    while stack:
        state = stack.pop()
        for _, dst in A.out(state):
            if dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return seen


def coaccessible(A: Nfa) -> set:
    back = defaultdict(list)
    for src, _, dst in A.transitions:
        back[dst].append(src)
    seen = set(A.finals)
    stack = list(seen)
    while stack:
        state = stack.pop()
        for src in back[state]:
            if src not in seen:
                seen.add(src)
                stack.append(src)
    return seen


def nfa_trim(A: Nfa) -> Nfa:
    """Keep only states that are both accessible and coaccessible (the initial state always stays)."""
    keep = accessible(A) & coaccessible(A)
    keep.add(A.initial)
    return Nfa(
        A.alphabet,
        frozenset(keep),
        A.initial,
        A.finals & keep,
        frozenset(t for t in A.transitions if t[0] in keep and t[2] in keep),
    )


def nfa_with_alphabet(A: Nfa, alphabet) -> Nfa:
    alphabet = frozenset(alphabet)
    return Nfa(alphabet, A.states, A.initial, A.finals, A.transitions)


def nfa_map_letters(A: Nfa, mapping, alphabet=None) -> Nfa:
    """Apply a letter-to-letter mapping (letters absent from ``mapping`` are kept)."""
    trans = {(p, mapping.get(a, a) if a != EPS else EPS, q) for p, a, q in A.transitions}
    if alphabet is None:
        alphabet = {mapping.get(a, a) for a in A.alphabet}
    return Nfa(frozenset(alphabet), A.states, A.initial, A.finals, frozenset(trans))


def nfa_add_loops(A: Nfa, letter: str) -> Nfa:
    """Add a ``letter`` loop on every state; the letter joins the alphabet."""
    trans = set(A.transitions) | {(q, letter, q) for q in A.states}
    return Nfa(A.alphabet | {letter}, A.states, A.initial, A.finals, frozenset(trans))


# -- rational operations ----------------------------------------------------


def nfa_union(A: Nfa, B: Nfa) -> Nfa:
    na, ta = _tag(A, 0)
    nb, tb = _tag(B, 1)
    start = ("u",)
    trans = ta | tb | {(start, EPS, na[A.initial]), (start, EPS, nb[B.initial])}
    finals = {na[q] for q in A.finals} | {nb[q] for q in B.finals}
    states = set(na.values()) | set(nb.values()) | {start}
    return renumber(Nfa.build(A.alphabet | B.alphabet, trans, start, finals, states))


def nfa_concat(A: Nfa, B: Nfa) -> Nfa:
    na, ta = _tag(A, 0)
    nb, tb = _tag(B, 1)
    trans = ta | tb | {(na[q], EPS, nb[B.initial]) for q in A.finals}
    states = set(na.values()) | set(nb.values())
    finals = {nb[q] for q in B.finals}
    return renumber(Nfa.build(A.alphabet | B.alphabet, trans, na[A.initial], finals, states))


def nfa_star(A: Nfa) -> Nfa:
    na, ta = _tag(A, 0)
    start = ("s",)
    trans = ta | {(start, EPS, na[A.initial])} | {(na[q], EPS, start) for q in A.finals}
    states = set(na.values()) | {start}
    return renumber(Nfa.build(A.alphabet, trans, start, {start}, states))


def nfa_remove_epsilon(A: Nfa) -> Nfa:
    if not A.has_epsilon():
        return A
    trans = set()
    finals = set()
    for state in A.states:
        closure = eps_closure(A, {state})
        if closure & A.finals:
            finals.add(state)
        for mid in closure:
            for letter, dst in A.out(mid):
                if letter != EPS:
                    trans.add((state, letter, dst))
    return nfa_trim(Nfa(A.alphabet, A.states, A.initial, frozenset(finals), frozenset(trans)))


def nfa_determinize(A: Nfa, complete: bool = False, alphabet=None) -> Nfa:
    """Subset construction; states of the result are numbered from 0."""
    alphabet = A.alphabet if alphabet is None else frozenset(alphabet) | A.alphabet
    start = eps_closure(A, {A.initial})
    index = {start: 0}
    queue = deque([start])
    trans = set()
    finals = set()
    while queue:
        subset = queue.popleft()
        src = index[subset]
        if subset & A.finals:
            finals.add(src)
        moves = defaultdict(set)
        for state in subset:
            for letter, dst in A.out(state):
                if letter != EPS:
                    moves[letter].add(dst)
        letters = alphabet if complete else moves.keys()
        for letter in sorted(letters):
            target = eps_closure(A, moves.get(letter, ()))
            if target not in index:
                index[target] = len(index)
                queue.append(target)
            trans.add((src, letter, index[target]))
    return Nfa(frozenset(alphabet), frozenset(index.values()), 0, frozenset(finals), frozenset(trans))


def is_deterministic(A: Nfa) -> bool:
    for state in A.states:
        letters = [a for a, _ in A.out(state)]
        if EPS in letters or len(letters) != len(set(letters)):
            return False
    return True


def nfa_minimize(A: Nfa) -> Nfa:
    """Minimal trim DFA (partial transition function) for the language of ``A``."""
    D = A if is_deterministic(A) else nfa_determinize(A)
    D = nfa_trim(D)
    if not D.finals:
        return nfa_empty(A.alphabet)
    delta = {q: dict(D.out(q)) for q in D.states}
    # Moore refinement; valid on a partial DFA because every state is live.
    block = {q: int(q in D.finals) for q in D.states}
    n_blocks = len(set(block.values()))
    while True:
        signatures = {}
        new_block = {}
        for q in sorted(D.states, key=repr):
            sig = (block[q], tuple(sorted((a, block[t]) for a, t in delta[q].items())))
            new_block[q] = signatures.setdefault(sig, len(signatures))
        if len(signatures) == n_blocks:
            break
        block, n_blocks = new_block, len(signatures)
    trans = {(block[p], a, block[q]) for p, a, q in D.transitions}
    finals = {block[q] for q in D.finals}
    return renumber(Nfa.build(A.alphabet, trans, block[D.initial], finals, set(block.values())))


def nfa_determinize_minimize(A: Nfa, complete: bool = False) -> Nfa:
    M = nfa_minimize(A)
    if not complete:
        return M
    C = nfa_determinize(M, complete=True)
    return renumber(C)


def nfa_complement(A: Nfa, alphabet=None) -> Nfa:
    alphabet = A.alphabet if alphabet is None else frozenset(alphabet) | A.alphabet
    D = nfa_determinize(A, complete=True, alphabet=alphabet)
    return Nfa(D.alphabet, D.states, D.initial, D.states - D.finals, D.transitions)


def nfa_intersect(A: Nfa, B: Nfa) -> Nfa:
    A = nfa_remove_epsilon(A)
    B = nfa_remove_epsilon(B)
    start = (A.initial, B.initial)
    seen = {start}
    queue = deque([start])
    trans = set()
    while queue:
        p, q = queue.popleft()
        by_letter = defaultdict(list)
        for a, dst in B.out(q):
            by_letter[a].append(dst)
        for a, p2 in A.out(p):
            for q2 in by_letter.get(a, ()):
                nxt = (p2, q2)
                trans.add(((p, q), a, nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    finals = {s for s in seen if s[0] in A.finals and s[1] in B.finals}
    return renumber(nfa_trim(Nfa.build(A.alphabet | B.alphabet, trans, start, finals, seen)))


def nfa_difference(A: Nfa, B: Nfa) -> Nfa:
    alphabet = A.alphabet | B.alphabet
    return nfa_intersect(A, nfa_complement(B, alphabet))


def nfa_combine(op: str, A: Nfa, B: Nfa | None = None) -> Nfa:
    if op == "star":
        return nfa_star(A)
    if B is None:
        raise ValueError(f"operation {op!r} needs two automata")
    ops = {
        "union": nfa_union,
        "concat": nfa_concat,
        "intersect": nfa_intersect,
        "difference": nfa_difference,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](A, B)


# -- decision procedures ----------------------------------------------------


def nfa_is_empty(A: Nfa) -> bool:
    return not (accessible(A) & A.finals)


def nfa_subset(A: Nfa, B: Nfa) -> bool:
    return nfa_is_empty(nfa_difference(A, B))


def nfa_equal(A: Nfa, B: Nfa) -> bool:
    return nfa_subset(A, B) and nfa_subset(B, A)


def nfa_contains_epsilon(A: Nfa) -> bool:
    return bool(eps_closure(A, {A.initial}) & A.finals)


def nfa_enumerate(A: Nfa, max_len: int) -> list[Word]:
    """Words of ``L(A)`` of length at most ``max_len`` in length-lexicographic order."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    return list(iter_words(A, max_len))


def iter_words(A: Nfa, max_len: int | None = None) -> Iterator[Word]:
    D = nfa_trim(nfa_determinize(A))
    if not D.finals:
        return
    delta = {q: sorted(D.out(q)) for q in D.states}
    layer = [((), D.initial)]
    length = 0
    while layer:
        for word, state in layer:
            if state in D.finals:
                yield word
        if max_len is not None and length >= max_len:
            return
        layer = [(word + (a,), dst) for word, state in layer for a, dst in delta[state]]
        length += 1


def nfa_cardinality(A: Nfa) -> int | float:
    """Number of words in ``L(A)``; ``math.inf`` when the language is infinite."""
    D = nfa_trim(nfa_determinize(A))
    if not D.finals:
        return 0
    delta = {q: [dst for _, dst in D.out(q)] for q in D.states}
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(D.states, WHITE)
    count = {}
    stack = [(D.initial, iter(delta[D.initial]))]
    colour[D.initial] = GREY
    while stack:
        state, children = stack[-1]
        advanced = False
        for child in children:
            if colour[child] == GREY:
                return math.inf
            if colour[child] == WHITE:
                colour[child] = GREY
                stack.append((child, iter(delta[child])))
                advanced = True
                break
        if not advanced:
            stack.pop()
            colour[state] = BLACK
            count[state] = int(state in D.finals) + sum(count[c] for c in delta[state])
    return count[D.initial]


def nfa_shortest_word(A: Nfa) -> Word | None:
    for word in iter_words(A):
        return word
    return None


def nfa_lengths_bounded(A: Nfa, max_len: int) -> Nfa:
    """Restrict ``L(A)`` to words of length at most ``max_len``."""
    letters = A.alphabet
    trans = [(i, a, i + 1) for i in range(max_len) for a in letters]
    bound = Nfa.build(letters, trans, 0, range(max_len + 1), states=range(max_len + 1))
    return nfa_intersect(A, bound)
