"""Pictures, tiling systems and their frontier languages.

A picture is a tuple of equally long rows.  A tile is written
``((top_left, top_right), (bottom_left, bottom_right))``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .automata import Word
from .errors import AlphabetError, FormatError

Picture = tuple  # tuple of rows, each row a tuple of letters
Tile = tuple


def make_picture(rows) -> Picture:
    pic = tuple(tuple(r) for r in rows)
    if not pic or not pic[0]:
        raise FormatError("pictures have at least one row and one column")
    if any(len(r) != len(pic[0]) for r in pic):
        raise FormatError("picture rows must have equal length")
    return pic


def make_tile(tl, tr, bl, br) -> Tile:
    return ((tl, tr), (bl, br))


@dataclass(frozen=True)
class TilingSystem:
    gamma: frozenset
    sigma: frozenset
    frame: str
    tiles: frozenset
    _below: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in ("gamma", "sigma", "tiles"):
            value = getattr(self, name)
            if not isinstance(value, frozenset):
                object.__setattr__(self, name, frozenset(value))
        if not self.sigma <= self.gamma:
            raise AlphabetError("the input alphabet must be part of the work alphabet")
        if self.frame in self.gamma:
            raise AlphabetError(f"frame symbol {self.frame!r} belongs to the work alphabet")
        allowed = self.gamma | {self.frame}
        below = defaultdict(set)
        for tile in self.tiles:
            (tl, tr), (bl, br) = tile
            for letter in (tl, tr, bl, br):
                if letter not in allowed:
                    raise AlphabetError(f"tile letter {letter!r} outside work alphabet and frame")
            below[(tl, tr, bl)].add(br)
        object.__setattr__(self, "_below", {k: frozenset(v) for k, v in below.items()})

    def completions(self, tl, tr, bl) -> frozenset:
        return self._below.get((tl, tr, bl), frozenset())


# -- pictures ---------------------------------------------------------------


def p_border(p: Picture, frame: str) -> Picture:
    p = make_picture(p)
    letters = {a for row in p for a in row}
    if frame in letters:
        raise AlphabetError(f"frame symbol {frame!r} occurs in the picture")
    m = len(p[0])
    edge = (frame,) * (m + 2)
    return (edge,) + tuple((frame,) + row + (frame,) for row in p) + (edge,)


def p_tiles(p: Picture) -> set[Tile]:
    p = make_picture(p)
    if len(p) < 2 or len(p[0]) < 2:
        raise FormatError("tiles need a picture of at least two rows and two columns")
    return {
        ((p[i][j], p[i][j + 1]), (p[i + 1][j], p[i + 1][j + 1]))
        for i in range(len(p) - 1)
        for j in range(len(p[0]) - 1)
    }


def ts_frontier(p: Picture) -> Word:
    return tuple(make_picture(p)[0])


def ts_accepts_picture(S: TilingSystem, p: Picture) -> bool:
    p = make_picture(p)
    if any(a not in S.gamma for row in p for a in row):
        return False
    return p_tiles(p_border(p, S.frame)) <= S.tiles


# -- row search -------------------------------------------------------------


def _pad(S: TilingSystem, row) -> tuple:
    return (S.frame,) + tuple(row) + (S.frame,)


def _fits(S: TilingSystem, upper, lower) -> bool:
    U, L = _pad(S, upper), _pad(S, lower)
    return all(((U[j], U[j + 1]), (L[j], L[j + 1])) in S.tiles for j in range(len(U) - 1))


def can_start(S: TilingSystem, row) -> bool:
    return _fits(S, (S.frame,) * len(row), row)


def can_end(S: TilingSystem, row) -> bool:
    return _fits(S, row, (S.frame,) * len(row))


def next_rows(S: TilingSystem, row) -> list[tuple]:
    """Rows that may sit directly below ``row`` in an accepted picture."""
    U = _pad(S, row)
    m = len(row)
    results = []
    # partial rows grow left to right, each extension checked against one tile
    partial = [(S.frame,)]
    for j in range(m + 1):
        grown = []
        for cells in partial:
            for br in S.completions(U[j], U[j + 1], cells[-1]):
                if j < m and br != S.frame:
                    grown.append(cells + (br,))
                elif j == m and br == S.frame:
                    grown.append(cells)
        partial = grown
        if not partial:
            return []
    for cells in partial:
        results.append(cells[1:])
    return sorted(set(results))


def _check_input(S: TilingSystem, w) -> tuple:
    w = tuple(w)
    if not w:
        raise ValueError("tiling systems only describe non-empty words")
    for a in w:
        if a not in S.sigma:
            raise AlphabetError(f"letter {a!r} not in the input alphabet")
    return w


def ts_min_height(S: TilingSystem, w) -> int | None:
    """Height of the smallest accepted picture with frontier ``w`` (breadth-first over rows)."""
    w = _check_input(S, w)
    if not can_start(S, w):
        return None
    seen = {w}
    layer = [w]
    height = 1
    while layer:
        if any(can_end(S, r) for r in layer):
            return height
        nxt = []
        for r in layer:
            for r2 in next_rows(S, r):
                if r2 not in seen:
                    seen.add(r2)
                    nxt.append(r2)
        layer = nxt
        height += 1
    return None


def ts_member(S: TilingSystem, w) -> bool:
    return ts_min_height(S, w) is not None


def ts_min_picture(S: TilingSystem, w) -> Picture | None:
    w = _check_input(S, w)
    if not can_start(S, w):
        return None
    parent = {w: None}
    layer = [w]
    while layer:
        for r in layer:
            if can_end(S, r):
                rows = []
                while r is not None:
                    rows.append(r)
                    r = parent[r]
                return tuple(reversed(rows))
        nxt = []
        for r in layer:
            for r2 in next_rows(S, r):
                if r2 not in parent:
                    parent[r2] = r
                    nxt.append(r2)
        layer = nxt
    return None


def ts_count_pictures(S: TilingSystem, w, max_height: int) -> int:
    """Number of accepted pictures with frontier ``w`` and at most ``max_height`` rows."""
    w = _check_input(S, w)
    if not can_start(S, w):
        return 0
    layer = {w: 1}
    total = 0
    for _ in range(max_height):
        total += sum(n for r, n in layer.items() if can_end(S, r))
        nxt = defaultdict(int)
        for r, n in layer.items():
            for r2 in next_rows(S, r):
                nxt[r2] += n
        layer = nxt
        if not layer:
            break
    return total


def ts_pictures(S: TilingSystem, w, max_height: int) -> Iterator[Picture]:
    w = _check_input(S, w)
    if not can_start(S, w):
        return
    stack = [(w,)]
    while stack:
        rows = stack.pop()
        if can_end(S, rows[-1]):
            yield rows
        if len(rows) < max_height:
            for r2 in next_rows(S, rows[-1]):
                stack.append(rows + (r2,))


def ts_det_probe(S: TilingSystem, max_width: int) -> bool:
    """Bounded determinism check: every row reachable from a frontier row of width at most
    ``max_width`` has at most one possible next row."""
    if max_width < 1:
        raise ValueError("max_width must be at least 1")
    letters = sorted(S.sigma)
    for m in range(1, max_width + 1):
        seen = set()
        stack = [w for w in product(letters, repeat=m) if can_start(S, w)]
        seen.update(stack)
        while stack:
            r = stack.pop()
            succ = next_rows(S, r)
            if len(succ) > 1:
                return False
            for r2 in succ:
                if r2 not in seen:
                    seen.add(r2)
                    stack.append(r2)
    return True


def ts_enumerate_language(S: TilingSystem, max_len: int) -> list[Word]:
    words = []
    letters = sorted(S.sigma)
    for n in range(1, max_len + 1):
        for w in product(letters, repeat=n):
            if ts_member(S, w):
                words.append(w)
    return words
