"""Reduced words and braid moves in the Coxeter groups S_n and W(B2).

Generators are labelled 1, 2, ... as in the usual sigma_i notation. Group
elements are identified canonically through a faithful exact representation:
one-line permutations for type A, signed 2x2 permutation matrices for B2.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

__all__ = [
    "BraidMove",
    "CoxeterSystem",
    "MAX_ENUMERATION_LENGTH",
    "ReducedWord",
    "braid_move_path",
    "enumerate_reduced_words",
    "is_reduced",
    "longest_element_length",
    "longest_word",
    "parse_word",
    "type_A",
    "type_B2",
]

MAX_ENUMERATION_LENGTH = 12


@dataclass(frozen=True)
class CoxeterSystem:
    """A finite Coxeter system of type A(rank) or B(2)."""

    family: str  # "A" or "B"
    rank: int
    coxeter_matrix: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        m = self.coxeter_matrix
        for i in range(self.rank):
            if m[i][i] != 1:
                raise ValueError("Coxeter matrix needs ones on the diagonal")
            for j in range(self.rank):
                if i != j and (m[i][j] != m[j][i] or m[i][j] not in (2, 3, 4)):
                    raise ValueError("off-diagonal Coxeter entries must be symmetric, in {2,3,4}")

    @property
    def type_tag(self) -> str:
        return f"{self.family}{self.rank}"

    def m(self, i: int, j: int) -> int:
        """Coxeter exponent for generators labelled i and j (1-based)."""
        return self.coxeter_matrix[i - 1][j - 1]

    def check_letters(self, word: Iterable[int]) -> tuple[int, ...]:
        word = tuple(word)
        for a in word:
            if not isinstance(a, int) or not 1 <= a <= self.rank:
                raise IndexError(f"generator index {a!r} out of range 1..{self.rank}")
        return word

    # element arithmetic in the faithful representation

    def identity_element(self):
        if self.family == "A":
            return tuple(range(self.rank + 1))
        return ((1, 0), (0, 1))

    def right_multiply(self, elem, i: int):
        """``elem * s_i``."""
        if self.family == "A":
            e = list(elem)
            e[i - 1], e[i] = e[i], e[i - 1]
            return tuple(e)
        # B2: s1 swaps the coordinates, s2 negates the second one
        (a, b), (c, d) = elem
        if i == 1:
            return ((b, a), (d, c))
        return ((a, -b), (c, -d))

    def element(self, word: Sequence[int]):
        word = self.check_letters(word)
        e = self.identity_element()
        for a in word:
            e = self.right_multiply(e, a)
        return e

    def has_right_descent(self, elem, i: int) -> bool:
        """Whether ``l(elem * s_i) < l(elem)``, i.e. elem sends alpha_i negative."""
        if self.family == "A":
            return elem[i - 1] > elem[i]
        # simple roots alpha_1 = e1 - e2, alpha_2 = e2; a root c1 e1 + c2 e2 is
        # c1 alpha_1 + (c1 + c2) alpha_2, positive iff both coefficients >= 0
        (a, b), (c, d) = elem
        root = (1, -1) if i == 1 else (0, 1)
        c1 = a * root[0] + b * root[1]
        c2 = c * root[0] + d * root[1]
        return c1 < 0 or c1 + c2 < 0

    def length(self, elem) -> int:
        if self.family == "A":
            return sum(1 for i in range(len(elem)) for j in range(i + 1, len(elem)) if elem[i] > elem[j])
        n = 0
        while elem != self.identity_element():
            i = next(k for k in (1, 2) if self.has_right_descent(elem, k))
            elem = self.right_multiply(elem, i)
            n += 1
        return n


def type_A(rank: int) -> CoxeterSystem:
    """The symmetric group S_{rank+1} with adjacent transpositions."""
    if rank < 1:
        raise ValueError("type A needs rank >= 1")
    m = tuple(
        tuple(1 if i == j else (3 if abs(i - j) == 1 else 2) for j in range(rank)) for i in range(rank)
    )
    return CoxeterSystem("A", rank, m)


def type_B2() -> CoxeterSystem:
    return CoxeterSystem("B", 2, ((1, 4), (4, 1)))


@dataclass(frozen=True)
class ReducedWord:
    """A word in the generators, validated as reduced on construction."""

    system: CoxeterSystem
    letters: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if not is_reduced(self.system, self.letters):
            raise ValueError(f"word {self.letters} is not reduced in {self.system.type_tag}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def element(self):
        return self.system.element(self.letters)

    def __str__(self) -> str:
        return "".join(str(a) for a in self.letters) if self.system.rank < 10 else str(list(self.letters))


class BraidMove(tuple):
    """``(position, m)``: replace the alternating block of length m starting at
    the 0-based position by the other alternating block."""

    __slots__ = ()

    def __new__(cls, position: int, m: int):
        return super().__new__(cls, (position, m))

    @property
    def position(self) -> int:
        return self[0]

    @property
    def m(self) -> int:
        return self[1]


def parse_word(text: str) -> tuple[int, ...]:
    """Accept ``"121"``, ``"1,2,1"``, ``"1 2 1"`` or ``"[1,2,1]"``."""
    t = text.strip().strip("[]")
    if not t:
        return ()
    if "," in t or " " in t:
        return tuple(int(x) for x in t.replace(",", " ").split())
    return tuple(int(c) for c in t)


def is_reduced(system: CoxeterSystem, word: Sequence[int]) -> bool:
    """Whether no shorter word represents the same element."""
    word = system.check_letters(word)
    elem = system.element(word)
    return system.length(elem) == len(word)


def longest_element_length(system: CoxeterSystem) -> int:
    if system.family == "A":
        n = system.rank + 1
        return n * (n - 1) // 2
    return 4


def longest_word(system: CoxeterSystem) -> tuple[int, ...]:
    """Lexicographically smallest reduced word of the longest element."""
    if system.family == "A":
        n = system.rank + 1
        return tuple(i for k in range(n - 1, 0, -1) for i in range(1, k + 1))
    return (1, 2, 1, 2)


def _apply_move(word: tuple[int, ...], pos: int, m: int) -> tuple[int, ...]:
    a, b = word[pos], word[pos + 1]
    block = tuple(b if k % 2 == 0 else a for k in range(m))
    return word[:pos] + block + word[pos + m :]


def _moves(system: CoxeterSystem, word: tuple[int, ...]):
    for pos in range(len(word) - 1):
        a, b = word[pos], word[pos + 1]
        if a == b:
            continue
        m = system.m(a, b)
        if pos + m > len(word):
            continue
        if all(word[pos + k] == (a if k % 2 == 0 else b) for k in range(m)):
            yield BraidMove(pos, m), _apply_move(word, pos, m)


def enumerate_reduced_words(system: CoxeterSystem, element: ReducedWord | Sequence[int]) -> list[ReducedWord]:
    """All reduced words of the element, in lexicographic order.

    Words are built from right descents, so the result does not rely on
    braid moves connecting them.
    """
    letters = tuple(element.letters if isinstance(element, ReducedWord) else element)
    if len(letters) > MAX_ENUMERATION_LENGTH:
        raise ValueError(f"enumeration capped at length {MAX_ENUMERATION_LENGTH}")
    target = system.element(letters)
    words = _words_of(system, target)
    return [ReducedWord(system, w) for w in sorted(words)]


def _words_of(system: CoxeterSystem, elem) -> frozenset[tuple[int, ...]]:
    @lru_cache(maxsize=None)
    def rec(e):
        if e == system.identity_element():
            return frozenset({()})
        out = set()
        for i in range(1, system.rank + 1):
            if system.has_right_descent(e, i):
                shorter = system.right_multiply(e, i)
                out.update(w + (i,) for w in rec(shorter))
        return frozenset(out)

    return rec(elem)


def braid_move_path(
    system: CoxeterSystem,
    source: ReducedWord | Sequence[int],
    target: ReducedWord | Sequence[int],
) -> list[BraidMove]:
    """Shortest sequence of braid moves turning ``source`` into ``target``."""
    src = tuple(source.letters if isinstance(source, ReducedWord) else source)
    dst = tuple(target.letters if isinstance(target, ReducedWord) else target)
    for w in (src, dst):
        if not is_reduced(system, w):
            raise ValueError(f"word {w} is not reduced")
    if system.element(src) != system.element(dst):
        raise ValueError("the two words represent different elements")
    parent: dict[tuple[int, ...], tuple] = {src: None}
    queue = deque([src])
    while queue:
        w = queue.popleft()
        if w == dst:
            break
        for move, nxt in _moves(system, w):
            if nxt not in parent:
                parent[nxt] = (w, move)
                queue.append(nxt)
    if dst not in parent:
        raise ValueError("no braid path found")  # impossible by Matsumoto
    path = []
    w = dst
    while parent[w] is not None:
        w, move = parent[w]
        path.append(move)
    path.reverse()
    return path


def apply_braid_path(word: Sequence[int], path: Iterable[BraidMove]) -> tuple[int, ...]:
    w = tuple(word)
    for pos, m in path:
        w = _apply_move(w, pos, m)
    return w


def braid_graph_components(system: CoxeterSystem, words: Iterable[Sequence[int]]) -> int:
    """Number of connected components of the braid-move graph on ``words``."""
    remaining = {tuple(w) for w in words}
    components = 0
    while remaining:
        components += 1
        start = remaining.pop()
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for _, nxt in _moves(system, w):
                if nxt in remaining:
                    remaining.remove(nxt)
                    queue.append(nxt)
    return components
