"""Subshift of finite type: alphabet, allowed length-2 transitions, finite
windows of bi-infinite sequences, periodic points, metric and shift.

Letters are plain integers in 1..alphabet_size.  Bi-infinite sequences are
never materialized: every consumer works on a finite :class:`Word` window,
or on the cyclic extension of a :class:`PeriodicPoint`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import EmptySubshift, NotTransitive, RangeMismatch


@dataclass(frozen=True)
class SubshiftSpec:
    """Alphabet size and the boolean matrix of allowed length-2 words.

    ``allowed[i][j]`` is True iff the word (i+1, j+1) may occur.  Instances
    are built through :func:`validate_spec`, which checks non-emptiness and
    strong connectivity of the transition graph.
    """

    alphabet_size: int
    allowed: tuple[tuple[bool, ...], ...]

    def allows(self, prev: int, cur: int) -> bool:
        if not (1 <= prev <= self.alphabet_size and 1 <= cur <= self.alphabet_size):
            raise ValueError(f"letters must lie in 1..{self.alphabet_size}, got ({prev}, {cur})")
        return self.allowed[prev - 1][cur - 1]

    @property
    def letters(self) -> range:
        return range(1, self.alphabet_size + 1)


@dataclass(frozen=True)
class Word:
    """A finite window of a sequence: letters placed at consecutive indices
    starting at ``base_index``."""

    letters: tuple[int, ...]
    base_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def first_index(self) -> int:
        return self.base_index

    @property
    def last_index(self) -> int:
        return self.base_index + len(self.letters) - 1

    def covers(self, index: int) -> bool:
        return self.first_index <= index <= self.last_index

    def letter(self, index: int) -> int:
        """Letter at an absolute sequence index."""
        if not self.covers(index):
            raise IndexError(f"index {index} outside window [{self.first_index}, {self.last_index}]")
        return self.letters[index - self.base_index]

    def window(self, first: int, last: int) -> "Word":
        """Sub-window covering [first, last]."""
        if first > last:
            raise ValueError("empty window requested")
        if not (self.covers(first) and self.covers(last)):
            raise IndexError(f"[{first}, {last}] outside [{self.first_index}, {self.last_index}]")
        lo = first - self.base_index
        return Word(self.letters[lo : lo + (last - first + 1)], first)


@dataclass(frozen=True)
class PeriodicPoint:
    """A primitive admissible cycle in canonical (lexicographically minimal)
    rotation; stands for the bi-infinite periodic sequence repeating it."""

    cycle: Word
    period: int

    def __post_init__(self):
        if self.cycle.base_index != 0:
            object.__setattr__(self, "cycle", Word(self.cycle.letters, 0))
        n = len(self.cycle)
        if n == 0:
            raise ValueError("empty cycle")
        if self.period != n:
            raise ValueError(f"period {self.period} != cycle length {n}")
        if not _is_primitive(self.cycle.letters):
            raise ValueError(f"cycle {self.cycle.letters} is a repetition of a shorter cycle")
        if self.cycle.letters != _canonical_rotation(self.cycle.letters):
            raise ValueError(f"cycle {self.cycle.letters} is not in canonical rotation")

    @classmethod
    def from_letters(cls, letters: Sequence[int]) -> "PeriodicPoint":
        letters = tuple(int(a) for a in letters)
        return cls(Word(_canonical_rotation(letters), 0), len(letters))

    def letter(self, index: int) -> int:
        return self.cycle.letters[index % self.period]

    def window(self, first: int, last: int) -> Word:
        """Finite window of the bi-infinite periodic extension."""
        if first > last:
            raise ValueError("empty window requested")
        return Word(tuple(self.letter(i) for i in range(first, last + 1)), first)


class MetricValue(NamedTuple):
    """Distance e^(-N) between two windows; ``window_limited`` marks the case
    where the windows agree everywhere visible, so only an upper bound on N
    is known."""

    value: float
    window_limited: bool


def _is_primitive(letters: tuple[int, ...]) -> bool:
    n = len(letters)
    for d in range(1, n):
        if n % d == 0 and letters == letters[d:] + letters[:d]:
            return False
    return True


def _canonical_rotation(letters: tuple[int, ...]) -> tuple[int, ...]:
    return min(letters[r:] + letters[:r] for r in range(len(letters)))


def validate_spec(alphabet_size: int, forbidden_pairs: Iterable[tuple[int, int]]) -> SubshiftSpec:
    """Build a spec from the complement of the forbidden length-2 words.

    Raises EmptySubshift when the transition graph has no directed cycle
    (no bi-infinite sequence exists) and NotTransitive when the graph on
    the full alphabet is not strongly connected.
    """
    if alphabet_size < 2:
        raise ValueError("alphabet_size must be at least 2")
    allowed = [[True] * alphabet_size for _ in range(alphabet_size)]
    for pair in forbidden_pairs:
        i, j = pair
        if not (1 <= i <= alphabet_size and 1 <= j <= alphabet_size):
            raise ValueError(f"forbidden pair {pair!r} outside alphabet 1..{alphabet_size}")
        allowed[i - 1][j - 1] = False

    if not _has_cycle(allowed):
        raise EmptySubshift("no directed cycle in the transition graph: the subshift is empty")
    if not _strongly_connected(allowed):
        raise NotTransitive("transition graph on the alphabet is not strongly connected")
    return SubshiftSpec(alphabet_size, tuple(tuple(row) for row in allowed))


def _reachable(allowed: list[list[bool]], start: int, transpose: bool) -> set[int]:
    n = len(allowed)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in range(n):
            edge = allowed[w][v] if transpose else allowed[v][w]
            if edge and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _strongly_connected(allowed: list[list[bool]]) -> bool:
    n = len(allowed)
    return len(_reachable(allowed, 0, False)) == n and len(_reachable(allowed, 0, True)) == n


def _has_cycle(allowed: list[list[bool]]) -> bool:
    n = len(allowed)
    for v in range(n):
        if allowed[v][v]:
            return True
    # a cycle exists iff some letter can reach itself in >= 1 steps
    for v in range(n):
        frontier = {w for w in range(n) if allowed[v][w]}
        seen = set(frontier)
        while frontier:
            if v in seen:
                return True
            frontier = {u for w in frontier for u in range(n) if allowed[w][u]} - seen
            seen |= frontier
        if v in seen:
            return True
    return False


def is_admissible(spec: SubshiftSpec, word: Word) -> bool:
    """True iff every consecutive pair of the window is allowed."""
    return all(
        spec.allows(word.letters[i], word.letters[i + 1]) for i in range(len(word.letters) - 1)
    )


def enumerate_periodic_points(spec: SubshiftSpec, max_period: int) -> list[PeriodicPoint]:
    """All primitive admissible cycles of length <= max_period, one canonical
    rotation each, sorted by (period, cycle)."""
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    points = []
    for n in range(1, max_period + 1):
        for letters in itertools.product(spec.letters, repeat=n):
            if letters != _canonical_rotation(letters):
                continue
            if not _is_primitive(letters):
                continue
            if not all(spec.allows(letters[i], letters[(i + 1) % n]) for i in range(n)):
                continue
            points.append(PeriodicPoint(Word(letters, 0), n))
    return points


def metric(w: Word, w2: Word) -> MetricValue:
    """e^(-N) with N the largest n >= 0 such that the windows agree on all
    |index| < n.  When they agree on the whole shared symmetric range [-R, R],
    N is only bounded below by R + 1: the value e^(-(R+1)) is returned with
    the window-limited flag set."""
    r1 = min(-w.first_index, w.last_index)
    r2 = min(-w2.first_index, w2.last_index)
    if r1 < 0 or r2 < 0:
        raise RangeMismatch("both windows must cover a symmetric range [-R, R] around 0")
    r = min(r1, r2)
    for n in range(r + 1):
        if w.letter(n) != w2.letter(n) or w.letter(-n) != w2.letter(-n):
            return MetricValue(math.exp(-float(n)), False)
    return MetricValue(math.exp(-float(r + 1)), True)


def shift(w: Word, steps: int) -> Word:
    """Relabel coordinates so that new index n reads old index n + steps."""
    return Word(w.letters, w.base_index - steps)
