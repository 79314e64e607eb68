"""Permutations of [[n+1]], reduced words and their wiring diagrams.

Conventions used throughout the package:

* A permutation is stored in one-line notation with 1-based values; the value
  at index ``i - 1`` is ``i^sigma``.
* Permutations act on the right, ``i^(sigma tau) = (i^sigma)^tau``, so a word
  ``a_{i_1} ... a_{i_l}`` is read left to right.  Right multiplication by
  ``a_i`` swaps the *values* ``i`` and ``i + 1`` in the one-line notation,
  left multiplication swaps the *positions* ``i`` and ``i + 1``.
* Letter positions inside a word are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Permutation:
    oneline: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.oneline) != list(range(1, len(self.oneline) + 1)):
            raise ValueError(f"not a permutation: {self.oneline}")

    @property
    def n(self) -> int:
        return len(self.oneline) - 1

    @property
    def size(self) -> int:
        return len(self.oneline)

    def __call__(self, i: int) -> int:
        return self.oneline[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # right action: apply self first, then other
        if other.size != self.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(other(v) for v in self.oneline))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, v in enumerate(self.oneline, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def inversions(self) -> set[tuple[int, int]]:
        s = self.oneline
        return {(i + 1, j + 1) for i in range(len(s)) for j in range(i + 1, len(s)) if s[i] > s[j]}

    def inv(self) -> int:
        s = self.oneline
        return sum(1 for i in range(len(s)) for j in range(i + 1, len(s)) if s[i] > s[j])

    def cycles(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(1, self.size + 1):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            out.append(tuple(cyc))
        return out

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.oneline, start=1))

    def to_string(self) -> str:
        return format_perm(self)

    def __str__(self) -> str:
        return "[" + format_perm(self) + "]"


def identity(size: int) -> Permutation:
    return Permutation(tuple(range(1, size + 1)))


def top(size: int) -> Permutation:
    """The longest permutation [n+1, n, ..., 1]."""
    return Permutation(tuple(range(size, 0, -1)))


def format_perm(p: Permutation) -> str:
    if p.size <= 9:
        return "".join(str(v) for v in p.oneline)
    return ",".join(str(v) for v in p.oneline)


def parse_perm(text: str) -> Permutation:
    text = text.strip().strip("[]")
    if "," in text:
        values = tuple(int(t) for t in text.split(","))
    else:
        values = tuple(int(c) for c in text)
    return Permutation(values)


def apply_letter(oneline: Sequence[int], i: int) -> tuple[int, ...]:
    """One-line notation of sigma * a_i (swap values i and i+1)."""
    return tuple(i + 1 if v == i else i if v == i + 1 else v for v in oneline)


def word_to_perm(letters: Iterable[int], n: int) -> Permutation:
    """Evaluate a word in the generators a_1..a_n of S_{n+1}."""
    s = list(range(1, n + 2))
    # wires[p] is the label sitting at position p; the final one-line is its inverse
    wires = list(range(1, n + 2))
    for i in letters:
        if not 1 <= i <= n:
            raise ValueError(f"letter a_{i} out of range for n={n}")
        wires[i - 1], wires[i] = wires[i], wires[i - 1]
    for p, label in enumerate(wires, start=1):
        s[label - 1] = p
    return Permutation(tuple(s))


def is_reduced(letters: Sequence[int], n: int) -> bool:
    return word_to_perm(letters, n).inv() == len(letters)


@dataclass(frozen=True)
class ReducedWord:
    letters: tuple[int, ...]
    n: int

    def __post_init__(self) -> None:
        if not is_reduced(self.letters, self.n):
            raise ValueError(f"word {format_word(self.letters)} is not reduced in S_{self.n + 1}")

    @property
    def length(self) -> int:
        return len(self.letters)

    def perm(self) -> Permutation:
        return word_to_perm(self.letters, self.n)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, k: int) -> int:
        """Letter at 1-based position k."""
        return self.letters[k - 1]

    def __str__(self) -> str:
        return format_word(self.letters)


def format_word(letters: Iterable[int]) -> str:
    return ",".join(str(i) for i in letters)


def parse_word(text: str, n: int | None = None) -> ReducedWord:
    text = text.strip()
    letters = tuple(int(t) for t in text.split(",") if t.strip()) if text else ()
    if n is None:
        n = max(letters, default=1)
    return ReducedWord(letters, n)


def canonical_word(sigma: Permutation) -> ReducedWord:
    """Deterministic reduced word: strip the leftmost-position descent repeatedly."""
    s = list(sigma.oneline)
    letters = []
    while True:
        for i in range(len(s) - 1):
            if s[i] > s[i + 1]:
                break
        else:
            break
        # sigma = a_{i+1} * sigma', where sigma' has positions i, i+1 swapped
        letters.append(i + 1)
        s[i], s[i + 1] = s[i + 1], s[i]
    return ReducedWord(tuple(letters), sigma.n)


def reduced_words(sigma: Permutation, limit: int | None = None) -> list[ReducedWord]:
    """All reduced words of sigma (optionally the first ``limit`` in lexicographic order)."""
    out: list[ReducedWord] = []
    n = sigma.n

    def rec(s: list[int], prefix: list[int]) -> bool:
        if limit is not None and len(out) >= limit:
            return False
        if all(s[i] < s[i + 1] for i in range(len(s) - 1)):
            out.append(ReducedWord(tuple(prefix), n))
            return True
        for i in range(len(s) - 1):
            if s[i] > s[i + 1]:
                s[i], s[i + 1] = s[i + 1], s[i]
                prefix.append(i + 1)
                rec(s, prefix)
                prefix.pop()
                s[i], s[i + 1] = s[i + 1], s[i]
        return True

    rec(list(sigma.oneline), [])
    return out


def all_perms(size: int) -> list[Permutation]:
    from itertools import permutations

    return [Permutation(p) for p in permutations(range(1, size + 1))]


def blocks(sigma: Permutation) -> tuple[frozenset[int], int]:
    """Positions j in 1..n where sigma maps [[j]] onto itself, and their number b."""
    out = set()
    high = 0
    for j in range(1, sigma.size):
        high = max(high, sigma(j))
        if high == j:
            out.add(j)
    return frozenset(out), len(out)


def direct_sum(s0: Permutation, s1: Permutation) -> Permutation:
    j = s0.size
    return Permutation(s0.oneline + tuple(v + j for v in s1.oneline))


def crossing_table(w: ReducedWord) -> list[tuple[int, int]]:
    """Sorted wire labels meeting at each crossing of the wiring diagram."""
    wires = list(range(1, w.n + 2))
    pairs = []
    seen = set()
    for i in w.letters:
        a, b = wires[i - 1], wires[i]
        pair = (min(a, b), max(a, b))
        if pair in seen:
            raise ValueError("word is not reduced: a pair of wires crosses twice")
        seen.add(pair)
        pairs.append(pair)
        wires[i - 1], wires[i] = b, a
    return pairs


def strong_leq(s0: Permutation, s1: Permutation) -> bool:
    """Bruhat order via the lifting property along one reduced word of s1."""
    if s0.size != s1.size:
        raise ValueError("size mismatch")
    v = list(s0.oneline)
    inv_v = s0.inv()
    for i in canonical_word(s1).letters:
        # s1 = a_i * rest with a_i a left descent; replace v by min(v, a_i v)
        if v[i - 1] > v[i]:
            v[i - 1], v[i] = v[i], v[i - 1]
            inv_v -= 1
    return inv_v == 0


def regions(w: ReducedWord) -> list[tuple[int, int]]:
    """Pairs (k1, k2) of consecutive same-row letter positions."""
    last: dict[int, int] = {}
    out = []
    for k, i in enumerate(w.letters, start=1):
        if i in last:
            out.append((last[i], k))
        last[i] = k
    return sorted(out)


def click_region(w: ReducedWord, k1: int, k2: int) -> frozenset[int]:
    """Positions whose signs flip when clicking the region anchored at (k1, k2)."""
    if not 1 <= k1 < k2 <= w.length:
        raise ValueError("anchors out of order or out of range")
    r = w[k1]
    if w[k2] != r:
        raise ValueError("anchors are not on the same row")
    if any(w[k] == r for k in range(k1 + 1, k2)):
        raise ValueError("anchors are not consecutive on their row")
    inside = {k for k in range(k1 + 1, k2) if abs(w[k] - r) == 1}
    return frozenset({k1, k2} | inside)


def row_counts(w: ReducedWord) -> dict[int, int]:
    counts: dict[int, int] = {}
    for i in w.letters:
        counts[i] = counts.get(i, 0) + 1
    return counts
