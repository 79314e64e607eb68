"""Decomposing a wiring diagram into two smaller ones.

Four moves are recognised:

* block: sigma fixes [[j]] setwise, so the diagram is two disjoint diagrams;
* type 1 at row j: a curve runs through gap j and gap j+1, crossing one wire
  and no crossing point;
* type 2 at a tourist, a letter occurring once, which either factor may keep;
* type 3 at row j: row j-1 has exactly two crossings and every row-j crossing
  lies between them; the upper factor gets one synthesized a_j.

For block, type 1 and type 2 the census of sigma is the product of the censuses
of the factors; for type 3 the product counts every cell twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complex import ComponentReport, component_report
from .perm import Permutation, ReducedWord, blocks, canonical_word, format_word, is_reduced


@dataclass(frozen=True)
class SplitMove:
    kind: str
    site: int
    side: str = ""
    w1: ReducedWord = field(default=None, compare=False)  # type: ignore[assignment]
    w2: ReducedWord = field(default=None, compare=False)  # type: ignore[assignment]
    witness: tuple = field(default=(), compare=False)

    @property
    def halved(self) -> bool:
        return self.kind == "type3"

    def to_json(self) -> dict:
        out = {"kind": self.kind, "site": self.site,
               "factors": [format_word(self.w1.letters), format_word(self.w2.letters)],
               "factorSizes": [self.w1.n + 1, self.w2.n + 1]}
        if self.side:
            out["side"] = self.side
        if self.witness:
            out["witness"] = list(self.witness)
        return out


def _sub(letters: tuple[int, ...], keep, shift: int) -> tuple[int, ...]:
    return tuple(i - shift for i in letters if keep(i))


def apply_block(w: ReducedWord, j: int) -> tuple[ReducedWord, ReducedWord]:
    if j in w.letters:
        raise ValueError(f"the word does not block at {j}")
    return (ReducedWord(_sub(w.letters, lambda i: i < j, 0), j - 1),
            ReducedWord(_sub(w.letters, lambda i: i > j, j), w.n - j))


def _gap_path(w: ReducedWord, lo: int, hi: int) -> tuple[int, ...] | None:
    """Switch column for a curve from gap lo to gap hi (or back) crossing one wire.

    Columns are the letter positions; the curve occupies one gap per column and
    may not sit on the row of the letter in that column.  Returns the witness
    (start gap, number of letters before the switch) or None.
    """
    letters = w.letters
    l = len(letters)
    for start, end in ((lo, hi), (hi, lo)):
        # the curve holds `start` on columns < c and `end` on columns >= c
        for c in range(l + 1):
            if all(letters[k] != start for k in range(c)) and all(letters[k] != end for k in range(c, l)):
                return (start, c)
    return None


def detect_split1(w: ReducedWord, j: int) -> tuple[bool, tuple]:
    if not 1 <= j < w.n:
        return False, ()
    path = _gap_path(w, j, j + 1)
    return (path is not None), (path or ())


def apply_split1(w: ReducedWord, j: int) -> tuple[ReducedWord, ReducedWord]:
    ok, _ = detect_split1(w, j)
    if not ok:
        raise ValueError(f"no type-1 split at row {j}")
    w1 = ReducedWord(_sub(w.letters, lambda i: i <= j, 0), j)
    w2 = ReducedWord(_sub(w.letters, lambda i: i > j, j), w.n - j)
    return w1, w2


def _split2_words(w: ReducedWord, m: int, side: str) -> tuple[tuple[int, ...], int, tuple[int, ...], int]:
    if side == "high":
        # tourist kept by the upper factor
        return (_sub(w.letters, lambda i: i <= m, 0), m,
                _sub(w.letters, lambda i: i > m, m), w.n - m)
    return (_sub(w.letters, lambda i: i < m, 0), m - 1,
            _sub(w.letters, lambda i: i >= m, m - 1), w.n - m + 1)


def detect_tourists(w: ReducedWord) -> list[int]:
    """Positions of letters that occur once and leave reduced residual words on both sides."""
    out = []
    for k, m in enumerate(w.letters, start=1):
        if w.letters.count(m) != 1:
            continue
        ok = True
        for side in ("high", "low"):
            a, na, b, nb = _split2_words(w, m, side)
            if not (is_reduced(a, na) and is_reduced(b, nb)):
                ok = False
        if ok:
            out.append(k)
    return out


def apply_split2(w: ReducedWord, k: int, side: str = "high") -> tuple[ReducedWord, ReducedWord]:
    if k not in detect_tourists(w):
        raise ValueError(f"position {k} is not a tourist")
    if side not in ("high", "low"):
        raise ValueError("side must be 'high' or 'low'")
    a, na, b, nb = _split2_words(w, w[k], side)
    return ReducedWord(a, na), ReducedWord(b, nb)


def detect_apply_split3(w: ReducedWord, j: int) -> tuple[ReducedWord, ReducedWord]:
    if not 2 <= j <= w.n:
        raise ValueError("type-3 splits need a row above")
    above = [k for k, i in enumerate(w.letters) if i == j - 1]
    if len(above) != 2:
        raise ValueError(f"row {j - 1} does not have exactly two crossings")
    p, q = above
    rows_j = [k for k, i in enumerate(w.letters) if i == j]
    if not rows_j or not all(p < k < q for k in rows_j):
        raise ValueError(f"row {j} is not enclosed by the two crossings of row {j - 1}")
    upper = []
    placed = False
    for k, i in enumerate(w.letters):
        if i < j:
            upper.append(i)
        elif i == j and not placed:
            upper.append(j)
            placed = True
    w1 = ReducedWord(tuple(upper), j)
    w2 = ReducedWord(_sub(w.letters, lambda i: i >= j, j - 1), w.n - j + 1)
    return w1, w2


def detect_moves(w: ReducedWord) -> list[SplitMove]:
    moves = []
    blocked, _ = blocks(w.perm())
    for j in sorted(blocked):
        w1, w2 = apply_block(w, j)
        moves.append(SplitMove("block", j, "", w1, w2))
    for j in range(1, w.n):
        if j in blocked or j + 1 in blocked:
            continue
        ok, path = detect_split1(w, j)
        if ok:
            w1, w2 = apply_split1(w, j)
            moves.append(SplitMove("type1", j, "", w1, w2, path))
    for k in detect_tourists(w):
        for side in ("high", "low"):
            w1, w2 = apply_split2(w, k, side)
            if w1.n == 0 or w2.n == 0:
                # one factor is S_1: nothing is gained
                continue
            moves.append(SplitMove("type2", k, side, w1, w2))
    for j in range(2, w.n + 1):
        try:
            w1, w2 = detect_apply_split3(w, j)
        except ValueError:
            continue
        moves.append(SplitMove("type3", j, "", w1, w2))
    return moves


def _convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _half(x: int) -> float:
    return x // 2 if x % 2 == 0 else x / 2


@dataclass
class ProductCheck:
    move: SplitMove
    components: int
    predicted_components: float
    cells: list[int]
    predicted_cells: list[float]

    @property
    def ok(self) -> bool:
        return self.components == self.predicted_components and self.cells == self.predicted_cells


def verify_product_lemma(move: SplitMove, w: ReducedWord,
                         cache: dict[Permutation, ComponentReport] | None = None) -> ProductCheck:
    cache = {} if cache is None else cache

    def report(x: ReducedWord) -> ComponentReport:
        p = x.perm()
        if p not in cache:
            cache[p] = component_report(canonical_word(p))
        return cache[p]

    whole = report(w)
    r1, r2 = report(move.w1), report(move.w2)
    comps = r1.components * r2.components
    cells = _convolve(r1.totals["cells"], r2.totals["cells"])
    if move.halved:
        comps = _half(comps)
        cells = [_half(c) for c in cells]
    return ProductCheck(move, whole.components, comps, whole.totals["cells"], cells)
