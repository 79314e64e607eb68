"""Preancestries, ancestries and the counting identities for a reduced word.

A preancestry is a sequence over {-2, 0, +2}; an ancestry is a sequence over
{-2, -1, +1, +2}.  Marked letters (|entry| = 2) move the running permutation
rho_k = rho_{k-1} a_{i_k}; the chain starts and ends at the top permutation.

Sign vectors are stored as bitmasks: bit k-1 is set when entry k is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .clifford import (
    ONE,
    CliffordElement,
    Dyadic,
    HGroup,
    QuatMonomial,
    acute_word,
    commutator_sign,
    gen,
    quat_group,
    quat_tables,
)
from .perm import Permutation, ReducedWord, blocks, click_region, crossing_table

SYMBOLS = {-2: "B", -1: "b", 1: "w", 2: "W"}
VALUES = {v: k for k, v in SYMBOLS.items()}


def format_ancestry(eps: Sequence[int]) -> str:
    return "".join(SYMBOLS[e] for e in eps)


def parse_ancestry(text: str) -> tuple[int, ...]:
    return tuple(VALUES[c] for c in text.strip())


def sign_mask(eps: Sequence[int]) -> int:
    m = 0
    for k, e in enumerate(eps):
        if e > 0:
            m |= 1 << k
    return m


def signs_from_mask(mask: int, length: int) -> tuple[int, ...]:
    return tuple(1 if mask >> k & 1 else -1 for k in range(length))


def dimension(eps: Sequence[int]) -> int:
    return sum(1 for e in eps if e == 2)


# ---------------------------------------------------------------------------
# preancestries


def enumerate_preancestries(w: ReducedWord) -> list[tuple[int, ...]]:
    """All preancestries of w, ordered by dimension and then by search order."""
    letters = w.letters
    l = len(letters)
    size = w.n + 1
    # pos[v] = position of value v in the one-line notation of rho (1-based values)
    pos = [0] + [size + 1 - v for v in range(1, size + 1)]
    out: list[tuple[int, ...]] = []
    eps = [0] * l

    def rec(k: int, deficit: int) -> None:
        if deficit > l - k:
            return
        if k == l:
            out.append(tuple(eps))
            return
        i = letters[k]
        if pos[i] < pos[i + 1]:
            # ascent: forced move up
            eps[k] = 2
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
            rec(k + 1, deficit - 1)
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
        else:
            eps[k] = 0
            rec(k + 1, deficit)
            eps[k] = -2
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
            rec(k + 1, deficit + 1)
            pos[i], pos[i + 1] = pos[i + 1], pos[i]
        eps[k] = 0

    rec(0, 0)
    out.sort(key=dimension)
    return out


def rho_chain(w: ReducedWord, eps0: Sequence[int]) -> list[Permutation]:
    """The permutations rho_0..rho_l, validating the preancestry rules."""
    if len(eps0) != w.length:
        raise ValueError("length mismatch")
    size = w.n + 1
    rho = list(range(size, 0, -1))
    chain = [Permutation(tuple(rho))]
    inv = size * (size - 1) // 2
    for k, (i, e) in enumerate(zip(w.letters, eps0)):
        pi, pj = rho.index(i), rho.index(i + 1)
        ascent = pi < pj
        if ascent and abs(e) != 2 or ascent and e == -2:
            raise ValueError(f"letter {k + 1} is an ascent and must carry +2")
        if not ascent and e == 2:
            raise ValueError(f"letter {k + 1} is a descent and cannot carry +2")
        if abs(e) == 2:
            rho[pi], rho[pj] = rho[pj], rho[pi]
            inv += 1 if ascent else -1
        chain.append(Permutation(tuple(rho)))
    if inv != size * (size - 1) // 2:
        raise ValueError("chain does not return to the top permutation")
    return chain


def is_preancestry(w: ReducedWord, eps0: Sequence[int]) -> bool:
    try:
        rho_chain(w, eps0)
    except ValueError:
        return False
    return all(e in (-2, 0, 2) for e in eps0)


def unmarked(eps0: Sequence[int]) -> list[int]:
    return [k for k, e in enumerate(eps0, start=1) if abs(e) != 2]


def marked(eps0: Sequence[int]) -> list[int]:
    return [k for k, e in enumerate(eps0, start=1) if abs(e) == 2]


def preancestry_of(eps: Sequence[int]) -> tuple[int, ...]:
    return tuple(e if abs(e) == 2 else 0 for e in eps)


# ---------------------------------------------------------------------------
# ancestries


@dataclass(frozen=True)
class Ancestry:
    eps: tuple[int, ...]
    xi: tuple[int, ...]
    q: tuple[QuatMonomial, ...]
    rho: tuple[Permutation, ...] = field(repr=False)

    @property
    def dimension(self) -> int:
        return dimension(self.eps)

    @property
    def preancestry(self) -> tuple[int, ...]:
        return preancestry_of(self.eps)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(1 if e > 0 else -1 for e in self.eps)

    @property
    def q_last(self) -> QuatMonomial:
        return self.q[-1]

    def __str__(self) -> str:
        return format_ancestry(self.eps)


def ancestry_chain(w: ReducedWord, eps: Sequence[int]) -> Ancestry:
    """Derive xi and the q chain of an ancestry from its entries, validating it."""
    eps = tuple(eps)
    if any(e not in (-2, -1, 1, 2) for e in eps):
        raise ValueError("ancestry entries must lie in {-2,-1,+1,+2}")
    rho = rho_chain(w, preancestry_of(eps))
    q = ONE
    qs = [q]
    xis = []
    for i, e in zip(w.letters, eps):
        h = gen(i)
        commutes = commutator_sign(i, q) == 1
        if e == 2:
            xis.append(1)
            q = q if commutes else -(h * q)
        elif e == -2:
            xis.append(1)
            q = h * q if commutes else q
        elif e == commutator_sign(i, q):
            xis.append(0)
        else:
            xis.append(2)
            q = q * h
        qs.append(q)
    return Ancestry(eps, tuple(xis), tuple(qs), tuple(rho))


def target(w: ReducedWord, eps: Sequence[int]) -> CliffordElement:
    """P(eps) as the product of acute/grave generators along the word."""
    return acute_word(w, [1 if e > 0 else -1 for e in eps])


def target_from_q(w: ReducedWord, q_last: QuatMonomial) -> CliffordElement:
    return acute_word(w) * q_last.inverse()


def vertex_codes(w: ReducedWord) -> list[int]:
    """Encoded q_l of every sign vector, indexed by its bitmask."""
    right, comm = quat_tables(w.n)
    codes = [ONE.encode()]
    for k, i in enumerate(w.letters):
        r, c = right[i], comm[i]
        neg = [0] * len(codes)
        pos = [0] * len(codes)
        for idx, q in enumerate(codes):
            # q moves to q*h_i exactly when the sign differs from the commutator
            if c[q] == 1:
                pos[idx] = q
                neg[idx] = r[q]
            else:
                pos[idx] = r[q]
                neg[idx] = q
        codes = neg + pos
    return codes


def fixed_mask(eps0: Sequence[int]) -> tuple[int, int]:
    """(bits forced positive, bits free to choose) for a preancestry."""
    forced = 0
    free = 0
    for k, e in enumerate(eps0):
        if e == 2:
            forced |= 1 << k
        elif e == 0:
            free |= 1 << k
    return forced, free


def submasks(free: int) -> Iterator[int]:
    sub = 0
    while True:
        yield sub
        if sub == free:
            return
        sub = (sub - free) & free


def expand(eps0: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All ancestries over a preancestry, in a fixed order."""
    forced, free = fixed_mask(eps0)
    for sub in submasks(free):
        m = forced | sub
        yield tuple(e if abs(e) == 2 else (1 if m >> k & 1 else -1) for k, e in enumerate(eps0))


def enumerate_ancestries(w: ReducedWord) -> list[Ancestry]:
    out = []
    for eps0 in enumerate_preancestries(w):
        for eps in expand(eps0):
            out.append(ancestry_chain(w, eps))
    return out


def is_thin(w: ReducedWord, eps: Sequence[int]) -> bool:
    if dimension(eps) != 0 or any(abs(e) == 2 for e in eps):
        raise ValueError("thinness is defined for dimension-0 ancestries")
    row_sign: dict[int, int] = {}
    for i, e in zip(w.letters, eps):
        if row_sign.setdefault(i, e) != e:
            return False
    return True


def thin_masks(w: ReducedWord) -> list[int]:
    rows = sorted(set(w.letters))
    out = []
    for choice in range(1 << len(rows)):
        positive = {r for j, r in enumerate(rows) if choice >> j & 1}
        out.append(sum(1 << k for k, i in enumerate(w.letters) if i in positive))
    return out


def anchors(eps: Sequence[int]) -> tuple[int, int]:
    ks = marked(eps)
    if len(ks) != 2:
        raise ValueError("expected exactly two marked positions")
    return ks[0], ks[1]


def click_mask(w: ReducedWord, k1: int, k2: int) -> int:
    return sum(1 << (k - 1) for k in click_region(w, k1, k2))


def upper_set_dim1(w: ReducedWord, eps: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two vertices bounding a one-dimensional cell."""
    anc = ancestry_chain(w, eps)
    if anc.dimension != 1:
        raise ValueError("expected a one-dimensional ancestry")
    k1, k2 = anchors(eps)
    v1 = anc.signs
    flips = click_region(w, k1, k2)
    v2 = tuple(-s if k in flips else s for k, s in enumerate(v1, start=1))
    return v1, v2


# ---------------------------------------------------------------------------
# counting identities


def union_partition(size: int, pairs: Sequence[tuple[int, int]]) -> list[tuple[int, ...]]:
    parent = list(range(size + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(1, size + 1):
        groups.setdefault(find(v), []).append(v)
    return sorted(tuple(g) for g in groups.values())


def eps0_partition(w: ReducedWord, eps0: Sequence[int]) -> list[tuple[int, ...]]:
    """Cycles of sigma joined by the wire pairs of the unmarked crossings."""
    sigma = w.perm()
    pairs = []
    for cyc in sigma.cycles():
        pairs += [(cyc[0], v) for v in cyc[1:]]
    crossings = crossing_table(w)
    pairs += [crossings[k - 1] for k in unmarked(eps0)]
    return union_partition(w.n + 1, pairs)


def dim_bound_check(w: ReducedWord, eps0: Sequence[int]) -> bool:
    """sigma is the reversed product of the unmarked transpositions, and 2d <= l + c - n - 1."""
    size = w.n + 1
    crossings = crossing_table(w)
    p = list(range(1, size + 1))
    for k in reversed(unmarked(eps0)):
        a, b = crossings[k - 1]
        # right-multiply by the transposition (a b)
        p = [b if v == a else a if v == b else v for v in p]
    sigma = w.perm()
    c = len(sigma.cycles())
    d = dimension(eps0)
    return tuple(p) == sigma.oneline and 2 * d <= w.length + c - w.n - 1


@dataclass(frozen=True)
class CountPrediction:
    value: int
    exact: Fraction
    integral: bool
    length: int
    dim: int
    b: int
    h_size: int
    in_h: bool
    real: Dyadic


class CosetData:
    """Shared data for the coset acute(sigma) Quat_{n+1}, keyed by u with z = acute(sigma) u."""

    def __init__(self, w: ReducedWord):
        self.word = w
        self.n = w.n
        self.acute = acute_word(w)
        self.elements = {u.encode(): self.acute * u for u in quat_group(w.n)}
        self.by_key = {z: code for code, z in self.elements.items()}
        positive = [code for code, z in sorted(self.elements.items()) if z.real_part().sign() > 0]
        self.base = positive[0] if positive else None

    def code_of(self, z: CliffordElement) -> int:
        try:
            return self.by_key[z]
        except KeyError:
            raise ValueError("element does not lie in the coset acute(sigma) Quat") from None

    def z_of_q(self, q_last: int) -> CliffordElement:
        """P for an ancestry whose last q is the encoded monomial q_last."""
        return self.elements[QuatMonomial.decode(q_last).inverse().encode()]

    def relative_support(self, code: int) -> int:
        """Support of u u0^{-1}, with u0 the base element of positive real part."""
        return (QuatMonomial.decode(code) * QuatMonomial.decode(self.base).inverse()).support


def predicted_counts(w: ReducedWord, eps0: Sequence[int], z: CliffordElement,
                     data: CosetData | None = None, closed_form: bool = True) -> CountPrediction:
    """Number of ancestries over eps0 labelling z, from the sum and difference formulas.

    With ``closed_form`` the dimension-0 case uses its direct expression instead.
    """
    data = data or CosetData(w)
    code = data.code_of(z)
    l = w.length
    d = dimension(eps0)
    _, b = blocks(w.perm())
    h = HGroup(w.n, eps0_partition(w, eps0))
    real = z.real_part()
    # conjugating by acute(sigma) permutes the diagonal within each block of X,
    # so z = q z0 has q in H_X exactly when u u0^{-1} does
    in_h = data.base is not None and h.contains_support(data.relative_support(code))
    total = Fraction(1 << (l - 2 * d + 1), h.size) if in_h else Fraction(0)
    if d == 0 and in_h and closed_form:
        # closed form for the empty preancestry
        diff_half = real.times_sqrt2_power(l - 2)
        exact = Fraction(1 << (l - w.n + b - 1)) if l - w.n + b - 1 >= 0 else Fraction(1, 1 << (w.n - b + 1 - l))
        exact += diff_half.to_fraction()
    else:
        diff = real.times_sqrt2_power(l - 2 * d).to_fraction()
        exact = (total + diff) / 2
    integral = exact.denominator == 1 and exact >= 0
    return CountPrediction(int(exact) if integral else 0, exact, integral, l, d, b, h.size, in_h, real)
