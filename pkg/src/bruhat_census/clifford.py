"""Exact arithmetic in the finite group Quat_{n+1} and the even Clifford algebra.

Quat_{n+1} is generated by h_1..h_n with h_i^2 = -1, adjacent generators
anticommuting and distant ones commuting.  Its elements are +-h_S for
S a subset of {1..n}; a support S is stored as a bitmask with bit i for h_i.

Coefficients are numbers m * 2^(-e/2) (``Dyadic``), enough for every product
of the half-turn elements (1 +- h_i)/sqrt(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .perm import Permutation, ReducedWord, identity


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def monomial_sign(s: int, t: int) -> int:
    """Sign of h_S h_T = +-h_{S xor T} for ascending monomials."""
    # each t passes the s = t+1 in S (anticommute) and meets t itself (square -1)
    flips = bin(t & (s >> 1)).count("1") + bin(s & t).count("1")
    return -1 if flips & 1 else 1


@dataclass(frozen=True, order=True)
class QuatMonomial:
    sign: int
    support: int

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +-1")

    def __mul__(self, other: "QuatMonomial") -> "QuatMonomial":
        return QuatMonomial(self.sign * other.sign * monomial_sign(self.support, other.support),
                            self.support ^ other.support)

    def __neg__(self) -> "QuatMonomial":
        return QuatMonomial(-self.sign, self.support)

    def inverse(self) -> "QuatMonomial":
        sq = self * self
        return self if sq.sign == 1 else -self

    @property
    def indices(self) -> list[int]:
        return bits(self.support)

    def encode(self) -> int:
        return (self.support << 1) | (1 if self.sign < 0 else 0)

    @staticmethod
    def decode(code: int) -> "QuatMonomial":
        return QuatMonomial(-1 if code & 1 else 1, code >> 1)

    def __str__(self) -> str:
        body = "".join(f"h{i}" for i in self.indices) or "1"
        return ("-" if self.sign < 0 else "") + body


ONE = QuatMonomial(1, 0)


def gen(i: int) -> QuatMonomial:
    return QuatMonomial(1, 1 << i)


def quat_mul(q1: QuatMonomial, q2: QuatMonomial) -> QuatMonomial:
    return q1 * q2


def commutator_sign(i: int, q: QuatMonomial) -> int:
    """+1 if h_i commutes with q, -1 if they anticommute."""
    near = q.support & ((1 << (i - 1)) | (1 << (i + 1)))
    return -1 if bin(near).count("1") & 1 else 1


def quat_group(n: int) -> list[QuatMonomial]:
    return [QuatMonomial(s, m << 1) for m in range(1 << n) for s in (1, -1)]


@dataclass(frozen=True)
class Dyadic:
    """The real number m * 2^(-e/2)."""

    m: int
    e: int = 0

    def __post_init__(self) -> None:
        if self.e < 0:
            raise ValueError("exponent must be non-negative")
        m, e = self._canon(self.m, self.e)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "e", e)

    @staticmethod
    def _canon(m: int, e: int) -> tuple[int, int]:
        if m == 0:
            return 0, 0
        while e >= 2 and m % 2 == 0:
            m //= 2
            e -= 2
        return m, e

    def __add__(self, other: "Dyadic") -> "Dyadic":
        if self.m == 0:
            return other
        if other.m == 0:
            return self
        if (self.e - other.e) % 2:
            raise ArithmeticError("adding numbers of mixed rationality")
        e = max(self.e, other.e)
        return Dyadic(self.m * (1 << ((e - self.e) // 2)) + other.m * (1 << ((e - other.e) // 2)), e)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.m, self.e)

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __mul__(self, other: "Dyadic | int") -> "Dyadic":
        if isinstance(other, int):
            return Dyadic(self.m * other, self.e)
        return Dyadic(self.m * other.m, self.e + other.e)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.m == 0

    def sign(self) -> int:
        return (self.m > 0) - (self.m < 0)

    def square(self) -> Fraction:
        return Fraction(self.m * self.m, 1 << self.e)

    def to_fraction(self) -> Fraction:
        if self.e % 2:
            raise ArithmeticError(f"{self} is irrational")
        return Fraction(self.m, 1 << (self.e // 2))

    def times_sqrt2_power(self, k: int) -> "Dyadic":
        """Multiply by 2^(k/2) for any integer k."""
        if k >= 0:
            if k % 2:
                return Dyadic(self.m * (1 << ((k + 1) // 2)), self.e + 1)
            return Dyadic(self.m * (1 << (k // 2)), self.e)
        return Dyadic(self.m, self.e - k)

    def __float__(self) -> float:
        return self.m * 2 ** (-self.e / 2)

    def __lt__(self, other: "Dyadic") -> bool:
        d = self - other
        return d.m < 0

    def __str__(self) -> str:
        if self.e == 0:
            return str(self.m)
        if self.e % 2 == 0:
            return f"{self.m}/{1 << (self.e // 2)}"
        return f"{self.m}/(2^{self.e // 2}*sqrt2)" if self.e > 1 else f"{self.m}/sqrt2"


ZERO = Dyadic(0)
UNIT = Dyadic(1)


class CliffordElement:
    """Sparse combination of positive monomials h_S with Dyadic coefficients."""

    __slots__ = ("n", "terms", "_key")

    def __init__(self, n: int, terms: Mapping[int, Dyadic] | None = None):
        self.n = n
        self.terms = {s: c for s, c in (terms or {}).items() if not c.is_zero()}
        self._key: tuple | None = None

    @staticmethod
    def scalar(n: int, c: Dyadic = UNIT) -> "CliffordElement":
        return CliffordElement(n, {0: c})

    @staticmethod
    def monomial(n: int, q: QuatMonomial) -> "CliffordElement":
        return CliffordElement(n, {q.support: Dyadic(q.sign)})

    def __add__(self, other: "CliffordElement") -> "CliffordElement":
        terms = dict(self.terms)
        for s, c in other.terms.items():
            terms[s] = terms.get(s, ZERO) + c
        return CliffordElement(self.n, terms)

    def __neg__(self) -> "CliffordElement":
        return CliffordElement(self.n, {s: -c for s, c in self.terms.items()})

    def __sub__(self, other: "CliffordElement") -> "CliffordElement":
        return self + (-other)

    def __mul__(self, other: "CliffordElement | QuatMonomial") -> "CliffordElement":
        if isinstance(other, QuatMonomial):
            other = CliffordElement.monomial(self.n, other)
        terms: dict[int, Dyadic] = {}
        for s, a in self.terms.items():
            for t, b in other.terms.items():
                c = a * b
                if monomial_sign(s, t) < 0:
                    c = -c
                u = s ^ t
                terms[u] = terms.get(u, ZERO) + c
        return CliffordElement(self.n, terms)

    def __rmul__(self, other: QuatMonomial) -> "CliffordElement":
        return CliffordElement.monomial(self.n, other) * self

    def scale(self, c: Dyadic) -> "CliffordElement":
        return CliffordElement(self.n, {s: v * c for s, v in self.terms.items()})

    def real_part(self) -> Dyadic:
        return self.terms.get(0, ZERO)

    def reverse(self) -> "CliffordElement":
        """Reverse the order of generators in every monomial (the inverse on unit spinors)."""
        terms = {}
        for s, c in self.terms.items():
            rev = ONE
            for i in reversed(bits(s)):
                rev = rev * gen(i)
            terms[s] = c if rev.sign > 0 else -c
        return CliffordElement(self.n, terms)

    def as_monomial(self) -> QuatMonomial | None:
        if len(self.terms) != 1:
            return None
        ((s, c),) = self.terms.items()
        if c.e != 0 or abs(c.m) != 1:
            return None
        return QuatMonomial(c.m, s)

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(sorted((tuple(bits(s)), c.m, c.e) for s, c in self.terms.items()))
        return self._key

    def serialize(self) -> list[list]:
        return [[list(sup), m, e] for sup, m, e in self.key()]

    @staticmethod
    def deserialize(n: int, data: Sequence[Sequence]) -> "CliffordElement":
        return CliffordElement(n, {mask_of(sup): Dyadic(m, e) for sup, m, e in data})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CliffordElement) and self.n == other.n and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.n, self.key()))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for sup, m, e in self.key():
            name = "".join(f"h{i}" for i in sup) or "1"
            parts.append(f"({Dyadic(m, e)}){name}")
        return " + ".join(parts)

    __repr__ = __str__


def inner_product(a: CliffordElement, b: CliffordElement) -> Dyadic:
    total = ZERO
    for s, c in a.terms.items():
        if s in b.terms:
            total = total + c * b.terms[s]
    return total


def real_part(z: CliffordElement) -> Dyadic:
    return z.real_part()


def half_turn(n: int, i: int, sign: int = 1) -> CliffordElement:
    """(1 + sign * h_i)/sqrt(2): the acute (sign=+1) or grave (sign=-1) generator."""
    c = Dyadic(1, 1)
    return CliffordElement(n, {0: c, 1 << i: c if sign > 0 else -c})


def acute_word(w: ReducedWord | Sequence[int], signs: Sequence[int] | None = None,
               n: int | None = None) -> CliffordElement:
    letters = tuple(w.letters) if isinstance(w, ReducedWord) else tuple(w)
    if n is None:
        n = w.n if isinstance(w, ReducedWord) else max(letters, default=1)
    z = CliffordElement.scalar(n)
    for k, i in enumerate(letters):
        z = z * half_turn(n, i, 1 if signs is None else signs[k])
    return z


def e_action(signs: Sequence[int] | int, z: CliffordElement) -> CliffordElement:
    """Apply the sign vector E (E_1..E_n, or a bitmask of the -1 entries) to z."""
    neg = signs if isinstance(signs, int) else mask_of(i + 1 for i, e in enumerate(signs) if e < 0)
    terms = {}
    for s, c in z.terms.items():
        terms[s] = -c if bin(s & neg).count("1") & 1 else c
    return CliffordElement(z.n, terms)


def e_action_mono(neg: int, q: QuatMonomial) -> QuatMonomial:
    return -q if bin(q.support & neg).count("1") & 1 else q


# ---------------------------------------------------------------------------
# signed permutation matrices


@dataclass(frozen=True)
class SignedPermMatrix:
    """Row k of the matrix is sign[k-1] * e_{perm(k)}^T."""

    perm: Permutation
    row_sign: tuple[int, ...]

    def __mul__(self, other: "SignedPermMatrix") -> "SignedPermMatrix":
        p = self.perm * other.perm
        signs = tuple(self.row_sign[k] * other.row_sign[self.perm.oneline[k] - 1]
                      for k in range(self.perm.size))
        return SignedPermMatrix(p, signs)

    def inverse(self) -> "SignedPermMatrix":
        pinv = self.perm.inverse()
        signs = [0] * self.perm.size
        for k in range(self.perm.size):
            signs[self.perm.oneline[k] - 1] = self.row_sign[k]
        return SignedPermMatrix(pinv, tuple(signs))

    def matrix(self) -> list[list[int]]:
        size = self.perm.size
        rows = [[0] * size for _ in range(size)]
        for k in range(size):
            rows[k][self.perm.oneline[k] - 1] = self.row_sign[k]
        return rows

    def determinant(self) -> int:
        sgn = -1 if self.perm.inv() % 2 else 1
        for s in self.row_sign:
            sgn *= s
        return sgn

    def is_diagonal(self) -> bool:
        return self.perm.is_identity()


def signed_identity(size: int) -> SignedPermMatrix:
    return SignedPermMatrix(identity(size), (1,) * size)


def pi_generator(size: int, i: int, kind: str) -> SignedPermMatrix:
    """Image of h_i ('hat'), the acute (+) or grave (-) generator."""
    if kind == "hat":
        signs = [1] * size
        signs[i - 1] = signs[i] = -1
        return SignedPermMatrix(identity(size), tuple(signs))
    swap = list(range(1, size + 1))
    swap[i - 1], swap[i] = i + 1, i
    signs = [1] * size
    if kind == "acute":
        signs[i - 1] = -1
    elif kind == "grave":
        signs[i] = -1
    else:
        raise ValueError(kind)
    return SignedPermMatrix(Permutation(tuple(swap)), tuple(signs))


def pi_quat(size: int, q: QuatMonomial) -> SignedPermMatrix:
    """Diagonal matrix of q; the sign of q is lost (kernel {+-1})."""
    return SignedPermMatrix(identity(size), diagonal_signs(size, q.support))


def diagonal_signs(size: int, support: int) -> tuple[int, ...]:
    out = []
    for j in range(1, size + 1):
        c = ((support >> (j - 1)) & 1) + ((support >> j) & 1)
        out.append(-1 if c % 2 else 1)
    return tuple(out)


def pi_word(size: int, letters: Sequence[int], signs: Sequence[int] | None = None) -> SignedPermMatrix:
    """Image of the product of acute/grave generators along a word."""
    m = signed_identity(size)
    for k, i in enumerate(letters):
        kind = "acute" if signs is None or signs[k] > 0 else "grave"
        m = m * pi_generator(size, i, kind)
    return m


# ---------------------------------------------------------------------------
# subgroups H_X, orbits, thin statistics


def partition_product_ok(size: int, support: int, blocks: Iterable[Iterable[int]]) -> bool:
    d = diagonal_signs(size, support)
    for A in blocks:
        p = 1
        for j in A:
            p *= d[j - 1]
        if p != 1:
            return False
    return True


class HGroup:
    """The subgroup H_X of Quat_{n+1} attached to a partition X of [[n+1]]."""

    def __init__(self, n: int, partition: Iterable[Iterable[int]]):
        self.n = n
        self.partition = [tuple(sorted(A)) for A in partition]
        covered = sorted(j for A in self.partition for j in A)
        if covered != list(range(1, n + 2)):
            raise ValueError("not a partition of [[n+1]]")
        self._ok = [partition_product_ok(n + 1, m << 1, self.partition) for m in range(1 << n)]

    def __contains__(self, q: QuatMonomial) -> bool:
        return self._ok[q.support >> 1]

    def contains_support(self, support: int) -> bool:
        return self._ok[support >> 1]

    @property
    def size(self) -> int:
        return 2 * sum(self._ok)

    def expected_size(self) -> int:
        return 1 << (self.n + 2 - len(self.partition))

    def elements(self) -> list[QuatMonomial]:
        return [q for q in quat_group(self.n) if q in self]


def h_sigma(sigma: Permutation) -> HGroup:
    return HGroup(sigma.n, sigma.cycles())


def coset(w: ReducedWord) -> list[tuple[QuatMonomial, CliffordElement]]:
    """All pairs (u, acute(sigma) * u) for u in Quat_{n+1}."""
    a = acute_word(w)
    return [(u, a * u) for u in quat_group(w.n)]


@dataclass
class Orbit:
    representative: CliffordElement
    members: list[CliffordElement]

    @property
    def size(self) -> int:
        return len(self.members)


def orbit_of(z: CliffordElement) -> set[CliffordElement]:
    return {e_action(neg << 1, z) for neg in range(1 << z.n)}


def orbit_decomposition(w: ReducedWord) -> list[Orbit]:
    """Group the coset acute(sigma) Quat_{n+1} into orbits of the sign-vector action."""
    elements = [z for _, z in coset(w)]
    seen: set[CliffordElement] = set()
    orbits = []
    for z in elements:
        if z in seen:
            continue
        members = orbit_of(z)
        seen |= members
        ordered = sorted(members, key=lambda x: x.key())
        orbits.append(Orbit(ordered[0], ordered))
    orbits.sort(key=lambda o: o.representative.key())
    return orbits


@dataclass
class ThinStats:
    """Thin vertices of sigma: 2^n of them, spread evenly over the orbit of acute(sigma).

    ``c_tilde`` is log2 of the stabilizer of acute(sigma) in the sign group, so
    each z in the orbit carries 2^c_tilde thin vertices and the orbit has
    2^(n - c_tilde) elements.
    """

    c_tilde: int
    orbit: set[CliffordElement]
    stabilizer_size: int
    n: int

    def nl_thin(self, z: CliffordElement) -> int:
        return 1 << self.c_tilde if z in self.orbit else 0


def thin_stats(w: ReducedWord) -> ThinStats:
    a = acute_word(w)
    stab = sum(1 for neg in range(1 << w.n) if e_action(neg << 1, a) == a)
    c = stab.bit_length() - 1
    if 1 << c != stab:
        raise ArithmeticError("stabilizer size is not a power of two")
    return ThinStats(c, orbit_of(a), stab, w.n)


@lru_cache(maxsize=None)
def quat_tables(n: int) -> tuple[list[list[int]], list[list[int]]]:
    """For encoded q: right[i][q] = code of q*h_i and comm[i][q] = [h_i, q]."""
    size = 1 << (n + 2)
    right = [[0] * size for _ in range(n + 1)]
    comm = [[1] * size for _ in range(n + 1)]
    for code in range(size):
        q = QuatMonomial.decode(code)
        for i in range(1, n + 1):
            right[i][code] = (q * gen(i)).encode()
            comm[i][code] = commutator_sign(i, q)
    return right, comm


def all_sign_vectors(n: int) -> Iterable[tuple[int, ...]]:
    return product((1, -1), repeat=n)
