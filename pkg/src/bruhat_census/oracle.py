"""Exact-rational matrix checks for unit lower triangular matrices.

Everything here works over ``fractions.Fraction``; there is no floating point.
Rows and columns are 1-based in the public API.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import combinations
from typing import Iterable, Sequence

from .ancestry import CosetData, ancestry_chain, is_thin, target
from .clifford import (
    CliffordElement,
    Dyadic,
    QuatMonomial,
    SignedPermMatrix,
    acute_word,
    e_action,
    pi_quat,
    pi_word,
)
from .perm import Permutation, ReducedWord, parse_perm

Number = Fraction | int


class RationalLowerTriangular:
    """Unit lower triangular matrix with exact rational entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence[Number]]):
        size = len(rows)
        data = tuple(tuple(Fraction(x) for x in r) for r in rows)
        for i, r in enumerate(data):
            if len(r) != size:
                raise ValueError("matrix is not square")
            if r[i] != 1:
                raise ValueError(f"diagonal entry ({i + 1},{i + 1}) is not 1")
            if any(r[j] != 0 for j in range(i + 1, size)):
                raise ValueError(f"row {i + 1} has entries above the diagonal")
        self.rows = data

    @classmethod
    def identity(cls, size: int) -> "RationalLowerTriangular":
        return cls([[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def from_below(cls, below: Sequence[Sequence[Number]]) -> "RationalLowerTriangular":
        """Build from the strictly-lower rows 2..size, row k holding k-1 entries."""
        size = len(below) + 1
        rows = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            rows[i][i] = Fraction(1)
        for k, r in enumerate(below, start=2):
            if len(r) != k - 1:
                raise ValueError(f"row {k} needs {k - 1} entries below the diagonal")
            for j, x in enumerate(r):
                rows[k - 1][j] = Fraction(x)
        return cls(rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.rows[i - 1][j - 1]

    def __mul__(self, other: "RationalLowerTriangular") -> "RationalLowerTriangular":
        if other.size != self.size:
            raise ValueError("size mismatch")
        size = self.size
        a, b = self.rows, other.rows
        # lower triangular: only j <= k <= i contribute
        out = [[sum((a[i][k] * b[k][j] for k in range(j, i + 1)), Fraction(0)) if j <= i else Fraction(0)
                for j in range(size)] for i in range(size)]
        return RationalLowerTriangular(out)

    def inverse(self) -> "RationalLowerTriangular":
        size = self.size
        a = self.rows
        inv = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
        # forward substitution, column by column
        for j in range(size):
            for i in range(j + 1, size):
                inv[i][j] = -sum((a[i][k] * inv[k][j] for k in range(j, i)), Fraction(0))
        return RationalLowerTriangular(inv)

    def conjugate_signs(self, signs: Sequence[int]) -> "RationalLowerTriangular":
        """The action of E on the matrix: entry (i, j) picks up E_j ... E_{i-1}."""
        size = self.size
        out = [list(r) for r in self.rows]
        for i in range(size):
            for j in range(i):
                s = 1
                for k in range(j, i):
                    s *= signs[k]
                out[i][j] = s * out[i][j]
        return RationalLowerTriangular(out)

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
        return determinant([[self.rows[i - 1][j - 1] for j in cols] for i in rows])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalLowerTriangular) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RationalLowerTriangular([{body}])"


def determinant(m: Sequence[Sequence[Fraction]]) -> Fraction:
    a = [list(r) for r in m]
    size = len(a)
    det = Fraction(1)
    for c in range(size):
        p = next((r for r in range(c, size) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, size):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                for k in range(c, size):
                    a[r][k] -= f * a[c][k]
    return det


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    a = [list(r) for r in m]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        p = next((k for k in range(r, rows) if a[k][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for k in range(r + 1, rows):
            if a[k][c] != 0:
                f = a[k][c] / a[r][c]
                for j in range(c, cols):
                    a[k][j] -= f * a[r][j]
        r += 1
        if r == rows:
            break
    return r


# ---------------------------------------------------------------------------
# lambda products


def lambda_generator(size: int, i: int, t: Number) -> RationalLowerTriangular:
    """I + t E_{i+1,i}."""
    rows = [[Fraction(int(r == c)) for c in range(size)] for r in range(size)]
    rows[i][i - 1] = Fraction(t)
    return RationalLowerTriangular(rows)


def lambda_product(w: ReducedWord | Sequence[int], ts: Sequence[Number], size: int | None = None
                   ) -> RationalLowerTriangular:
    letters = tuple(w.letters) if isinstance(w, ReducedWord) else tuple(w)
    if size is None:
        size = w.n + 1 if isinstance(w, ReducedWord) else max(letters, default=0) + 1
    if len(ts) != len(letters):
        raise ValueError("need one parameter per letter")
    rows = [[Fraction(int(r == c)) for c in range(size)] for r in range(size)]
    for i, t in zip(letters, ts):
        # right multiplication by lambda_i(t) adds t * column i+1 to column i
        t = Fraction(t)
        if t:
            for r in range(size):
                if rows[r][i]:
                    rows[r][i - 1] += t * rows[r][i]
    return RationalLowerTriangular(rows)


# ---------------------------------------------------------------------------
# Bruhat cells


def bruhat_perm(L: RationalLowerTriangular) -> Permutation:
    """The sigma with L in Up P_sigma Up, read off the ranks of southwest blocks."""
    size = L.size
    a = L.rows
    # ranks[r][j] = rank of rows r..size, columns 1..j (1-based); padded with zeros
    ranks = [[0] * (size + 1) for _ in range(size + 2)]
    for r in range(1, size + 1):
        for j in range(1, size + 1):
            ranks[r][j] = rank([row[:j] for row in a[r - 1:]])
    image = [0] * size
    for r in range(1, size + 1):
        for j in range(1, size + 1):
            if ranks[r][j] - ranks[r + 1][j] - ranks[r][j - 1] + ranks[r + 1][j - 1] == 1:
                image[r - 1] = j
    return Permutation(tuple(image))


def signed_cell(L: RationalLowerTriangular | Sequence[Sequence[Number]]) -> SignedPermMatrix:
    """Signed permutation matrix of the Up+ double coset containing L.

    Two-sided elimination with moves that stay inside Up+: a multiple of a lower
    row is added to a higher row, a multiple of an earlier column to a later
    column.  The pivot of each column is its lowest unused nonzero row and its
    sign survives.  Since L = QR with R in Up+, this is also the cell of Q.
    """
    rows = L.rows if isinstance(L, RationalLowerTriangular) else L
    a = [[Fraction(x) for x in r] for r in rows]
    size = len(a)
    used = set()
    image = [0] * size
    signs = [0] * size
    for c in range(size):
        p = next((r for r in range(size - 1, -1, -1) if r not in used and a[r][c] != 0), None)
        if p is None:
            raise ArithmeticError("singular matrix in signed_cell")
        used.add(p)
        pivot = a[p][c]
        for r in range(p):
            if a[r][c] != 0:
                f = a[r][c] / pivot
                for k in range(size):
                    a[r][k] -= f * a[p][k]
        for k in range(c + 1, size):
            if a[p][k] != 0:
                f = a[p][k] / pivot
                for r in range(size):
                    a[r][k] -= f * a[r][c]
        image[p] = c + 1
        signs[p] = 1 if pivot > 0 else -1
    return SignedPermMatrix(Permutation(tuple(image)), tuple(signs))


def matmul(a: Sequence[Sequence[Number]], b: Sequence[Sequence[Number]]) -> list[list[Fraction]]:
    return [[sum((Fraction(a[i][k]) * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def random_upper_positive(size: int, rng: random.Random) -> list[list[Fraction]]:
    """Random upper triangular matrix with positive diagonal (an element of Up+)."""
    return [[Fraction(rng.randint(1, 5), rng.randint(1, 3)) if i == j
             else Fraction(rng.randint(-4, 4), rng.randint(1, 3)) if j > i else Fraction(0)
             for j in range(size)] for i in range(size)]


def pi_of(w: ReducedWord, z: CliffordElement, data: CosetData | None = None) -> SignedPermMatrix:
    """Signed permutation matrix of z = acute(sigma) u."""
    data = data or CosetData(w)
    u = QuatMonomial.decode(data.code_of(z))
    return pi_word(w.n + 1, w.letters) * pi_quat(w.n + 1, u)


# ---------------------------------------------------------------------------
# the factorization L = L0 L1 with L0 in Lo_sigma and L1 in Lo_{sigma eta}


def lo_support(sigma: Permutation) -> set[tuple[int, int]]:
    """Entries (i, j), i > j, that may be nonzero in Lo_sigma."""
    return {(j, i) for i, j in sigma.inversions()}


def in_lo(L: RationalLowerTriangular, sigma: Permutation) -> bool:
    support = lo_support(sigma)
    return all(L[i, j] == 0 for i in range(1, L.size + 1) for j in range(1, i)
               if (i, j) not in support)


def lo_factorize(L: RationalLowerTriangular, sigma: Permutation
                 ) -> tuple[RationalLowerTriangular, RationalLowerTriangular]:
    size = L.size
    if sigma.size != size:
        raise ValueError("size mismatch")
    support = lo_support(sigma)
    l0 = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    l1 = [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]
    # band by band: L_ij = L0_ij + L1_ij + sum_{j<k<i} L0_ik L1_kj, exactly one of L0_ij, L1_ij free
    for band in range(1, size):
        for j in range(size - band):
            i = j + band
            rest = L.rows[i][j] - sum((l0[i][k] * l1[k][j] for k in range(j + 1, i)), Fraction(0))
            if (i + 1, j + 1) in support:
                l0[i][j] = rest
            else:
                l1[i][j] = rest
    return RationalLowerTriangular(l0), RationalLowerTriangular(l1)


# ---------------------------------------------------------------------------
# positivity


def index_geq(i0: Sequence[int], i1: Sequence[int]) -> bool:
    """Entrywise comparison of sorted index sets, i0 >= i1."""
    return all(a >= b for a, b in zip(sorted(i0), sorted(i1)))


def lower_minors(size: int, kmax: int) -> Iterable[tuple[tuple[int, ...], tuple[int, ...]]]:
    idx = range(1, size + 1)
    for k in range(1, min(kmax, size) + 1):
        for rows in combinations(idx, k):
            for cols in combinations(idx, k):
                if index_geq(rows, cols):
                    yield rows, cols


def is_totally_positive(L: RationalLowerTriangular, kmax: int | None = None) -> bool:
    return all(L.minor(r, c) > 0 for r, c in lower_minors(L.size, kmax or L.size))


def minors_nonnegative(L: RationalLowerTriangular, kmax: int | None = None) -> bool:
    return all(L.minor(r, c) >= 0 for r, c in lower_minors(L.size, kmax or L.size))


@dataclass
class PosWitness:
    word: ReducedWord
    params: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.params) != self.word.length or any(t <= 0 for t in self.params):
            raise ValueError("a positive witness needs one positive parameter per letter")

    def matrix(self) -> RationalLowerTriangular:
        return lambda_product(self.word, self.params)


# ---------------------------------------------------------------------------
# explicit regions in the 3x3 frame L = [1 0 0; x 1 0; z y 1]


def s3_matrix(x: Number, y: Number, z: Number) -> RationalLowerTriangular:
    return RationalLowerTriangular([[1, 0, 0], [x, 1, 0], [z, y, 1]])


def s3_region(x: Number, y: Number, z: Number) -> CliffordElement | None:
    """Element z' of the coset for the longest permutation with the matrix in BL_{z'}.

    Returns None off the Bruhat cell (z = 0 or z = x y).
    """
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    xy = x * y
    if z == 0 or z == xy:
        return None
    h1, h2 = 1 << 1, 1 << 2
    r = _over_root2
    if z > max(0, xy):
        return r({0: 1, h1 | h2: -1})
    if z < min(0, xy):
        return r({0: 1, h1 | h2: 1})
    if x > 0:
        return r({h1: 1, h2: 1}) if z > 0 else r({h1: 1, h2: -1})
    return r({h1: -1, h2: -1}) if z > 0 else r({h1: -1, h2: 1})


def _over_root2(signed: dict[int, int]) -> CliffordElement:
    return CliffordElement(2, {s: Dyadic(c, 1) for s, c in signed.items()})


# ---------------------------------------------------------------------------
# random-parameter cross check of the signed cell against P(eps)


@dataclass
class SignCellCheck:
    word: ReducedWord
    signs: tuple[int, ...]
    params: tuple[Fraction, ...]
    perm_ok: bool
    cell_ok: bool
    thin_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.perm_ok and self.cell_ok and self.thin_ok is not False


def random_params(signs: Sequence[int], rng: random.Random) -> tuple[Fraction, ...]:
    return tuple(s * Fraction(rng.randint(1, 9), rng.randint(1, 4)) for s in signs)


def sign_cell_crosscheck(w: ReducedWord, signs: Sequence[int], rng: random.Random | None = None,
                         data: CosetData | None = None) -> SignCellCheck:
    """Compare the signed cell of a lambda product with the element its sign vector labels."""
    rng = rng or random.Random(0)
    data = data or CosetData(w)
    signs = tuple(1 if s > 0 else -1 for s in signs)
    params = random_params(signs, rng)
    L = lambda_product(w, params)
    cell = signed_cell(L)
    perm_ok = bruhat_perm(L) == w.perm() and cell.perm == w.perm()
    z = target(w, signs)
    # every sign vector is a dimension-0 ancestry
    ancestry_chain(w, signs)
    cell_ok = cell == pi_of(w, z, data)
    thin_ok = None
    if is_thin(w, signs):
        E = _thin_e(w, signs)
        thin_ok = z == e_action(E, acute_word(w))
    return SignCellCheck(w, signs, params, perm_ok, cell_ok, thin_ok)


def _thin_e(w: ReducedWord, signs: Sequence[int]) -> tuple[int, ...]:
    E = [1] * w.n
    for i, s in zip(w.letters, signs):
        E[i - 1] = s
    return tuple(E)


# ---------------------------------------------------------------------------
# closed loops of matrices inside one Bruhat cell


@dataclass
class PolyMatrix:
    """Unit lower triangular matrix whose entries are polynomials in t."""

    name: str
    below: list[list[list[Fraction]]]

    @property
    def size(self) -> int:
        return len(self.below) + 1

    def at(self, t: Number) -> RationalLowerTriangular:
        t = Fraction(t)
        return RationalLowerTriangular.from_below(
            [[sum((c * t ** k for k, c in enumerate(p)), Fraction(0)) for p in row] for row in self.below])


@dataclass
class GammaFamily:
    name: str
    sigma: Permutation
    paths: list[PolyMatrix]


def _parse_poly(text: str | int) -> list[Fraction]:
    """Coefficients (constant first) of a linear expression such as '2-3t' or '-t'."""
    if isinstance(text, int):
        return [Fraction(text)]
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    coeffs: dict[int, Fraction] = {}
    k = 0
    while k < len(s):
        sign = -1 if s[k] == "-" else 1
        k += 1
        start = k
        while k < len(s) and s[k] not in "+-":
            k += 1
        term = s[start:k]
        if term.endswith("t"):
            c = term[:-1]
            deg = 1
        else:
            c, deg = term, 0
        if c.endswith("*"):
            c = c[:-1]
        value = Fraction(c) if c else Fraction(1)
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + sign * value
    top = max(coeffs)
    return [coeffs.get(d, Fraction(0)) for d in range(top + 1)]


def load_gamma_families(path: str | None = None) -> list[GammaFamily]:
    if path is None:
        text = resources.files("bruhat_census").joinpath("data/gamma_paths.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    raw = json.loads(text)
    families = []
    for fam in raw["families"]:
        paths = []
        for k, rows in enumerate(fam["paths"], start=1):
            below = [[_parse_poly(x) for x in row] for row in rows]
            pm = PolyMatrix(f"{fam['name']}:{k}", below)
            pm.at(0)  # validates the shape
            paths.append(pm)
        families.append(GammaFamily(fam["name"], parse_perm(fam["sigma"]), paths))
    return families


@dataclass
class GammaReport:
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": self.failures}


SAMPLE_T = (Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1))


def gamma_fixture_check(families: list[GammaFamily] | None = None) -> GammaReport:
    families = load_gamma_families() if families is None else families
    report = GammaReport()
    for fam in families:
        m = len(fam.paths)
        for k, path in enumerate(fam.paths):
            nxt = fam.paths[(k + 1) % m]
            report.checked += 1
            if path.at(1) != nxt.at(-1):
                report.failures.append(f"{fam.name}: path {k + 1} at t=1 does not meet path {(k + 1) % m + 1} at t=-1")
            for t in SAMPLE_T:
                report.checked += 1
                if bruhat_perm(path.at(t)) != fam.sigma:
                    report.failures.append(f"{fam.name}: path {k + 1} leaves the cell at t={t}")
        # the loop stays inside one open set BL_z, so the signed cell never changes
        cells = {(k + 1, t): signed_cell(path.at(t))
                 for k, path in enumerate(fam.paths) for t in SAMPLE_T + (Fraction(0),)}
        first = cells[(1, SAMPLE_T[0])]
        for (k, t), cell in sorted(cells.items()):
            report.checked += 1
            if cell != first:
                report.failures.append(f"{fam.name}: path {k} changes signed cell at t={t}")
    return report
