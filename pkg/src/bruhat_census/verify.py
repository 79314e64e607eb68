"""Self-check suites: closed formulas, split identities, the matrix oracle and the loop fixtures."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from .ancestry import (
    CosetData,
    dim_bound_check,
    dimension,
    enumerate_preancestries,
    fixed_mask,
    predicted_counts,
    submasks,
    vertex_codes,
)
from .clifford import QuatMonomial, thin_stats
from .complex import ComponentReport, SigmaCensus, component_report
from .oracle import (
    RationalLowerTriangular,
    bruhat_perm,
    sign_cell_crosscheck,
    gamma_fixture_check,
    in_lo,
    is_totally_positive,
    lambda_product,
    lo_factorize,
    matmul,
    minors_nonnegative,
    pi_of,
    random_upper_positive,
    s3_matrix,
    s3_region,
    signed_cell,
)
from .perm import Permutation, ReducedWord, all_perms, blocks, canonical_word, parse_perm, parse_word
from .splits import detect_moves, verify_product_lemma

# Known component totals of individual permutations, as (word or one-line, n, components).
KNOWN_TOTALS: list[tuple[str, int, int]] = [
    ("1,2,1", 2, 6),
    ("1,2,3,2,1", 3, 18),
    ("2,1,3,2,1", 3, 16),
    ("2,1,4,5", 5, 16),
    ("1,2,3,5,4", 5, 32),
    ("1,4,5,4,3,2,1", 5, 72),
    ("2,1,4,3,2,5,4", 5, 72),
    ("325614", 5, 72),
    ("351624", 5, 72),
    ("361452", 5, 108),
    ("4,3,2,1,5,4,3,2,1", 5, 96),
    ("3,4,3,2,1,5,4,3,2,1", 5, 112),
    ("2,4,3,2,1,5,4,3,2,1", 5, 112),
    ("3,2,4,3,2,1,5,4,3,2,1", 5, 104),
    ("2,3,4,3,2,1,5,4,3,2,1", 5, 128),
    ("1,3,4,3,2,1,5,4,3,2,1", 5, 128),
    ("2,1,4,3,2,1,5,4,3,2,1", 5, 104),
    ("3,2,1,4,3,2,5,4,3,2,1", 5, 96),
    ("3,2,1,4,3,2,1,5,4,3,2", 5, 96),
    ("2,1,3,4,3,2,1,5,4,3,2", 5, 104),
    ("2,3,2,4,3,2,1,5,4,3,2,1", 5, 112),
    ("3,2,1,4,3,2,1,5,4,3,2,1", 5, 96),
    ("2,1,3,4,3,2,1,5,4,3,2,1", 5, 112),
    ("2,3,2,1,4,3,2,5,4,3,2,1", 5, 96),
    ("2,3,2,1,4,3,2,1,5,4,3,2", 5, 96),
    ("1,3,2,1,4,3,2,5,4,3,2,1", 5, 96),
    ("1,3,2,1,4,3,2,1,5,4,3,2", 5, 96),
    ("1,2,3,4,3,2,1,5,4,3,2,1", 5, 144),
    ("563412", 5, 100),
]


def resolve(label: str, n: int) -> ReducedWord:
    """A word given as '2,1,3' or a permutation given in one-line notation."""
    if "," in label:
        return parse_word(label, n)
    return canonical_word(parse_perm(label))


def spot_words() -> list[ReducedWord]:
    return [resolve(label, n) for label, n, _ in KNOWN_TOTALS]


@dataclass
class SuiteReport:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    seed: int | None = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, message: str | Callable[[], str]) -> None:
        self.checked += 1
        if not condition:
            self.failures.append(message() if callable(message) else message)

    def to_json(self) -> dict:
        out = {"suite": self.name, "ok": self.ok, "checked": self.checked,
               "failures": self.failures[:50], "failureCount": len(self.failures)}
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _timed(fn):
    def run(*args, **kwargs) -> SuiteReport:
        start = time.perf_counter()
        report = fn(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        return report
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


# ---------------------------------------------------------------------------
# formulas


def enumerated_counts(w: ReducedWord, eps0: Sequence[int], codes: Sequence[int]) -> dict[int, int]:
    """Ancestries over eps0, tallied by the encoded last q."""
    forced, free = fixed_mask(eps0)
    out: dict[int, int] = {}
    for sub in submasks(free):
        q = codes[forced | sub]
        out[q] = out.get(q, 0) + 1
    return out


def check_formulas_for(w: ReducedWord, report: SuiteReport) -> None:
    data = CosetData(w)
    codes = vertex_codes(w)
    census = SigmaCensus(w)
    predicted_chi: dict[int, int] = {}
    for eps0 in enumerate_preancestries(w):
        d = dimension(eps0)
        report.expect(dim_bound_check(w, eps0), f"{w}: dimension bound fails for {eps0}")
        found = enumerated_counts(w, eps0, codes)
        for ucode, z in data.elements.items():
            q = QuatMonomial.decode(ucode).inverse().encode()
            count = found.get(q, 0)
            pair = predicted_counts(w, eps0, z, data, closed_form=False)
            report.expect(pair.value == count and pair.exact == count,
                          lambda: f"{w}: {eps0} at {z}: enumerated {count}, sum/difference {pair.exact}")
            if d == 0:
                closed = predicted_counts(w, eps0, z, data)
                report.expect(closed.value == count,
                              lambda: f"{w}: {z}: enumerated {count}, closed form {closed.exact}")
            predicted_chi[ucode] = predicted_chi.get(ucode, 0) + (-count if d % 2 else count)
    for ucode, z in data.elements.items():
        c = census.census(z)
        report.expect(c.chi == predicted_chi.get(ucode, 0), f"{w}: Euler characteristic mismatch at {z}")
        report.expect(sum(comp.chi for comp in c.components) == c.chi,
                      f"{w}: component Euler characteristics do not add up at {z}")


@_timed
def check_formulas(words: Iterable[ReducedWord] | None = None) -> SuiteReport:
    """Enumerated counts against the closed formulas, for S_4 and the permutations of KNOWN_TOTALS."""
    if words is None:
        words = [canonical_word(p) for p in all_perms(4)] + spot_words()
    report = SuiteReport("formulas")
    for w in words:
        check_formulas_for(w, report)
    return report


# ---------------------------------------------------------------------------
# thin components and known totals


@_timed
def check_thin(perms: Iterable[Permutation] | None = None) -> SuiteReport:
    """Thin vertices: 2^(n-b) in all, 2^c_tilde per z on the orbit of acute(sigma)."""
    perms = all_perms(6) if perms is None else perms
    report = SuiteReport("thin")
    for p in perms:
        w = canonical_word(p)
        _, b = blocks(p)
        census = SigmaCensus(w)
        stats = thin_stats(w)
        total = 0
        for z in census.data.elements.values():
            thin = census.census(z).thin
            total += thin
            if b == 0:
                report.expect(thin == stats.nl_thin(z), f"{p}: {thin} thin vertices at {z}, expected {stats.nl_thin(z)}")
        report.expect(total == 1 << (p.n - b), f"{p}: {total} thin vertices in all")
        if b == 0:
            c = len(p.cycles())
            report.expect(c - 2 <= stats.c_tilde <= c, f"{p}: c_tilde={stats.c_tilde} outside [c-2, c] for c={c}")
            report.expect(len(stats.orbit) == 1 << (p.n - stats.c_tilde), f"{p}: orbit size")
    return report


@_timed
def check_totals() -> SuiteReport:
    report = SuiteReport("totals")
    for label, n, expected in KNOWN_TOTALS:
        got = component_report(resolve(label, n)).components
        report.expect(got == expected, f"{label}: {got} components, expected {expected}")
    return report


# ---------------------------------------------------------------------------
# splits


@_timed
def check_splits(perms: Iterable[Permutation] | None = None) -> SuiteReport:
    """Every detected move satisfies the product identity for component and cell counts."""
    perms = all_perms(6) if perms is None else perms
    report = SuiteReport("splits")
    cache: dict[Permutation, ComponentReport] = {}
    for p in perms:
        w = canonical_word(p)
        for move in detect_moves(w):
            check = verify_product_lemma(move, w, cache)
            report.expect(check.ok, lambda: (f"{p}: {move.kind} at {move.site} {move.side}: "
                                            f"{check.components} vs {check.predicted_components}"))
    return report


# ---------------------------------------------------------------------------
# matrix oracle


@_timed
def check_oracle(seed: int = 0, size: int = 4) -> SuiteReport:
    """Signed cells of lambda products, the 3x3 regions, factorization and positivity."""
    rng = random.Random(seed)
    report = SuiteReport("oracle", seed=seed)
    for p in all_perms(size):
        w = canonical_word(p)
        data = CosetData(w)
        for signs in product((1, -1), repeat=w.length):
            r = sign_cell_crosscheck(w, signs, rng, data)
            report.expect(r.ok, f"{p}: signs {signs} with parameters {r.params}")
        L = lambda_product(w, [Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in w.letters])
        report.expect(minors_nonnegative(L, 3), f"{p}: positive parameters give a negative minor")
        report.expect(bruhat_perm(L) == p, f"{p}: positive product leaves the cell")
        if p.inv() == size * (size - 1) // 2:
            report.expect(is_totally_positive(L), f"{p}: positive product of the longest word is not totally positive")
        # two-sided Up+ invariance
        cell = signed_cell(L)
        moved = matmul(matmul(random_upper_positive(size, rng), L.rows), random_upper_positive(size, rng))
        report.expect(signed_cell(moved) == cell, f"{p}: signed cell changes under Up+ multiplication")
    eta = ReducedWord((1, 2, 1), 2)
    eta_data = CosetData(eta)
    for _ in range(400):
        x, y, z = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        region = s3_region(x, y, z)
        L = s3_matrix(x, y, z)
        if region is None:
            report.expect(bruhat_perm(L) != eta.perm(), f"({x},{y},{z}) is off the cell but has the top permutation")
        else:
            report.expect(signed_cell(L) == pi_of(eta, region, eta_data),
                          f"({x},{y},{z}): signed cell does not match its region")
    for _ in range(40):
        sigma = Permutation(tuple(rng.sample(range(1, 6), 5)))
        L = RationalLowerTriangular.from_below(
            [[Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(k)] for k in range(1, 5)])
        l0, l1 = lo_factorize(L, sigma)
        opposite = Permutation(tuple(6 - v for v in sigma.oneline))
        report.expect(l0 * l1 == L and in_lo(l0, sigma) and in_lo(l1, opposite),
                      f"{sigma}: factorization of {L} failed")
    return report


@_timed
def check_gamma() -> SuiteReport:
    report = SuiteReport("gamma")
    g = gamma_fixture_check()
    report.checked = g.checked
    report.failures = list(g.failures)
    return report


SUITES: dict[str, Callable[..., SuiteReport]] = {
    "formulas": check_formulas,
    "splits": check_splits,
    "oracle": check_oracle,
    "gamma": check_gamma,
    "thin": check_thin,
    "totals": check_totals,
}
