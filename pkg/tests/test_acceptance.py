"""The ten acceptance criteria, each with its runtime bound.

Every criterion prints a single PASS/FAIL line; the lines are repeated in the
terminal summary at the end of the run.
"""

import random
import time
from contextlib import contextmanager

from bruhat_census.ancestry import CosetData
from bruhat_census.clifford import CliffordElement, Dyadic, QuatMonomial, acute_word, mask_of, orbit_of
from bruhat_census.complex import SigmaCensus, build_census, component_report
from bruhat_census.perm import all_perms, canonical_word, parse_perm, parse_word, reduced_words, top
from bruhat_census.splits import detect_moves, verify_product_lemma
from bruhat_census.verify import check_formulas, check_gamma, check_splits, check_thin

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"C{number} FAIL  {title}  ({elapsed:.2f} s): {type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    line = f"C{number} {'PASS' if ok else 'FAIL'}  {title}  ({elapsed:.2f} s, limit {limit:g} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"criterion {number} took {elapsed:.1f} s, limit {limit} s"


def monomial_times(w, text):
    """The element q * acute(sigma) for a monomial written like '-h1h3'."""
    sign = -1 if text.startswith("-") else 1
    idx = [int(t) for t in text.lstrip("-").split("h") if t]
    return CliffordElement.monomial(w.n, QuatMonomial(sign, mask_of(idx))) * acute_word(w)


def shape(census):
    return sorted((tuple(c.cells), c.chi) for c in census.components if not c.thin)


def test_c1_s3_ground_truth():
    with criterion(1, "S_3 ground truth", 1):
        w = canonical_word(top(3))
        census = SigmaCensus(w)
        pieces = census.all_censuses()
        assert sum(1 for c in pieces if c.counts) == 6
        r = Dyadic(1, 1)
        z = CliffordElement(2, {0: r, mask_of([1, 2]): -r})
        c = census.census(z)
        assert c.counts == [2, 1] and len(c.components) == 1 and c.chi == 1
        negative = [p for p in pieces if p.z.real_part().sign() < 0]
        assert len(negative) == 2 and all(not p.counts for p in negative)


def test_c2_eta_component_counts():
    expected = {2: 2, 3: 6, 4: 20, 5: 52}
    with criterion(2, "BL_eta components 2, 6, 20, 52 and 96 = 32 thin + 64 thick", 600):
        start = time.perf_counter()
        for size, count in expected.items():
            report = component_report(top(size))
            assert report.components == count
            assert report.totals["thin"] == 2 ** (size - 1)
        assert time.perf_counter() - start < 10, "n <= 4 exceeded 10 s"
        report = component_report(top(6))
        assert report.components == 96 == 3 * 2 ** 5
        assert report.totals["thin"] == 32
        assert report.components - report.totals["thin"] == 64


def test_c3_eta_s6_thick_census():
    with criterion(3, "eta in S_6 at -z0: (480, 1120, 864, 228, 6), chi 2", 300):
        w = canonical_word(top(6))
        data = CosetData(w)
        z0 = data.elements[data.base]
        assert z0.real_part().sign() > 0
        census = build_census(w, -z0)
        assert census.counts == [480, 1120, 864, 228, 6]
        assert len(census.components) == 1
        assert census.chi == 2


# orbit of q * acute(sigma): (size, non-thin components, thin vertices per z)
CASE_563412 = {
    "h0": (8, [((60, 112, 68, 16, 1), 1)], 4),
    "h1": (4, [((80, 168, 128, 48, 10, 1), 1)], 0),
    "h2": (8, [((64, 112, 60, 12, 1), 1)], 0),
    "h1h2": (8, [((64, 112, 60, 12, 1), 1)], 0),
    "h3": (8, [((64, 112, 52, 4), 0)], 0),
    "h1h3": (8, [((64, 112, 52, 4), 0)], 0),
    "h2h3": (8, [((64, 112, 60, 12, 1), 1)], 0),
    "h4": (8, [((64, 112, 60, 12, 1), 1)], 0),
    "-h1": (4, [((24, 28, 4), 0)] * 2, 0),
}


def test_c4_563412_chapter():
    with criterion(4, "[563412]: nine orbits, per-orbit cells, 100 = 72 + 24 + 4", 120):
        w = canonical_word(parse_perm("563412"))
        report = component_report(w)
        assert sorted(o.size for o in report.orbits) == sorted([8, 4, 8, 8, 8, 8, 8, 8, 4])
        census = SigmaCensus(w)
        covered = set()
        for key, (size, comps, thin) in CASE_563412.items():
            z = acute_word(w) if key == "h0" else monomial_times(w, key)
            orbit = orbit_of(z)
            assert len(orbit) == size
            assert not covered & orbit
            covered |= orbit
            c = census.census(z)
            assert shape(c) == sorted(comps), key
            assert c.thin == thin
        assert len(covered) == 2 ** 6
        t = report.totals
        assert t["components"] == 100
        assert t["chiHistogram"] == {"0": 24, "1": 76}
        # 72 = 32 thin + 40 thick with chi 1 and top dimension <= 4; 4 with a 5-cell
        top5 = sum(o.size for o in report.orbits for comp in o.components if comp.top_dimension == 5)
        low = sum(o.size for o in report.orbits for comp in o.components
                  if comp.chi == 1 and not comp.thin and comp.top_dimension <= 4)
        assert (t["thin"], low, top5) == (32, 40, 4)
        assert t["thin"] + low == 72


def test_c5_formulas_against_enumeration():
    with criterion(5, "enumeration = sum/difference pair = dim-0 closed form (S_4 and spot list)", 600):
        s4 = check_formulas([canonical_word(p) for p in all_perms(4)])
        assert s4.ok, s4.failures[:5]
        assert s4.elapsed < 30, "S_4 exceeded 30 s"
        report = check_formulas()
        assert report.ok, report.failures[:5]
        assert report.checked > s4.checked


def test_c6_thin_counts():
    with criterion(6, "thin vertices over S_6: 2^(n-b), 2^c_tilde per z on the orbit, c-2 <= c_tilde <= c", 300):
        report = check_thin()
        assert report.ok, report.failures[:5]


def test_c7_split_lemmas():
    with criterion(7, "product identity for every split move over S_6", 600):
        cases = [
            (parse_word("1,4,3,2,1,5,4", 5), "type1", 72),
            (parse_word("2,1,4,3,2,5,4", 5), "type2", 72),
            (parse_word("1,2,3,2,4,3,2,5,4,3,2,1", 5), "type3", 156),
        ]
        for w, kind, total in cases:
            move = next(m for m in detect_moves(w) if m.kind == kind)
            check = verify_product_lemma(move, w)
            assert check.ok and check.components == total
        report = check_splits()
        assert report.ok, report.failures[:5]
        assert report.checked > 1000


def test_c8_gamma_fixtures():
    with criterion(8, "both ten-path loops close and stay in [563412]", 1):
        report = check_gamma()
        assert report.ok, report.failures


def test_c9_word_invariance():
    with criterion(9, "identical reports for 3 reduced words of 20 random sigma in S_6", 600):
        rng = random.Random(2024)
        chosen = []
        perms = sorted(all_perms(6), key=lambda p: p.oneline)
        while len(chosen) < 20:
            p = rng.choice(perms)
            if p in chosen:
                continue
            ws = reduced_words(p, limit=200)
            if len(ws) < 3:
                continue
            chosen.append(p)
            picks = [ws[0], ws[-1], ws[len(ws) // 2]]
            assert len({x.letters for x in picks}) == 3
            reports = [component_report(x).comparable() for x in picks]
            assert reports[0] == reports[1] == reports[2], p


def _perms_with_inv(k):
    return [p for p in sorted(all_perms(6), key=lambda p: p.oneline) if p.inv() == k]


def _orbit_profile(w):
    """Per orbit: (size, Euler characteristic without thin vertices, non-thin components)."""
    report = component_report(w)
    census = SigmaCensus(w)
    out = []
    for o in report.orbits:
        c = census.census(o.z)
        out.append((o.size, c.chi - c.thin, shape(c)))
    return out


def test_c10_high_inversion_data():
    with criterion(10, "inv 13 and 14: component chi values and the special components", 900):
        inv13 = _perms_with_inv(13)
        assert len(inv13) == 14
        groups = {}
        for p in inv13:
            profile = _orbit_profile(canonical_word(p))
            for _, chi, comps in profile:
                assert chi in (0, 1, 2)
                assert all(c in (0, 1) for _, c in comps)
                if chi == 2:
                    # the chi-2 pieces fall apart into two chi-1 components
                    assert len(comps) == 2 and all(c == 1 for _, c in comps)
            sizes = tuple(sorted(size for size, _, _ in profile))
            chis = tuple(sorted(chi for _, chi, _ in profile))
            groups.setdefault((sizes, chis), []).append(profile)
        assert {k: len(v) for k, v in groups.items()} == {
            ((32, 32), (1, 1)): 6,
            ((8, 8, 16, 16, 16), (0, 1, 1, 1, 1)): 4,
            ((8, 8, 16, 16, 16), (1, 1, 1, 2, 2)): 4,
        }
        for profile in groups[((8, 8, 16, 16, 16), (1, 1, 1, 2, 2))]:
            split = [comps for _, chi, comps in profile if chi == 2]
            assert [((56, 96, 46, 5), 1)] * 2 in split
            # the larger component has 112 vertices: 16 + 112 = 128 in the piece, chi 1
            assert sorted([((16, 16, 1), 1), ((112, 240, 175, 52, 6), 1)]) in split

        inv14 = _perms_with_inv(14)
        assert len(inv14) == 5
        nine = []
        for p in inv14:
            profile = _orbit_profile(canonical_word(p))
            if len(profile) == 3:
                assert sorted(size for size, _, _ in profile) == [16, 16, 32]
                assert all(chi == 1 and all(c == 1 for _, c in comps) for _, chi, comps in profile)
            else:
                nine.append(profile)
        assert len(nine) == 1 and len(nine[0]) == 9
        profile = nine[0]
        assert sorted(chi for _, chi, _ in profile) == [0, 0, 1, 1, 1, 1, 1, 1, 2]
        for _, chi, comps in profile:
            if chi == 0:
                assert comps == [((256, 576, 416, 100, 4), 0)]
            if chi == 2:
                assert comps == [((112, 216, 128, 24, 1), 1)] * 2
