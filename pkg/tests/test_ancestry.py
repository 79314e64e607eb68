from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from bruhat_census.ancestry import (
    Ancestry,
    CosetData,
    ancestry_chain,
    dim_bound_check,
    dimension,
    enumerate_ancestries,
    enumerate_preancestries,
    expand,
    format_ancestry,
    is_preancestry,
    is_thin,
    parse_ancestry,
    predicted_counts,
    preancestry_of,
    target,
    thin_masks,
    upper_set_dim1,
)
from bruhat_census.clifford import ONE, acute_word, e_action, gen, half_turn
from bruhat_census.complex import SigmaCensus
from bruhat_census.perm import blocks, canonical_word, click_region, parse_word, reduced_words, regions, top

from conftest import permutations, words

ETA3 = parse_word("1,2,1", 2)
TWO_CYCLES = parse_word("1,3,2,1,4,3,2,1,4", 4)


def test_symbols_round_trip():
    assert format_ancestry((-2, 1, 2)) == "BwW"
    assert parse_ancestry("bww") == (-1, 1, 1)


def test_eta3_preancestries_and_ancestries():
    assert enumerate_preancestries(ETA3) == [(0, 0, 0), (-2, 0, 2)]
    ancestries = enumerate_ancestries(ETA3)
    by_dim = Counter(a.dimension for a in ancestries)
    assert by_dim == {0: 8, 1: 2}
    assert {a.eps for a in ancestries if a.dimension == 1} == {(-2, 1, 2), (-2, -1, 2)}


def test_q_chain_of_a_one_cell():
    anc = ancestry_chain(ETA3, (-2, 1, 2))
    assert anc.q == (ONE, gen(1), gen(1) * gen(2), gen(2))
    assert anc.xi == (1, 2, 1)
    grave_first = half_turn(2, 1, -1) * half_turn(2, 2) * half_turn(2, 1)
    assert target(ETA3, anc.eps) == grave_first
    assert target(ETA3, (1, 1, 1)) == acute_word(ETA3)


def test_rejects_invalid_sequences():
    with pytest.raises(ValueError):
        ancestry_chain(ETA3, (2, 1, 1))
    with pytest.raises(ValueError):
        ancestry_chain(ETA3, (0, 1, 1))
    assert not is_preancestry(ETA3, (-2, 0, 0))


def test_two_cycle_word_preancestries():
    pre = enumerate_preancestries(TWO_CYCLES)
    top_dim = [p for p in pre if dimension(p) == 3]
    assert top_dim == [(-2, 0, -2, 0, -2, 0, 2, 2, 2)]
    dims = Counter(dimension(p) for p in pre)
    _, b = blocks(TWO_CYCLES.perm())
    assert dims[1] == TWO_CYCLES.length - TWO_CYCLES.n + b == 5
    # 2d <= l + c - n - 1 = 6
    assert max(dims) == 3
    assert all(dim_bound_check(TWO_CYCLES, p) for p in pre)


def test_two_cycle_word_predictions():
    data = CosetData(TWO_CYCLES)
    z = next(z for z in data.elements.values() if z.real_part().is_zero())
    pre = enumerate_preancestries(TWO_CYCLES)
    empty = pre[0]
    assert dimension(empty) == 0
    assert predicted_counts(TWO_CYCLES, empty, z, data).value == 16
    for p in pre:
        pred = predicted_counts(TWO_CYCLES, p, z, data)
        if dimension(p) == 1:
            assert pred.h_size == 32 and pred.value == 4
        if dimension(p) == 3:
            assert pred.value == 0


def test_prediction_rejects_foreign_z():
    with pytest.raises(ValueError):
        predicted_counts(ETA3, (0, 0, 0), acute_word(parse_word("1", 2)))


@pytest.mark.parametrize("size", [2, 3, 4, 5, 6])
def test_eta_top_dimension(size):
    n = size - 1
    pre = enumerate_preancestries(canonical_word(top(size)))
    dims = [dimension(p) for p in pre]
    assert max(dims) == n * n // 4
    assert dims.count(n * n // 4) == 1


def test_thin_vectors():
    assert is_thin(ETA3, (1, 1, 1))
    assert not is_thin(ETA3, (-1, 1, 1))
    with pytest.raises(ValueError):
        is_thin(ETA3, (-2, 1, 2))


def test_upper_set_of_a_one_cell():
    assert upper_set_dim1(ETA3, (-2, 1, 2)) == ((-1, 1, 1), (1, -1, -1))
    with pytest.raises(ValueError):
        upper_set_dim1(ETA3, (1, 1, 1))


def test_one_cells_of_a_seven_letter_word():
    w = parse_word("2,1,4,3,2,5,4", 5)
    ones = [a for a in enumerate_ancestries(w) if a.dimension == 1]
    assert ones
    for anc in ones:
        v1, v2 = upper_set_dim1(w, anc.eps)
        k1, k2 = [k for k, e in enumerate(anc.eps, start=1) if abs(e) == 2]
        differ = {k for k in range(1, w.length + 1) if v1[k - 1] != v2[k - 1]}
        assert differ == click_region(w, k1, k2)
        assert target(w, v1) == target(w, v2) == target(w, anc.eps)


@given(words())
def test_thin_count(w):
    _, b = blocks(w.perm())
    assert len(set(thin_masks(w))) == 2 ** (w.n - b)


@settings(max_examples=40, deadline=None)
@given(words(max_size=4))
def test_ancestry_consistency(w):
    acute = acute_word(w)
    for anc in enumerate_ancestries(w):
        assert is_preancestry(w, anc.preancestry)
        assert dimension(anc.preancestry) == anc.dimension
        # P(eps) = acute(sigma) q_l^{-1}
        assert target(w, anc.eps) == acute * anc.q_last.inverse()
        assert anc.rho[0] == anc.rho[-1] == top(w.n + 1)


@settings(max_examples=40, deadline=None)
@given(words(max_size=4))
def test_enumeration_matches_predictions(w):
    data = CosetData(w)
    tally = Counter((anc.preancestry, target(w, anc.eps)) for anc in enumerate_ancestries(w))
    for p in enumerate_preancestries(w):
        total = 0
        for z in data.elements.values():
            count = tally.get((p, z), 0)
            assert predicted_counts(w, p, z, data).value == count
            assert predicted_counts(w, p, z, data, closed_form=False).value == count
            total += count
        assert total == 2 ** (w.length - 2 * dimension(p))


@settings(max_examples=40, deadline=None)
@given(words(max_size=5), st.data())
def test_clicks_preserve_the_target(w, data):
    ones = [a for a in enumerate_ancestries(w) if a.dimension == 1]
    if not ones:
        return
    anc = data.draw(st.sampled_from(ones))
    k1, k2 = [k for k, e in enumerate(anc.eps, start=1) if abs(e) == 2]
    flips = click_region(w, k1, k2)
    signs = anc.signs
    clicked = [-s if k in flips else s for k, s in enumerate(signs, start=1)]
    assert target(w, signs) == target(w, clicked) == target(w, anc.eps)


@settings(max_examples=25, deadline=None)
@given(permutations(max_size=4))
def test_word_choice_invariance(p):
    seen = set()
    for w in reduced_words(p, limit=4):
        seen.add(frozenset(Counter((a.dimension, target(w, a.eps)) for a in enumerate_ancestries(w)).items()))
    assert len(seen) == 1


@settings(max_examples=25, deadline=None)
@given(words(max_size=5), st.data())
def test_census_is_sign_equivariant(w, data):
    census = SigmaCensus(w)
    z = data.draw(st.sampled_from(sorted(census.data.elements.values(), key=lambda x: x.key())))
    signs = data.draw(st.lists(st.sampled_from([1, -1]), min_size=w.n, max_size=w.n))
    assert census.census(z).counts == census.census(e_action(signs, z)).counts


def test_expand_sets_free_signs():
    assert sorted(expand((-2, 0, 2))) == [(-2, -1, 2), (-2, 1, 2)]
    assert preancestry_of((-2, -1, 2)) == (-2, 0, 2)
