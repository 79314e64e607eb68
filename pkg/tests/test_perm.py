import pytest
from hypothesis import given

from bruhat_census.perm import (
    Permutation,
    ReducedWord,
    all_perms,
    blocks,
    canonical_word,
    click_region,
    crossing_table,
    direct_sum,
    identity,
    is_reduced,
    parse_perm,
    parse_word,
    reduced_words,
    regions,
    strong_leq,
    top,
    word_to_perm,
)

from conftest import permutations, words


def w(text, n=None):
    return parse_word(",".join(text), n)


def test_parse_and_format_round_trip():
    p = parse_perm("563412")
    assert p.oneline == (5, 6, 3, 4, 1, 2)
    assert str(p) == "[563412]"
    assert parse_perm("[563412]") == p


def test_right_action_of_letters():
    # right multiplication swaps values, so a1a2 sends 1 -> 3
    assert word_to_perm((1, 2), 2) == Permutation((3, 1, 2))
    assert word_to_perm((1, 2, 1), 2) == top(3)


def test_canonical_word_identity_is_empty():
    assert canonical_word(identity(4)).letters == ()


@pytest.mark.parametrize("oneline", ["321", "563412", "654321", "231645"])
def test_canonical_word_evaluates(oneline):
    p = parse_perm(oneline)
    cw = canonical_word(p)
    assert cw.perm() == p
    assert cw.length == p.inv()


def test_alternative_word_for_563412():
    word = w("213243215432")
    assert word.perm() == parse_perm("563412")


def test_non_reduced_word_rejected():
    assert not is_reduced((1, 1), 1)
    with pytest.raises(ValueError):
        ReducedWord((1, 2, 1, 2), 2)


def test_blocks():
    assert blocks(parse_perm("231645")) == (frozenset({3}), 1)
    assert blocks(identity(6)) == (frozenset({1, 2, 3, 4, 5}), 5)
    assert blocks(top(6)) == (frozenset(), 0)
    assert w("2145", 5).perm() == parse_perm("231645")


def test_direct_sum():
    assert direct_sum(parse_perm("231"), parse_perm("312")) == parse_perm("231645")
    assert direct_sum(parse_perm("21"), parse_perm("312")) == parse_perm("21534")
    assert direct_sum(identity(1), identity(1)) == identity(2)


def test_crossing_table():
    assert crossing_table(ReducedWord((1,), 1)) == [(1, 2)]
    assert crossing_table(w("121")) == [(1, 2), (1, 3), (2, 3)]


def test_strong_order():
    eta = top(3)
    assert strong_leq(identity(3), eta)
    a1, a2 = word_to_perm((1,), 2), word_to_perm((2,), 2)
    assert not strong_leq(a1, a2) and not strong_leq(a2, a1)
    assert strong_leq(eta, eta)


def test_strong_order_matches_subwords_on_s4():
    # brute force: s0 <= s1 iff some subword of a reduced word of s1 is a reduced word of s0
    from itertools import combinations

    perms = all_perms(4)
    for s1 in perms:
        word = canonical_word(s1).letters
        below = set()
        for r in range(len(word) + 1):
            for idx in combinations(range(len(word)), r):
                sub = tuple(word[k] for k in idx)
                if is_reduced(sub, 3):
                    below.add(word_to_perm(sub, 3))
        for s0 in perms:
            assert strong_leq(s0, s1) == (s0 in below)


def test_click_region_example():
    word = w("2143254")
    flips = click_region(word, 1, 5)
    assert flips == {1, 2, 4, 5}
    signs = (-1, -1, -1, -1, 1, 1, -1)
    clicked = tuple(-s if k in flips else s for k, s in enumerate(signs, start=1))
    assert clicked == (1, 1, -1, 1, -1, 1, -1)


def test_click_region_rejects_bad_anchors():
    word = w("2143254")
    with pytest.raises(ValueError):
        click_region(word, 1, 3)
    with pytest.raises(ValueError):
        click_region(word, 5, 1)


def test_regions_of_eta3():
    assert regions(w("121")) == [(1, 3)]


@given(words())
def test_crossings_are_the_inversions(word):
    p = word.perm()
    pairs = set(crossing_table(word))
    assert pairs == p.inversions()
    assert len(pairs) == p.inv() == word.length


@given(permutations())
def test_canonical_word_property(p):
    cw = canonical_word(p)
    assert cw.perm() == p and cw.length == p.inv()


@given(permutations(), permutations())
def test_direct_sum_blocks(s0, s1):
    s = direct_sum(s0, s1)
    blocked, _ = blocks(s)
    assert s0.size in blocked
    assert s.inv() == s0.inv() + s1.inv()


@given(permutations())
def test_inverse_and_product(p):
    assert (p * p.inverse()).is_identity()
    assert p.inverse().inv() == p.inv()


@given(permutations(max_size=4))
def test_all_reduced_words_evaluate(p):
    ws = reduced_words(p)
    assert len(set(x.letters for x in ws)) == len(ws)
    assert all(x.perm() == p for x in ws)
