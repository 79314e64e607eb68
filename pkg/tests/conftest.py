import random

from hypothesis import strategies as st

from bruhat_census.perm import Permutation, canonical_word, reduced_words


@st.composite
def permutations(draw, min_size=2, max_size=5):
    size = draw(st.integers(min_size, max_size))
    return Permutation(tuple(draw(st.permutations(range(1, size + 1)))))


@st.composite
def words(draw, min_size=2, max_size=5):
    """A reduced word of a random permutation, not always the canonical one."""
    p = draw(permutations(min_size, max_size))
    options = reduced_words(p, limit=12)
    return options[draw(st.integers(0, len(options) - 1))]


def random_words(seed: int, size: int, count: int):
    rng = random.Random(seed)
    return [canonical_word(Permutation(tuple(rng.sample(range(1, size + 1), size)))) for _ in range(count)]


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
